#include "toricqs/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "toricqs/error.hpp"

namespace toricqs {

namespace {

void check_perm(const AffineSymmetry& g) {
  int m = static_cast<int>(g.perm.size());
  if (m < 2) throw validation_error("symmetry permutation must cover at least two slots");
  std::vector<bool> seen(m, false);
  for (int v : g.perm) {
    if (v < 0 || v >= m || seen[v])
      throw validation_error("symmetry permutation is not a bijection of the slots");
    seen[v] = true;
  }
}

/// Homogeneous slot values (q_0 = scale - sum, q_i = p_i).
std::vector<double> to_homogeneous(const AffineSymmetry& g, const std::vector<double>& p) {
  int n = g.n();
  if (static_cast<int>(p.size()) != n)
    throw validation_error("point dimension does not match the symmetry");
  std::vector<double> q(n + 1);
  double sum = 0.0;
  for (double x : p) sum += x;
  q[0] = g.scale - sum;
  for (int i = 0; i < n; ++i) q[i + 1] = p[i];
  return q;
}

}  // namespace

bool AffineSymmetry::is_identity() const {
  for (size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<double> apply(const AffineSymmetry& g, const std::vector<double>& p) {
  check_perm(g);
  std::vector<double> q = to_homogeneous(g, p);
  std::vector<double> out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[g.perm[i]] = q[i];
  return std::vector<double>(out.begin() + 1, out.end());
}

AffineSymmetry compose(const AffineSymmetry& g, const AffineSymmetry& h) {
  check_perm(g);
  check_perm(h);
  if (g.perm.size() != h.perm.size() || g.scale != h.scale)
    throw validation_error("composed symmetries must act on the same simplex");
  AffineSymmetry out;
  out.scale = g.scale;
  out.perm.resize(g.perm.size());
  for (size_t i = 0; i < g.perm.size(); ++i) out.perm[i] = g.perm[h.perm[i]];
  return out;
}

std::vector<double> translation_part(const AffineSymmetry& g) {
  return toricqs::apply(g, std::vector<double>(g.n(), 0.0));
}

std::vector<double> linear_part(const AffineSymmetry& g) {
  int n = g.n();
  std::vector<double> b = translation_part(g);
  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    std::vector<double> col = toricqs::apply(g, e);
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + j] = col[i] - b[i];
  }
  return a;
}

double linear_norm(const AffineSymmetry& g) {
  int n = g.n();
  std::vector<double> a = linear_part(g);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[static_cast<size_t>(i) * n + j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

std::vector<AffineSymmetry> symmetry_group(const Simplex& s) {
  std::vector<AffineSymmetry> gens;
  for (int i = 0; i < s.n; ++i) {
    AffineSymmetry g;
    g.scale = s.scale;
    g.perm.resize(s.n + 1);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    std::swap(g.perm[i], g.perm[i + 1]);
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<AffineSymmetry> enumerate_symmetries(const Simplex& s) {
  if (s.n > 7)
    throw validation_error("full symmetry enumeration is limited to dimension 7");
  std::vector<int> perm(s.n + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<AffineSymmetry> out;
  do {
    AffineSymmetry g;
    g.scale = s.scale;
    g.perm = perm;
    out.push_back(std::move(g));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::string cycle_notation(const AffineSymmetry& g) {
  check_perm(g);
  int m = static_cast<int>(g.perm.size());
  std::vector<bool> seen(m, false);
  std::ostringstream out;
  bool any = false;
  for (int i = 0; i < m; ++i) {
    if (seen[i] || g.perm[i] == i) continue;
    out << '(';
    int j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out << ' ';
      out << j;
      first = false;
      j = g.perm[j];
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "id";
}

std::optional<DisplaceabilityCertificate> displace_point(const Simplex& s,
                                                         const std::vector<double>& p,
                                                         double tol) {
  if (static_cast<int>(p.size()) != s.n)
    throw validation_error("point dimension does not match the simplex");
  for (const auto& g : enumerate_symmetries(s)) {
    if (g.is_identity()) continue;
    std::vector<double> q = toricqs::apply(g, p);
    double d2 = 0.0;
    for (int i = 0; i < s.n; ++i) d2 += (q[i] - p[i]) * (q[i] - p[i]);
    double d = std::sqrt(d2);
    if (d > tol) return DisplaceabilityCertificate{g, d};
  }
  return std::nullopt;
}

namespace {

/// Enclosing ball of ball \ union(excluded): each excluded ball that
/// overlaps shrinks the set to a spherical cap beyond an axial cutoff, and
/// the cap is enclosed in a smaller ball.  Returns nullopt when some
/// exclusion swallows the ball entirely.
std::optional<BallRegion> effective_ball(const BallRegion& ball,
                                         const std::vector<BallRegion>& excluded) {
  BallRegion cur = ball;
  for (const auto& ex : excluded) {
    if (ex.center.size() != cur.center.size()) continue;
    double d2 = 0.0;
    for (size_t i = 0; i < cur.center.size(); ++i) {
      double dx = cur.center[i] - ex.center[i];
      d2 += dx * dx;
    }
    double d = std::sqrt(d2);
    double r = cur.radius, rx = ex.radius;
    if (d + r <= rx) return std::nullopt;  // swallowed
    if (d >= rx + r) continue;             // disjoint: no effect
    if (d < 1e-14) continue;               // concentric: annulus, no gain
    // Sound axial cutoff along u = (center - ex.center)/d.  For a point of
    // the ball outside the exclusion, a^2 + h^2 >= rx^2 and
    // h^2 <= r^2 - (a - d)^2 combine to a >= (d^2 + rx^2 - r^2)/(2d), the
    // radical-plane coordinate; a >= d - r always holds from the ball alone.
    double t = std::max(d - r, (d * d + rx * rx - r * r) / (2.0 * d));
    double hi = d + r;
    if (t >= hi) return std::nullopt;
    if (t <= d - r + 1e-15) continue;  // no improvement
    // Enclosing ball of the cap {a in [t, hi]} of the current ball: center
    // at the axial midpoint; the squared radius bound is linear in a, so it
    // peaks at the cutoff end.  In one dimension the cap is exactly the
    // interval [t, hi] (no transverse extent), so the h^2 slack is dropped.
    double mid = 0.5 * (t + hi);
    double rad2 = (t - mid) * (t - mid);
    if (cur.center.size() > 1) rad2 += std::max(0.0, r * r - (t - d) * (t - d));
    BallRegion next;
    next.center.resize(cur.center.size());
    for (size_t i = 0; i < cur.center.size(); ++i) {
      double u = (cur.center[i] - ex.center[i]) / d;
      next.center[i] = ex.center[i] + mid * u;
    }
    next.radius = std::sqrt(rad2);
    cur = next;
    // Recompute against the remaining exclusions with the shrunk ball.
  }
  return cur;
}

}  // namespace

std::optional<double> certify_region(const Simplex& s, const Region& region,
                                     const AffineSymmetry& g) {
  if (g.n() != s.n)
    throw validation_error("symmetry dimension does not match the simplex");
  if (region.full) return std::nullopt;
  if (!region.intervals.empty())
    throw validation_error("edge-interval regions belong to tree spaces");
  std::vector<BallRegion> balls;
  for (const auto& b : region.balls)
    if (auto eff = effective_ball(b, region.excluded)) balls.push_back(*eff);
  if (balls.empty()) return std::numeric_limits<double>::infinity();
  double norm = linear_norm(g);
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& bi : balls) {
    std::vector<double> image = toricqs::apply(g, bi.center);
    double image_radius = norm * bi.radius;
    for (const auto& bj : balls) {
      double d2 = 0.0;
      for (int k = 0; k < s.n; ++k) {
        double dx = image[k] - bj.center[k];
        d2 += dx * dx;
      }
      double gap = std::sqrt(d2) - image_radius - bj.radius;
      sep = std::min(sep, gap);
      if (sep <= 0.0) return std::nullopt;
    }
  }
  return sep;
}

std::optional<DisplaceabilityCertificate> displace_region(const Simplex& s,
                                                          const Region& region) {
  for (const auto& g : enumerate_symmetries(s)) {
    if (g.is_identity()) continue;
    if (auto sep = certify_region(s, region, g))
      return DisplaceabilityCertificate{g, *sep};
  }
  return std::nullopt;
}

std::vector<BasePoint> fixed_locus(const Simplex& s) {
  // Stack the fixed-point equations (A_k - I) p = -b_k of all generators
  // and solve the joint linear system.
  std::vector<AffineSymmetry> gens = symmetry_group(s);
  int n = s.n;
  int rows = static_cast<int>(gens.size()) * n;
  Eigen::MatrixXd m(rows, n);
  Eigen::VectorXd rhs(rows);
  for (size_t k = 0; k < gens.size(); ++k) {
    std::vector<double> a = linear_part(gens[k]);
    std::vector<double> b = translation_part(gens[k]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        m(static_cast<int>(k) * n + i, j) =
            a[static_cast<size_t>(i) * n + j] - (i == j ? 1.0 : 0.0);
      rhs(static_cast<int>(k) * n + i) = -b[i];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  if (lu.rank() < n)
    throw internal_error("fixed locus of the generator set is positive-dimensional");
  Eigen::VectorXd p = lu.solve(rhs);
  double residual = (m * p - rhs).norm();
  if (residual > 1e-9 * std::max(1.0, rhs.norm()))
    throw internal_error("fixed-point system is inconsistent");
  std::vector<double> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = p(i);
  return {BasePoint::simplex(coords)};
}

}  // namespace toricqs
