#include "toricqs/quasistate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include <Eigen/Dense>

#include "toricqs/detail/poly1d.hpp"
#include "toricqs/detail/quadrature.hpp"
#include "toricqs/error.hpp"

namespace toricqs {

QuasiStateModel standard_model(const BaseSpace& space) {
  QuasiStateModel m;
  m.space = space;
  m.dh = dh_measure(space);
  m.sigma.point = special_point(space);
  m.sigma.mass = m.dh.total_mass();
  return m;
}

QuasiStateModel custom_model(const BaseSpace& space, QuasiStateMeasure sigma) {
  if (!contains(space, sigma.point, 1e-12))
    throw validation_error("sigma support point is not in the space");
  QuasiStateModel m;
  m.space = space;
  m.dh = dh_measure(space);
  m.sigma = std::move(sigma);
  return m;
}

// Tree median -------------------------------------------------------------

namespace {

/// Total edge mass of the component containing `start` when edge `cut` is
/// removed.
double component_mass(const MeasuredTree& t, int start, int cut) {
  std::vector<bool> seen(t.vertex_names.size(), false);
  std::queue<int> q;
  q.push(start);
  seen[start] = true;
  double mass = 0.0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int ei : t.incident[v]) {
      if (ei == cut) continue;
      const TreeEdge& e = t.edges[ei];
      int w = (e.u == v) ? e.v : e.u;
      if (seen[w]) continue;
      seen[w] = true;
      mass += t.edge_mass[ei];
      q.push(w);
    }
  }
  return mass;
}

/// Monotone cumulative mass along one edge, exact when the density compiles
/// to a piecewise polynomial.
class EdgeCumulative {
 public:
  EdgeCumulative(const TreeEdge& e) : edge_(e) {
    pw_ = detail::compile_1d(e.density, e.length);
  }

  double operator()(double t) const {
    t = std::clamp(t, 0.0, edge_.length);
    if (pw_) return pw_->integral(0.0, t);
    return detail::integrate_segments([&](double u) { return eval_profile(edge_.density, u); },
                                      0.0, t, breakpoints_1d(edge_.density, edge_.length), 64);
  }

 private:
  const TreeEdge& edge_;
  std::optional<detail::PiecewisePoly> pw_;
};

/// Level-set interval {t : C(t) = target} of a monotone cumulative, by
/// bisection on the two one-sided predicates.
std::pair<double, double> level_interval(const EdgeCumulative& cum, double length,
                                         double target, double tol_mass) {
  // Smallest t with C(t) >= target - tol.
  auto lower = [&]() {
    double lo = 0.0, hi = length;
    if (cum(0.0) >= target - tol_mass) return 0.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cum(mid) >= target - tol_mass)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };
  // Largest t with C(t) <= target + tol.
  auto upper = [&]() {
    double lo = 0.0, hi = length;
    if (cum(length) <= target + tol_mass) return length;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cum(mid) <= target + tol_mass)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };
  return {lower(), upper()};
}

struct MedianSegment {
  int edge = -1;
  double a = 0.0;
  double b = 0.0;
};

}  // namespace

MedianResult tree_median(const MeasuredTree& t) {
  const double total = t.total_mass;
  const double half = 0.5 * total;
  const double tol_mass = 1e-12 * std::max(total, 1.0);

  // Directed beyond-masses: mass of the component of each endpoint when the
  // edge is removed.
  size_t ne = t.edges.size();
  std::vector<double> beyond_u(ne), beyond_v(ne);
  for (size_t ei = 0; ei < ne; ++ei) {
    beyond_u[ei] = component_mass(t, t.edges[ei].u, static_cast<int>(ei));
    beyond_v[ei] = component_mass(t, t.edges[ei].v, static_cast<int>(ei));
  }

  // Median vertices: every incident branch carries at most half.
  std::vector<int> median_vertices;
  for (size_t vi = 0; vi < t.vertex_names.size(); ++vi) {
    double worst = 0.0;
    for (int ei : t.incident[vi]) {
      const TreeEdge& e = t.edges[ei];
      double branch =
          t.edge_mass[ei] + ((e.u == static_cast<int>(vi)) ? beyond_v[ei] : beyond_u[ei]);
      worst = std::max(worst, branch);
    }
    if (worst <= half + tol_mass) median_vertices.push_back(static_cast<int>(vi));
  }

  // Median segments on edges: the level set of the cumulative at
  // half - beyond(u side), which exists iff both beyond-masses are <= half.
  std::vector<MedianSegment> segments;
  for (size_t ei = 0; ei < ne; ++ei) {
    if (beyond_u[ei] > half + tol_mass || beyond_v[ei] > half + tol_mass) continue;
    double target = half - beyond_u[ei];
    if (target < -tol_mass || target > t.edge_mass[ei] + tol_mass) continue;
    EdgeCumulative cum(t.edges[ei]);
    auto [a, b] = level_interval(cum, t.edges[ei].length,
                                 std::clamp(target, 0.0, t.edge_mass[ei]), tol_mass);
    if (a <= b) segments.push_back(MedianSegment{static_cast<int>(ei), a, b});
  }

  auto canonical = [&](const TreePoint& p) { return canonical_tree_point(t, p, 1e-9); };

  double path_length = 0.0;
  for (const auto& s : segments) path_length += s.b - s.a;

  if (path_length <= 1e-9) {
    // Zero-length median set: a single point.
    TreePoint p;
    if (!median_vertices.empty()) {
      p.vertex = median_vertices.front();
    } else if (!segments.empty()) {
      p.edge = segments.front().edge;
      p.offset = 0.5 * (segments.front().a + segments.front().b);
      p = canonical(p);
    } else {
      throw internal_error("median search found no candidate point");
    }
    return MedianResult{p, true};
  }

  // Positive-length median path (zero-density stretch at the half level).
  // Order the segments into a path by walking from an extreme endpoint and
  // report the point halfway along.  Degenerate segments (single points at
  // the boundary vertices of the stretch, produced as zero-width level sets
  // on the neighboring edges) contribute no length and would double-count
  // the shared endpoints, so the walk uses only the positive ones.
  std::vector<MedianSegment> path_segs;
  for (const auto& s : segments)
    if (s.b - s.a > 1e-7 * t.edges[s.edge].length + 1e-12) path_segs.push_back(s);
  segments = path_segs;
  std::vector<MedianSegment> unused = segments;
  auto endpoint = [&](const MedianSegment& s, bool at_b) {
    TreePoint p;
    p.edge = s.edge;
    p.offset = at_b ? s.b : s.a;
    return canonical(p);
  };
  auto same_point = [&](const TreePoint& x, const TreePoint& y) {
    if (x.is_vertex() && y.is_vertex()) return x.vertex == y.vertex;
    if (x.is_vertex() != y.is_vertex()) return false;
    return x.edge == y.edge && std::abs(x.offset - y.offset) <= 1e-9;
  };
  // An extreme endpoint touches exactly one segment.
  TreePoint start;
  bool found_start = false;
  for (const auto& s : segments) {
    for (bool at_b : {false, true}) {
      TreePoint cand = endpoint(s, at_b);
      int touches = 0;
      for (const auto& o : segments)
        for (bool ob : {false, true})
          if (same_point(cand, endpoint(o, ob))) ++touches;
      if (touches == 1) {
        start = cand;
        found_start = true;
        break;
      }
    }
    if (found_start) break;
  }
  if (!found_start) throw internal_error("median path has no free endpoint");

  TreePoint cursor = start;
  double remaining = 0.5 * path_length;
  while (!unused.empty()) {
    bool advanced = false;
    for (size_t i = 0; i < unused.size(); ++i) {
      const MedianSegment& s = unused[i];
      for (bool enter_at_b : {false, true}) {
        if (!same_point(cursor, endpoint(s, enter_at_b))) continue;
        double len = s.b - s.a;
        if (remaining <= len + 1e-15) {
          TreePoint mid;
          mid.edge = s.edge;
          mid.offset = enter_at_b ? s.b - remaining : s.a + remaining;
          return MedianResult{canonical(mid), false};
        }
        remaining -= len;
        cursor = endpoint(s, !enter_at_b);
        unused.erase(unused.begin() + static_cast<long>(i));
        advanced = true;
        break;
      }
      if (advanced) break;
    }
    if (!advanced) throw internal_error("median path walk failed to advance");
  }
  throw internal_error("median path walk overran its length");
}

BasePoint special_point(const BaseSpace& space) {
  if (space.is_simplex()) return barycenter(space.simplex());
  if (space.is_tree()) return BasePoint::tree(tree_median(space.tree()).point);
  BasePoint p;
  for (const auto& f : space.product().factors) {
    BaseSpace sub(f);
    p.parts.push_back(special_point(sub).parts[0]);
  }
  return p;
}

// Functional values -------------------------------------------------------

double zeta(const QuasiStateModel& m, const ToricHamiltonian& h, const Engine& e) {
  if (!h.fbar) throw validation_error("null Hamiltonian function");
  if (h.power == 0) throw validation_error("Hamiltonian power must be nonzero");
  double bulk = integrate(m.dh, h.fbar, e);
  double point = integrate_sigma(m.space, m.sigma, h.fbar);
  return h.power * (bulk - point);
}

double calabi_value(const QuasiStateModel& m, const ToricHamiltonian& h, const Engine& e) {
  if (!h.fbar) throw validation_error("null Hamiltonian function");
  if (h.power == 0) throw validation_error("Hamiltonian power must be nonzero");
  return h.power * integrate(m.dh, h.fbar, e);
}

bool calabi_property_check(const QuasiStateModel& m, const ToricHamiltonian& h,
                           const DisplaceabilityCertificate& cert) {
  if (!h.fbar) throw validation_error("null Hamiltonian function");
  if (!m.space.is_simplex())
    throw validation_error("displaceability certificates act on simplex spaces");
  const Simplex& s = m.space.simplex();
  Region support = support_bound(m.space, h.fbar);
  auto sep = certify_region(s, support, cert.g);
  if (!sep)
    throw validation_error("certificate does not certify the Hamiltonian's support");
  // zeta - calabi_value = -power * sigma term, so the equality holds exactly
  // when sigma does not see the support.
  double gap = h.power * integrate_sigma(m.space, m.sigma, h.fbar);
  return std::abs(gap) <= 1e-9;
}

// Rescaled family ---------------------------------------------------------

namespace {

void check_delta(int n, double delta) {
  if (n < 1) throw validation_error("dimension must be positive");
  double lo = static_cast<double>(n) / (n + 1);
  if (!(delta > lo) || !(delta <= 1.0))
    throw validation_error("delta must lie in (n/(n+1), 1]");
}

/// n * int_0^1 profile(s) s^(n-1) ds, exact when the profile compiles.
double radial_moment(int n, const SmoothFunction& profile) {
  if (auto pw = detail::compile_1d(profile, 1.0)) {
    detail::Poly weight;
    weight.c.assign(n, 0.0);
    weight.c[n - 1] = 1.0;
    detail::PiecewisePoly w;
    w.breaks = {0.0, 1.0};
    w.pieces = {weight};
    return n * detail::pw_mul(*pw, w).integral();
  }
  return n * detail::integrate_segments(
                 [&](double u) { return eval_profile(profile, u) * std::pow(u, n - 1); },
                 0.0, 1.0, breakpoints_1d(profile, 1.0), 64);
}

}  // namespace

double mu_delta_closed_form(int n, double delta, const SmoothFunction& profile,
                            Convention convention) {
  if (!profile) throw validation_error("null profile");
  check_delta(n, delta);
  double c = convention == Convention::Derived ? std::pow(delta, -n)
                                               : std::pow(delta, -(n + 1));
  double at = static_cast<double>(n) / ((n + 1) * delta);
  return radial_moment(n, profile) - c * eval_profile(profile, at);
}

double mu_delta_via_pullback(int n, double delta, const SmoothFunction& profile) {
  if (!profile) throw validation_error("null profile");
  check_delta(n, delta);
  BaseSpace space{make_simplex(n, 1.0)};
  QuasiStateModel model = standard_model(space);
  // Transported Hamiltonian: q -> delta * profile(sum(q)/delta).
  SmoothFunction fbar =
      fn::radial(fn::scale(delta, fn::affine_arg(1.0 / delta, 0.0, profile)));
  Engine engine;
  if (detail::compile_1d(profile, 1.0))
    engine = ExactEngine{};
  else
    engine = QuadEngine{64, 0};
  double z = zeta(model, ToricHamiltonian{fbar, 1}, engine);
  return std::pow(delta, -(n + 1)) * z;
}

IndependenceCertificate independence_certificate(int n, const std::vector<double>& deltas,
                                                 const std::vector<SmoothFunction>& profiles,
                                                 Convention convention) {
  if (deltas.empty()) throw validation_error("independence check needs at least one delta");
  if (profiles.empty())
    throw validation_error("independence check needs at least one profile");
  for (size_t i = 0; i < deltas.size(); ++i) {
    check_delta(n, deltas[i]);
    for (size_t j = i + 1; j < deltas.size(); ++j)
      if (std::abs(deltas[i] - deltas[j]) <= 1e-12)
        throw validation_error("deltas must be distinct");
  }
  IndependenceCertificate cert;
  cert.matrix.resize(deltas.size());
  for (size_t i = 0; i < deltas.size(); ++i) {
    cert.matrix[i].resize(profiles.size());
    for (size_t j = 0; j < profiles.size(); ++j)
      cert.matrix[i][j] = mu_delta_closed_form(n, deltas[i], profiles[j], convention);
  }
  Eigen::MatrixXd m(deltas.size(), profiles.size());
  for (size_t i = 0; i < deltas.size(); ++i)
    for (size_t j = 0; j < profiles.size(); ++j) m(i, j) = cert.matrix[i][j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  cert.max_singular_value = sv(0);
  cert.min_singular_value = sv(sv.size() - 1);
  cert.rank_tolerance =
      std::max(m.rows(), m.cols()) * cert.max_singular_value *
      std::numeric_limits<double>::epsilon() * 16;
  cert.rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cert.rank_tolerance) ++cert.rank;
  return cert;
}

LipschitzReport lipschitz_check(const QuasiStateModel& m, const ToricHamiltonian& h1,
                                const ToricHamiltonian& h2, int resolution,
                                const Engine& e) {
  if (!h1.fbar || !h2.fbar) throw validation_error("null Hamiltonian function");
  if (h1.power != h2.power)
    throw validation_error("Lipschitz comparison requires equal powers");
  LipschitzReport r;
  r.lhs = std::abs(zeta(m, h1, e) - zeta(m, h2, e));
  r.constant = std::abs(h1.power) * (m.dh.total_mass() + m.sigma.mass);
  r.sup_diff =
      sup_norm(m.space, fn::sum({h1.fbar, fn::scale(-1.0, h2.fbar)}), resolution);
  r.ok = r.lhs <= r.constant * r.sup_diff + 1e-9;
  return r;
}

}  // namespace toricqs
