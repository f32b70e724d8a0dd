#include "toricqs/detail/poly1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "toricqs/error.hpp"

namespace toricqs::detail {

namespace {

// Error-free transformations: exact product error via FMA, exact sum error
// via Knuth's TwoSum.
inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double z = s - a;
  err = (a - (s - z)) + (b - z);
  return s;
}

}  // namespace

double Poly::operator()(double x) const {
  // Compensated Horner: the result is as accurate as classic Horner run in
  // twice the working precision.  This matters because affine substitution
  // into high-degree windows (narrow bumps far from the origin) produces
  // monomial coefficients many orders larger than the values, and plain
  // Horner would lose ~1e-10 of absolute accuracy to cancellation.
  double s = 0.0, comp = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    double pe, se;
    double p = two_prod(s, x, pe);
    s = two_sum(p, c[k], se);
    comp = comp * x + (pe + se);
  }
  return s + comp;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return Poly{};
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly poly_scale(const Poly& a, double s) {
  Poly r = a;
  for (double& v : r.c) v *= s;
  return r;
}

Poly poly_affine_arg(const Poly& p, double a, double b) {
  // Horner in the substituted variable: result = ((c_k)(ax+b) + c_{k-1})...
  Poly r;
  Poly lin;
  lin.c = {b, a};
  for (size_t k = p.c.size(); k-- > 0;) {
    r = poly_mul(r, lin);
    if (r.c.empty()) r.c = {0.0};
    r.c[0] += p.c[k];
  }
  return r;
}

double poly_integral(const Poly& p, double x0, double x1) {
  // Evaluate the antiderivative with the compensated Horner above rather
  // than summing term-wise power differences, which would reintroduce the
  // cancellation the compensated evaluation avoids.
  Poly anti;
  anti.c.assign(p.c.size() + 1, 0.0);
  for (size_t k = 0; k < p.c.size(); ++k)
    anti.c[k + 1] = p.c[k] / static_cast<double>(k + 1);
  return anti(x1) - anti(x0);
}

double PiecewisePoly::operator()(double x) const {
  if (breaks.empty()) return 0.0;
  size_t i;
  if (x <= breaks.front())
    i = 0;
  else if (x >= breaks.back())
    i = pieces.size() - 1;
  else
    i = std::min<size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin() - 1,
        pieces.size() - 1);
  return pieces[i](x - breaks[i]);
}

double PiecewisePoly::integral() const {
  double v = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i)
    v += poly_integral(pieces[i], 0.0, breaks[i + 1] - breaks[i]);
  return v;
}

double PiecewisePoly::integral(double x0, double x1) const {
  double v = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    double lo = std::max(x0, breaks[i]);
    double hi = std::min(x1, breaks[i + 1]);
    if (lo < hi) v += poly_integral(pieces[i], lo - breaks[i], hi - breaks[i]);
  }
  return v;
}

double PiecewisePoly::cumulative(double x) const { return integral(breaks.front(), x); }

int PiecewisePoly::max_degree() const {
  int d = 0;
  for (const auto& p : pieces) d = std::max(d, p.degree());
  return d;
}

PiecewisePoly pw_const(double lo, double hi, double v) {
  PiecewisePoly r;
  r.breaks = {lo, hi};
  r.pieces = {Poly{{v}}};
  return r;
}

namespace {

std::vector<double> merge_breaks(const PiecewisePoly& a, const PiecewisePoly& b) {
  std::vector<double> m;
  m.reserve(a.breaks.size() + b.breaks.size());
  std::merge(a.breaks.begin(), a.breaks.end(), b.breaks.begin(), b.breaks.end(),
             std::back_inserter(m));
  m.erase(std::unique(m.begin(), m.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-15; }),
          m.end());
  return m;
}

/// The piece of p covering `mid`, rebased to the local origin `origin`
/// (i.e. returned as a polynomial in x - origin).  Rebasing shifts by at
/// most one piece width, so it stays well conditioned.  Zero outside p.
Poly piece_local(const PiecewisePoly& p, double mid, double origin) {
  if (mid < p.breaks.front() || mid > p.breaks.back()) return Poly{{0.0}};
  size_t i = std::upper_bound(p.breaks.begin(), p.breaks.end(), mid) - p.breaks.begin();
  if (i == 0 || i >= p.breaks.size()) return Poly{{0.0}};
  const Poly& src = p.pieces[i - 1];
  double diff = origin - p.breaks[i - 1];
  if (diff == 0.0) return src;
  return poly_affine_arg(src, 1.0, diff);
}

}  // namespace

PiecewisePoly pw_add(const PiecewisePoly& a, const PiecewisePoly& b) {
  PiecewisePoly r;
  r.breaks = merge_breaks(a, b);
  for (size_t i = 0; i + 1 < r.breaks.size(); ++i) {
    double mid = 0.5 * (r.breaks[i] + r.breaks[i + 1]);
    r.pieces.push_back(
        poly_add(piece_local(a, mid, r.breaks[i]), piece_local(b, mid, r.breaks[i])));
  }
  return r;
}

PiecewisePoly pw_mul(const PiecewisePoly& a, const PiecewisePoly& b) {
  PiecewisePoly r;
  r.breaks = merge_breaks(a, b);
  for (size_t i = 0; i + 1 < r.breaks.size(); ++i) {
    double mid = 0.5 * (r.breaks[i] + r.breaks[i + 1]);
    r.pieces.push_back(
        poly_mul(piece_local(a, mid, r.breaks[i]), piece_local(b, mid, r.breaks[i])));
  }
  return r;
}

PiecewisePoly pw_scale(const PiecewisePoly& a, double s) {
  PiecewisePoly r = a;
  for (auto& p : r.pieces) p = poly_scale(p, s);
  return r;
}

namespace {

/// The C^2 bump profile (1 - u^2)^3 composed with u = (x - c)/r, restricted
/// to the window [lo, hi].
PiecewisePoly bump_piecewise(double c, double r, double lo, double hi) {
  double a = std::max(lo, c - r), b = std::min(hi, c + r);
  PiecewisePoly out;
  out.breaks.push_back(lo);
  std::vector<std::pair<double, Poly>> segs;  // (right end, poly)
  // Local coordinate of the bump piece starts at its left break a:
  // u = (x - c)/r = (xi + (a - c))/r with |a - c| <= r.
  Poly u;
  u.c = {(a - c) / r, 1.0 / r};
  Poly one{{1.0}};
  Poly u2 = poly_mul(u, u);
  Poly base = poly_add(one, poly_scale(u2, -1.0));
  Poly bump = poly_mul(base, poly_mul(base, base));
  if (a > lo) segs.emplace_back(a, Poly{{0.0}});
  if (b > a) segs.emplace_back(b, bump);
  if (hi > b) segs.emplace_back(hi, Poly{{0.0}});
  if (segs.empty()) segs.emplace_back(hi, Poly{{0.0}});
  for (auto& [e, p] : segs) {
    out.breaks.push_back(e);
    out.pieces.push_back(std::move(p));
  }
  return out;
}

/// Smootherstep 10t^3 - 15t^4 + 6t^5 (C^2 step from 0 to 1).
Poly smootherstep_of(const Poly& t) {
  Poly t2 = poly_mul(t, t);
  Poly t3 = poly_mul(t2, t);
  return poly_add(poly_scale(t3, 10.0),
                  poly_add(poly_scale(poly_mul(t3, t), -15.0),
                           poly_scale(poly_mul(t3, t2), 6.0)));
}

PiecewisePoly plateau_piecewise(double c, double r0, double r1, double lo, double hi) {
  // 1 on |x-c| <= r0; 1 - S((|x-c|-r0)/(r1-r0)) on the ramp; 0 beyond.
  std::vector<double> cuts = {lo, c - r1, c - r0, c + r0, c + r1, hi};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double x) { return x < lo - 1e-15 || x > hi + 1e-15; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-15; }),
             cuts.end());
  PiecewisePoly out;
  out.breaks = cuts;
  double w = r1 - r0;
  Poly one{{1.0}};
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    double d = std::abs(mid - c);
    if (d <= r0) {
      out.pieces.push_back(one);
    } else if (d >= r1) {
      out.pieces.push_back(Poly{{0.0}});
    } else {
      // (|x - c| - r0)/w in the local coordinate xi = x - cuts[i]; the
      // constant term is the ramp progress at the piece's left break.
      Poly t;
      if (mid > c)
        t.c = {(cuts[i] - c - r0) / w, 1.0 / w};
      else
        t.c = {(c - cuts[i] - r0) / w, -1.0 / w};
      out.pieces.push_back(poly_add(one, poly_scale(smootherstep_of(t), -1.0)));
    }
  }
  return out;
}

}  // namespace

std::optional<PiecewisePoly> compile_1d(const SmoothFunction& f, double length) {
  if (!f) throw validation_error("null function");
  switch (f->kind) {
    case FKind::Constant:
      return pw_const(0.0, length, f->value);
    case FKind::Monomial: {
      if (f->exps.size() != 1)
        throw validation_error("1-d profile monomial must have one exponent");
      Poly p;
      p.c.assign(f->exps[0] + 1, 0.0);
      p.c[f->exps[0]] = f->coef;
      PiecewisePoly r;
      r.breaks = {0.0, length};
      r.pieces = {p};
      return r;
    }
    case FKind::Radial: {
      // On a 1-d domain the radial profile is the function itself.
      return compile_1d(f->child, length);
    }
    case FKind::Bump: {
      if (f->center.size() != 1)
        throw validation_error("1-d bump must have a one-coordinate center");
      if (f->cinf) return std::nullopt;
      return bump_piecewise(f->center[0], f->r0, 0.0, length);
    }
    case FKind::Plateau: {
      if (f->center.size() != 1)
        throw validation_error("1-d plateau must have a one-coordinate center");
      return plateau_piecewise(f->center[0], f->r0, f->r1, 0.0, length);
    }
    case FKind::Box: {
      double a = std::clamp(f->r0, 0.0, length), b = std::clamp(f->r1, 0.0, length);
      PiecewisePoly r;
      r.breaks = {0.0};
      if (a > 0.0) r.breaks.push_back(a);
      if (b > a) r.breaks.push_back(b);
      if (length > b) r.breaks.push_back(length);
      if (r.breaks.back() != length) r.breaks.push_back(length);
      for (size_t i = 0; i + 1 < r.breaks.size(); ++i) {
        double mid = 0.5 * (r.breaks[i] + r.breaks[i + 1]);
        r.pieces.push_back(Poly{{(mid >= a && mid <= b) ? f->value : 0.0}});
      }
      return r;
    }
    case FKind::Sum: {
      PiecewisePoly acc = pw_const(0.0, length, 0.0);
      for (const auto& t : f->children) {
        auto p = compile_1d(t, length);
        if (!p) return std::nullopt;
        acc = pw_add(acc, *p);
      }
      return acc;
    }
    case FKind::Product: {
      PiecewisePoly acc = pw_const(0.0, length, 1.0);
      for (const auto& t : f->children) {
        auto p = compile_1d(t, length);
        if (!p) return std::nullopt;
        acc = pw_mul(acc, *p);
      }
      return acc;
    }
    case FKind::Scale: {
      auto p = compile_1d(f->child, length);
      if (!p) return std::nullopt;
      return pw_scale(*p, f->value);
    }
    case FKind::Shift: {
      auto p = compile_1d(f->child, length);
      if (!p) return std::nullopt;
      return pw_add(*p, pw_const(0.0, length, f->value));
    }
    case FKind::AffineArg: {
      // value(x) = child(a x + b); compile the child on the image range and
      // substitute.  Requires a != 0.
      double a = f->a, b = f->b;
      if (a == 0.0) {
        // Constant argument: child evaluated at b.
        auto p = compile_1d(f->child, std::abs(b) + 1.0);
        if (!p) return std::nullopt;
        return pw_const(0.0, length, (*p)(b));
      }
      double y0 = b, y1 = a * length + b;
      double ylo = std::min(y0, y1), yhi = std::max(y0, y1);
      auto child = compile_1d(f->child, 1.0);
      if (!child) return std::nullopt;
      // Recompile the child over the needed range: extend with zero pieces
      // and rebase surviving pieces to the extended break origins.
      PiecewisePoly ext;
      ext.breaks.push_back(ylo);
      for (double br : child->breaks)
        if (br > ylo + 1e-15 && br < yhi - 1e-15) ext.breaks.push_back(br);
      ext.breaks.push_back(yhi);
      for (size_t i = 0; i + 1 < ext.breaks.size(); ++i) {
        double mid = 0.5 * (ext.breaks[i] + ext.breaks[i + 1]);
        if (mid < child->breaks.front() || mid > child->breaks.back())
          ext.pieces.push_back(Poly{{0.0}});
        else
          ext.pieces.push_back(piece_local(*child, mid, ext.breaks[i]));
      }
      PiecewisePoly out;
      // Map break y back to x = (y - b)/a and substitute into each piece.
      std::vector<double> xs;
      for (double y : ext.breaks) xs.push_back((y - b) / a);
      if (a < 0) std::reverse(xs.begin(), xs.end());
      out.breaks = xs;
      for (size_t i = 0; i + 1 < out.breaks.size(); ++i) {
        double xm = 0.5 * (out.breaks[i] + out.breaks[i + 1]);
        double ym = a * xm + b;
        size_t j = std::min<size_t>(
            std::upper_bound(ext.breaks.begin(), ext.breaks.end(), ym) - ext.breaks.begin() - 1,
            ext.pieces.size() - 1);
        // Child local eta = y - ext.breaks[j] with y = a x + b; in the
        // parent local coordinate xi = x - out.breaks[i] this is
        // eta = a xi + (a out.breaks[i] + b - ext.breaks[j]), whose constant
        // part is at most one piece width (breaks map onto breaks).
        out.pieces.push_back(
            poly_affine_arg(ext.pieces[j], a, a * out.breaks[i] + b - ext.breaks[j]));
      }
      return out;
    }
    default:
      return std::nullopt;
  }
}

namespace {

using Term = std::pair<std::vector<int>, double>;

std::optional<MultiPoly> mp_combine(const SmoothFunction& f, int n);

std::optional<MultiPoly> mp_of_terms(int n, std::vector<Term> terms) {
  // Merge duplicate exponent vectors.
  std::map<std::vector<int>, double> acc;
  for (auto& [e, c] : terms) acc[e] += c;
  MultiPoly p;
  p.n = n;
  for (auto& [e, c] : acc)
    if (c != 0.0) p.terms.emplace_back(e, c);
  return p;
}

std::optional<MultiPoly> mp_mul(const MultiPoly& a, const MultiPoly& b) {
  std::vector<Term> terms;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      std::vector<int> e(a.n);
      for (int i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
      terms.emplace_back(std::move(e), ca * cb);
    }
  return mp_of_terms(a.n, std::move(terms));
}

std::optional<MultiPoly> mp_combine(const SmoothFunction& f, int n) {
  switch (f->kind) {
    case FKind::Constant: {
      MultiPoly p;
      p.n = n;
      if (f->value != 0.0) p.terms.emplace_back(std::vector<int>(n, 0), f->value);
      return p;
    }
    case FKind::Monomial: {
      if (static_cast<int>(f->exps.size()) != n) return std::nullopt;
      MultiPoly p;
      p.n = n;
      if (f->coef != 0.0) p.terms.emplace_back(f->exps, f->coef);
      return p;
    }
    case FKind::Radial: {
      // profile(sum p_i): polynomial iff the profile is a plain polynomial;
      // expand (sum p)^k multinomially.
      auto pp = compile_1d(f->child, 1.0);
      if (!pp || pp->pieces.size() != 1) return std::nullopt;
      const Poly& prof = pp->pieces[0];
      MultiPoly sum;  // sum of coordinates
      sum.n = n;
      for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        sum.terms.emplace_back(std::move(e), 1.0);
      }
      MultiPoly acc;  // result accumulator, Horner style
      acc.n = n;
      for (size_t k = prof.c.size(); k-- > 0;) {
        auto prod = mp_mul(acc, sum);
        if (!prod) return std::nullopt;
        acc = *prod;
        if (prof.c[k] != 0.0) {
          bool found = false;
          for (auto& [e, c] : acc.terms)
            if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) {
              c += prof.c[k];
              found = true;
              break;
            }
          if (!found) acc.terms.emplace_back(std::vector<int>(n, 0), prof.c[k]);
        }
      }
      return acc;
    }
    case FKind::Sum: {
      std::vector<Term> terms;
      for (const auto& t : f->children) {
        auto p = mp_combine(t, n);
        if (!p) return std::nullopt;
        for (auto& tm : p->terms) terms.push_back(tm);
      }
      return mp_of_terms(n, std::move(terms));
    }
    case FKind::Product: {
      MultiPoly acc;
      acc.n = n;
      acc.terms.emplace_back(std::vector<int>(n, 0), 1.0);
      for (const auto& t : f->children) {
        auto p = mp_combine(t, n);
        if (!p) return std::nullopt;
        auto prod = mp_mul(acc, *p);
        if (!prod) return std::nullopt;
        acc = *prod;
      }
      return acc;
    }
    case FKind::Scale: {
      auto p = mp_combine(f->child, n);
      if (!p) return std::nullopt;
      for (auto& [e, c] : p->terms) c *= f->value;
      return p;
    }
    case FKind::Shift: {
      auto p = mp_combine(f->child, n);
      if (!p) return std::nullopt;
      std::vector<Term> terms = p->terms;
      terms.emplace_back(std::vector<int>(n, 0), f->value);
      return mp_of_terms(n, std::move(terms));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<MultiPoly> try_polynomial(const SmoothFunction& f, int n) {
  if (!f) throw validation_error("null function");
  return mp_combine(f, n);
}

}  // namespace toricqs::detail
