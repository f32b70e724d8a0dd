#include "toricqs/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "toricqs/detail/poly1d.hpp"
#include "toricqs/detail/quadrature.hpp"
#include "toricqs/detail/rng.hpp"
#include "toricqs/error.hpp"

namespace toricqs {

namespace {

double factor_total_mass(const FactorSpace& factor) {
  if (std::holds_alternative<Simplex>(factor)) {
    const Simplex& s = std::get<Simplex>(factor);
    return std::pow(s.scale, s.n);
  }
  return std::get<MeasuredTree>(factor).total_mass;
}

}  // namespace

double PushforwardMeasure::total_mass() const {
  if (space.is_simplex()) {
    const Simplex& s = space.simplex();
    return mass_factor * std::pow(s.scale, s.n);
  }
  if (space.is_tree()) return mass_factor * space.tree().total_mass;
  double m = mass_factor;
  for (const auto& f : space.product().factors) m *= factor_total_mass(f);
  return m;
}

PushforwardMeasure dh_measure(const BaseSpace& space) {
  return PushforwardMeasure{space, 1.0};
}

// Exact integration ------------------------------------------------------

namespace {

/// Product of a_i! / (n + sum a)! evaluated stably in long double.
long double dirichlet_ratio(const std::vector<int>& a, int n) {
  int total = n;
  for (int ai : a) total += ai;
  long double r = 1.0L;
  // Multiply the factorials of the exponents, then divide by (total)!.
  for (int ai : a)
    for (int k = 2; k <= ai; ++k) r *= static_cast<long double>(k);
  for (int k = 2; k <= total; ++k) r /= static_cast<long double>(k);
  return r;
}

/// Exact integral of a polynomial against mass * n! * Lebesgue on the
/// simplex of the given scale: each monomial integrates to
/// coef * mass * n! * scale^(n + |a|) * prod(a_i!) / (n + |a|)!.
double integrate_polynomial(const Simplex& s, const detail::MultiPoly& poly, double mass) {
  long double total = 0.0L;
  long double nfact = 1.0L;
  for (int k = 2; k <= s.n; ++k) nfact *= static_cast<long double>(k);
  for (const auto& [exps, coef] : poly.terms) {
    int deg = 0;
    for (int e : exps) deg += e;
    long double term = static_cast<long double>(coef) * nfact *
                       std::pow(static_cast<long double>(s.scale),
                                static_cast<long double>(s.n + deg)) *
                       dirichlet_ratio(exps, s.n);
    total += term;
  }
  return static_cast<double>(static_cast<long double>(mass) * total);
}

/// Exact integral of profile(sum of coordinates): reduces to the 1-d moment
/// mass * n * int_0^scale profile(u) u^(n-1) du.
double integrate_radial_exact(const Simplex& s, const SmoothFunction& profile, double mass) {
  auto pw = detail::compile_1d(profile, s.scale);
  if (!pw)
    throw validation_error(
        "integrand has no exact form (profile is not piecewise polynomial); "
        "use a quadrature or Monte Carlo engine");
  detail::Poly radial_weight;
  radial_weight.c.assign(s.n, 0.0);
  radial_weight.c[s.n - 1] = 1.0;  // u^(n-1)
  detail::PiecewisePoly w;
  w.breaks = {0.0, s.scale};
  w.pieces = {radial_weight};
  return mass * s.n * detail::pw_mul(*pw, w).integral();
}

/// The function's restriction to the interior of one tree edge, as a 1-d
/// function of the offset.  Throws when f is not built from edge profiles,
/// constants, and arithmetic.
SmoothFunction restrict_to_edge(const FuncNode& f, int e) {
  switch (f.kind) {
    case FKind::Constant:
      return fn::constant(f.value);
    case FKind::EdgeProfile:
      return f.edge == e ? f.child : fn::constant(0.0);
    case FKind::Sum: {
      std::vector<SmoothFunction> terms;
      for (const auto& c : f.children) terms.push_back(restrict_to_edge(*c, e));
      return fn::sum(std::move(terms));
    }
    case FKind::Product: {
      std::vector<SmoothFunction> terms;
      for (const auto& c : f.children) terms.push_back(restrict_to_edge(*c, e));
      return fn::product(std::move(terms));
    }
    case FKind::Scale:
      return fn::scale(f.value, restrict_to_edge(*f.child, e));
    case FKind::Shift:
      return fn::shift(f.value, restrict_to_edge(*f.child, e));
    default:
      throw validation_error("function node kind is not defined on trees");
  }
}

double integrate_tree_exact(const MeasuredTree& tree, const SmoothFunction& f, double mass) {
  double total = 0.0;
  for (size_t ei = 0; ei < tree.edges.size(); ++ei) {
    const TreeEdge& edge = tree.edges[ei];
    SmoothFunction fe = restrict_to_edge(*f, static_cast<int>(ei));
    auto fp = detail::compile_1d(fe, edge.length);
    auto dp = detail::compile_1d(edge.density, edge.length);
    if (!fp || !dp)
      throw validation_error(
          "integrand has no exact form on a tree edge; use a quadrature or "
          "Monte Carlo engine");
    total += detail::pw_mul(*fp, *dp).integral();
  }
  return mass * total;
}

/// One separated term of a function on a product space: coefficient times a
/// per-factor function (null = the constant 1).
struct SeparatedTerm {
  double coef = 1.0;
  std::vector<SmoothFunction> per_factor;
};

std::vector<SeparatedTerm> separate(const FuncNode& f, int k) {
  switch (f.kind) {
    case FKind::Constant: {
      SeparatedTerm t;
      t.coef = f.value;
      t.per_factor.assign(k, nullptr);
      return {t};
    }
    case FKind::Lift: {
      if (f.factor < 0 || f.factor >= k)
        throw validation_error("lift names a nonexistent product factor");
      SeparatedTerm t;
      t.per_factor.assign(k, nullptr);
      t.per_factor[f.factor] = f.child;
      return {t};
    }
    case FKind::Sum: {
      std::vector<SeparatedTerm> out;
      for (const auto& c : f.children) {
        auto sub = separate(*c, k);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case FKind::Product: {
      std::vector<SeparatedTerm> out;
      SeparatedTerm unit;
      unit.per_factor.assign(k, nullptr);
      out.push_back(unit);
      for (const auto& c : f.children) {
        auto sub = separate(*c, k);
        std::vector<SeparatedTerm> next;
        for (const auto& a : out)
          for (const auto& b : sub) {
            SeparatedTerm t;
            t.coef = a.coef * b.coef;
            t.per_factor.assign(k, nullptr);
            for (int i = 0; i < k; ++i) {
              if (a.per_factor[i] && b.per_factor[i])
                t.per_factor[i] = fn::product({a.per_factor[i], b.per_factor[i]});
              else
                t.per_factor[i] = a.per_factor[i] ? a.per_factor[i] : b.per_factor[i];
            }
            next.push_back(std::move(t));
          }
        out = std::move(next);
      }
      return out;
    }
    case FKind::Scale: {
      auto out = separate(*f.child, k);
      for (auto& t : out) t.coef *= f.value;
      return out;
    }
    case FKind::Shift: {
      auto out = separate(*f.child, k);
      SeparatedTerm t;
      t.coef = f.value;
      t.per_factor.assign(k, nullptr);
      out.push_back(std::move(t));
      return out;
    }
    default:
      throw validation_error(
          "function node must be lifted to a factor before use on a product space");
  }
}

}  // namespace

double integrate_exact(const PushforwardMeasure& m, const SmoothFunction& f) {
  if (!f) throw validation_error("null function");
  if (m.space.is_simplex()) {
    const Simplex& s = m.space.simplex();
    if (auto poly = detail::try_polynomial(f, s.n))
      return integrate_polynomial(s, *poly, m.mass_factor);
    if (auto profile = try_as_radial(f, s))
      return integrate_radial_exact(s, profile, m.mass_factor);
    throw validation_error(
        "integrand has no exact form (not polynomial or radial); use a "
        "quadrature or Monte Carlo engine");
  }
  if (m.space.is_tree()) return integrate_tree_exact(m.space.tree(), f, m.mass_factor);
  const ProductSpace& prod = m.space.product();
  int k = static_cast<int>(prod.factors.size());
  double total = 0.0;
  for (const auto& term : separate(*f, k)) {
    double v = term.coef;
    for (int i = 0; i < k && v != 0.0; ++i) {
      PushforwardMeasure sub{BaseSpace(prod.factors[i]), 1.0};
      v *= term.per_factor[i] ? integrate_exact(sub, term.per_factor[i])
                              : sub.total_mass();
    }
    total += v;
  }
  return m.mass_factor * total;
}

// Quadrature -------------------------------------------------------------

namespace {

/// Collects breakpoints contributed to one product factor by the lifts that
/// target it (best effort; only used to align quadrature panels).
void lift_breakpoints(const FuncNode& f, int factor, double length, std::set<double>& out) {
  switch (f.kind) {
    case FKind::Lift:
      if (f.factor == factor)
        for (double b : breakpoints_1d(f.child, length)) out.insert(b);
      return;
    case FKind::Sum:
    case FKind::Product:
    case FKind::PartitionPiece:
      for (const auto& c : f.children) lift_breakpoints(*c, factor, length, out);
      return;
    case FKind::Scale:
    case FKind::Shift:
      lift_breakpoints(*f.child, factor, length, out);
      return;
    default:
      return;
  }
}

double integrate_simplex_quadrature(const Simplex& s, const SmoothFunction& f, double mass,
                                    const QuadEngine& e) {
  // Radial reduction first: 1-d composite rules resolve profile kinks that
  // a fixed simplex rule cannot.
  if (auto profile = try_as_radial(f, s)) {
    auto breaks = breakpoints_1d(profile, s.scale);
    return mass * s.n *
           detail::integrate_segments(
               [&](double u) { return eval_profile(profile, u) * std::pow(u, s.n - 1); },
               0.0, s.scale, breaks, std::max(1, e.order));
  }
  if (s.n == 1) {
    BaseSpace space{s};
    auto breaks = breakpoints_1d(f, s.scale);
    return mass * detail::integrate_segments(
                      [&](double t) {
                        return eval_unchecked(space, f, BasePoint::simplex({t}));
                      },
                      0.0, s.scale, breaks, std::max(1, e.order));
  }
  BaseSpace space{s};
  const detail::SimplexRule& rule = detail::grundmann_moller(s.n, std::max(0, e.order));
  double nfact = 1.0;
  for (int k = 2; k <= s.n; ++k) nfact *= k;
  double scale_n = std::pow(s.scale, s.n);
  if (s.n == 2 && e.subdiv > 0) {
    // Refine by 4-way triangle subdivision of the unit simplex, mapping the
    // base rule onto each child triangle.
    std::vector<std::array<std::vector<double>, 3>> tris = {
        {std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0},
         std::vector<double>{0.0, 1.0}}};
    for (int level = 0; level < e.subdiv; ++level) {
      std::vector<std::array<std::vector<double>, 3>> next;
      for (const auto& t : tris)
        for (auto& c : detail::split_triangle(t)) next.push_back(std::move(c));
      tris = std::move(next);
    }
    double total = 0.0;
    for (const auto& t : tris) {
      double b00 = t[1][0] - t[0][0], b01 = t[2][0] - t[0][0];
      double b10 = t[1][1] - t[0][1], b11 = t[2][1] - t[0][1];
      double det = std::abs(b00 * b11 - b01 * b10);
      for (size_t k = 0; k < rule.points.size(); ++k) {
        double x = t[0][0] + b00 * rule.points[k][0] + b01 * rule.points[k][1];
        double y = t[0][1] + b10 * rule.points[k][0] + b11 * rule.points[k][1];
        // The reference weights already integrate plain area over the unit
        // triangle (they sum to 1/2), so the affine change of variables
        // contributes exactly |det| and nothing else.
        total += det * rule.weights[k] *
                 eval_unchecked(space, f,
                                BasePoint::simplex({s.scale * x, s.scale * y}));
      }
    }
    return mass * nfact * scale_n * total;
  }
  double total = 0.0;
  for (size_t k = 0; k < rule.points.size(); ++k) {
    std::vector<double> p(s.n);
    for (int i = 0; i < s.n; ++i) p[i] = s.scale * rule.points[k][i];
    total += rule.weights[k] * eval_unchecked(space, f, BasePoint::simplex(p));
  }
  return mass * nfact * scale_n * total;
}

double integrate_tree_quadrature(const MeasuredTree& tree, const SmoothFunction& f,
                                 double mass, const QuadEngine& e) {
  BaseSpace space{tree};
  double total = 0.0;
  for (size_t ei = 0; ei < tree.edges.size(); ++ei) {
    const TreeEdge& edge = tree.edges[ei];
    SmoothFunction fe = restrict_to_edge(*f, static_cast<int>(ei));
    std::set<double> breaks;
    for (double b : breakpoints_1d(fe, edge.length)) breaks.insert(b);
    for (double b : breakpoints_1d(edge.density, edge.length)) breaks.insert(b);
    total += detail::integrate_segments(
        [&](double t) {
          TreePoint p;
          p.edge = static_cast<int>(ei);
          p.offset = t;
          return eval_unchecked(space, f, BasePoint::tree(p)) *
                 eval_profile(edge.density, t);
        },
        0.0, edge.length, std::vector<double>(breaks.begin(), breaks.end()),
        std::max(1, e.order));
  }
  return mass * total;
}

/// Weighted nodes of one product factor whose weights sum to the factor's
/// unit-mass total.
struct FactorNodes {
  std::vector<FactorPoint> points;
  std::vector<double> weights;
};

FactorNodes factor_nodes(const FactorSpace& factor, const FuncNode& f, int index,
                         const QuadEngine& e) {
  FactorNodes out;
  if (std::holds_alternative<Simplex>(factor)) {
    const Simplex& s = std::get<Simplex>(factor);
    if (s.n == 1) {
      std::set<double> breaks;
      lift_breakpoints(f, index, s.scale, breaks);
      detail::Rule1D rule = detail::build_rule_1d(
          0.0, s.scale, std::vector<double>(breaks.begin(), breaks.end()),
          std::max(1, e.order));
      for (size_t k = 0; k < rule.x.size(); ++k) {
        out.points.push_back(std::vector<double>{rule.x[k]});
        out.weights.push_back(rule.w[k]);  // density 1! = 1
      }
      return out;
    }
    const detail::SimplexRule& rule = detail::grundmann_moller(s.n, std::max(0, e.order));
    double nfact = 1.0;
    for (int k = 2; k <= s.n; ++k) nfact *= k;
    double scale_n = std::pow(s.scale, s.n);
    for (size_t k = 0; k < rule.points.size(); ++k) {
      std::vector<double> p(s.n);
      for (int i = 0; i < s.n; ++i) p[i] = s.scale * rule.points[k][i];
      out.points.push_back(std::move(p));
      out.weights.push_back(nfact * scale_n * rule.weights[k]);
    }
    return out;
  }
  const MeasuredTree& tree = std::get<MeasuredTree>(factor);
  for (size_t ei = 0; ei < tree.edges.size(); ++ei) {
    const TreeEdge& edge = tree.edges[ei];
    std::set<double> breaks;
    lift_breakpoints(f, index, edge.length, breaks);
    for (double b : breakpoints_1d(edge.density, edge.length)) breaks.insert(b);
    detail::Rule1D rule = detail::build_rule_1d(
        0.0, edge.length, std::vector<double>(breaks.begin(), breaks.end()),
        std::max(1, e.order));
    for (size_t k = 0; k < rule.x.size(); ++k) {
      TreePoint p;
      p.edge = static_cast<int>(ei);
      p.offset = rule.x[k];
      out.points.push_back(p);
      out.weights.push_back(rule.w[k] * eval_profile(edge.density, rule.x[k]));
    }
  }
  return out;
}

double integrate_product_quadrature(const ProductSpace& prod, const SmoothFunction& f,
                                    double mass, const QuadEngine& e) {
  BaseSpace space{prod};
  int k = static_cast<int>(prod.factors.size());
  std::vector<FactorNodes> nodes;
  nodes.reserve(k);
  for (int i = 0; i < k; ++i) nodes.push_back(factor_nodes(prod.factors[i], *f, i, e));
  BasePoint p;
  p.parts.resize(k);
  double total = 0.0;
  std::function<void(int, double)> rec = [&](int i, double w) {
    if (i == k) {
      total += w * eval_unchecked(space, f, p);
      return;
    }
    for (size_t j = 0; j < nodes[i].points.size(); ++j) {
      p.parts[i] = nodes[i].points[j];
      rec(i + 1, w * nodes[i].weights[j]);
    }
  };
  rec(0, 1.0);
  return mass * total;
}

}  // namespace

double integrate_quadrature(const PushforwardMeasure& m, const SmoothFunction& f,
                            const QuadEngine& e) {
  if (!f) throw validation_error("null function");
  if (m.space.is_simplex())
    return integrate_simplex_quadrature(m.space.simplex(), f, m.mass_factor, e);
  if (m.space.is_tree())
    return integrate_tree_quadrature(m.space.tree(), f, m.mass_factor, e);
  return integrate_product_quadrature(m.space.product(), f, m.mass_factor, e);
}

// Monte Carlo ------------------------------------------------------------

namespace {

/// Draws one point of the factor together with an importance weight w such
/// that E[w * g(X)] equals the unit-mass integral of g over the factor.
struct FactorSampler {
  const FactorSpace* factor;
  double total_length = 0.0;  // trees: sum of edge lengths

  FactorPoint draw(detail::Rng& rng, double& weight) const {
    if (std::holds_alternative<Simplex>(*factor)) {
      const Simplex& s = std::get<Simplex>(*factor);
      // Uniform point of the simplex from exponential spacings.
      std::vector<double> exps(s.n + 1);
      double total = 0.0;
      for (auto& v : exps) {
        v = rng.exponential();
        total += v;
      }
      std::vector<double> p(s.n);
      for (int i = 0; i < s.n; ++i) p[i] = s.scale * exps[i + 1] / total;
      // Unit-mass measure has density n!; uniform sampling has density
      // n!/scale^n, so the weight is the constant scale^n.
      weight = std::pow(s.scale, s.n);
      return p;
    }
    const MeasuredTree& tree = std::get<MeasuredTree>(*factor);
    // Edge chosen proportional to length, offset uniform: the estimator
    // total_length * density(t) is unbiased for the edge-density measure.
    double u = rng.uniform() * total_length;
    size_t ei = 0;
    for (; ei + 1 < tree.edges.size(); ++ei) {
      if (u < tree.edges[ei].length) break;
      u -= tree.edges[ei].length;
    }
    double t = std::min(u, tree.edges[ei].length);
    TreePoint p;
    p.edge = static_cast<int>(ei);
    p.offset = t;
    weight = total_length * eval_profile(tree.edges[ei].density, t);
    return p;
  }
};

}  // namespace

McResult integrate_monte_carlo(const PushforwardMeasure& m, const SmoothFunction& f,
                               const McEngine& e) {
  if (!f) throw validation_error("null function");
  if (e.samples < 1) throw validation_error("Monte Carlo needs at least one sample");
  std::vector<FactorSpace> factors;
  if (m.space.is_simplex())
    factors.push_back(m.space.simplex());
  else if (m.space.is_tree())
    factors.push_back(m.space.tree());
  else
    factors = m.space.product().factors;
  std::vector<FactorSampler> samplers;
  for (const auto& fac : factors) {
    FactorSampler s;
    s.factor = &fac;
    if (std::holds_alternative<MeasuredTree>(fac))
      for (const auto& edge : std::get<MeasuredTree>(fac).edges)
        s.total_length += edge.length;
    samplers.push_back(s);
  }
  detail::Rng rng(e.seed);
  BasePoint p;
  p.parts.resize(factors.size());
  double mean = 0.0, m2 = 0.0;
  for (long long k = 1; k <= e.samples; ++k) {
    double w = m.mass_factor;
    for (size_t i = 0; i < samplers.size(); ++i) {
      double wi = 1.0;
      p.parts[i] = samplers[i].draw(rng, wi);
      w *= wi;
    }
    double x = w * eval_unchecked(m.space, f, p);
    double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  McResult r;
  r.estimate = mean;
  if (e.samples > 1)
    r.standard_error =
        std::sqrt(m2 / (static_cast<double>(e.samples - 1) * static_cast<double>(e.samples)));
  return r;
}

double integrate_sigma(const BaseSpace& space, const QuasiStateMeasure& sigma,
                       const SmoothFunction& f) {
  return sigma.mass * eval(space, f, sigma.point);
}

double integrate(const PushforwardMeasure& m, const SmoothFunction& f, const Engine& e) {
  return std::visit(
      [&](const auto& engine) -> double {
        using T = std::decay_t<decltype(engine)>;
        if constexpr (std::is_same_v<T, ExactEngine>) return integrate_exact(m, f);
        if constexpr (std::is_same_v<T, QuadEngine>) return integrate_quadrature(m, f, engine);
        if constexpr (std::is_same_v<T, McEngine>)
          return integrate_monte_carlo(m, f, engine).estimate;
      },
      e);
}

}  // namespace toricqs
