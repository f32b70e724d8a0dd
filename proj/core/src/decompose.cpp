#include "toricqs/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "toricqs/detail/quadrature.hpp"
#include "toricqs/error.hpp"

namespace toricqs {

namespace {

std::vector<double> simplex_coords(const BasePoint& p) {
  if (p.parts.size() != 1 || !std::holds_alternative<std::vector<double>>(p.parts[0]))
    throw validation_error("expected a simplex point");
  return std::get<std::vector<double>>(p.parts[0]);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Grid sup of |f - f(pstar)| over the ball of radius 2*gamma around pstar,
/// on a box lattice intersected with the simplex.
double local_deviation(const BaseSpace& space, const Simplex& s, const SmoothFunction& f,
                       const std::vector<double>& pstar, double gamma) {
  double c = eval_unchecked(space, f, BasePoint::simplex(pstar));
  int per_axis = s.n <= 2 ? 33 : 13;
  double lo = -2.0 * gamma, hi = 2.0 * gamma;
  std::vector<int> idx(s.n, 0);
  std::vector<double> x(s.n);
  double best = 0.0;
  std::function<void(int)> rec = [&](int axis) {
    if (axis == s.n) {
      if (dist(x, pstar) > 2.0 * gamma) return;
      BasePoint p = BasePoint::simplex(x);
      if (!contains(space, p, 0.0)) return;
      best = std::max(best, std::abs(eval_unchecked(space, f, p) - c));
      return;
    }
    for (idx[axis] = 0; idx[axis] < per_axis; ++idx[axis]) {
      x[axis] = pstar[axis] + lo + (hi - lo) * idx[axis] / (per_axis - 1);
      rec(axis + 1);
    }
  };
  rec(0);
  return best;
}

}  // namespace

FlattenResult flatten(const BaseSpace& space, const SmoothFunction& f,
                      const BasePoint& pstar, double gamma) {
  if (!f) throw validation_error("null function");
  if (!space.is_simplex())
    throw validation_error("flattening is defined on simplex spaces");
  if (!(gamma > 0.0)) throw validation_error("gamma must be positive");
  if (!contains(space, pstar, 1e-12))
    throw validation_error("flattening point is not in the space");
  const Simplex& s = space.simplex();
  std::vector<double> center = simplex_coords(pstar);
  double value = eval_unchecked(space, f, pstar);
  SmoothFunction chi = fn::plateau(center, gamma, 2.0 * gamma);
  SmoothFunction one_minus_chi = fn::shift(1.0, fn::scale(-1.0, chi));
  FlattenResult r;
  r.fprime = fn::sum({fn::scale(value, chi), fn::product({one_minus_chi, f})});
  r.gamma = gamma;
  r.epsilon_achieved = local_deviation(space, s, f, center, gamma);
  return r;
}

CoverPlan build_cover(const Simplex& s, const BasePoint& pstar, double gamma) {
  if (!(gamma > 0.0)) throw validation_error("gamma must be positive");
  BaseSpace space{s};
  if (!contains(space, pstar, 1e-12))
    throw validation_error("cover point is not in the space");
  std::vector<double> p0 = simplex_coords(pstar);
  const double r = 0.5 * gamma;
  const double pitch = gamma / (4.0 * std::sqrt(static_cast<double>(s.n)));
  const double clearance = r + gamma / 16.0;

  CoverPlan plan;
  plan.gamma = gamma;
  plan.balls.push_back(BallRegion{p0, r});

  // Lattice candidates within reach of the simplex.
  int klo = static_cast<int>(std::floor((-r - pitch) / pitch)) - 1;
  int khi = static_cast<int>(std::ceil((s.scale + r + pitch) / pitch)) + 1;
  std::vector<int> idx(s.n, 0);
  std::vector<double> c(s.n);
  bool any_kept = false;
  std::function<void(int)> rec = [&](int axis) {
    if (axis == s.n) {
      if (distance_to_simplex(s, c) > r) return;
      if (dist(c, p0) <= clearance) return;
      plan.balls.push_back(BallRegion{c, r});
      any_kept = true;
      return;
    }
    for (idx[axis] = klo; idx[axis] <= khi; ++idx[axis]) {
      c[axis] = pitch * idx[axis];
      rec(axis + 1);
    }
  };
  rec(0);
  if (!any_kept)
    throw validation_error(
        "gamma too large: no admissible cover center stays clear of the "
        "distinguished point");

  // Grid verification that the open balls cover the simplex.
  int resolution =
      std::clamp(static_cast<int>(std::ceil(4.0 * s.scale *
                                            std::sqrt(static_cast<double>(s.n)) / gamma)),
                 8, 200);
  plan.verify_resolution = resolution;
  std::vector<int> gi(s.n, 0);
  std::vector<double> x(s.n);
  bool covered = true;
  std::function<void(int, int)> grid = [&](int axis, int left) {
    if (!covered) return;
    if (axis == s.n) {
      for (const auto& ball : plan.balls)
        if (dist(x, ball.center) < ball.radius) return;
      covered = false;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      x[axis] = s.scale * v / resolution;
      grid(axis + 1, left - v);
    }
  };
  grid(0, resolution);
  if (!covered)
    throw validation_error("cover verification failed: a grid point of the simplex "
                           "lies in no cover ball");
  return plan;
}

namespace {

/// Nodes and weights of the single quadrature rule shared by every integral
/// of one pipeline run (weights include the measure density, so plain
/// weighted sums of point values are integrals).
struct SharedRule {
  std::vector<BasePoint> points;
  std::vector<double> weights;
};

SharedRule build_shared_rule(const Simplex& s, double mass, const QuadEngine& quad,
                             const std::vector<double>& breakpoints) {
  SharedRule rule;
  if (s.n == 1) {
    detail::Rule1D r =
        detail::build_rule_1d(0.0, s.scale, breakpoints, std::max(1, quad.order));
    for (size_t k = 0; k < r.x.size(); ++k) {
      rule.points.push_back(BasePoint::simplex({r.x[k]}));
      rule.weights.push_back(mass * r.w[k]);
    }
    return rule;
  }
  const detail::SimplexRule& gm = detail::grundmann_moller(s.n, std::max(0, quad.order));
  double nfact = 1.0;
  for (int k = 2; k <= s.n; ++k) nfact *= k;
  double scale_n = std::pow(s.scale, s.n);
  if (s.n == 2 && quad.subdiv > 0) {
    std::vector<std::array<std::vector<double>, 3>> tris = {
        {std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0},
         std::vector<double>{0.0, 1.0}}};
    for (int level = 0; level < quad.subdiv; ++level) {
      std::vector<std::array<std::vector<double>, 3>> next;
      for (const auto& t : tris)
        for (auto& child : detail::split_triangle(t)) next.push_back(std::move(child));
      tris = std::move(next);
    }
    for (const auto& t : tris) {
      double b00 = t[1][0] - t[0][0], b01 = t[2][0] - t[0][0];
      double b10 = t[1][1] - t[0][1], b11 = t[2][1] - t[0][1];
      double det = std::abs(b00 * b11 - b01 * b10);
      for (size_t k = 0; k < gm.points.size(); ++k) {
        double x = t[0][0] + b00 * gm.points[k][0] + b01 * gm.points[k][1];
        double y = t[0][1] + b10 * gm.points[k][0] + b11 * gm.points[k][1];
        rule.points.push_back(BasePoint::simplex({s.scale * x, s.scale * y}));
        rule.weights.push_back(mass * nfact * scale_n * det * gm.weights[k]);
      }
    }
    return rule;
  }
  for (size_t k = 0; k < gm.points.size(); ++k) {
    std::vector<double> p(s.n);
    for (int i = 0; i < s.n; ++i) p[i] = s.scale * gm.points[k][i];
    rule.points.push_back(BasePoint::simplex(std::move(p)));
    rule.weights.push_back(mass * nfact * scale_n * gm.weights[k]);
  }
  return rule;
}

double apply_rule(const BaseSpace& space, const SharedRule& rule, const SmoothFunction& f) {
  double total = 0.0;
  for (size_t k = 0; k < rule.points.size(); ++k)
    total += rule.weights[k] * eval_unchecked(space, f, rule.points[k]);
  return total;
}

}  // namespace

DecompositionReport partition_and_evaluate(const QuasiStateModel& m, const SmoothFunction& f,
                                           double gamma, const QuadEngine& quad) {
  if (!f) throw validation_error("null function");
  if (!m.space.is_simplex())
    throw validation_error("the decomposition pipeline runs on simplex spaces");
  const Simplex& s = m.space.simplex();
  const BaseSpace& space = m.space;
  const BasePoint& pstar = m.sigma.point;
  std::vector<double> p0 = simplex_coords(pstar);

  FlattenResult fl = flatten(space, f, pstar, gamma);
  double c = eval_unchecked(space, f, pstar);
  SmoothFunction g = fn::shift(-c, fl.fprime);

  CoverPlan cover = build_cover(s, pstar, gamma);

  std::vector<SmoothFunction> bumps;
  bumps.reserve(cover.balls.size());
  for (const auto& ball : cover.balls) bumps.push_back(fn::bump(ball.center, ball.radius));

  DecompositionReport report;
  report.gamma = gamma;
  report.epsilon_achieved = fl.epsilon_achieved;

  // One deterministic rule shared by every integral below, so the piece
  // values sum to the direct value by linearity of the weighted sum.
  std::vector<double> breaks;
  if (s.n == 1) {
    std::set<double> bk;
    for (double b : breakpoints_1d(g, s.scale)) bk.insert(b);
    for (const auto& bump : bumps)
      for (double b : breakpoints_1d(bump, s.scale)) bk.insert(b);
    breaks.assign(bk.begin(), bk.end());
  }
  SharedRule rule = build_shared_rule(s, m.dh.mass_factor, quad, breaks);

  // Per-node values shared by all pieces.  A bump vanishes identically
  // outside its ball, so each piece only sums the nodes its ball contains;
  // the skipped terms are exact zeros and the telescoping identity
  // sum_i psi_i * g = g survives at every node.
  size_t nodes = rule.points.size();
  std::vector<double> g_val(nodes), den(nodes);
  std::vector<std::vector<double>> node_coords(nodes);
  for (size_t k = 0; k < nodes; ++k) {
    node_coords[k] = simplex_coords(rule.points[k]);
    g_val[k] = eval_unchecked(space, g, rule.points[k]);
    double d = 0.0;
    for (const auto& b : bumps) d += eval_unchecked(space, b, rule.points[k]);
    if (!(d > 0.0))
      throw internal_error("cover bump sum vanishes at a quadrature node");
    den[k] = d;
  }

  const BallRegion flat_zone{p0, gamma};
  double sum = 0.0;
  for (size_t i = 0; i < cover.balls.size(); ++i) {
    PieceReport piece;
    piece.index = static_cast<int>(i);
    piece.ball = cover.balls[i];
    piece.near_pstar = (i == 0);
    double value = 0.0;
    for (size_t k = 0; k < nodes; ++k) {
      if (dist(node_coords[k], cover.balls[i].center) >= cover.balls[i].radius) continue;
      value += rule.weights[k] *
               (eval_unchecked(space, bumps[i], rule.points[k]) / den[k]) * g_val[k];
    }
    piece.value = value;
    if (!piece.near_pstar) {
      Region support;
      support.balls.push_back(cover.balls[i]);
      support.excluded.push_back(flat_zone);
      auto cert = displace_region(s, support);
      if (!cert) {
        std::ostringstream msg;
        msg << "gamma too large: piece " << i
            << " is not certified displaceable by the symmetry group";
        throw validation_error(msg.str());
      }
      piece.certificate = *cert;
    }
    sum += piece.value;
    report.pieces.push_back(std::move(piece));
  }
  report.sum_of_values = sum;
  report.direct_value = apply_rule(space, rule, g);
  report.zeta_fprime = apply_rule(space, rule, fl.fprime) - c * m.sigma.mass;

  // Grid sup of |sum_i psi_i * g - g| over the simplex (accumulated lattice,
  // evaluating the bump sum once per point).
  double recon = 0.0;
  int res = s.n <= 2 ? 12 : 6;
  std::vector<double> x(s.n);
  for (int d = 1; d <= res; ++d) {
    std::function<void(int, int)> lattice = [&](int axis, int left) {
      if (axis == s.n) {
        BasePoint p = BasePoint::simplex(x);
        double dsum = 0.0, ratio = 0.0;
        for (const auto& b : bumps) dsum += eval_unchecked(space, b, p);
        if (!(dsum > 0.0))
          throw internal_error("cover bump sum vanishes at a lattice point");
        for (const auto& b : bumps) ratio += eval_unchecked(space, b, p) / dsum;
        double gv = eval_unchecked(space, g, p);
        recon = std::max(recon, std::abs(ratio * gv - gv));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        x[axis] = s.scale * v / d;
        lattice(axis + 1, left - v);
      }
    };
    lattice(0, d);
  }
  report.reconstruction_error = recon;
  return report;
}

}  // namespace toricqs
