#include "toricqs/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "toricqs/detail/poly1d.hpp"
#include "toricqs/error.hpp"

namespace toricqs {

namespace fn {

namespace {

std::shared_ptr<FuncNode> node(FKind kind) {
  auto n = std::make_shared<FuncNode>();
  n->kind = kind;
  return n;
}

}  // namespace

SmoothFunction constant(double value) {
  auto n = node(FKind::Constant);
  n->value = value;
  return n;
}

SmoothFunction monomial(std::vector<int> exps, double coef) {
  for (int e : exps)
    if (e < 0) throw validation_error("monomial exponents must be nonnegative");
  auto n = node(FKind::Monomial);
  n->exps = std::move(exps);
  n->coef = coef;
  return n;
}

SmoothFunction radial(SmoothFunction profile) {
  if (!profile) throw validation_error("null radial profile");
  auto n = node(FKind::Radial);
  n->child = std::move(profile);
  return n;
}

SmoothFunction bump(std::vector<double> center, double r, bool cinf) {
  if (!(r > 0.0)) throw validation_error("bump radius must be positive");
  auto n = node(FKind::Bump);
  n->center = std::move(center);
  n->r0 = r;
  n->cinf = cinf;
  return n;
}

SmoothFunction plateau(std::vector<double> center, double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in))
    throw validation_error("plateau radii must satisfy 0 < r_in < r_out");
  auto n = node(FKind::Plateau);
  n->center = std::move(center);
  n->r0 = r_in;
  n->r1 = r_out;
  return n;
}

SmoothFunction box(double a, double b, double value) {
  if (!(b > a)) throw validation_error("box interval must have positive length");
  auto n = node(FKind::Box);
  n->r0 = a;
  n->r1 = b;
  n->value = value;
  return n;
}

SmoothFunction edge_profile(int edge, SmoothFunction profile) {
  if (edge < 0) throw validation_error("edge index must be nonnegative");
  if (!profile) throw validation_error("null edge profile");
  auto n = node(FKind::EdgeProfile);
  n->edge = edge;
  n->child = std::move(profile);
  return n;
}

SmoothFunction lift(int factor, SmoothFunction f) {
  if (factor < 0) throw validation_error("factor index must be nonnegative");
  if (!f) throw validation_error("null lifted function");
  auto n = node(FKind::Lift);
  n->factor = factor;
  n->child = std::move(f);
  return n;
}

SmoothFunction sum(std::vector<SmoothFunction> terms) {
  for (const auto& t : terms)
    if (!t) throw validation_error("null term in sum");
  auto n = node(FKind::Sum);
  n->children = std::move(terms);
  return n;
}

SmoothFunction product(std::vector<SmoothFunction> terms) {
  for (const auto& t : terms)
    if (!t) throw validation_error("null term in product");
  auto n = node(FKind::Product);
  n->children = std::move(terms);
  return n;
}

SmoothFunction scale(double c, SmoothFunction f) {
  if (!f) throw validation_error("null scaled function");
  auto n = node(FKind::Scale);
  n->value = c;
  n->child = std::move(f);
  return n;
}

SmoothFunction shift(double c, SmoothFunction f) {
  if (!f) throw validation_error("null shifted function");
  auto n = node(FKind::Shift);
  n->value = c;
  n->child = std::move(f);
  return n;
}

SmoothFunction affine_arg(double a, double b, SmoothFunction f) {
  if (!f) throw validation_error("null substituted function");
  auto n = node(FKind::AffineArg);
  n->a = a;
  n->b = b;
  n->child = std::move(f);
  return n;
}

SmoothFunction partition_piece(int index, std::vector<SmoothFunction> bumps) {
  if (bumps.empty()) throw validation_error("partition piece needs at least one bump");
  if (index < 0 || index >= static_cast<int>(bumps.size()))
    throw validation_error("partition piece index out of range");
  for (const auto& b : bumps)
    if (!b) throw validation_error("null bump in partition piece");
  auto n = node(FKind::PartitionPiece);
  n->index = index;
  n->children = std::move(bumps);
  return n;
}

}  // namespace fn

namespace {

/// Scalar profile value shared by Bump (and radial distance arguments).
double bump_profile(double d, double r, bool cinf) {
  if (d >= r) return 0.0;
  double u = d / r;
  double w = 1.0 - u * u;
  if (!cinf) return w * w * w;
  if (w < 1e-12) return 0.0;
  return std::exp(1.0 - 1.0 / w);
}

double smootherstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double plateau_profile(double d, double r_in, double r_out) {
  if (d <= r_in) return 1.0;
  if (d >= r_out) return 0.0;
  return 1.0 - smootherstep((d - r_in) / (r_out - r_in));
}

double euclid(const std::vector<double>& p, const std::vector<double>& c) {
  size_t n = std::min(p.size(), c.size());
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = p[i] - c[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double eval_node(const BaseSpace& space, const FuncNode& f, const BasePoint& p);

/// Evaluates a 1-d node at the scalar t (tree-edge profiles, affine
/// substitution; the node must be intrinsically 1-d).
double eval_scalar(const FuncNode& f, double t) {
  switch (f.kind) {
    case FKind::Constant:
      return f.value;
    case FKind::Monomial: {
      if (f.exps.size() != 1)
        throw validation_error("1-d profile monomial must have one exponent");
      return f.coef * std::pow(t, f.exps[0]);
    }
    case FKind::Radial:
      return eval_scalar(*f.child, t);
    case FKind::Bump: {
      if (f.center.size() != 1)
        throw validation_error("1-d bump must have a one-coordinate center");
      return bump_profile(std::abs(t - f.center[0]), f.r0, f.cinf);
    }
    case FKind::Plateau: {
      if (f.center.size() != 1)
        throw validation_error("1-d plateau must have a one-coordinate center");
      return plateau_profile(std::abs(t - f.center[0]), f.r0, f.r1);
    }
    case FKind::Box:
      return (t >= f.r0 && t <= f.r1) ? f.value : 0.0;
    case FKind::Sum: {
      double s = 0.0;
      for (const auto& c : f.children) s += eval_scalar(*c, t);
      return s;
    }
    case FKind::Product: {
      double s = 1.0;
      for (const auto& c : f.children) {
        s *= eval_scalar(*c, t);
        if (s == 0.0) return 0.0;
      }
      return s;
    }
    case FKind::Scale:
      return f.value * eval_scalar(*f.child, t);
    case FKind::Shift:
      return f.value + eval_scalar(*f.child, t);
    case FKind::AffineArg:
      return eval_scalar(*f.child, f.a * t + f.b);
    case FKind::PartitionPiece: {
      double num = eval_scalar(*f.children[f.index], t);
      double den = 0.0;
      for (const auto& c : f.children) den += eval_scalar(*c, t);
      if (!(den > 0.0)) {
        if (num == 0.0) return 0.0;
        throw validation_error("partition piece evaluated where the bump sum vanishes");
      }
      return num / den;
    }
    default:
      throw validation_error("function node is not a 1-d profile");
  }
}

double eval_on_simplex(const Simplex& s, const FuncNode& f, const std::vector<double>& p) {
  switch (f.kind) {
    case FKind::Constant:
      return f.value;
    case FKind::Monomial: {
      if (static_cast<int>(f.exps.size()) != s.n)
        throw validation_error("monomial exponent count does not match the dimension");
      double v = f.coef;
      for (int i = 0; i < s.n; ++i) v *= std::pow(p[i], f.exps[i]);
      return v;
    }
    case FKind::Radial: {
      double t = 0.0;
      for (double x : p) t += x;
      return eval_scalar(*f.child, t);
    }
    case FKind::Bump: {
      if (f.center.size() != p.size())
        throw validation_error("bump center dimension does not match the point");
      return bump_profile(euclid(p, f.center), f.r0, f.cinf);
    }
    case FKind::Plateau: {
      if (f.center.size() != p.size())
        throw validation_error("plateau center dimension does not match the point");
      return plateau_profile(euclid(p, f.center), f.r0, f.r1);
    }
    case FKind::Box: {
      if (p.size() != 1)
        throw validation_error("box functions are 1-d");
      return (p[0] >= f.r0 && p[0] <= f.r1) ? f.value : 0.0;
    }
    case FKind::AffineArg: {
      if (p.size() != 1)
        throw validation_error("affine argument substitution is 1-d");
      return eval_scalar(f, p[0]);
    }
    case FKind::Sum: {
      double v = 0.0;
      for (const auto& c : f.children) v += eval_on_simplex(s, *c, p);
      return v;
    }
    case FKind::Product: {
      double v = 1.0;
      for (const auto& c : f.children) {
        v *= eval_on_simplex(s, *c, p);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
    case FKind::Scale:
      return f.value * eval_on_simplex(s, *f.child, p);
    case FKind::Shift:
      return f.value + eval_on_simplex(s, *f.child, p);
    case FKind::PartitionPiece: {
      double num = eval_on_simplex(s, *f.children[f.index], p);
      double den = 0.0;
      for (const auto& c : f.children) den += eval_on_simplex(s, *c, p);
      if (!(den > 0.0)) {
        if (num == 0.0) return 0.0;
        throw validation_error("partition piece evaluated where the bump sum vanishes");
      }
      return num / den;
    }
    case FKind::EdgeProfile:
      throw validation_error("edge profiles are tree functions");
    case FKind::Lift:
      throw validation_error("lifted functions require a product space");
  }
  throw internal_error("unhandled function node kind");
}

double eval_on_tree(const MeasuredTree& tree, const FuncNode& f, const TreePoint& p);

/// Value of an edge profile at a tree point: on the named edge it is
/// profile(offset); at a vertex it is the profile's one-sided value when the
/// vertex bounds the edge, 0 elsewhere.
double edge_profile_at(const MeasuredTree& tree, const FuncNode& f, const TreePoint& p) {
  if (f.edge < 0 || f.edge >= static_cast<int>(tree.edges.size()))
    throw validation_error("edge profile references an edge the tree does not have");
  const TreeEdge& e = tree.edges[f.edge];
  if (!p.is_vertex()) {
    if (p.edge == f.edge) return eval_scalar(*f.child, p.offset);
    // Interior of another edge: profiles vanish off their edge.
    return 0.0;
  }
  if (p.vertex == e.u) return eval_scalar(*f.child, 0.0);
  if (p.vertex == e.v) return eval_scalar(*f.child, e.length);
  return 0.0;
}

double eval_on_tree(const MeasuredTree& tree, const FuncNode& f, const TreePoint& p) {
  switch (f.kind) {
    case FKind::Constant:
      return f.value;
    case FKind::EdgeProfile: {
      if (f.edge >= static_cast<int>(tree.edges.size()))
        throw validation_error("edge profile names a nonexistent edge");
      return edge_profile_at(tree, f, p);
    }
    case FKind::Sum: {
      double v = 0.0;
      for (const auto& c : f.children) v += eval_on_tree(tree, *c, p);
      return v;
    }
    case FKind::Product: {
      double v = 1.0;
      for (const auto& c : f.children) {
        v *= eval_on_tree(tree, *c, p);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
    case FKind::Scale:
      return f.value * eval_on_tree(tree, *f.child, p);
    case FKind::Shift:
      return f.value + eval_on_tree(tree, *f.child, p);
    default:
      throw validation_error("function node kind is not defined on trees");
  }
}

double eval_node(const BaseSpace& space, const FuncNode& f, const BasePoint& p) {
  if (space.is_simplex()) return eval_on_simplex(space.simplex(), f, p.coords(0));
  if (space.is_tree()) return eval_on_tree(space.tree(), f, p.tree_point(0));
  const ProductSpace& prod = space.product();
  switch (f.kind) {
    case FKind::Constant:
      return f.value;
    case FKind::Lift: {
      if (f.factor >= static_cast<int>(prod.factors.size()))
        throw validation_error("lift names a nonexistent product factor");
      BaseSpace sub(prod.factors[f.factor]);
      BasePoint q;
      q.parts.push_back(p.parts[f.factor]);
      return eval_node(sub, *f.child, q);
    }
    case FKind::Sum: {
      double v = 0.0;
      for (const auto& c : f.children) v += eval_node(space, *c, p);
      return v;
    }
    case FKind::Product: {
      double v = 1.0;
      for (const auto& c : f.children) {
        v *= eval_node(space, *c, p);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
    case FKind::Scale:
      return f.value * eval_node(space, *f.child, p);
    case FKind::Shift:
      return f.value + eval_node(space, *f.child, p);
    default:
      throw validation_error(
          "function node must be lifted to a factor before use on a product space");
  }
}

}  // namespace

double eval(const BaseSpace& space, const SmoothFunction& f, const BasePoint& p, double tol) {
  if (!f) throw validation_error("null function");
  if (!contains(space, p, tol)) throw validation_error("point is not in the space");
  return eval_node(space, *f, p);
}

double eval_unchecked(const BaseSpace& space, const SmoothFunction& f, const BasePoint& p) {
  if (!f) throw validation_error("null function");
  return eval_node(space, *f, p);
}

double eval_profile(const SmoothFunction& f, double t) {
  if (!f) throw validation_error("null function");
  return eval_scalar(*f, t);
}

namespace {

/// Enumerates lattice points of the n-simplex at a single denominator d:
/// all p = (k_1, ..., k_n) * scale / d with k_i >= 0, sum k_i <= d.
void simplex_lattice(const Simplex& s, int d,
                     const std::function<void(const std::vector<double>&)>& emit) {
  std::vector<int> k(s.n, 0);
  std::vector<double> p(s.n, 0.0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == s.n) {
      for (int j = 0; j < s.n; ++j) p[j] = s.scale * k[j] / d;
      emit(p);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, d);
}

void tree_lattice(const MeasuredTree& tree, int d,
                  const std::function<void(const TreePoint&)>& emit) {
  for (size_t vi = 0; vi < tree.vertex_names.size(); ++vi) {
    TreePoint p;
    p.vertex = static_cast<int>(vi);
    emit(p);
  }
  for (size_t ei = 0; ei < tree.edges.size(); ++ei) {
    for (int j = 1; j < d; ++j) {
      TreePoint p;
      p.edge = static_cast<int>(ei);
      p.offset = tree.edges[ei].length * j / d;
      emit(p);
    }
  }
}

void space_lattice(const BaseSpace& space, int d,
                   const std::function<void(const BasePoint&)>& emit) {
  if (space.is_simplex()) {
    simplex_lattice(space.simplex(), d, [&](const std::vector<double>& p) {
      emit(BasePoint::simplex(p));
    });
    return;
  }
  if (space.is_tree()) {
    tree_lattice(space.tree(), d, [&](const TreePoint& p) { emit(BasePoint::tree(p)); });
    return;
  }
  // Product: full lattice product of the factor lattices at denominator d.
  const ProductSpace& prod = space.product();
  std::vector<std::vector<FactorPoint>> factor_points(prod.factors.size());
  for (size_t i = 0; i < prod.factors.size(); ++i) {
    BaseSpace sub(prod.factors[i]);
    space_lattice(sub, d, [&](const BasePoint& q) { factor_points[i].push_back(q.parts[0]); });
  }
  BasePoint p;
  p.parts.resize(prod.factors.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == prod.factors.size()) {
      emit(p);
      return;
    }
    for (const auto& fp : factor_points[i]) {
      p.parts[i] = fp;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace

double sup_norm(const BaseSpace& space, const SmoothFunction& f, int resolution) {
  if (!f) throw validation_error("null function");
  if (resolution < 1) throw validation_error("sup_norm resolution must be positive");
  double best = 0.0;
  for (int d = 1; d <= resolution; ++d) {
    space_lattice(space, d, [&](const BasePoint& p) {
      best = std::max(best, std::abs(eval_node(space, *f, p)));
    });
  }
  return best;
}

namespace {

Region support_on(const BaseSpace& space, const FuncNode& f) {
  switch (f.kind) {
    case FKind::Constant:
      return f.value == 0.0 ? Region::nothing() : Region::full_space();
    case FKind::Bump:
      if (space.is_simplex()) return Region::ball(f.center, f.r0);
      return Region::full_space();
    case FKind::Plateau:
      if (space.is_simplex()) return Region::ball(f.center, f.r1);
      return Region::full_space();
    case FKind::EdgeProfile: {
      if (!space.is_tree()) return Region::full_space();
      const MeasuredTree& tree = space.tree();
      if (f.edge < 0 || f.edge >= static_cast<int>(tree.edges.size()))
        throw validation_error("edge profile names a nonexistent edge");
      Region r;
      r.intervals.push_back(EdgeInterval{f.edge, 0.0, tree.edges[f.edge].length});
      return r;
    }
    case FKind::Box: {
      Region r;
      r.balls.push_back(BallRegion{{0.5 * (f.r0 + f.r1)}, 0.5 * (f.r1 - f.r0)});
      return r;
    }
    case FKind::Sum: {
      Region r = Region::nothing();
      for (const auto& c : f.children) r = region_union(r, support_on(space, *c));
      return r;
    }
    case FKind::Product: {
      Region r = Region::full_space();
      for (const auto& c : f.children) r = region_intersect(r, support_on(space, *c));
      return r;
    }
    case FKind::Scale:
      return f.value == 0.0 ? Region::nothing() : support_on(space, *f.child);
    case FKind::Shift:
      return f.value == 0.0 ? support_on(space, *f.child) : Region::full_space();
    case FKind::PartitionPiece:
      return support_on(space, *f.children[f.index]);
    default:
      return Region::full_space();
  }
}

}  // namespace

Region support_bound(const BaseSpace& space, const SmoothFunction& f) {
  if (!f) throw validation_error("null function");
  return support_on(space, *f);
}

namespace {

void collect_breaks(const FuncNode& f, double a, double b, std::set<double>& out,
                    double length) {
  auto add = [&](double y) {
    if (a == 0.0) return;
    double t = (y - b) / a;
    if (t > 1e-14 && t < length - 1e-14) out.insert(t);
  };
  switch (f.kind) {
    case FKind::Bump:
      if (f.center.size() == 1) {
        add(f.center[0] - f.r0);
        add(f.center[0]);
        add(f.center[0] + f.r0);
      }
      return;
    case FKind::Plateau:
      if (f.center.size() == 1) {
        add(f.center[0] - f.r1);
        add(f.center[0] - f.r0);
        add(f.center[0]);
        add(f.center[0] + f.r0);
        add(f.center[0] + f.r1);
      }
      return;
    case FKind::Box:
      add(f.r0);
      add(f.r1);
      return;
    case FKind::Radial:
      collect_breaks(*f.child, a, b, out, length);
      return;
    case FKind::Sum:
    case FKind::Product:
    case FKind::PartitionPiece:
      for (const auto& c : f.children) collect_breaks(*c, a, b, out, length);
      return;
    case FKind::Scale:
    case FKind::Shift:
      collect_breaks(*f.child, a, b, out, length);
      return;
    case FKind::AffineArg: {
      // f(t) = child(f.a * (a t + b) + f.b): compose the affine maps.
      collect_breaks(*f.child, f.a * a, f.a * b + f.b, out, length);
      return;
    }
    case FKind::EdgeProfile:
      collect_breaks(*f.child, a, b, out, length);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<double> breakpoints_1d(const SmoothFunction& f, double length) {
  if (!f) throw validation_error("null function");
  std::set<double> out;
  collect_breaks(*f, 1.0, 0.0, out, length);
  return std::vector<double>(out.begin(), out.end());
}

namespace {

/// Rebuilds f as a pure 1-d profile in u = sum of coordinates, or returns
/// null.  Monomials qualify only in dimension one (where p_1 == u).
SmoothFunction radialize(const FuncNode& f, int n) {
  switch (f.kind) {
    case FKind::Constant:
      return fn::constant(f.value);
    case FKind::Radial:
      return f.child;
    case FKind::Monomial: {
      if (n != 1) return nullptr;
      return fn::monomial(f.exps, f.coef);
    }
    case FKind::Bump: {
      if (n != 1) return nullptr;
      return fn::bump(f.center, f.r0, f.cinf);
    }
    case FKind::Plateau: {
      if (n != 1) return nullptr;
      return fn::plateau(f.center, f.r0, f.r1);
    }
    case FKind::Box: {
      if (n != 1) return nullptr;
      return fn::box(f.r0, f.r1, f.value);
    }
    case FKind::AffineArg: {
      if (n != 1) return nullptr;
      return fn::affine_arg(f.a, f.b, f.child);
    }
    case FKind::Sum: {
      std::vector<SmoothFunction> terms;
      for (const auto& c : f.children) {
        auto r = radialize(*c, n);
        if (!r) return nullptr;
        terms.push_back(r);
      }
      return fn::sum(std::move(terms));
    }
    case FKind::Product: {
      std::vector<SmoothFunction> terms;
      for (const auto& c : f.children) {
        auto r = radialize(*c, n);
        if (!r) return nullptr;
        terms.push_back(r);
      }
      return fn::product(std::move(terms));
    }
    case FKind::Scale: {
      auto r = radialize(*f.child, n);
      return r ? fn::scale(f.value, r) : nullptr;
    }
    case FKind::Shift: {
      auto r = radialize(*f.child, n);
      return r ? fn::shift(f.value, r) : nullptr;
    }
    case FKind::PartitionPiece: {
      if (n != 1) return nullptr;
      std::vector<SmoothFunction> bumps;
      for (const auto& c : f.children) {
        auto r = radialize(*c, n);
        if (!r) return nullptr;
        bumps.push_back(r);
      }
      return fn::partition_piece(f.index, std::move(bumps));
    }
    default:
      return nullptr;
  }
}

}  // namespace

SmoothFunction try_as_radial(const SmoothFunction& f, const Simplex& s) {
  if (!f) throw validation_error("null function");
  return radialize(*f, s.n);
}

}  // namespace toricqs
