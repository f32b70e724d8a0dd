#include "toricqs/basespace.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "toricqs/detail/poly1d.hpp"
#include "toricqs/detail/quadrature.hpp"
#include "toricqs/funcspace.hpp"

namespace toricqs {

int MeasuredTree::vertex_index(const std::string& name) const {
  for (size_t i = 0; i < vertex_names.size(); ++i)
    if (vertex_names[i] == name) return static_cast<int>(i);
  return -1;
}

const Simplex& BaseSpace::simplex() const {
  if (!is_simplex()) throw validation_error("expected a simplex space");
  return std::get<Simplex>(v_);
}

const MeasuredTree& BaseSpace::tree() const {
  if (!is_tree()) throw validation_error("expected a tree space");
  return std::get<MeasuredTree>(v_);
}

const ProductSpace& BaseSpace::product() const {
  if (!is_product()) throw validation_error("expected a product space");
  return std::get<ProductSpace>(v_);
}

int BaseSpace::n_factors() const {
  return is_product() ? static_cast<int>(product().factors.size()) : 1;
}

BaseSpace BaseSpace::factor(int i) const {
  if (!is_product()) {
    if (i != 0) throw validation_error("factor index out of range");
    return *this;
  }
  const auto& f = product().factors;
  if (i < 0 || i >= static_cast<int>(f.size()))
    throw validation_error("factor index out of range");
  if (std::holds_alternative<Simplex>(f[i])) return BaseSpace(std::get<Simplex>(f[i]));
  return BaseSpace(std::get<MeasuredTree>(f[i]));
}

BasePoint BasePoint::simplex(std::vector<double> coords) {
  BasePoint p;
  p.parts.emplace_back(std::move(coords));
  return p;
}

BasePoint BasePoint::tree(TreePoint tp) {
  BasePoint p;
  p.parts.emplace_back(tp);
  return p;
}

BasePoint BasePoint::product(std::vector<FactorPoint> parts) {
  BasePoint p;
  p.parts = std::move(parts);
  return p;
}

const std::vector<double>& BasePoint::coords(int factor) const {
  if (factor < 0 || factor >= static_cast<int>(parts.size()))
    throw validation_error("point has no factor " + std::to_string(factor));
  if (!std::holds_alternative<std::vector<double>>(parts[factor]))
    throw validation_error("point factor is not simplex coordinates");
  return std::get<std::vector<double>>(parts[factor]);
}

const TreePoint& BasePoint::tree_point(int factor) const {
  if (factor < 0 || factor >= static_cast<int>(parts.size()))
    throw validation_error("point has no factor " + std::to_string(factor));
  if (!std::holds_alternative<TreePoint>(parts[factor]))
    throw validation_error("point factor is not a tree point");
  return std::get<TreePoint>(parts[factor]);
}

Simplex make_simplex(int n, double scale) {
  if (n < 1) throw validation_error("simplex dimension must be >= 1");
  if (!(scale > 0.0)) throw validation_error("simplex scale must be > 0");
  return Simplex{n, scale};
}

namespace {

double edge_density_mass(const TreeEdge& e) {
  // Densities are piecewise polynomial by construction in practice; fall
  // back to composite quadrature when they are not.
  if (auto pp = detail::compile_1d(e.density, e.length)) return pp->integral();
  auto f = [&](double t) {
    return eval_unchecked(BaseSpace(make_simplex(1, e.length)), e.density,
                          BasePoint::simplex({t}));
  };
  return detail::integrate_segments(f, 0.0, e.length,
                                    breakpoints_1d(e.density, e.length), 64);
}

double edge_density_min(const TreeEdge& e, int grid = 256) {
  double lo = 0.0;
  BaseSpace interval(make_simplex(1, e.length));
  for (int i = 0; i <= grid; ++i) {
    double t = e.length * i / grid;
    lo = std::min(lo, eval_unchecked(interval, e.density, BasePoint::simplex({t})));
  }
  return lo;
}

}  // namespace

MeasuredTree tree_from_edges(const std::vector<EdgeSpec>& specs) {
  if (specs.empty()) throw validation_error("tree must have at least one edge");
  MeasuredTree t;
  std::map<std::string, int> names;
  auto intern = [&](const std::string& s) {
    auto it = names.find(s);
    if (it != names.end()) return it->second;
    int idx = static_cast<int>(t.vertex_names.size());
    names.emplace(s, idx);
    t.vertex_names.push_back(s);
    return idx;
  };

  for (const auto& s : specs) {
    if (s.u == s.v) throw validation_error("tree edges form a cycle");
    if (!(s.length > 0.0)) throw validation_error("tree edge length must be > 0");
    TreeEdge e;
    e.u = intern(s.u);
    e.v = intern(s.v);
    e.length = s.length;
    e.density = s.density ? s.density : fn::constant(1.0);
    t.edges.push_back(std::move(e));
  }

  // Union-find: a repeated root is a cycle, a second component afterwards is
  // a disconnected forest.
  std::vector<int> parent(t.vertex_names.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : t.edges) {
    int ru = find(e.u), rv = find(e.v);
    if (ru == rv) throw validation_error("tree edges form a cycle");
    parent[ru] = rv;
  }
  for (size_t i = 0; i < parent.size(); ++i)
    if (find(static_cast<int>(i)) != find(0))
      throw validation_error("tree is disconnected");

  // |edges| = |vertices| - 1 is implied by acyclic + connected; assert it.
  if (t.edges.size() + 1 != t.vertex_names.size())
    throw internal_error("tree edge/vertex count invariant violated");

  t.incident.assign(t.vertex_names.size(), {});
  for (size_t i = 0; i < t.edges.size(); ++i) {
    t.incident[t.edges[i].u].push_back(static_cast<int>(i));
    t.incident[t.edges[i].v].push_back(static_cast<int>(i));
  }

  t.edge_mass.resize(t.edges.size());
  t.total_mass = 0.0;
  for (size_t i = 0; i < t.edges.size(); ++i) {
    if (edge_density_min(t.edges[i]) < -1e-12)
      throw validation_error("tree edge density must be nonnegative");
    t.edge_mass[i] = edge_density_mass(t.edges[i]);
    t.total_mass += t.edge_mass[i];
  }
  if (!(t.total_mass > 0.0)) throw validation_error("tree has zero total measure");
  return t;
}

BasePoint barycenter(const Simplex& s) {
  return BasePoint::simplex(std::vector<double>(s.n, s.scale / (s.n + 1)));
}

namespace {

bool simplex_contains(const Simplex& s, const std::vector<double>& p, double tol) {
  if (static_cast<int>(p.size()) != s.n)
    throw validation_error("point has wrong number of coordinates for the simplex");
  double sum = 0.0;
  for (double x : p) {
    if (x < -tol) return false;
    sum += x;
  }
  return sum <= s.scale + tol;
}

bool tree_contains(const MeasuredTree& t, const TreePoint& p, double tol) {
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= static_cast<int>(t.vertex_names.size()))
      throw validation_error("tree point has an unknown vertex index");
    return true;
  }
  if (p.edge < 0 || p.edge >= static_cast<int>(t.edges.size()))
    throw validation_error("tree point has an unknown edge index");
  return p.offset >= -tol && p.offset <= t.edges[p.edge].length + tol;
}

}  // namespace

bool contains(const BaseSpace& space, const BasePoint& p, double tol) {
  if (space.is_product()) {
    const auto& factors = space.product().factors;
    if (p.parts.size() != factors.size())
      throw validation_error("point arity does not match the product space");
    for (size_t i = 0; i < factors.size(); ++i) {
      if (std::holds_alternative<Simplex>(factors[i])) {
        if (!simplex_contains(std::get<Simplex>(factors[i]), p.coords(static_cast<int>(i)), tol))
          return false;
      } else if (!tree_contains(std::get<MeasuredTree>(factors[i]),
                                p.tree_point(static_cast<int>(i)), tol)) {
        return false;
      }
    }
    return true;
  }
  if (p.parts.size() != 1)
    throw validation_error("point arity does not match the space");
  if (space.is_simplex()) return simplex_contains(space.simplex(), p.coords(), tol);
  return tree_contains(space.tree(), p.tree_point(), tol);
}

TreePoint canonical_tree_point(const MeasuredTree& t, const TreePoint& p, double tol) {
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= static_cast<int>(t.vertex_names.size()))
      throw validation_error("tree point has an unknown vertex index");
    return p;
  }
  if (p.edge < 0 || p.edge >= static_cast<int>(t.edges.size()))
    throw validation_error("tree point has an unknown edge index");
  const auto& e = t.edges[p.edge];
  if (p.offset < -tol || p.offset > e.length + tol)
    throw validation_error("tree point offset is outside its edge");
  if (p.offset <= tol) return TreePoint::at_vertex(e.u);
  if (p.offset >= e.length - tol) return TreePoint::at_vertex(e.v);
  return p;
}

namespace {

/// Vertex-to-vertex path distances from `src` by BFS (trees are small).
std::vector<double> vertex_distances(const MeasuredTree& t, int src) {
  std::vector<double> d(t.vertex_names.size(), -1.0);
  d[src] = 0.0;
  std::queue<int> q;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int ei : t.incident[v]) {
      const auto& e = t.edges[ei];
      int w = e.u == v ? e.v : e.u;
      if (d[w] < 0) {
        d[w] = d[v] + e.length;
        q.push(w);
      }
    }
  }
  return d;
}

}  // namespace

double tree_distance(const MeasuredTree& t, const TreePoint& pa, const TreePoint& pb) {
  TreePoint a = canonical_tree_point(t, pa);
  TreePoint b = canonical_tree_point(t, pb);
  if (!a.is_vertex() && !b.is_vertex() && a.edge == b.edge)
    return std::abs(a.offset - b.offset);
  auto endpoint_offsets = [&](const TreePoint& p) {
    // (vertex, offset-to-that-vertex) pairs
    std::vector<std::pair<int, double>> out;
    if (p.is_vertex()) {
      out.emplace_back(p.vertex, 0.0);
    } else {
      const auto& e = t.edges[p.edge];
      out.emplace_back(e.u, p.offset);
      out.emplace_back(e.v, e.length - p.offset);
    }
    return out;
  };
  double best = std::numeric_limits<double>::infinity();
  for (auto [va, da] : endpoint_offsets(a)) {
    auto dist = vertex_distances(t, va);
    for (auto [vb, db] : endpoint_offsets(b))
      best = std::min(best, da + dist[vb] + db);
  }
  return best;
}

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw validation_error("points have mismatched coordinate counts");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double distance(const BaseSpace& space, const BasePoint& a, const BasePoint& b) {
  if (a.parts.size() != b.parts.size() ||
      static_cast<int>(a.parts.size()) != space.n_factors())
    throw validation_error("point arity does not match the space");
  double sq = 0.0;
  for (int i = 0; i < space.n_factors(); ++i) {
    BaseSpace f = space.factor(i);
    double d;
    if (f.is_simplex())
      d = euclid(a.coords(i), b.coords(i));
    else
      d = tree_distance(f.tree(), a.tree_point(i), b.tree_point(i));
    sq += d * d;
  }
  return std::sqrt(sq);
}

std::vector<double> project_to_simplex(const Simplex& s, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != s.n)
    throw validation_error("point has wrong number of coordinates for the simplex");
  std::vector<double> y(x.size());
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    y[i] = std::max(x[i], 0.0);
    sum += y[i];
  }
  if (sum <= s.scale) return y;
  // Project onto {y >= 0, sum y = scale}: y_i = max(x_i - lambda, 0) with the
  // usual sorted threshold.
  std::vector<double> z = x;
  std::sort(z.begin(), z.end(), std::greater<>());
  double acc = 0.0, lambda = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    acc += z[k];
    double cand = (acc - s.scale) / static_cast<double>(k + 1);
    if (k + 1 == z.size() || cand >= z[k + 1]) {
      lambda = cand;
      break;
    }
  }
  for (size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - lambda, 0.0);
  return y;
}

double distance_to_simplex(const Simplex& s, const std::vector<double>& x) {
  return euclid(x, project_to_simplex(s, x));
}

}  // namespace toricqs
