#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toricqs/error.hpp"

namespace toricqs {

class FuncNode;
using SmoothFunction = std::shared_ptr<const FuncNode>;

/// Scaled standard simplex { p in R^n : p_i >= 0, sum p_i <= scale }.
struct Simplex {
  int n = 1;           // dimension, >= 1
  double scale = 1.0;  // > 0
};

/// One edge of a measured tree.  Offsets along the edge run from 0 at `u`
/// to `length` at `v`.  The density is a nonnegative 1-d profile on
/// [0, length]; a constant density is the common case.
struct TreeEdge {
  int u = -1;
  int v = -1;
  double length = 0.0;
  SmoothFunction density;  // nonnegative profile on [0, length]
};

/// Finite metric tree with a measure given by edge densities.
/// Vertices are named; edges carry lengths and densities.  Always connected
/// and acyclic by construction (see tree_from_edges).
struct MeasuredTree {
  std::vector<std::string> vertex_names;
  std::vector<TreeEdge> edges;
  std::vector<std::vector<int>> incident;  // vertex -> incident edge indices
  std::vector<double> edge_mass;           // cached per-edge total mass
  double total_mass = 0.0;

  int vertex_index(const std::string& name) const;
  int degree(int vertex) const { return static_cast<int>(incident[vertex].size()); }
};

/// A point on a measured tree: either a vertex (vertex >= 0) or an interior
/// position (edge >= 0, offset in [0, length]).
struct TreePoint {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;

  static TreePoint at_vertex(int v) { return TreePoint{v, -1, 0.0}; }
  static TreePoint on_edge(int e, double t) { return TreePoint{-1, e, t}; }
  bool is_vertex() const { return vertex >= 0; }
};

/// Product factors are simplices or trees; products do not nest.
using FactorSpace = std::variant<Simplex, MeasuredTree>;

struct ProductSpace {
  std::vector<FactorSpace> factors;  // nonempty, ordered
};

/// A base space: simplex, measured tree, or a finite product of those.
class BaseSpace {
 public:
  BaseSpace() : v_(Simplex{}) {}
  BaseSpace(Simplex s) : v_(std::move(s)) {}
  BaseSpace(MeasuredTree t) : v_(std::move(t)) {}
  BaseSpace(ProductSpace p) : v_(std::move(p)) {}
  BaseSpace(FactorSpace f)
      : v_(std::visit(
            [](auto&& x) -> std::variant<Simplex, MeasuredTree, ProductSpace> {
              return std::move(x);
            },
            std::move(f))) {}

  bool is_simplex() const { return std::holds_alternative<Simplex>(v_); }
  bool is_tree() const { return std::holds_alternative<MeasuredTree>(v_); }
  bool is_product() const { return std::holds_alternative<ProductSpace>(v_); }

  const Simplex& simplex() const;
  const MeasuredTree& tree() const;
  const ProductSpace& product() const;

  /// Number of product factors (1 for plain simplices and trees).
  int n_factors() const;
  /// Factor i as a standalone space.
  BaseSpace factor(int i) const;

 private:
  std::variant<Simplex, MeasuredTree, ProductSpace> v_;
};

/// Coordinates of one factor of a point: simplex coordinates or a tree point.
using FactorPoint = std::variant<std::vector<double>, TreePoint>;

/// A point of a base space.  `parts` has one entry per product factor
/// (exactly one entry for plain simplices and trees).
struct BasePoint {
  std::vector<FactorPoint> parts;

  static BasePoint simplex(std::vector<double> coords);
  static BasePoint tree(TreePoint tp);
  static BasePoint product(std::vector<FactorPoint> parts);

  const std::vector<double>& coords(int factor = 0) const;
  const TreePoint& tree_point(int factor = 0) const;
};

/// Builds a simplex, validating n >= 1 and scale > 0.
Simplex make_simplex(int n, double scale = 1.0);

/// Description of one edge for tree construction.
struct EdgeSpec {
  std::string u;
  std::string v;
  double length = 1.0;
  SmoothFunction density;  // null means constant 1
};

/// Builds a measured tree from an edge list.  Throws validation_error with a
/// distinct message for a cycle, a disconnected graph, a nonpositive edge
/// length, a negative density, or zero total measure.
MeasuredTree tree_from_edges(const std::vector<EdgeSpec>& edges);

/// Barycenter of a simplex: (scale/(n+1), ..., scale/(n+1)).
BasePoint barycenter(const Simplex& s);

/// Membership test with tolerance.  A point of the wrong shape for the space
/// (wrong arity, wrong factor kind, unknown edge/vertex) is an error, not
/// `false`; only genuinely out-of-range coordinates yield `false`.
bool contains(const BaseSpace& space, const BasePoint& p, double tol = 0.0);

/// Geodesic distance between two points of the same space.  Simplex factors
/// use the Euclidean metric, tree factors the path metric, and products the
/// l2 combination of factor distances.
double distance(const BaseSpace& space, const BasePoint& a, const BasePoint& b);

/// Canonical representative of a tree point: vertices are reported in vertex
/// form; edge offsets are clamped to [0, length] within `tol`.
TreePoint canonical_tree_point(const MeasuredTree& t, const TreePoint& p, double tol = 1e-12);

/// Distance between two tree points along the unique path.
double tree_distance(const MeasuredTree& t, const TreePoint& a, const TreePoint& b);

/// Euclidean projection of x onto the simplex (p_i >= 0, sum <= scale).
std::vector<double> project_to_simplex(const Simplex& s, const std::vector<double>& x);

/// Euclidean distance from x to the simplex.
double distance_to_simplex(const Simplex& s, const std::vector<double>& x);

}  // namespace toricqs
