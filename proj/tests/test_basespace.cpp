#include <cmath>

#include "doctest.h"
#include "toricqs/basespace.hpp"
#include "toricqs/funcspace.hpp"

using namespace toricqs;

namespace {

MeasuredTree star3() {
  return tree_from_edges({{"a", "hub", 1.0, nullptr},
                          {"b", "hub", 2.0, nullptr},
                          {"c", "hub", 0.5, nullptr}});
}

}  // namespace

TEST_CASE("simplex construction validates its parameters") {
  Simplex s = make_simplex(3, 2.5);
  CHECK(s.n == 3);
  CHECK(s.scale == doctest::Approx(2.5));
  CHECK_THROWS_AS(make_simplex(0, 1.0), validation_error);
  CHECK_THROWS_AS(make_simplex(2, 0.0), validation_error);
  CHECK_THROWS_AS(make_simplex(2, -1.0), validation_error);
}

TEST_CASE("tree_from_edges rejects malformed graphs with distinct diagnostics") {
  CHECK_THROWS_WITH_AS(tree_from_edges({{"a", "b", 1.0, nullptr},
                                        {"b", "c", 1.0, nullptr},
                                        {"c", "a", 1.0, nullptr}}),
                       doctest::Contains("cycle"), validation_error);
  CHECK_THROWS_WITH_AS(tree_from_edges({{"a", "b", 1.0, nullptr},
                                        {"c", "d", 1.0, nullptr}}),
                       doctest::Contains("disconnected"), validation_error);
  CHECK_THROWS_WITH_AS(tree_from_edges({{"a", "b", 0.0, nullptr}}),
                       doctest::Contains("length"), validation_error);
  CHECK_THROWS_WITH_AS(tree_from_edges({{"a", "b", 1.0, fn::constant(-0.5)}}),
                       doctest::Contains("nonnegative"), validation_error);
  CHECK_THROWS_WITH_AS(tree_from_edges({{"a", "b", 1.0, fn::constant(0.0)}}),
                       doctest::Contains("zero total measure"), validation_error);
  CHECK_THROWS_AS(tree_from_edges({}), validation_error);
}

TEST_CASE("tree bookkeeping: vertices, incidence, and edge masses") {
  MeasuredTree t = star3();
  CHECK(t.vertex_names.size() == 4);
  CHECK(t.edges.size() == 3);
  int hub = t.vertex_index("hub");
  CHECK(t.degree(hub) == 3);
  CHECK(t.degree(t.vertex_index("a")) == 1);
  CHECK(t.total_mass == doctest::Approx(3.5).epsilon(1e-14));

  // Non-constant density mass: int_0^2 (1 + t) dt = 4.
  MeasuredTree w = tree_from_edges(
      {{"a", "b", 2.0, fn::sum({fn::constant(1.0), fn::monomial({1}, 1.0)})}});
  CHECK(w.edge_mass[0] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("simplex membership distinguishes out-of-range from wrong shape") {
  BaseSpace s(make_simplex(2, 1.0));
  CHECK(contains(s, BasePoint::simplex({0.2, 0.3})));
  CHECK(contains(s, BasePoint::simplex({0.0, 1.0})));
  CHECK(!contains(s, BasePoint::simplex({0.6, 0.6})));
  CHECK(!contains(s, BasePoint::simplex({-0.1, 0.2})));
  CHECK(contains(s, BasePoint::simplex({-1e-12, 0.2}), 1e-9));
  CHECK_THROWS_AS(contains(s, BasePoint::simplex({0.2})), validation_error);
  CHECK_THROWS_AS(contains(s, BasePoint::tree(TreePoint::at_vertex(0))),
                  validation_error);
}

TEST_CASE("tree membership validates edges, vertices, and offsets") {
  BaseSpace s(star3());
  const MeasuredTree& t = s.tree();
  CHECK(contains(s, BasePoint::tree(TreePoint::at_vertex(t.vertex_index("a")))));
  CHECK(contains(s, BasePoint::tree(TreePoint::on_edge(1, 1.5))));
  CHECK(!contains(s, BasePoint::tree(TreePoint::on_edge(1, 2.5))));
  CHECK_THROWS_AS(contains(s, BasePoint::tree(TreePoint::on_edge(7, 0.5))),
                  validation_error);
  CHECK_THROWS_AS(contains(s, BasePoint::tree(TreePoint::at_vertex(99))),
                  validation_error);
}

TEST_CASE("tree distance follows the unique path") {
  MeasuredTree t = star3();  // a -1- hub -2- b, hub -0.5- c
  // a at offset 0 of edge 0; b at end of edge 1.
  double d = tree_distance(t, TreePoint::at_vertex(t.vertex_index("a")),
                           TreePoint::at_vertex(t.vertex_index("b")));
  CHECK(d == doctest::Approx(3.0).epsilon(1e-13));
  // Interior to interior on the same edge.
  CHECK(tree_distance(t, TreePoint::on_edge(0, 0.25), TreePoint::on_edge(0, 0.75)) ==
        doctest::Approx(0.5).epsilon(1e-13));
  // Interior across the hub: (1 - 0.25) + 0.5 to c.
  CHECK(tree_distance(t, TreePoint::on_edge(0, 0.25),
                      TreePoint::at_vertex(t.vertex_index("c"))) ==
        doctest::Approx(1.25).epsilon(1e-13));
}

TEST_CASE("product points combine factor distances in l2") {
  ProductSpace prod;
  prod.factors.push_back(make_simplex(1, 1.0));
  prod.factors.push_back(star3());
  BaseSpace s(prod);
  CHECK(s.n_factors() == 2);
  BasePoint p = BasePoint::product(
      {std::vector<double>{0.1}, TreePoint::at_vertex(s.factor(1).tree().vertex_index("a"))});
  BasePoint q = BasePoint::product(
      {std::vector<double>{0.4}, TreePoint::at_vertex(s.factor(1).tree().vertex_index("hub"))});
  CHECK(contains(s, p));
  CHECK(distance(s, p, q) == doctest::Approx(std::sqrt(0.09 + 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(contains(s, BasePoint::simplex({0.1})), validation_error);
}

TEST_CASE("barycenter and simplex projection") {
  BasePoint b = barycenter(make_simplex(2, 1.0));
  CHECK(b.coords()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.coords()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  BasePoint b3 = barycenter(make_simplex(3, 2.0));
  CHECK(b3.coords()[2] == doctest::Approx(0.5).epsilon(1e-15));

  Simplex s = make_simplex(2, 1.0);
  // Interior points project to themselves.
  auto p = project_to_simplex(s, {0.2, 0.3});
  CHECK(p[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-14));
  // Negative orthant clamps to the vertex.
  auto q = project_to_simplex(s, {-1.0, -1.0});
  CHECK(q[0] == doctest::Approx(0.0));
  CHECK(q[1] == doctest::Approx(0.0));
  // Beyond the diagonal face projects onto it: (1,1) -> (0.5, 0.5).
  auto r = project_to_simplex(s, {1.0, 1.0});
  CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(distance_to_simplex(s, {1.0, 1.0}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(distance_to_simplex(s, {0.1, 0.1}) == doctest::Approx(0.0));
}

TEST_CASE("canonical tree points snap edge endpoints to vertices") {
  MeasuredTree t = star3();
  TreePoint p = canonical_tree_point(t, TreePoint::on_edge(0, 0.0));
  CHECK(p.is_vertex());
  CHECK(p.vertex == t.edges[0].u);
  TreePoint q = canonical_tree_point(t, TreePoint::on_edge(0, 1.0));
  CHECK(q.is_vertex());
  CHECK(q.vertex == t.edges[0].v);
  TreePoint r = canonical_tree_point(t, TreePoint::on_edge(0, 0.5));
  CHECK(!r.is_vertex());
  CHECK(r.offset == doctest::Approx(0.5));
}
