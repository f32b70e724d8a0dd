#include <cmath>

#include "doctest.h"
#include "toricqs/jsonio.hpp"

using namespace toricqs;

namespace {

const char* kTreeJson = R"({
  "kind": "tree",
  "edges": [
    {"u": "a", "v": "hub", "len": 1.0, "density": 1.0},
    {"u": "b", "v": "hub", "len": 2.0, "density": {"kind": "box", "a": 0.0, "b": 1.0, "value": 2.0}},
    {"u": "c", "v": "hub", "len": 0.5, "density": 3.0}
  ]
})";

}  // namespace

TEST_CASE("space parsing: simplex with defaulted scale") {
  BaseSpace s = parse_space(R"({"kind":"simplex","n":2,"scale":1.0})");
  REQUIRE(s.is_simplex());
  CHECK(s.simplex().n == 2);
  CHECK(s.simplex().scale == doctest::Approx(1.0));
  BaseSpace d = parse_space(R"({"kind":"simplex","n":3})");
  CHECK(d.simplex().scale == doctest::Approx(1.0));
}

TEST_CASE("space parsing: tree with mixed densities, and a faithful round-trip") {
  BaseSpace t = parse_space(kTreeJson);
  REQUIRE(t.is_tree());
  CHECK(t.tree().vertex_names.size() == 4);
  // Masses: 1, int_0^1 2 = 2, 3 * 0.5 = 1.5.
  CHECK(t.tree().total_mass == doctest::Approx(4.5).epsilon(1e-12));

  BaseSpace again = parse_space(space_to_json(t));
  REQUIRE(again.is_tree());
  CHECK(again.tree().total_mass == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(again.tree().edges.size() == 3);
  CHECK(again.tree().vertex_index("hub") >= 0);
}

TEST_CASE("space parsing: products and their constraints") {
  BaseSpace p = parse_space(
      R"({"kind":"product","factors":[{"kind":"simplex","n":1},{"kind":"simplex","n":1}]})");
  REQUIRE(p.is_product());
  CHECK(p.n_factors() == 2);
  BaseSpace rt = parse_space(space_to_json(p));
  CHECK(rt.is_product());

  CHECK_THROWS_WITH_AS(parse_space(R"({"kind":"product","factors":[{"kind":"simplex","n":1}]})"),
                       doctest::Contains("at least two"), validation_error);
  CHECK_THROWS_WITH_AS(parse_space(R"({"kind":"sphere"})"),
                       doctest::Contains("unknown space kind"), validation_error);
  CHECK_THROWS_WITH_AS(parse_space(R"({"kind":"simplex"})"), doctest::Contains("'n'"),
                       validation_error);
}

TEST_CASE("malformed JSON reports the position") {
  CHECK_THROWS_WITH_AS(parse_space("{\"kind\": \"simplex\",, }"),
                       doctest::Contains("malformed JSON"), validation_error);
  CHECK_THROWS_WITH_AS(parse_space("{\"kind\": \"simplex\",, }"), doctest::Contains("column"),
                       validation_error);
}

TEST_CASE("function parsing: shorthand, nesting, and value-preserving round-trip") {
  BaseSpace seg = parse_space(R"({"kind":"simplex","n":1})");
  SmoothFunction c = parse_function("2.5");
  CHECK(eval(seg, c, BasePoint::simplex({0.3})) == doctest::Approx(2.5));

  SmoothFunction f = parse_function(R"({
    "kind": "sum",
    "terms": [
      {"kind": "monomial", "exps": [2]},
      {"kind": "scale", "c": 0.5, "f": {"kind": "bump", "center": [0.6], "r": 0.2}}
    ]
  })");
  SmoothFunction g = parse_function(function_to_json(f));
  for (double t : {0.0, 0.45, 0.6, 0.72, 1.0}) {
    BasePoint p = BasePoint::simplex({t});
    CHECK(eval(seg, f, p) == doctest::Approx(eval(seg, g, p)).epsilon(1e-15));
  }
  // Monomial coefficient defaults to 1.
  SmoothFunction m = parse_function(R"({"kind":"monomial","exps":[1]})");
  CHECK(eval(seg, m, BasePoint::simplex({0.7})) == doctest::Approx(0.7));
}

TEST_CASE("function parsing failures name the violated predicate") {
  CHECK_THROWS_WITH_AS(parse_function(R"({"kind":"spline"})"),
                       doctest::Contains("unknown function kind"), validation_error);
  CHECK_THROWS_WITH_AS(parse_function(R"({"kind":"monomial","exps":[0.5]})"),
                       doctest::Contains("integers"), validation_error);
  CHECK_THROWS_WITH_AS(parse_function(R"({"kind":"bump","center":[0.5]})"),
                       doctest::Contains("'r'"), validation_error);
  CHECK_THROWS_WITH_AS(parse_function(R"([1, 2])"), doctest::Contains("object"),
                       validation_error);
}

TEST_CASE("edge profiles resolve names against a tree and indices standalone") {
  BaseSpace t = parse_space(kTreeJson);
  SmoothFunction by_name = parse_function_for_space(
      R"({"kind":"edge_profile","edge":["b","hub"],"profile":{"kind":"monomial","exps":[1]}})",
      t);
  SmoothFunction by_index = parse_function(
      R"({"kind":"edge_profile","edge":1,"profile":{"kind":"monomial","exps":[1]}})");
  BasePoint p = parse_point(R"({"edge":["b","hub"],"offset":0.75})", t);
  CHECK(eval(t, by_name, p) == doctest::Approx(eval(t, by_index, p)).epsilon(1e-15));

  // Serializing against the tree emits the readable name form.
  std::string round = function_to_json(by_index, &t);
  CHECK(round.find("\"b\"") != std::string::npos);
  SmoothFunction back = parse_function_for_space(round, t);
  CHECK(eval(t, back, p) == doctest::Approx(eval(t, by_index, p)).epsilon(1e-15));

  CHECK_THROWS_WITH_AS(
      parse_function(R"({"kind":"edge_profile","edge":["a","b"],"profile":1.0})"),
      doctest::Contains("tree space"), validation_error);
  CHECK_THROWS_WITH_AS(
      parse_function_for_space(
          R"({"kind":"edge_profile","edge":["a","c"],"profile":1.0})", t),
      doctest::Contains("no edge joins"), validation_error);
}

TEST_CASE("point parsing checks membership and round-trips by distance") {
  BaseSpace tri = parse_space(R"({"kind":"simplex","n":2})");
  BasePoint p = parse_point("[0.2, 0.3]", tri);
  CHECK(p.coords()[1] == doctest::Approx(0.3));
  CHECK_THROWS_WITH_AS(parse_point("[0.8, 0.8]", tri), doctest::Contains("not in the space"),
                       validation_error);

  BaseSpace t = parse_space(kTreeJson);
  BasePoint v = parse_point(R"({"vertex":"hub"})", t);
  CHECK(v.tree_point().is_vertex());
  BasePoint e = parse_point(R"({"edge":["a","hub"],"offset":0.25})", t);
  BasePoint e2 = parse_point(point_to_json(e, t), t);
  CHECK(distance(t, e, e2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_point(R"({"edge":["a","hub"],"offset":5.0})", t), validation_error);
  CHECK_THROWS_WITH_AS(parse_point(R"({"vertex":"nope"})", t), doctest::Contains("unknown"),
                       validation_error);

  BaseSpace prod = parse_space(
      R"({"kind":"product","factors":[{"kind":"simplex","n":1},{"kind":"simplex","n":1}]})");
  BasePoint q = parse_point("[[0.25],[0.5]]", prod);
  CHECK(q.coords(1)[0] == doctest::Approx(0.5));
  CHECK_THROWS_WITH_AS(parse_point("[[0.25]]", prod),
                       doctest::Contains("one entry per factor"), validation_error);
}

TEST_CASE("sigma parsing: defaults, validation, and support membership") {
  BaseSpace seg = parse_space(R"({"kind":"simplex","n":1})");
  QuasiStateMeasure s = parse_sigma(R"({"kind":"dirac","point":[0.5],"mass":2.0})", seg);
  CHECK(s.mass == doctest::Approx(2.0));
  CHECK(s.point.coords()[0] == doctest::Approx(0.5));
  QuasiStateMeasure d = parse_sigma(R"({"kind":"dirac","point":[0.25]})", seg);
  CHECK(d.mass == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(parse_sigma(R"({"kind":"dirac","point":[0.5],"mass":0.0})", seg),
                       doctest::Contains("positive"), validation_error);
  CHECK_THROWS_WITH_AS(parse_sigma(R"({"kind":"gaussian","point":[0.5]})", seg),
                       doctest::Contains("unknown sigma kind"), validation_error);
  CHECK_THROWS_WITH_AS(parse_sigma(R"({"kind":"dirac","point":[1.5]})", seg),
                       doctest::Contains("not in the space"), validation_error);
}

TEST_CASE("read_file reports unreadable paths") {
  CHECK_THROWS_WITH_AS(read_file("/nonexistent/path/space.json"),
                       doctest::Contains("cannot read file"), validation_error);
}
