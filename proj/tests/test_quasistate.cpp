#include <cmath>

#include "doctest.h"
#include "toricqs/quasistate.hpp"

using namespace toricqs;

namespace {

BaseSpace triangle() { return BaseSpace(make_simplex(2, 1.0)); }
BaseSpace segment() { return BaseSpace(make_simplex(1, 1.0)); }

SmoothFunction profile_s() { return fn::monomial({1}, 1.0); }
SmoothFunction profile_s2() { return fn::monomial({2}, 1.0); }

}  // namespace

TEST_CASE("standard model: pushforward mass matches sigma mass at the special point") {
  QuasiStateModel m = standard_model(triangle());
  CHECK(m.dh.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.sigma.mass == doctest::Approx(m.dh.total_mass()).epsilon(1e-15));
  REQUIRE(m.sigma.point.parts.size() == 1);
  for (double x : m.sigma.point.coords())
    CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-13));

  // Scaled space: mass scales like scale^n.
  QuasiStateModel big = standard_model(BaseSpace(make_simplex(2, 2.0)));
  CHECK(big.dh.total_mass() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(big.sigma.mass == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("custom model validates the sigma support point") {
  QuasiStateMeasure inside{BasePoint::simplex({0.2, 0.2}), 1.0};
  QuasiStateModel m = custom_model(triangle(), inside);
  CHECK(m.sigma.mass == doctest::Approx(1.0));
  QuasiStateMeasure outside{BasePoint::simplex({0.8, 0.8}), 1.0};
  CHECK_THROWS_WITH_AS(custom_model(triangle(), outside),
                       doctest::Contains("not in the space"), validation_error);
}

TEST_CASE("zeta and calabi_value on a fresh triangle monomial") {
  // f = p1^2 p2: bulk integral 2! * 2!1!/5! = 1/30, value at barycenter 1/27.
  QuasiStateModel m = standard_model(triangle());
  ToricHamiltonian h{fn::monomial({2, 1}, 1.0), 1};
  CHECK(zeta(m, h) == doctest::Approx(1.0 / 30 - 1.0 / 27).epsilon(1e-13));
  CHECK(calabi_value(m, h) == doctest::Approx(1.0 / 30).epsilon(1e-13));

  // Iterating the time-one map scales both functionals linearly.
  ToricHamiltonian h3{fn::monomial({2, 1}, 1.0), 3};
  CHECK(zeta(m, h3) == doctest::Approx(3.0 * (1.0 / 30 - 1.0 / 27)).epsilon(1e-13));
  ToricHamiltonian hneg{fn::monomial({2, 1}, 1.0), -2};
  CHECK(calabi_value(m, hneg) == doctest::Approx(-2.0 / 30).epsilon(1e-13));
}

TEST_CASE("zeta rejects degenerate Hamiltonians") {
  QuasiStateModel m = standard_model(segment());
  CHECK_THROWS_WITH_AS(zeta(m, ToricHamiltonian{nullptr, 1}), doctest::Contains("null"),
                       validation_error);
  CHECK_THROWS_WITH_AS(zeta(m, ToricHamiltonian{profile_s(), 0}),
                       doctest::Contains("nonzero"), validation_error);
  CHECK_THROWS_AS(calabi_value(m, ToricHamiltonian{nullptr, 1}), validation_error);
}

TEST_CASE("median of a star with unequal arm masses sits inside the heavy arm") {
  MeasuredTree t = tree_from_edges({{"a", "hub", 1.0, nullptr},
                                    {"b", "hub", 2.0, nullptr},
                                    {"c", "hub", 0.5, nullptr}});
  MedianResult med = tree_median(t);
  CHECK(med.unique);
  // Total mass 3.5; the component beyond the cut toward b must not exceed
  // 1.75, which pins the point at distance 1.75 from the leaf b.
  TreePoint leaf_b = TreePoint::at_vertex(t.vertex_index("b"));
  CHECK(tree_distance(t, med.point, leaf_b) == doctest::Approx(1.75).epsilon(1e-9));
  TreePoint hub = TreePoint::at_vertex(t.vertex_index("hub"));
  CHECK(tree_distance(t, med.point, hub) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("median follows a concentrated density to its half-mass point") {
  MeasuredTree t = tree_from_edges({{"a", "b", 1.0, fn::box(0.0, 0.2, 1.0)}});
  MedianResult med = tree_median(t);
  CHECK(med.unique);
  TreePoint leaf_a = TreePoint::at_vertex(t.vertex_index("a"));
  CHECK(tree_distance(t, med.point, leaf_a) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("median of a within-edge flat stretch is its midpoint, flagged non-unique") {
  // Density 1 on [0, 0.3] and [0.7, 1]: every point of [0.3, 0.7] balances
  // the two halves, so the median segment has positive length.
  SmoothFunction density =
      fn::sum({fn::box(0.0, 0.3, 1.0), fn::box(0.7, 1.0, 1.0)});
  MeasuredTree t = tree_from_edges({{"a", "b", 1.0, density}});
  MedianResult med = tree_median(t);
  CHECK(!med.unique);
  TreePoint leaf_a = TreePoint::at_vertex(t.vertex_index("a"));
  CHECK(tree_distance(t, med.point, leaf_a) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("special point of a product is the tuple of factor special points") {
  MeasuredTree star = tree_from_edges({{"a", "hub", 1.0, nullptr},
                                       {"b", "hub", 2.0, nullptr},
                                       {"c", "hub", 0.5, nullptr}});
  BaseSpace prod(ProductSpace{{FactorSpace(make_simplex(1, 1.0)), FactorSpace(star)}});
  BasePoint sp = special_point(prod);
  REQUIRE(sp.parts.size() == 2);
  CHECK(sp.coords(0)[0] == doctest::Approx(0.5).epsilon(1e-13));
  TreePoint hub = TreePoint::at_vertex(star.vertex_index("hub"));
  CHECK(tree_distance(star, sp.tree_point(1), hub) ==
        doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("zeta on a weighted tree: bulk minus mass times median value") {
  MeasuredTree t = tree_from_edges(
      {{"a", "b", 1.0, fn::constant(3.0)}, {"b", "c", 1.0, nullptr}});
  QuasiStateModel m = standard_model(BaseSpace(t));
  CHECK(m.dh.total_mass() == doctest::Approx(4.0).epsilon(1e-13));
  // Flip-symmetric profile s(1 - s) on the heavy edge: the bulk term and the
  // value at the median (1/3 or 2/3 along the edge) do not depend on the
  // edge's stored orientation.
  SmoothFunction prof =
      fn::sum({fn::monomial({1}, 1.0), fn::monomial({2}, -1.0)});
  ToricHamiltonian h{fn::edge_profile(0, prof), 1};
  double bulk = 3.0 * (0.5 - 1.0 / 3.0);  // int_0^1 3 s (1 - s) ds
  double at_median = (2.0 / 3.0) * (1.0 / 3.0);
  CHECK(zeta(m, h) == doctest::Approx(bulk - 4.0 * at_median).epsilon(1e-9));
  CHECK(calabi_value(m, h) == doctest::Approx(bulk).epsilon(1e-9));
}

TEST_CASE("calabi_property_check validates its certificate") {
  QuasiStateModel m = standard_model(segment());
  ToricHamiltonian h{fn::bump({0.15}, 0.1), 1};
  // The identity map displaces nothing, so the certificate is rejected even
  // though the Hamiltonian's support genuinely avoids the special point.
  DisplaceabilityCertificate forged;
  forged.g = AffineSymmetry{};
  forged.g.perm = {0, 1};
  forged.separation = 0.5;
  CHECK_THROWS_WITH_AS(calabi_property_check(m, h, forged),
                       doctest::Contains("does not certify"), validation_error);

  // A certificate found by the search is accepted, and the property holds.
  Region support = support_bound(m.space, h.fbar);
  auto cert = displace_region(m.space.simplex(), support);
  REQUIRE(cert.has_value());
  CHECK(calabi_property_check(m, h, *cert));

  // Non-simplex spaces have no certificate notion.
  MeasuredTree t = tree_from_edges({{"a", "b", 1.0, nullptr}});
  QuasiStateModel mt = standard_model(BaseSpace(t));
  ToricHamiltonian ht{fn::edge_profile(0, profile_s()), 1};
  CHECK_THROWS_WITH_AS(calabi_property_check(mt, ht, *cert),
                       doctest::Contains("simplex"), validation_error);
}

TEST_CASE("rescaled family: window validation for the scale parameter") {
  CHECK_THROWS_WITH_AS(mu_delta_closed_form(1, 0.5, profile_s2()),
                       doctest::Contains("(n/(n+1), 1]"), validation_error);
  CHECK_THROWS_AS(mu_delta_closed_form(1, 1.0 + 1e-9, profile_s2()), validation_error);
  CHECK_THROWS_AS(mu_delta_closed_form(2, 0.6, profile_s2()), validation_error);
  CHECK_THROWS_WITH_AS(mu_delta_closed_form(0, 1.0, profile_s2()),
                       doctest::Contains("positive"), validation_error);
  CHECK_THROWS_WITH_AS(mu_delta_closed_form(1, 1.0, nullptr), doctest::Contains("null"),
                       validation_error);
  CHECK_NOTHROW(mu_delta_closed_form(2, 0.7, profile_s2()));
  CHECK_NOTHROW(mu_delta_closed_form(1, 1.0, profile_s2()));
}

TEST_CASE("rescaled family: hand value at delta = 0.8 under both conventions") {
  // Profile s in dimension 1: moment 1/2, evaluation point 1/(2*0.8) = 0.625.
  double derived = mu_delta_closed_form(1, 0.8, profile_s(), Convention::Derived);
  CHECK(derived == doctest::Approx(0.5 - 0.625 / 0.8).epsilon(1e-13));
  double printed = mu_delta_closed_form(1, 0.8, profile_s(), Convention::Printed);
  CHECK(printed == doctest::Approx(0.5 - 0.625 / (0.8 * 0.8)).epsilon(1e-13));
  // The conventions agree exactly at delta = 1 and nowhere else.
  CHECK(mu_delta_closed_form(1, 1.0, profile_s(), Convention::Derived) ==
        doctest::Approx(mu_delta_closed_form(1, 1.0, profile_s(), Convention::Printed))
            .epsilon(1e-15));
  CHECK(std::abs(derived - printed) > 1e-3);
}

TEST_CASE("rescaled family: transported-Hamiltonian route agrees on a non-polynomial profile") {
  SmoothFunction prof = fn::bump({0.6}, 0.05, /*cinf=*/true);
  double closed = mu_delta_closed_form(1, 0.9, prof);
  double pulled = mu_delta_via_pullback(1, 0.9, prof);
  CHECK(closed == doctest::Approx(pulled).epsilon(1e-9));
}

TEST_CASE("independence certificate: designed witnesses expose rank") {
  // Proportional profiles give a rank-1 value matrix however many scales.
  IndependenceCertificate flat = independence_certificate(
      1, {1.0, 0.9}, {profile_s2(), fn::scale(2.0, profile_s2())});
  CHECK(flat.rank == 1);
  CHECK(flat.min_singular_value <= flat.rank_tolerance);
  CHECK(flat.matrix[0][1] == doctest::Approx(2.0 * flat.matrix[0][0]).epsilon(1e-12));

  // Genuinely different profiles witness full rank.
  IndependenceCertificate full =
      independence_certificate(1, {1.0, 0.9}, {profile_s(), profile_s2()});
  CHECK(full.rank == 2);
  CHECK(full.min_singular_value > full.rank_tolerance);
  // Matrix entries are exactly the closed-form values.
  for (size_t i = 0; i < 2; ++i) {
    CHECK(full.matrix[i][0] ==
          doctest::Approx(mu_delta_closed_form(1, i == 0 ? 1.0 : 0.9, profile_s()))
              .epsilon(1e-14));
  }
}

TEST_CASE("independence certificate validates its inputs") {
  CHECK_THROWS_WITH_AS(independence_certificate(1, {}, {profile_s()}),
                       doctest::Contains("at least one"), validation_error);
  CHECK_THROWS_WITH_AS(independence_certificate(1, {1.0}, {}),
                       doctest::Contains("at least one"), validation_error);
  CHECK_THROWS_WITH_AS(independence_certificate(1, {0.9, 0.9}, {profile_s()}),
                       doctest::Contains("distinct"), validation_error);
  CHECK_THROWS_AS(independence_certificate(2, {0.9, 0.65}, {profile_s()}),
                   validation_error);  // 0.65 below the dimension-2 window
}

TEST_CASE("lipschitz report: constant, sup difference, and the bound") {
  QuasiStateModel m = standard_model(segment());
  ToricHamiltonian h1{profile_s2(), 2};
  ToricHamiltonian h2{fn::sum({profile_s2(), fn::scale(0.2, fn::bump({0.5}, 0.1))}), 2};
  LipschitzReport r = lipschitz_check(m, h1, h2);
  CHECK(r.constant == doctest::Approx(4.0).epsilon(1e-14));  // |power| * (1 + 1)
  CHECK(r.sup_diff == doctest::Approx(0.2).epsilon(1e-12));  // grid hits the peak
  CHECK(r.lhs <= r.constant * r.sup_diff + 1e-9);
  CHECK(r.ok);
  CHECK_THROWS_WITH_AS(lipschitz_check(m, h1, ToricHamiltonian{profile_s2(), 3}),
                       doctest::Contains("equal powers"), validation_error);
}
