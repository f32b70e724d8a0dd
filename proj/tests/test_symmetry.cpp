#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "toricqs/symmetry.hpp"

using namespace toricqs;

namespace {

AffineSymmetry slot_perm(std::vector<int> perm, double scale = 1.0) {
  AffineSymmetry g;
  g.perm = std::move(perm);
  g.scale = scale;
  return g;
}

}  // namespace

TEST_CASE("slot permutations act by augment-permute-drop") {
  // Swap slot 0 (the complementary coordinate) with slot 1 on the triangle:
  // (x, y) -> (1 - x - y, y).
  AffineSymmetry g = slot_perm({1, 0, 2});
  auto img = toricqs::apply(g, {0.2, 0.3});
  CHECK(img[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(img[1] == doctest::Approx(0.3).epsilon(1e-15));
  // A coordinate transposition is an isometry: (x, y) -> (y, x).
  AffineSymmetry h = slot_perm({0, 2, 1});
  auto img2 = toricqs::apply(h, {0.2, 0.3});
  CHECK(img2[0] == doctest::Approx(0.3));
  CHECK(img2[1] == doctest::Approx(0.2));
  // Barycenter is fixed by everything.
  for (const auto& s : enumerate_symmetries(make_simplex(2, 1.0))) {
    auto b = toricqs::apply(s, {1.0 / 3, 1.0 / 3});
    CHECK(b[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
}

TEST_CASE("composition matches applying maps in sequence") {
  AffineSymmetry g = slot_perm({1, 0, 2});
  AffineSymmetry h = slot_perm({0, 2, 1});
  AffineSymmetry gh = compose(g, h);
  std::vector<double> p = {0.15, 0.4};
  auto via_compose = toricqs::apply(gh, p);
  auto via_sequence = toricqs::apply(g, toricqs::apply(h, p));
  CHECK(via_compose[0] == doctest::Approx(via_sequence[0]).epsilon(1e-15));
  CHECK(via_compose[1] == doctest::Approx(via_sequence[1]).epsilon(1e-15));
  CHECK(compose(g, g).is_identity());
}

TEST_CASE("affine decomposition reconstructs the action") {
  AffineSymmetry g = slot_perm({2, 0, 1});
  auto a = linear_part(g);
  auto b = translation_part(g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.45);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p = {u(rng), u(rng)};
    auto direct = toricqs::apply(g, p);
    for (int i = 0; i < 2; ++i) {
      double v = b[i];
      for (int j = 0; j < 2; ++j) v += a[static_cast<size_t>(i) * 2 + j] * p[j];
      CHECK(v == doctest::Approx(direct[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("spectral norm: isometries have norm 1, slot-0 moves have the golden ratio") {
  CHECK(linear_norm(slot_perm({0, 2, 1})) == doctest::Approx(1.0).epsilon(1e-12));
  double golden = 0.5 * (1.0 + std::sqrt(5.0));
  CHECK(linear_norm(slot_perm({1, 0, 2})) == doctest::Approx(golden).epsilon(1e-12));
  CHECK(linear_norm(slot_perm({1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("group enumeration: size, distinctness, closure") {
  auto all = enumerate_symmetries(make_simplex(2, 1.0));
  CHECK(all.size() == 6);
  std::set<std::vector<int>> perms;
  for (const auto& g : all) perms.insert(g.perm);
  CHECK(perms.size() == 6);
  for (const auto& g : all)
    for (const auto& h : all) CHECK(perms.count(compose(g, h).perm) == 1);
  CHECK(symmetry_group(make_simplex(3, 1.0)).size() == 3);  // adjacent transpositions
  CHECK_THROWS_AS(enumerate_symmetries(make_simplex(8, 1.0)), validation_error);
}

TEST_CASE("cycle notation") {
  CHECK(cycle_notation(slot_perm({0, 1, 2})) == "id");
  CHECK(cycle_notation(slot_perm({1, 0, 2})) == "(0 1)");
  CHECK(cycle_notation(slot_perm({1, 2, 0})) == "(0 1 2)");
  CHECK(cycle_notation(slot_perm({1, 0, 3, 2})) == "(0 1)(2 3)");
}

TEST_CASE("point displacement: everything but the barycenter moves") {
  Simplex s = make_simplex(2, 1.0);
  CHECK(!displace_point(s, {1.0 / 3, 1.0 / 3}).has_value());
  auto c = displace_point(s, {0.6, 0.1});
  REQUIRE(c.has_value());
  CHECK(c->separation > 0.0);
  // The certificate is honest: the element really moves the point that far.
  auto img = toricqs::apply(c->g, {0.6, 0.1});
  double moved = std::hypot(img[0] - 0.6, img[1] - 0.1);
  CHECK(moved == doctest::Approx(c->separation).epsilon(1e-12));
}

TEST_CASE("fixed locus is the barycenter in every dimension") {
  for (int n : {1, 2, 3, 4}) {
    auto locus = fixed_locus(make_simplex(n, 1.0));
    REQUIRE(locus.size() == 1);
    for (double x : locus[0].coords())
      CHECK(x == doctest::Approx(1.0 / (n + 1)).epsilon(1e-11));
  }
  auto scaled = fixed_locus(make_simplex(2, 3.0));
  CHECK(scaled[0].coords()[0] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("region displacement certificates are sound: sampled images stay clear") {
  Simplex s = make_simplex(2, 1.0);
  Region ball = Region::ball({0.12, 0.12}, 0.06);
  auto cert = displace_region(s, ball);
  REQUIRE(cert.has_value());
  CHECK(cert->separation > 0.0);
  // Brute-force check: sample the ball densely; each image point keeps at
  // least the certified separation from every sampled ball point.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.06, 0.06);
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 400; ++i) {
    double dx = u(rng), dy = u(rng);
    if (dx * dx + dy * dy > 0.06 * 0.06) continue;
    samples.push_back({0.12 + dx, 0.12 + dy});
  }
  for (const auto& p : samples) {
    auto ip = toricqs::apply(cert->g, p);
    for (const auto& q : samples) {
      double d = std::hypot(ip[0] - q[0], ip[1] - q[1]);
      CHECK(d >= cert->separation - 1e-12);
    }
  }
}

TEST_CASE("excluded balls rescue certificates that the plain ball cannot get") {
  Simplex s = make_simplex(1, 1.0);
  // The interval [0.15, 0.55] contains the fixed midpoint: no certificate.
  Region plain = Region::ball({0.35}, 0.2);
  CHECK(!displace_region(s, plain).has_value());
  // Subtracting [0.3, 0.8] leaves [0.15, 0.3], a one-sided set well clear of
  // the midpoint, and the reflection displaces its enclosing interval.
  Region cut = plain;
  cut.excluded.push_back(BallRegion{{0.55}, 0.25});
  auto cert = displace_region(s, cut);
  REQUIRE(cert.has_value());
  CHECK(cert->separation > 0.0);
  // Brute force: points of [0.15, 0.55] outside (0.3, 0.8), reflected, keep
  // the separation from the unreflected set.
  std::vector<double> pts;
  for (int i = 0; i <= 2000; ++i) {
    double x = 0.15 + 0.4 * i / 2000.0;
    if (std::abs(x - 0.55) >= 0.25) pts.push_back(x);
  }
  for (double x : pts) {
    double ix = toricqs::apply(cert->g, {x})[0];
    for (double y : pts) CHECK(std::abs(ix - y) >= cert->separation - 1e-12);
  }
}

TEST_CASE("a small concentric exclusion cannot make a two-sided set one-sided") {
  // Removing a small middle chunk leaves points on both sides of the fixed
  // midpoint; the remainder genuinely is not displaceable and the cutoff
  // machinery must not pretend otherwise.
  Simplex s = make_simplex(1, 1.0);
  Region cut = Region::ball({0.51}, 0.21);
  cut.excluded.push_back(BallRegion{{0.5}, 0.15});
  CHECK(!displace_region(s, cut).has_value());
}

TEST_CASE("a region swallowed by its exclusions certifies trivially") {
  Simplex s = make_simplex(2, 1.0);
  Region r = Region::ball({0.2, 0.2}, 0.05);
  r.excluded.push_back(BallRegion{{0.2, 0.2}, 0.2});
  auto cert = displace_region(s, r);
  REQUIRE(cert.has_value());
  CHECK(std::isinf(cert->separation));
}
