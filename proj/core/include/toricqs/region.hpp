#pragma once

#include <vector>

namespace toricqs {

/// Closed Euclidean ball in simplex coordinates.
struct BallRegion {
  std::vector<double> center;
  double radius = 0.0;
};

/// Closed interval [a, b] of offsets on one tree edge.
struct EdgeInterval {
  int edge = -1;
  double a = 0.0;
  double b = 0.0;
};

/// Conservative support descriptor: a union of balls (simplex spaces) or of
/// edge intervals (trees), possibly with excluded balls subtracted from every
/// ball of the union, or the whole space when nothing tighter is known.
/// Descriptors over-approximate: the true support is always contained in the
/// described set.
struct Region {
  bool full = false;
  std::vector<BallRegion> balls;       // union
  std::vector<BallRegion> excluded;    // subtracted from each ball
  std::vector<EdgeInterval> intervals; // union (tree spaces)

  bool empty() const { return !full && balls.empty() && intervals.empty(); }

  static Region full_space() {
    Region r;
    r.full = true;
    return r;
  }
  static Region nothing() { return Region{}; }
  static Region ball(std::vector<double> center, double radius) {
    Region r;
    r.balls.push_back(BallRegion{std::move(center), radius});
    return r;
  }
};

/// Union of two descriptors (sound for sums of functions).
Region region_union(const Region& a, const Region& b);

/// Over-approximate intersection (sound for products of functions).
Region region_intersect(const Region& a, const Region& b);

}  // namespace toricqs
