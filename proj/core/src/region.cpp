#include "toricqs/region.hpp"

#include <algorithm>
#include <cmath>

namespace toricqs {

namespace {

double ball_dist(const BallRegion& a, const BallRegion& b) {
  double s = 0.0;
  size_t n = std::min(a.center.size(), b.center.size());
  for (size_t i = 0; i < n; ++i) {
    double d = a.center[i] - b.center[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Region region_union(const Region& a, const Region& b) {
  if (a.full || b.full) return Region::full_space();
  Region r;
  // Per-ball exclusions do not distribute over a union, so exclusions are
  // dropped when combining (keeping them would shrink the descriptor, which
  // is unsound for a union bound).
  r.balls = a.balls;
  r.balls.insert(r.balls.end(), b.balls.begin(), b.balls.end());
  r.intervals = a.intervals;
  r.intervals.insert(r.intervals.end(), b.intervals.begin(), b.intervals.end());
  return r;
}

Region region_intersect(const Region& a, const Region& b) {
  if (a.full) return b;
  if (b.full) return a;
  if (a.empty() || b.empty()) return Region::nothing();
  Region r;
  // Pairwise: keep the smaller ball of each overlapping pair (a sound
  // superset of the true intersection); drop disjoint pairs entirely.
  for (const auto& ba : a.balls)
    for (const auto& bb : b.balls) {
      if (ball_dist(ba, bb) > ba.radius + bb.radius) continue;
      r.balls.push_back(ba.radius <= bb.radius ? ba : bb);
    }
  // Exclusions from either side still hold for the intersection.
  r.excluded = a.excluded;
  r.excluded.insert(r.excluded.end(), b.excluded.begin(), b.excluded.end());
  for (const auto& ia : a.intervals)
    for (const auto& ib : b.intervals) {
      if (ia.edge != ib.edge) continue;
      double lo = std::max(ia.a, ib.a), hi = std::min(ia.b, ib.b);
      if (lo <= hi) r.intervals.push_back(EdgeInterval{ia.edge, lo, hi});
    }
  return r;
}

}  // namespace toricqs
