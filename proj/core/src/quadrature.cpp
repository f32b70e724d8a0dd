#include "toricqs/detail/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "toricqs/error.hpp"

namespace toricqs::detail {

namespace {

GaussRule compute_gauss_legendre(int points) {
  GaussRule rule;
  rule.x.resize(points);
  rule.w.resize(points);
  const int n = points;
  // Newton refinement from Chebyshev initial guesses; nodes are the roots of
  // the Legendre polynomial P_n on (-1, 1).
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  if (points < 1) throw internal_error("gauss_legendre: need at least one point");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, compute_gauss_legendre(points)).first;
  return it->second;
}

namespace {

std::vector<double> panel_edges(double lo, double hi, const std::vector<double>& breakpoints,
                                int panels) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (double b : breakpoints)
    if (b > lo + 1e-14 && b < hi - 1e-14) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  // Subdivide each inter-breakpoint span into roughly equal panels so the
  // total panel count is at least `panels`.
  double total = hi - lo;
  std::vector<double> edges;
  edges.push_back(cuts.front());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    int k = std::max(1, static_cast<int>(std::ceil((b - a) / total * panels)));
    for (int j = 1; j <= k; ++j) edges.push_back(a + (b - a) * j / k);
  }
  return edges;
}

}  // namespace

double integrate_segments(const std::function<double(double)>& f, double lo, double hi,
                          const std::vector<double>& breakpoints, int panels) {
  if (!(hi > lo)) return 0.0;
  static const GaussRule g16 = gauss_legendre(16);
  auto edges = panel_edges(lo, hi, breakpoints, panels);
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i], b = edges[i + 1];
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t j = 0; j < g16.x.size(); ++j) s += g16.w[j] * f(mid + half * g16.x[j]);
    total += s * half;
  }
  return total;
}

Rule1D build_rule_1d(double lo, double hi, const std::vector<double>& breakpoints, int panels) {
  Rule1D rule;
  if (!(hi > lo)) return rule;
  static const GaussRule g16 = gauss_legendre(16);
  auto edges = panel_edges(lo, hi, breakpoints, panels);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i], b = edges[i + 1];
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t j = 0; j < g16.x.size(); ++j) {
      rule.x.push_back(mid + half * g16.x[j]);
      rule.w.push_back(half * g16.w[j]);
    }
  }
  return rule;
}

namespace {

double factorial(int k) {
  double v = 1.0;
  for (int i = 2; i <= k; ++i) v *= i;
  return v;
}

void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

namespace {

SimplexRule compute_grundmann_moller(int n, int s) {
  SimplexRule rule;
  rule.n = n;
  const int d = 2 * s + 1;
  // Points are duplicated across i-levels; merge by barycentric key so the
  // rule stays compact.
  std::map<std::vector<long long>, double> merged;
  const double simplex_vol = 1.0 / factorial(n);
  for (int i = 0; i <= s; ++i) {
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    double num = sign * std::pow(2.0, -2.0 * s) * std::pow(d + n - 2 * i, d);
    double den = factorial(i) * factorial(d + n - i);
    double coeff = num / den;
    std::vector<int> cur;
    compositions(s - i, n + 1, cur, [&](const std::vector<int>& beta) {
      // Barycentric coordinates (2 beta_j + 1)/(d + n - 2 i), stored as exact
      // numerator/denominator pairs so coincident points merge reliably.
      std::vector<long long> key(n + 1);
      long long denom = d + n - 2 * i;
      for (int j = 0; j <= n; ++j) {
        long long numer = 2LL * beta[j] + 1LL;
        long long g = std::gcd(numer, denom);
        key[j] = ((numer / g) << 32) | (denom / g);
      }
      merged[key] += coeff;
    });
  }
  double wsum = 0.0;
  for (const auto& [key, w] : merged) {
    std::vector<double> bary(n + 1);
    for (int j = 0; j <= n; ++j) {
      long long packed = key[j];
      long long denom = packed & 0xffffffffLL;
      long long numer = packed >> 32;
      bary[j] = static_cast<double>(numer) / static_cast<double>(denom);
    }
    // Cartesian point: drop the 0th barycentric coordinate.
    std::vector<double> pt(bary.begin() + 1, bary.end());
    rule.points.push_back(std::move(pt));
    rule.weights.push_back(w);
    wsum += w;
  }
  // Weights as produced integrate against volume 1; rescale so they sum to
  // the unit-simplex volume 1/n!.
  double scale = simplex_vol / wsum;
  for (double& w : rule.weights) w *= scale;
  return rule;
}

}  // namespace

const SimplexRule& grundmann_moller(int n, int s) {
  if (n < 1) throw internal_error("grundmann_moller: dimension must be positive");
  if (s < 0) throw internal_error("grundmann_moller: index must be nonnegative");
  static std::map<std::pair<int, int>, SimplexRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(n, s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_grundmann_moller(n, s)).first;
  return it->second;
}

std::vector<std::array<std::vector<double>, 3>> split_triangle(
    const std::array<std::vector<double>, 3>& tri) {
  auto mid = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> m(a.size());
    for (size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
  };
  auto m01 = mid(tri[0], tri[1]);
  auto m12 = mid(tri[1], tri[2]);
  auto m02 = mid(tri[0], tri[2]);
  std::vector<std::array<std::vector<double>, 3>> out;
  out.push_back({tri[0], m01, m02});
  out.push_back({m01, tri[1], m12});
  out.push_back({m02, m12, tri[2]});
  out.push_back({m01, m12, m02});
  return out;
}

}  // namespace toricqs::detail
