#pragma once

#include <array>
#include <functional>
#include <vector>

namespace toricqs::detail {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// from Chebyshev initial guesses; deterministic to machine precision.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int points);

/// Composite Gauss-Legendre on [lo, hi]: the interval is split at the given
/// breakpoints and each smooth segment into `panels` equal panels integrated
/// with a 16-point rule (exact through degree 31 per panel).
double integrate_segments(const std::function<double(double)>& f, double lo, double hi,
                          const std::vector<double>& breakpoints, int panels);

/// Node/weight list version of the same rule, so several integrands can
/// share the identical rule (needed when sums of integrals must telescope
/// exactly).
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1D build_rule_1d(double lo, double hi, const std::vector<double>& breakpoints,
                     int panels);

/// Grundmann-Moller rule of index s on the unit simplex {x >= 0, sum <= 1}
/// in dimension n, integrating against Lebesgue measure; exact for
/// polynomials of degree <= 2s+1.  Points are barycentric-derived Cartesian
/// coordinates; weights may be negative (the family alternates).
struct SimplexRule {
  int n = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;  // sum = 1/n!
};

const SimplexRule& grundmann_moller(int n, int s);

/// Vertices of the 4 children of a triangle under edgewise subdivision.
/// Used to refine 2-d rules for concentrated integrands.
std::vector<std::array<std::vector<double>, 3>> split_triangle(
    const std::array<std::vector<double>, 3>& tri);

}  // namespace toricqs::detail
