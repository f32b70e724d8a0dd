#pragma once

#include <optional>
#include <vector>

#include "toricqs/funcspace.hpp"

namespace toricqs::detail {

/// Dense univariate polynomial, coefficients in ascending degree order.
struct Poly {
  std::vector<double> c;  // value = sum c[k] x^k

  double operator()(double x) const;
  int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double s);
/// p(a*x + b) expanded in x.
Poly poly_affine_arg(const Poly& p, double a, double b);
/// Definite integral over [x0, x1].
double poly_integral(const Poly& p, double x0, double x1);

/// Piecewise polynomial on [lo, hi]: breaks[0] = lo < ... < breaks.back() = hi,
/// pieces[i] valid on [breaks[i], breaks[i+1]] and expressed in the LOCAL
/// coordinate x - breaks[i].  The local basis keeps coefficients the same
/// order of magnitude as the values; expanding narrow windows far from the
/// origin in the global monomial basis would lose ~6 digits to cancellation
/// before any evaluation happens.
struct PiecewisePoly {
  std::vector<double> breaks;
  std::vector<Poly> pieces;

  double operator()(double x) const;
  double integral() const;
  double integral(double x0, double x1) const;
  /// Antiderivative value from breaks.front() to x.
  double cumulative(double x) const;
  int max_degree() const;
};

PiecewisePoly pw_const(double lo, double hi, double v);
PiecewisePoly pw_add(const PiecewisePoly& a, const PiecewisePoly& b);
PiecewisePoly pw_mul(const PiecewisePoly& a, const PiecewisePoly& b);
PiecewisePoly pw_scale(const PiecewisePoly& a, double s);

/// Compiles a 1-d symbolic function into an exact piecewise polynomial on
/// [0, length].  Returns nullopt for terms with no such form (the
/// C-infinity bump model).
std::optional<PiecewisePoly> compile_1d(const SmoothFunction& f, double length);

/// Multivariate polynomial normal form: map from exponent vector to
/// coefficient.  Returns nullopt when f is not a polynomial in the simplex
/// coordinates.
struct MultiPoly {
  int n = 0;
  // term list: exponents (size n) and coefficient
  std::vector<std::pair<std::vector<int>, double>> terms;
};

std::optional<MultiPoly> try_polynomial(const SmoothFunction& f, int n);

}  // namespace toricqs::detail
