#pragma once

#include <cstdint>
#include <variant>

#include "toricqs/basespace.hpp"
#include "toricqs/funcspace.hpp"

namespace toricqs {

/// Pushforward of the ambient volume under the structure map.
///
/// On Simplex(n, s) the measure has Lebesgue density mass_factor * n!, the
/// normalization that makes the total mass of the unit-scale simplex equal
/// to mass_factor and scales like s^n (derived from how the volume of the
/// toric manifold transports to its polytope; cross-checked against a Monte
/// Carlo ball oracle in the test suite).  On trees the measure is the edge
/// densities times mass_factor.  On products it is the product measure.
struct PushforwardMeasure {
  BaseSpace space;
  double mass_factor = 1.0;

  double total_mass() const;
};

/// The standard pushforward measure of a space (mass_factor 1).
PushforwardMeasure dh_measure(const BaseSpace& space);

/// Finitely supported measure used for the quasi-state correction term:
/// a Dirac mass at one point (products of factor Diracs collapse to a Dirac
/// at the tuple point with the product mass).
struct QuasiStateMeasure {
  BasePoint point;
  double mass = 1.0;
};

/// Engines --------------------------------------------------------------

struct ExactEngine {};

/// Deterministic quadrature.  `order` selects the Grundmann-Moller index on
/// simplices of dimension >= 2 and the number of panels per smooth segment
/// in composite Gauss-Legendre for 1-d reductions and tree edges.  `subdiv`
/// adds levels of 4-way triangle subdivision on 2-d simplices (useful for
/// sharply concentrated integrands); 0 disables subdivision.
struct QuadEngine {
  int order = 8;
  int subdiv = 0;
};

/// Seeded Monte Carlo; fully deterministic for a fixed (samples, seed).
struct McEngine {
  long long samples = 100000;
  std::uint64_t seed = 1;
};

using Engine = std::variant<ExactEngine, QuadEngine, McEngine>;

struct McResult {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Symbolically exact integration.  Handles polynomial integrands on
/// simplices (Dirichlet formula), radial integrands with piecewise
/// polynomial profiles, piecewise polynomial integrands on tree edges, and
/// products of such through factor separation.  Throws validation_error when
/// the integrand has no exact form (e.g. a multi-dimensional bump).
double integrate_exact(const PushforwardMeasure& m, const SmoothFunction& f);

/// Deterministic quadrature; converges to integrate_exact on polynomials as
/// the order grows and is exact for polynomials of degree <= 2*order + 1 on
/// simplices of dimension >= 2.
double integrate_quadrature(const PushforwardMeasure& m, const SmoothFunction& f,
                            const QuadEngine& e);

/// Seeded Monte Carlo estimate with a standard error from Welford's method.
McResult integrate_monte_carlo(const PushforwardMeasure& m, const SmoothFunction& f,
                               const McEngine& e);

/// f integrated against the finitely supported measure: mass * f(point).
/// Validates that the support point lies in the space.
double integrate_sigma(const BaseSpace& space, const QuasiStateMeasure& sigma,
                       const SmoothFunction& f);

/// Engine dispatch.
double integrate(const PushforwardMeasure& m, const SmoothFunction& f, const Engine& e);

}  // namespace toricqs
