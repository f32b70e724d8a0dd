#pragma once

#include <optional>
#include <vector>

#include "toricqs/quasistate.hpp"

namespace toricqs {

/// Result of flattening f near a point: fprime agrees with f outside the
/// 2*gamma-ball around the point, is constant f(p*) on the gamma-ball, and
/// deviates from f by at most epsilon_achieved everywhere.
struct FlattenResult {
  SmoothFunction fprime;
  double epsilon_achieved = 0.0;
  double gamma = 0.0;
};

/// fprime = chi * f(p*) + (1 - chi) * f with chi a plateau bump that is 1 on
/// the gamma-ball and 0 outside the 2*gamma-ball.  epsilon_achieved is the
/// grid sup of |f - f(p*)| over the 2*gamma-ball intersected with the space.
FlattenResult flatten(const BaseSpace& space, const SmoothFunction& f,
                      const BasePoint& pstar, double gamma);

/// Finite cover of the simplex by open radius-gamma/2 balls: ball 0 is
/// centered at pstar; every other center keeps distance > gamma/2 from
/// pstar, so pstar lies in no other closure.  Centers live on a lattice of
/// pitch gamma/(4 sqrt(n)) near the simplex; coverage is verified on a grid
/// and a failure (or a gamma too large for any admissible center to exist)
/// throws validation_error.
struct CoverPlan {
  std::vector<BallRegion> balls;  // balls[0] is the distinguished ball
  double gamma = 0.0;
  int verify_resolution = 0;
};

CoverPlan build_cover(const Simplex& s, const BasePoint& pstar, double gamma);

/// One summand of the decomposition.
struct PieceReport {
  int index = 0;
  BallRegion ball;
  bool near_pstar = false;  // supported in the flat zone; asserted ~ 0
  std::optional<DisplaceabilityCertificate> certificate;
  double value = 0.0;       // Calabi value of the piece
};

/// Full report: flatten data, cover, pieces, and the cross-checks.
struct DecompositionReport {
  double gamma = 0.0;
  double epsilon_achieved = 0.0;
  std::vector<PieceReport> pieces;
  double sum_of_values = 0.0;       // pipeline value
  double zeta_fprime = 0.0;         // direct functional value of fprime
  double direct_value = 0.0;        // integral of fprime minus fprime(p*)
  double reconstruction_error = 0.0;  // grid sup |sum pieces - (fprime - c)|
};

/// Flatten, cover, build the subordinate partition (normalized bumps), cut
/// fprime - fprime(p*) into pieces, certify every piece supported away from
/// pstar via displace_region (on the ball minus the flat zone), and sum the
/// per-piece Calabi values.  All integrals of one run share a single
/// deterministic rule so the piece values add up to the direct integral to
/// machine precision.  A piece away from pstar without a certificate aborts
/// with a diagnostic (gamma too large for the symmetry group to separate).
DecompositionReport partition_and_evaluate(const QuasiStateModel& m,
                                           const SmoothFunction& f, double gamma,
                                           const QuadEngine& quad = QuadEngine{16, 0});

}  // namespace toricqs
