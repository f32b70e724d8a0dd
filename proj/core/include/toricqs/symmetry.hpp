#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricqs/basespace.hpp"
#include "toricqs/region.hpp"

namespace toricqs {

/// Affine self-map of a simplex induced by a permutation of the n+1
/// homogeneous slots {0, ..., n}.  The simplex point p is augmented with
/// p_0 = scale - sum(p), the slots are permuted, and slot 0 is dropped
/// again.  Slot permutations fixing 0 act as coordinate permutations
/// (isometries); the rest are genuinely affine.
struct AffineSymmetry {
  std::vector<int> perm;  // images of slots 0..n; perm[i] = where slot i goes
  double scale = 1.0;

  int n() const { return static_cast<int>(perm.size()) - 1; }
  bool is_identity() const;
};

/// Applies the symmetry to simplex coordinates.
std::vector<double> apply(const AffineSymmetry& g, const std::vector<double>& p);

/// Composition: (compose(g, h))(p) = g(h(p)).
AffineSymmetry compose(const AffineSymmetry& g, const AffineSymmetry& h);

/// Linear part of g as a row-major n x n matrix (the affine map is
/// p -> A p + b).
std::vector<double> linear_part(const AffineSymmetry& g);

/// Translation part b of the affine map.
std::vector<double> translation_part(const AffineSymmetry& g);

/// Spectral norm of the linear part (used for sound ball-image bounds).
double linear_norm(const AffineSymmetry& g);

/// Generators: the adjacent slot transpositions (i, i+1), i = 0..n-1.
std::vector<AffineSymmetry> symmetry_group(const Simplex& s);

/// Full group enumeration in lexicographic permutation order.
/// Feasible for n <= 7 ((n+1)! elements); larger n is an error.
std::vector<AffineSymmetry> enumerate_symmetries(const Simplex& s);

/// Cycle notation on slots, e.g. "(0 1)(2 3)"; "id" for the identity.
std::string cycle_notation(const AffineSymmetry& g);

/// Certificate that a symmetry maps a region strictly off itself.
struct DisplaceabilityCertificate {
  AffineSymmetry g;
  double separation = 0.0;  // positive lower bound on the gap
};

/// First group element (lexicographic order) moving p, or nullopt when p is
/// fixed by the whole group -- which happens exactly at the barycenter.
std::optional<DisplaceabilityCertificate> displace_point(const Simplex& s,
                                                         const std::vector<double>& p,
                                                         double tol = 1e-12);

/// First group element g with g(region) disjoint from the closed region,
/// checked by sound closed-ball arithmetic (images of balls are bounded by
/// balls scaled with the linear-part norm; excluded balls shrink each ball
/// to an enclosing ball of the difference).  Deterministic: the
/// lexicographically smallest certifying permutation wins.  The check is
/// sound but not complete: nullopt means no certificate was found, not that
/// none exists.
std::optional<DisplaceabilityCertificate> displace_region(const Simplex& s,
                                                          const Region& region);

/// Separation of one candidate symmetry on a region (nullopt if the ball
/// arithmetic cannot certify disjointness).  displace_region scans with this.
std::optional<double> certify_region(const Simplex& s, const Region& region,
                                     const AffineSymmetry& g);

/// Common fixed locus of the symmetry group, computed by solving the linear
/// fixed-point equations of the generators (not asserted).  For the full
/// permutation action this is the singleton barycenter.
std::vector<BasePoint> fixed_locus(const Simplex& s);

}  // namespace toricqs
