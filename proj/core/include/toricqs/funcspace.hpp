#pragma once

#include <memory>
#include <vector>

#include "toricqs/basespace.hpp"
#include "toricqs/region.hpp"

namespace toricqs {

/// Node kinds of the symbolic function language.
enum class FKind {
  Constant,        // value
  Monomial,        // coef * prod p_i^exps[i]     (simplex coordinates)
  Radial,          // profile(sum of coordinates) (simplex spaces)
  Bump,            // radial bump of |p - center|, 1 at center, 0 outside r-ball
  Plateau,         // 1 on the r_in-ball, 0 outside the r_out-ball, C^2 ramp
  Box,             // value * indicator of [a, b] (1-d; used for densities)
  EdgeProfile,     // profile(offset) on one tree edge, 0 elsewhere
  Lift,            // function of one product factor, lifted to the product
  Sum,             // sum of children
  Product,         // product of children
  Scale,           // value * child
  Shift,           // child + value
  AffineArg,       // child(a*t + b)              (1-d argument substitution)
  PartitionPiece,  // children[index] / sum(children)
};

/// Immutable node of a symbolic function expression.  Functions do not carry
/// their space; operations take the space alongside the function.
class FuncNode {
 public:
  FKind kind;
  double value = 0.0;             // Constant/Scale/Shift/Box value
  double coef = 1.0;              // Monomial coefficient
  std::vector<int> exps;          // Monomial exponents
  std::vector<double> center;     // Bump/Plateau center
  double r0 = 0.0, r1 = 0.0;      // Bump radius (r0), Plateau radii, Box [r0, r1]
  bool cinf = false;              // Bump: use the C-infinity model
  int edge = -1;                  // EdgeProfile edge index
  int factor = -1;                // Lift factor index
  int index = -1;                 // PartitionPiece numerator index
  double a = 1.0, b = 0.0;        // AffineArg coefficients
  SmoothFunction child;           // Radial/EdgeProfile profile, Scale/Shift/AffineArg/Lift child
  std::vector<SmoothFunction> children;  // Sum/Product terms, PartitionPiece bumps
};

/// Constructors for the function language.
namespace fn {

SmoothFunction constant(double value);
SmoothFunction monomial(std::vector<int> exps, double coef);
/// profile evaluated at the sum of simplex coordinates.
SmoothFunction radial(SmoothFunction profile);
/// C^2 bump (1 - (d/r)^2)^3 of d = |p - center|; cinf selects exp(1 - 1/(1 - u^2)).
SmoothFunction bump(std::vector<double> center, double r, bool cinf = false);
/// 1 on the closed r_in-ball, 0 outside the open r_out-ball, C^2 in between.
SmoothFunction plateau(std::vector<double> center, double r_in, double r_out);
/// value on [a, b], 0 elsewhere (1-d; intended for densities).
SmoothFunction box(double a, double b, double value);
/// profile(offset) on the given edge, 0 on all other edges.
SmoothFunction edge_profile(int edge, SmoothFunction profile);
SmoothFunction lift(int factor, SmoothFunction f);
SmoothFunction sum(std::vector<SmoothFunction> terms);
SmoothFunction product(std::vector<SmoothFunction> terms);
SmoothFunction scale(double c, SmoothFunction f);
SmoothFunction shift(double c, SmoothFunction f);
/// t -> f(a*t + b) for 1-d functions.
SmoothFunction affine_arg(double a, double b, SmoothFunction f);
/// bumps[index] / sum(bumps); defined where the bump sum is positive.
SmoothFunction partition_piece(int index, std::vector<SmoothFunction> bumps);

}  // namespace fn

/// Evaluates f at p.  Throws validation_error when p is not in the space
/// (within tol) or is structurally incompatible with it.
double eval(const BaseSpace& space, const SmoothFunction& f, const BasePoint& p,
            double tol = 1e-12);

/// Evaluation without the membership check (for integration inner loops
/// where points are inside by construction).
double eval_unchecked(const BaseSpace& space, const SmoothFunction& f, const BasePoint& p);

/// Evaluates an intrinsically 1-d function (profile, density) at a scalar.
double eval_profile(const SmoothFunction& f, double t);

/// Grid maximum of |f| over the space.  The grid accumulates all lattice
/// resolutions up to `resolution`, so the value is monotone nondecreasing in
/// the resolution and always a lower bound for the true sup.
double sup_norm(const BaseSpace& space, const SmoothFunction& f, int resolution);

/// Conservative support descriptor; see Region.
Region support_bound(const BaseSpace& space, const SmoothFunction& f);

/// 1-d breakpoints of f on [0, length]: points where the piecewise-smooth
/// description changes (bump edges, plateau radii, box ends).  Used to align
/// quadrature panels.
std::vector<double> breakpoints_1d(const SmoothFunction& f, double length);

/// Reads f as a 1-d function of the sum of coordinates on an n-simplex, if
/// its expression only involves radial/constant structure (any function
/// qualifies when n == 1).  Returns null when f is not radial in this sense.
SmoothFunction try_as_radial(const SmoothFunction& f, const Simplex& s);

}  // namespace toricqs
