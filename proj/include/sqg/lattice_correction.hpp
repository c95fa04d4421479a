#pragma once

// Local corrections for punctured trapezoid sums of kernels that are
// homogeneous of degree −1 on a unit lattice (after scaling by h).
//
// For f homogeneous of degree −1 and smooth away from the origin,
//   C[f](s) = lim_{R→∞} ( Σ_{n ≠ 0, |n|_∞ ≤ R} f(n − s) − ∫_{|z|_∞ ≤ R+½} f(z − s) dz ),
// the difference between the lattice sum with the target's own node removed
// and the integral over the union of the lattice cells. The limit is taken by
// extrapolation in 1/R.

#include <array>

#include "sqg/grid.hpp"

namespace sqg::lagrangian {

struct LatticeConstants {
  // D[i][j] = C[f_ij], f_ij(z) = K_i(Mz)·z_j, K(z) = z^⊥/(2π|z|³), row-major.
  Mat2 D{};
  // C[1/(2π|Mz|)].
  double Z = 0.0;
};

// s is the offset of the evaluation point from its nearest node in units of
// h, |s|_∞ ≤ ½.
LatticeConstants lattice_constants(const Mat2& M, const Vec2& s = {0.0, 0.0});

// Reference value of Σ' 1/|n| − ∫ 1/|z| on the square lattice: 4ζ(½)β(½).
inline constexpr double kSquareLatticeZeta = -3.900264920001956;

}  // namespace sqg::lagrangian
