#pragma once

// Perpendicular Riesz transform on the plane with the kernel
//   K(z) = z^⊥ / (2π|z|³),  z^⊥ = (−z₂, z₁),
// evaluated by a punctured trapezoid sum with the target value subtracted,
// an exact boundary term for that subtracted constant, and a lattice
// correction for the remaining degree −1 singularity.

#include <array>
#include <cstddef>
#include <vector>

#include "sqg/grid.hpp"

namespace sqg::lagrangian {

inline constexpr double kDecayTolerance = 1e-12;

// Σ_{b∈[begin,end)} K̃(x − p_b)·(q_b − qx)·w_b with K̃ = 2π·K, summed in four
// fixed lanes. Callers multiply by 1/(2π).
Vec2 kernel_sum(const double* p1, const double* p2, const double* q,
                const double* w, std::size_t begin, std::size_t end, const Vec2& x,
                double qx);

// Two charge channels at once: {Σ K̃₁c₁, Σ K̃₂c₁, Σ K̃₁c₂, Σ K̃₂c₂}.
std::array<double, 4> kernel_sum2(const double* p1, const double* p2,
                                  const double* q1, const double* q2,
                                  const double* w, std::size_t begin,
                                  std::size_t end, const Vec2& x, double qx1,
                                  double qx2);

// Images of the boundary nodes, counter-clockwise.
std::vector<Vec2> boundary_polygon(const FlowMap& X);
std::vector<Vec2> boundary_polygon(const Grid2D& g);

// PV ∫_Ω K(x − y) dy = ∮_{∂Ω} dy / (2π|x − y|) for the polygon Ω.
Vec2 boundary_term(const std::vector<Vec2>& polygon, const Vec2& x);

// As above, but only segments whose label midpoint lies within `near` of the
// label a get the closed form; the rest use 4-point Gauss-Legendre. The
// split depends on labels only, so the result stays smooth in the polygon.
Vec2 boundary_term(const std::vector<Vec2>& polygon, const Vec2& x,
                   const std::vector<Vec2>& labels, const Vec2& a, double near);

inline constexpr double kBoundaryNearCells = 8.0;

// Throws ValidationError when the outer 10% margin is not below 1e−12.
void check_decay(const ScalarField2D& theta);

struct RieszResult {
  Vec2 u{};
  // [∇θ]_γ·(h/√2)^{1+γ}/(1+γ)², with the seminorm sampled around x: size of
  // the Hölder remainder left in the target's own cell.
  double local_bound = 0.0;
};

RieszResult riesz_velocity(const ScalarField2D& theta, const Vec2& x);

}  // namespace sqg::lagrangian
