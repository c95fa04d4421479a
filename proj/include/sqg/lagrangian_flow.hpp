#pragma once

// Lagrangian form of SQG on the plane. The flow map X(·, t) = id + Y solves
// the autonomous ODE
//   dX/dt = F(X, θ₀),  F(X, θ₀)(a) = ∫ K(X(a) − X(b)) θ₀(b) J_X(b) db,
// with θ₀ carried along particle paths. Every quadrature here is a punctured
// trapezoid sum over grid labels b, desingularised as
//   Σ_{b≠a} K(X(a)−X(b))·(θ₀(b) − θ₀(a))·J(b)·w_b
//   + θ₀(a)·PV∫_{X(box)} K(X(a) − y) dy           (exact, polygon boundary)
//   + h·J(a)·D(∇X(a))·∇θ₀(a)                       (lattice correction)

#include <limits>
#include <string>
#include <vector>

#include "sqg/grid.hpp"
#include "sqg/membership.hpp"

namespace sqg::lagrangian {

// Refuses with MembershipError unless X ∈ 𝒪 (when check_membership).
VectorField2D eval_F(const FlowMap& X, const ScalarField2D& theta0,
                     bool check_membership = true);

// ∇_a F = [∫ K(X(a) − X(b)) ⊗ σ(b) J(b) db]·∇X(a) with σ = ∇X^{−T}∇θ₀, the
// spatial gradient of θ at X(b). Entries are row-major ∂F_i/∂a_k.
MatrixField2D eval_gradF(const FlowMap& X, const ScalarField2D& theta0,
                         bool check_membership = true);

// ⟨⟨u, u⟩⟩ = ∫ θ (−Δ)^{−1/2} θ = ∫∫ θ₀J(a) θ₀J(b) / (2π|X(a) − X(b)|).
double energy(const FlowMap& X, const ScalarField2D& theta0);

// θ = θ₀∘X⁻¹ on the grid nodes (Newton on the interpolated map).
ScalarField2D eulerian_theta(const FlowMap& X, const ScalarField2D& theta0);

inline constexpr double kMaxFlowSteps = 1e6;

struct EvolveOptions {
  double t_end = 1.0;
  double dt = 1.0 / 64.0;
  int snapshot_stride = 0;  // keep every k-th state; 0 keeps none
  bool track_energy = true;
};

struct StepRecord {
  double t = 0.0;
  MembershipReport report;
  double max_jac_dev = 0.0;  // max |J_X − 1|
};

struct EvolveResult {
  FlowMap X;
  double t = 0.0;
  std::vector<StepRecord> steps;
  std::vector<double> snapshot_times;
  std::vector<FlowMap> snapshots;
  bool halted = false;
  std::string halt_reason;
  double energy0 = std::numeric_limits<double>::quiet_NaN();
  double energy1 = std::numeric_limits<double>::quiet_NaN();
  double max_jac_dev = 0.0;
  double max_chord_arc = 1.0;
};

// Classical RK4 from X = id. Membership is recomputed after every step and
// the run halts, keeping the last state, once X leaves 𝒪.
EvolveResult evolve(const ScalarField2D& theta0, const EvolveOptions& opt = {});

// Time-1 flow map; throws MembershipError if the flow leaves 𝒪 first.
FlowMap exp_map(const ScalarField2D& theta0, double dt = 1.0 / 64.0);

struct SmoothnessReport {
  std::vector<double> eps;
  // |D_ε − D_ε'|_∞ for consecutive ε, and the Richardson slopes they imply.
  std::vector<double> first_diff, first_slopes;
  std::vector<double> second_diff, second_slopes;
  // |∂₂∂₁ − ∂₁∂₂|_∞ from two asymmetric stencils (outer step ε, inner ε/2).
  std::vector<double> mixed_defect;
  double min_first_slope = 0.0;
  bool mixed_decreasing = false;
};

// Central differences of exp_map in the direction dtheta; the mixed second
// derivative uses dtheta and dtheta2. eps_list must be strictly decreasing
// with at least three entries.
SmoothnessReport fd_smoothness_probe(const ScalarField2D& theta0,
                                     const ScalarField2D& dtheta,
                                     const ScalarField2D& dtheta2,
                                     const std::vector<double>& eps_list,
                                     double dt = 1.0 / 64.0);

}  // namespace sqg::lagrangian
