#pragma once

// Membership of a flow map X = id + Y in the open set
//   𝒪 = { 9/10 < inf det ∇X,  ‖Y‖_{1,γ} < 7/20 },
// plus the chord-arc and ‖∇X⁻¹‖ bounds that hold on 𝒪.
//
// Suprema over pairs of points are estimated on a fixed pair sample: every
// pair of nodes within 4h, axis-aligned pairs at geometrically spaced
// separations, and 50 000 quasi-random long-range pairs. The estimate is a
// lower bound for the true supremum.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqg/grid.hpp"

namespace sqg::lagrangian {

inline constexpr double kInfDetBound = 0.9;
inline constexpr double kHolderBound = 0.35;
inline constexpr double kChordArcBound = 1.5;
inline constexpr std::size_t kLongRangePairs = 50000;

struct HolderParts {
  double sup = 0.0;       // ‖Y‖_∞, entrywise
  double sup_grad = 0.0;  // ‖∇Y‖_∞, entrywise
  double seminorm = 0.0;  // sampled [∇Y]_γ
  double total() const { return sup + sup_grad + seminorm; }
};

struct MembershipReport {
  double inf_det = 0.0;
  double holder_norm = 0.0;
  bool in_O = false;
  double chord_arc_lambda = 1.0;
  double grad_inv_bound = 0.0;
  HolderParts parts;
  std::vector<std::string> failed;  // "inf_det", "holder_norm"
};

// Calls fn(a, b, |a − b|) for every pair in the deterministic sample.
void for_each_sample_pair(const Grid2D& g,
                          const std::function<void(std::size_t, std::size_t, double)>& fn);

HolderParts holder_parts(const FlowMap& Y, double gamma);
double holder_norm(const FlowMap& Y, double gamma);
MembershipReport membership(const FlowMap& X, double gamma);

}  // namespace sqg::lagrangian
