#pragma once

// Initial data θ₀ for the planar flow. Each preset is C^∞ with compact
// support well inside the default box (L = 4), so the sampled field is
// exactly zero in the outer margin.
//
//   zero           θ₀ ≡ 0
//   gaussian       A·exp(−|y|²)·χ(|y|; 2, 3)
//   gaussian-pair  A·[b(y − c) − b(y + c)], b(z) = exp(−2|z|²)·χ(|z|; 1.2, 2),
//                  c = (cos α, sin α)
//
// χ(r; r₀, r₁) is a smooth step from 1 (r ≤ r₀) to 0 (r ≥ r₁).

#include <string>

#include "sqg/grid.hpp"

namespace sqg::lagrangian {

enum class Preset { kZero, kGaussian, kGaussianPair };

Preset parse_preset(const std::string& name);
std::string to_string(Preset p);

// Default amplitude per preset: the largest round value whose time-1 flow
// stays comfortably inside 𝒪 at the default resolution.
double default_amplitude(Preset p);
// Support radius about the origin.
double support_radius(Preset p);

double smooth_step(double r, double r0, double r1);

struct PresetSpec {
  Preset kind = Preset::kGaussian;
  double amplitude = 0.0;
  double angle = 0.0;  // gaussian-pair axis

  double value(const Vec2& y) const;
  Vec2 gradient(const Vec2& y) const;  // analytic, for tests
};

PresetSpec make_preset(Preset kind);
ScalarField2D sample(const PresetSpec& spec, const Grid2D& g, double gamma = 0.5);

}  // namespace sqg::lagrangian
