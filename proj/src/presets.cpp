#include "sqg/presets.hpp"

#include <cmath>

#include "sqg/errors.hpp"

namespace sqg::lagrangian {

Preset parse_preset(const std::string& name) {
  if (name == "zero") return Preset::kZero;
  if (name == "gaussian") return Preset::kGaussian;
  if (name == "gaussian-pair" || name == "gaussian_pair") return Preset::kGaussianPair;
  throw ValidationError("unknown theta0 preset '" + name +
                        "' (expected zero, gaussian or gaussian-pair)");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::kZero: return "zero";
    case Preset::kGaussian: return "gaussian";
    case Preset::kGaussianPair: return "gaussian-pair";
  }
  return "?";
}

double default_amplitude(Preset p) {
  switch (p) {
    case Preset::kZero: return 0.0;
    case Preset::kGaussian: return 0.1;
    case Preset::kGaussianPair: return 0.06;
  }
  return 0.0;
}

double support_radius(Preset p) {
  switch (p) {
    case Preset::kZero: return 0.0;
    case Preset::kGaussian: return 3.0;
    case Preset::kGaussianPair: return 3.0;
  }
  return 0.0;
}

namespace {

// χ and dχ/dr.
void step_and_slope(double r, double r0, double r1, double& chi, double& dchi) {
  const double span = r1 - r0;
  const double t = (r - r0) / span;
  if (t <= 0.0) {
    chi = 1.0;
    dchi = 0.0;
    return;
  }
  if (t >= 1.0) {
    chi = 0.0;
    dchi = 0.0;
    return;
  }
  const double A = std::exp(-1.0 / (1.0 - t));
  const double B = std::exp(-1.0 / t);
  const double dA = -A / ((1.0 - t) * (1.0 - t));
  const double dB = B / (t * t);
  chi = A / (A + B);
  dchi = (dA * B - A * dB) / ((A + B) * (A + B)) / span;
}

struct Bump {
  double value;
  Vec2 grad;
};

// exp(−k|z|²)·χ(|z|; r0, r1)
Bump bump(const Vec2& z, double k, double r0, double r1) {
  const double r2 = z[0] * z[0] + z[1] * z[1];
  const double r = std::sqrt(r2);
  double chi, dchi;
  step_and_slope(r, r0, r1, chi, dchi);
  if (chi == 0.0) return {0.0, {0.0, 0.0}};
  const double e = std::exp(-k * r2);
  Bump b{e * chi, {-2.0 * k * z[0] * e * chi, -2.0 * k * z[1] * e * chi}};
  if (dchi != 0.0) {
    b.grad[0] += e * dchi * z[0] / r;
    b.grad[1] += e * dchi * z[1] / r;
  }
  return b;
}

}  // namespace

double smooth_step(double r, double r0, double r1) {
  double chi, dchi;
  step_and_slope(r, r0, r1, chi, dchi);
  return chi;
}

double PresetSpec::value(const Vec2& y) const {
  switch (kind) {
    case Preset::kZero:
      return 0.0;
    case Preset::kGaussian:
      return amplitude * bump(y, 1.0, 2.0, 3.0).value;
    case Preset::kGaussianPair: {
      const double c1 = std::cos(angle), c2 = std::sin(angle);
      return amplitude * (bump({y[0] - c1, y[1] - c2}, 2.0, 1.2, 2.0).value -
                          bump({y[0] + c1, y[1] + c2}, 2.0, 1.2, 2.0).value);
    }
  }
  return 0.0;
}

Vec2 PresetSpec::gradient(const Vec2& y) const {
  switch (kind) {
    case Preset::kZero:
      return {0.0, 0.0};
    case Preset::kGaussian: {
      const Bump b = bump(y, 1.0, 2.0, 3.0);
      return {amplitude * b.grad[0], amplitude * b.grad[1]};
    }
    case Preset::kGaussianPair: {
      const double c1 = std::cos(angle), c2 = std::sin(angle);
      const Bump p = bump({y[0] - c1, y[1] - c2}, 2.0, 1.2, 2.0);
      const Bump q = bump({y[0] + c1, y[1] + c2}, 2.0, 1.2, 2.0);
      return {amplitude * (p.grad[0] - q.grad[0]), amplitude * (p.grad[1] - q.grad[1])};
    }
  }
  return {0.0, 0.0};
}

PresetSpec make_preset(Preset kind) { return {kind, default_amplitude(kind), 0.0}; }

ScalarField2D sample(const PresetSpec& spec, const Grid2D& g, double gamma) {
  ScalarField2D f(g, gamma);
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      f.at(i, j) = spec.value({g.coord(i), g.coord(j)});
    }
  }
  return f;
}

}  // namespace sqg::lagrangian
