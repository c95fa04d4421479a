#pragma once

// Independent reference computations. None of these route through the mode
// bookkeeping or quadrature they are used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "sqg/presets.hpp"
#include "sqg/spectral_core.hpp"

namespace sqg::testing {

inline constexpr double kPi = std::numbers::pi;

// −f_x g_y + f_y g_x with fourth-order central differences of point values.
inline double fd_bracket(const spectral::TrigField& f, const spectral::TrigField& g, double x,
                         double y, double h) {
  auto d = [h](auto&& fn) {
    return (-fn(2.0 * h) + 8.0 * fn(h) - 8.0 * fn(-h) + fn(-2.0 * h)) / (12.0 * h);
  };
  const double fx = d([&](double s) { return f.evaluate(x + s, y); });
  const double fy = d([&](double s) { return f.evaluate(x, y + s); });
  const double gx = d([&](double s) { return g.evaluate(x + s, y); });
  const double gy = d([&](double s) { return g.evaluate(x, y + s); });
  return -fx * gy + fy * gx;
}

// ∫ f·Λg over the unit torus from N×N samples: Λ applied through a direct
// DFT with symbol F(k) = 2π|k|, then the trapezoid rule. Exact for fields
// band-limited below N/2.
inline double grid_inner_product(const spectral::TrigField& f, const spectral::TrigField& g,
                                 int N = 16) {
  using C = std::complex<double>;
  std::vector<double> gs(N * N), fs(N * N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      gs[j * N + i] = g.evaluate(double(i) / N, double(j) / N);
      fs[j * N + i] = f.evaluate(double(i) / N, double(j) / N);
    }
  }
  std::vector<C> hat(N * N);
  auto freq = [N](int k) { return k <= N / 2 ? k : k - N; };
  for (int kj = 0; kj < N; ++kj) {
    for (int ki = 0; ki < N; ++ki) {
      C acc = 0.0;
      for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
          acc += gs[j * N + i] * std::polar(1.0, -2.0 * kPi * (double(ki) * i + double(kj) * j) / N);
        }
      }
      const double kx = freq(ki), ky = freq(kj);
      hat[kj * N + ki] = acc / double(N * N) * (2.0 * kPi * std::hypot(kx, ky));
    }
  }
  double sum = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      C v = 0.0;
      for (int kj = 0; kj < N; ++kj) {
        for (int ki = 0; ki < N; ++ki) {
          v += hat[kj * N + ki] * std::polar(1.0, 2.0 * kPi * (double(ki) * i + double(kj) * j) / N);
        }
      }
      sum += fs[j * N + i] * v.real();
    }
  }
  return sum / double(N * N);
}

// Complex-exponential spectral advection. θ = Λψ is transported by
// v = −∇^⊥ψ = (ψ_y, −ψ_x): θ_t = −v·∇θ, and ψ_t = Λ⁻¹θ_t.
using ExpField = std::map<std::pair<int, int>, std::complex<double>>;

inline ExpField to_exponentials(const spectral::TrigField& f) {
  using C = std::complex<double>;
  ExpField e;
  for (const auto& [key, c] : f.terms()) {
    const int j = key.p.jx(), k = key.p.ky();
    if (key.parity == spectral::Parity::kCos) {
      e[{j, k}] += C(0.5 * c, 0.0);
      e[{-j, -k}] += C(0.5 * c, 0.0);
    } else {
      e[{j, k}] += C(0.0, -0.5 * c);
      e[{-j, -k}] += C(0.0, 0.5 * c);
    }
  }
  return e;
}

inline spectral::TrigField from_exponentials(const ExpField& e) {
  spectral::TrigField f;
  for (const auto& [jk, c] : e) {
    const spectral::LatticeVector p(jk.first, jk.second);
    if (p.is_zero() || !p.is_canonical()) continue;
    f.add(p, spectral::Parity::kCos, 2.0 * c.real());
    f.add(p, spectral::Parity::kSin, -2.0 * c.imag());
  }
  return f;
}

inline spectral::TrigField advection_rhs(const spectral::TrigField& psi) {
  using C = std::complex<double>;
  const ExpField ps = to_exponentials(psi);
  auto sym = [](int j, int k) { return 2.0 * kPi * std::hypot(double(j), double(k)); };
  ExpField theta;
  for (const auto& [jk, c] : ps) theta[jk] = c * sym(jk.first, jk.second);
  ExpField out;
  // −ψ_y θ_x + ψ_x θ_y, with ∂_x e^{2πi(jx+ky)} = 2πi·j.
  for (const auto& [a, pa] : ps) {
    for (const auto& [b, tb] : theta) {
      const C psi_x(0.0, 2.0 * kPi * a.first), psi_y(0.0, 2.0 * kPi * a.second);
      const C th_x(0.0, 2.0 * kPi * b.first), th_y(0.0, 2.0 * kPi * b.second);
      out[{a.first + b.first, a.second + b.second}] += pa * tb * (-psi_y * th_x + psi_x * th_y);
    }
  }
  for (auto& [jk, c] : out) {
    if (jk.first != 0 || jk.second != 0) c /= sym(jk.first, jk.second);
  }
  return from_exponentials(out);
}

// sup_{d>0} 2 sin(d/2)/d^γ, the C^γ seminorm of cos on the line, by a dense
// search (the sup over a of |cos a − cos(a+d)| is 2|sin(d/2)|).
inline double cos_holder_seminorm(double gamma) {
  double best = 0.0;
  for (int k = 1; k <= 2000000; ++k) {
    const double d = kPi * k / 2000000.0;
    best = std::max(best, 2.0 * std::sin(0.5 * d) / std::pow(d, gamma));
  }
  return best;
}

// Composite Gauss-Legendre on [a, b] with `panels` panels of 8 points.
template <class Fn>
double gauss_legendre(Fn&& fn, double a, double b, int panels) {
  static constexpr double x[4] = {0.18343464249564980, 0.52553240991632899,
                                  0.79666647741362674, 0.96028985649753623};
  static constexpr double w[4] = {0.36268378337836198, 0.31370664587788729,
                                  0.22238103445337447, 0.10122853629037626};
  const double hp = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * hp, r = 0.5 * hp;
    for (int k = 0; k < 4; ++k) sum += r * w[k] * (fn(c - r * x[k]) + fn(c + r * x[k]));
  }
  return sum;
}

// Azimuthal velocity of the planar kernel flow for a radial θ(ρ) supported
// in ρ ≤ rmax, by Hankel transforms:
//   θ̂(k) = ∫ θ(ρ) J₀(kρ) ρ dρ,   u_φ(r) = ∫ θ̂(k) k J₁(kr) dk,
// and the energy ∫∫ θθ/(2π|x − y|) = 2π ∫ θ̂(k)² dk.
class RadialVelocity {
 public:
  RadialVelocity(const lagrangian::PresetSpec& spec, double rmax, double kmax = 18.0)
      : kmax_(kmax) {
    const int nk = 96;
    const double hk = kmax / nk;
    for (int p = 0; p < nk; ++p) {
      for (int s = 0; s < 8; ++s) {
        static constexpr double x[8] = {-0.96028985649753623, -0.79666647741362674,
                                        -0.52553240991632899, -0.18343464249564980,
                                        0.18343464249564980,  0.52553240991632899,
                                        0.79666647741362674,  0.96028985649753623};
        static constexpr double w[8] = {0.10122853629037626, 0.22238103445337447,
                                        0.31370664587788729, 0.36268378337836198,
                                        0.36268378337836198, 0.31370664587788729,
                                        0.22238103445337447, 0.10122853629037626};
        const double k = (p + 0.5) * hk + 0.5 * hk * x[s];
        const double th = gauss_legendre(
            [&](double rho) { return spec.value({rho, 0.0}) * std::cyl_bessel_j(0.0, k * rho) * rho; },
            0.0, rmax, 96);
        k_.push_back(k);
        wk_.push_back(0.5 * hk * w[s] * th * k);
        energy_ += 2.0 * kPi * 0.5 * hk * w[s] * th * th;
      }
    }
  }

  double u_phi(double r) const {
    double s = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) s += wk_[i] * std::cyl_bessel_j(1.0, k_[i] * r);
    return s;
  }
  double energy() const { return energy_; }

 private:
  double kmax_;
  double energy_ = 0.0;
  std::vector<double> k_, wk_;
};

}  // namespace sqg::testing
