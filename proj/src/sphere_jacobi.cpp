#include "sqg/sphere_jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sqg/errors.hpp"

namespace sqg::sphere {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::numbers::sqrt2;

}  // namespace

void validate(const SphericalHarmonicIndex& idx) {
  if (idx.n < 1) throw ValidationError("spherical degree n must be >= 1");
  if (std::abs(idx.m) > idx.n) {
    throw ValidationError("spherical order must satisfy |m| <= n");
  }
}

double lambda_n(int n) {
  if (n < 1) throw ValidationError("lambda_n needs n >= 1");
  const double nn = n;
  return std::sqrt(nn * (nn + 1.0));
}

double a_n(int n) {
  const double l = lambda_n(n);
  return (kSqrt2 - l) / l;
}

JacobiModeSolution::JacobiModeSolution(SphericalHarmonicIndex idx, cplx amplitude)
    : idx_(idx), c_(amplitude) {
  validate(idx_);
  a_ = a_n(idx_.n);
}

cplx JacobiModeSolution::h(double t) const {
  return c_ * std::exp(kI * (a_ * idx_.m * t));
}

cplx JacobiModeSolution::g(double t) const {
  const int m = idx_.m;
  if (m == 0) return t * c_;
  // −iC/((1+a)m) · e^{−imt}(e^{i(1+a)mt} − 1); 1 + a = √2/λ_n is never zero.
  const double w = (1.0 + a_) * m;
  return -kI * c_ / w * std::exp(-kI * (m * t)) * (std::exp(kI * (w * t)) - 1.0);
}

cplx JacobiModeSolution::dg(double t) const {
  return h(t) - kI * static_cast<double>(idx_.m) * g(t);
}

JacobiModeSolution mode_solution(int n, int m, cplx amplitude) {
  return JacobiModeSolution({n, m}, amplitude);
}

JacobiTrajectory integrate_jacobi_ode(int n, int m, cplx amplitude, double t_end,
                                      double dt) {
  validate({n, m});
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be > 0");
  }
  const double ratio = t_end / dt;
  if (ratio > kMaxJacobiSteps) {
    throw ValidationError("t_end/dt exceeds the step-count guard of 1e8");
  }
  if (m < 0) {
    JacobiTrajectory tr = integrate_jacobi_ode(n, -m, std::conj(amplitude), t_end, dt);
    tr.index.m = m;
    for (auto& v : tr.h) v = std::conj(v);
    for (auto& v : tr.g) v = std::conj(v);
    return tr;
  }

  auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  steps = std::max<std::size_t>(steps, 1);

  const cplx rate_h = kI * (a_n(n) * m);
  const cplx rate_g = -kI * static_cast<double>(m);
  auto rhs = [&](cplx h, cplx g, cplx& dh, cplx& dgv) {
    dh = rate_h * h;
    dgv = h + rate_g * g;
  };

  JacobiTrajectory tr;
  tr.index = {n, m};
  tr.t.reserve(steps + 1);
  tr.h.reserve(steps + 1);
  tr.g.reserve(steps + 1);
  cplx h = amplitude;
  cplx g = 0.0;
  tr.t.push_back(0.0);
  tr.h.push_back(h);
  tr.g.push_back(g);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    const double t1 = i + 1 == steps ? t_end : static_cast<double>(i + 1) * dt;
    const double s = t1 - t0;
    cplx k1h, k1g, k2h, k2g, k3h, k3g, k4h, k4g;
    rhs(h, g, k1h, k1g);
    rhs(h + 0.5 * s * k1h, g + 0.5 * s * k1g, k2h, k2g);
    rhs(h + 0.5 * s * k2h, g + 0.5 * s * k2g, k3h, k3g);
    rhs(h + s * k3h, g + s * k3g, k4h, k4g);
    h += s / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
    g += s / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    tr.t.push_back(t1);
    tr.h.push_back(h);
    tr.g.push_back(g);
  }
  return tr;
}

namespace {

struct Hermite {
  cplx g0, d0, g1, d1;
  double t0, len;

  cplx value(double s) const {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * len * d0 +
           (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * len * d1;
  }
  cplx slope(double s) const {
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * g0 + (-6 * s2 + 6 * s) * g1) / len +
           (3 * s2 - 4 * s + 1) * d0 + (3 * s2 - 2 * s) * d1;
  }
  double dmod2(double s) const {
    return 2.0 * std::real(std::conj(value(s)) * slope(s));
  }
};

cplx ode_slope(const JacobiTrajectory& tr, std::size_t i) {
  return tr.h[i] - kI * static_cast<double>(tr.index.m) * tr.g[i];
}

double dmod2_at(const JacobiTrajectory& tr, std::size_t i) {
  return 2.0 * std::real(std::conj(tr.g[i]) * ode_slope(tr, i));
}

double refine(const JacobiTrajectory& tr, std::size_t i) {
  const Hermite H{tr.g[i],     ode_slope(tr, i),     tr.g[i + 1],
                  ode_slope(tr, i + 1), tr.t[i], tr.t[i + 1] - tr.t[i]};
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (H.dmod2(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return H.t0 + 0.5 * (lo + hi) * H.len;
}

}  // namespace

std::vector<double> locate_zeros(const JacobiTrajectory& tr) {
  std::vector<double> zeros;
  if (tr.t.size() < 2) return zeros;
  double prev = dmod2_at(tr, 0);
  for (std::size_t i = 0; i + 1 < tr.t.size(); ++i) {
    const double next = dmod2_at(tr, i + 1);
    if (prev < 0.0 && next >= 0.0) zeros.push_back(refine(tr, i));
    prev = next;
  }
  return zeros;
}

double locate_first_zero(const JacobiTrajectory& tr) {
  const auto z = locate_zeros(tr);
  return z.empty() ? std::numeric_limits<double>::quiet_NaN() : z.front();
}

double conjugate_time(int n, int m) {
  if (n < 1 || m < 1) throw ValidationError("conjugate_time needs n, m >= 1");
  return 2.0 * std::numbers::pi * (lambda_n(n) / kSqrt2) / m;
}

std::vector<ClusterRow> cluster_scan(int n_max) {
  if (n_max < 2) throw ValidationError("cluster_scan needs n_max >= 2");
  std::vector<ClusterRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double t = conjugate_time(n, n);
    rows.push_back({n, t, t - kClusterLimit});
  }
  return rows;
}

double xi_nm(int n, int m, double phi) {
  validate({n, m});
  return std::sph_legendre(static_cast<unsigned>(n),
                           static_cast<unsigned>(std::abs(m)), phi);
}

ModeReduction reduce_mode(int n, int m) {
  validate({n, m});
  constexpr std::array<double, 5> kPhi{0.35, 0.8, 1.3, 1.9, 2.6};
  constexpr double d = 1e-4;
  auto f = [](double phi) { return -std::cos(phi); };
  // Laplace–Beltrami of a zonal function u(φ)e^{imr}.
  auto lap = [&](auto&& u, double phi, int mm) {
    const double sp = std::sin(phi + 0.5 * d), sm = std::sin(phi - 0.5 * d);
    const double flux = sp * (u(phi + d) - u(phi)) - sm * (u(phi) - u(phi - d));
    const double s = std::sin(phi);
    return flux / (d * d * s) - static_cast<double>(mm) * mm / (s * s) * u(phi);
  };

  ModeReduction r;
  r.index = {n, m};
  std::array<double, kPhi.size()> transport{}, amp{}, coupling{};
  double xi_scale = 0.0;
  for (std::size_t i = 0; i < kPhi.size(); ++i) {
    const double phi = kPhi[i];
    // {f, g} = (f_φ g_r − f_r g_φ)/sin φ with f_r = 0.
    transport[i] = (f(phi + d) - f(phi - d)) / (2 * d) / std::sin(phi);
    // Λ on the n = 1 zonal mode, from its Laplace eigenvalue.
    const double eig = -lap(f, phi, 0) / f(phi);
    amp[i] = -std::sqrt(eig);
    auto theta = [&](double p) { return amp[i] * std::cos(p); };
    // {h, θ} = −h_r θ_φ / sin φ.
    coupling[i] = (theta(phi + d) - theta(phi - d)) / (2 * d) / std::sin(phi);
    auto xi = [&](double p) { return xi_nm(n, m, p); };
    const double lam2 = static_cast<double>(n) * (n + 1);
    r.eigen_residual = std::max(r.eigen_residual, std::abs(lap(xi, phi, m) + lam2 * xi(phi)));
    xi_scale = std::max(xi_scale, lam2 * std::abs(xi(phi)));
  }
  auto mean_spread = [](const auto& a, double& mean, double& spread) {
    mean = 0.0;
    for (double v : a) mean += v;
    mean /= static_cast<double>(a.size());
    for (double v : a) spread = std::max(spread, std::abs(v - mean));
  };
  mean_spread(transport, r.background_transport, r.spread);
  mean_spread(amp, r.theta_amplitude, r.spread);
  mean_spread(coupling, r.vorticity_coupling, r.spread);
  // ψ = λ_n h:  λ_n h' + i m·transport·λ_n h − i m·coupling·h = 0.
  const double lam = lambda_n(n);
  r.h_rate = kI * (m * (r.vorticity_coupling - r.background_transport * lam) / lam);
  const cplx expected = kI * (a_n(n) * m);
  const double rel_eig = xi_scale > 0.0 ? r.eigen_residual / xi_scale : r.eigen_residual;
  r.consistent = std::abs(r.h_rate - expected) <= 1e-6 * (1.0 + std::abs(m)) &&
                 std::abs(r.background_transport - 1.0) <= 1e-6 &&
                 std::abs(r.theta_amplitude + kSqrt2) <= 1e-6 && r.spread <= 1e-6 &&
                 rel_eig <= 1e-4;
  return r;
}

BackgroundReport steady_background_check() {
  BackgroundReport r;
  const double l1 = lambda_n(1);
  r.lambda1_sq_residual = l1 * l1 - 2.0;
  r.a1 = a_n(1);
  r.t11_minus_2pi = conjugate_time(1, 1) - 2.0 * std::numbers::pi;
  const auto tr = integrate_jacobi_ode(1, 1, {1.0, 0.0}, 10.0, 0.01);
  for (const auto& h : tr.h) {
    r.h_modulus_drift = std::max(r.h_modulus_drift, std::abs(std::abs(h) - 1.0));
  }
  r.reduction = reduce_mode(1, 1);
  r.pass = std::abs(r.lambda1_sq_residual) <= 4 * std::numeric_limits<double>::epsilon() && r.a1 == 0.0 &&
           r.t11_minus_2pi == 0.0 && r.h_modulus_drift <= 1e-10 &&
           r.reduction.consistent;
  return r;
}

}  // namespace sqg::sphere
