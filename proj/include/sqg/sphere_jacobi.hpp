#pragma once

// Jacobi fields along the rotational geodesic generated by f = −cos φ on the
// unit sphere (φ polar angle, r azimuth) for the Ḣ^{1/2} stream metric.
//
// Writing the Jacobi field Y and its partner Z mode by mode,
//   g(t)·ξ_nm(φ)e^{imr}  and  h(t)·ξ_nm(φ)e^{imr},
// the linearised flow g_t + {f,g} = h and the linearised Euler equation
// decouple into
//   h' = i·a_n·m·h,   g' + i·m·g = h,   a_n = (√2 − λ_n)/λ_n.

#include <complex>
#include <string>
#include <vector>

namespace sqg::sphere {

using cplx = std::complex<double>;

inline constexpr double kClusterLimit = 4.442882938158366;  // π√2

struct SphericalHarmonicIndex {
  int n = 1;
  int m = 1;
};
void validate(const SphericalHarmonicIndex& idx);

double lambda_n(int n);  // √(n(n+1))
double a_n(int n);       // (√2 − λ_n)/λ_n

class JacobiModeSolution {
 public:
  JacobiModeSolution(SphericalHarmonicIndex idx, cplx amplitude);

  const SphericalHarmonicIndex& index() const { return idx_; }
  cplx amplitude() const { return c_; }
  double a() const { return a_; }
  // m = 0: {f, ·} vanishes on the mode, g grows linearly as t·C.
  bool trivial_branch() const { return idx_.m == 0; }

  cplx h(double t) const;
  cplx g(double t) const;
  cplx dg(double t) const;  // h(t) − i·m·g(t)

 private:
  SphericalHarmonicIndex idx_;
  cplx c_;
  double a_;
};

JacobiModeSolution mode_solution(int n, int m, cplx amplitude);

struct JacobiTrajectory {
  SphericalHarmonicIndex index;
  std::vector<double> t;
  std::vector<cplx> h;
  std::vector<cplx> g;
};

inline constexpr double kMaxJacobiSteps = 1e8;

// Classical RK4 on (h, g) from h(0) = C, g(0) = 0. The step is dt except for
// a final partial step that lands on t_end.
JacobiTrajectory integrate_jacobi_ode(int n, int m, cplx amplitude, double t_end,
                                      double dt);

// First positive zero of |g| on a sampled trajectory, located by bisection of
// d|g|²/dt on the cubic Hermite interpolant. Returns NaN if none is found.
double locate_first_zero(const JacobiTrajectory& traj);

// Local minima of |g|² (sign changes − to + of its derivative) on the
// trajectory nodes, refined as in locate_first_zero.
std::vector<double> locate_zeros(const JacobiTrajectory& traj);

double conjugate_time(int n, int m);  // 2π√(n(n+1))/(√2·m)

struct ClusterRow {
  int n = 0;
  double t_nn = 0.0;
  double gap = 0.0;  // t_nn − π√2
};
std::vector<ClusterRow> cluster_scan(int n_max);

// Constant c₀ in "t_nn − π√2 < ε for every n > 1/(ε·c₀)", from
// √(1+1/n) − 1 ≤ 1/(2n).
inline constexpr double kClusterC0 = 0.45015815807855303;  // √2/π

// Intermediate coefficients of the per-mode reduction. Each is measured by
// finite differences in φ on sample latitudes rather than written down.
struct ModeReduction {
  SphericalHarmonicIndex index;
  double background_transport = 0.0;  // {f, g} = c·g_r, expect 1
  double theta_amplitude = 0.0;       // Λf = c·cos φ, expect −√2
  double vorticity_coupling = 0.0;    // {h, Λf} = −c·h_r, expect √2
  double eigen_residual = 0.0;        // max |Δξ_nm + λ_n²ξ_nm| on samples
  double spread = 0.0;                // worst φ-dependence of the above
  cplx h_rate;                        // i·m·(coupling − λ_n)/λ_n
  bool consistent = false;            // h_rate == i·a_n·m to 1e−6
};
ModeReduction reduce_mode(int n, int m);

struct BackgroundReport {
  double lambda1_sq_residual = 0.0;  // λ_1² − 2 in floating point (one ulp)
  double a1 = 0.0;
  double t11_minus_2pi = 0.0;
  double h_modulus_drift = 0.0;      // n = m = 1, RK4 on [0, 10]
  ModeReduction reduction;
  bool pass = false;
};
BackgroundReport steady_background_check();

// Normalised associated Legendre part of Y_n^m (optional rendering aid).
double xi_nm(int n, int m, double phi);

}  // namespace sqg::sphere
