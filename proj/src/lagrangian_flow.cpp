#include "sqg/lagrangian_flow.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sqg/errors.hpp"
#include "sqg/lattice_correction.hpp"
#include "sqg/parallel.hpp"
#include "sqg/riesz.hpp"

namespace sqg::lagrangian {

namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

void require_same_grid(const FlowMap& X, const ScalarField2D& theta0) {
  if (!(X.grid == theta0.grid)) {
    throw ValidationError("flow map and theta0 live on different grids");
  }
}

void require_membership(const FlowMap& X) {
  const MembershipReport r = membership(X, X.gamma);
  if (r.in_O) return;
  std::ostringstream msg;
  msg << "flow map is outside O: failed " << r.failed.front() << " (inf_det=" << r.inf_det
      << ", holder_norm=" << r.holder_norm << ")";
  throw MembershipError(r.failed.front(), msg.str());
}

// Source-side data shared by every target node.
struct Sources {
  Grid2D g;
  std::size_t N = 0;
  std::vector<double> x1, x2;  // X(b)
  std::vector<Mat2> gradX;
  std::vector<double> J, jw;   // J(b), J(b)·w_b
  std::vector<Vec2> polygon, labels;

  explicit Sources(const FlowMap& X) : g(X.grid), N(X.grid.size()) {
    x1.resize(N);
    x2.resize(N);
    J.resize(N);
    jw.resize(N);
    gradX = flow_gradient(X).v;
    for (int j = 0; j < g.n(); ++j) {
      for (int i = 0; i < g.n(); ++i) {
        const std::size_t k = g.index(i, j);
        const Vec2 x = X.X(k);
        x1[k] = x[0];
        x2[k] = x[1];
        J[k] = det(gradX[k]);
        jw[k] = J[k] * g.weight(i, j);
      }
    }
    polygon = boundary_polygon(X);
    labels = boundary_polygon(g);
  }
};

// Compacted copy of the nodes where any of the given charges is nonzero.
struct Support {
  std::vector<double> x1, x2, jw;
  std::vector<std::vector<double>> q;
};

Support compact(const Sources& s, const std::vector<const std::vector<double>*>& charges) {
  Support out;
  out.q.resize(charges.size());
  for (std::size_t b = 0; b < s.N; ++b) {
    bool any = false;
    for (const auto* c : charges) any = any || (*c)[b] != 0.0;
    if (!any) continue;
    out.x1.push_back(s.x1[b]);
    out.x2.push_back(s.x2[b]);
    out.jw.push_back(s.jw[b]);
    for (std::size_t c = 0; c < charges.size(); ++c) out.q[c].push_back((*charges[c])[b]);
  }
  return out;
}

}  // namespace

VectorField2D eval_F(const FlowMap& X, const ScalarField2D& theta0, bool check_membership) {
  require_same_grid(X, theta0);
  check_decay(theta0);
  if (check_membership) require_membership(X);

  const Sources src(X);
  const Grid2D& g = src.g;
  const double h = g.h();
  const VectorField2D grad = gradient(theta0);
  const std::vector<double>& th = theta0.v;
  const Support sup = compact(src, {&th});
  const std::size_t S = sup.x1.size();

  VectorField2D out(g);
  parallel_for(src.N, [&](std::size_t a) {
    const double ta = th[a];
    const Vec2 ga{grad.x1[a], grad.x2[a]};
    const Vec2 xa{src.x1[a], src.x2[a]};
    Vec2 u;
    if (ta != 0.0 || ga[0] != 0.0 || ga[1] != 0.0) {
      const Vec2 lo = kernel_sum(src.x1.data(), src.x2.data(), th.data(), src.jw.data(), 0, a, xa, ta);
      const Vec2 hi = kernel_sum(src.x1.data(), src.x2.data(), th.data(), src.jw.data(), a + 1, src.N, xa, ta);
      u = {kInvTwoPi * (lo[0] + hi[0]), kInvTwoPi * (lo[1] + hi[1])};
      if (ta != 0.0) {
        const Vec2 B = boundary_term(src.polygon, xa, src.labels, g.node(a), kBoundaryNearCells * h);
        u[0] += ta * B[0];
        u[1] += ta * B[1];
      }
      if (ga[0] != 0.0 || ga[1] != 0.0) {
        const LatticeConstants lc = lattice_constants(src.gradX[a]);
        const double c = h * src.J[a];
        u[0] += c * (lc.D[0] * ga[0] + lc.D[1] * ga[1]);
        u[1] += c * (lc.D[2] * ga[0] + lc.D[3] * ga[1]);
      }
    } else {
      const Vec2 s = kernel_sum(sup.x1.data(), sup.x2.data(), sup.q[0].data(), sup.jw.data(), 0, S, xa, 0.0);
      u = {kInvTwoPi * s[0], kInvTwoPi * s[1]};
    }
    out.x1[a] = u[0];
    out.x2[a] = u[1];
  });
  return out;
}

MatrixField2D eval_gradF(const FlowMap& X, const ScalarField2D& theta0, bool check_membership) {
  require_same_grid(X, theta0);
  check_decay(theta0);
  if (check_membership) require_membership(X);

  const Sources src(X);
  const Grid2D& g = src.g;
  const double h = g.h();
  const VectorField2D grad = gradient(theta0);

  // σ = ∇X^{−T}∇θ₀ and its label-space gradient.
  std::vector<double> s1(src.N), s2(src.N);
  for (std::size_t b = 0; b < src.N; ++b) {
    if (grad.x1[b] == 0.0 && grad.x2[b] == 0.0) {
      s1[b] = s2[b] = 0.0;
      continue;
    }
    const Mat2 inv = inverse(src.gradX[b]);
    s1[b] = inv[0] * grad.x1[b] + inv[2] * grad.x2[b];
    s2[b] = inv[1] * grad.x1[b] + inv[3] * grad.x2[b];
  }
  const Support sup = compact(src, {&s1, &s2});
  const std::size_t S = sup.x1.size();

  MatrixField2D out(g);
  parallel_for(src.N, [&](std::size_t a) {
    const int i = g.col(a), j = g.row(a);
    const double d11 = diff_x1(s1, g, i, j), d12 = diff_x2(s1, g, i, j);
    const double d21 = diff_x1(s2, g, i, j), d22 = diff_x2(s2, g, i, j);
    const Vec2 xa{src.x1[a], src.x2[a]};
    double A[2][2];  // A[i][l] = ∫ K_i σ_l J
    const bool active = s1[a] != 0.0 || s2[a] != 0.0 || d11 != 0.0 || d12 != 0.0 ||
                        d21 != 0.0 || d22 != 0.0;
    if (active) {
      const auto lo = kernel_sum2(src.x1.data(), src.x2.data(), s1.data(), s2.data(),
                                  src.jw.data(), 0, a, xa, s1[a], s2[a]);
      const auto hi = kernel_sum2(src.x1.data(), src.x2.data(), s1.data(), s2.data(),
                                  src.jw.data(), a + 1, src.N, xa, s1[a], s2[a]);
      A[0][0] = kInvTwoPi * (lo[0] + hi[0]);
      A[1][0] = kInvTwoPi * (lo[1] + hi[1]);
      A[0][1] = kInvTwoPi * (lo[2] + hi[2]);
      A[1][1] = kInvTwoPi * (lo[3] + hi[3]);
      if (s1[a] != 0.0 || s2[a] != 0.0) {
        const Vec2 B = boundary_term(src.polygon, xa, src.labels, g.node(a), kBoundaryNearCells * h);
        A[0][0] += s1[a] * B[0];
        A[1][0] += s1[a] * B[1];
        A[0][1] += s2[a] * B[0];
        A[1][1] += s2[a] * B[1];
      }
      const LatticeConstants lc = lattice_constants(src.gradX[a]);
      const double c = h * src.J[a];
      A[0][0] += c * (lc.D[0] * d11 + lc.D[1] * d12);
      A[1][0] += c * (lc.D[2] * d11 + lc.D[3] * d12);
      A[0][1] += c * (lc.D[0] * d21 + lc.D[1] * d22);
      A[1][1] += c * (lc.D[2] * d21 + lc.D[3] * d22);
    } else {
      const auto s = kernel_sum2(sup.x1.data(), sup.x2.data(), sup.q[0].data(), sup.q[1].data(),
                                 sup.jw.data(), 0, S, xa, 0.0, 0.0);
      A[0][0] = kInvTwoPi * s[0];
      A[1][0] = kInvTwoPi * s[1];
      A[0][1] = kInvTwoPi * s[2];
      A[1][1] = kInvTwoPi * s[3];
    }
    const Mat2& M = src.gradX[a];
    out.v[a] = {A[0][0] * M[0] + A[0][1] * M[2], A[0][0] * M[1] + A[0][1] * M[3],
                A[1][0] * M[0] + A[1][1] * M[2], A[1][0] * M[1] + A[1][1] * M[3]};
  });
  return out;
}

namespace {

double potential_sum(const double* p1, const double* p2, const double* q, std::size_t begin,
                     std::size_t end, const Vec2& x) {
  double acc[4] = {0, 0, 0, 0};
  std::size_t b = begin;
  for (; b + 4 <= end; b += 4) {
    for (int k = 0; k < 4; ++k) {
      const double d1 = x[0] - p1[b + k], d2 = x[1] - p2[b + k];
      acc[k] += q[b + k] / std::sqrt(d1 * d1 + d2 * d2);
    }
  }
  for (int k = 0; b < end; ++b, ++k) {
    const double d1 = x[0] - p1[b], d2 = x[1] - p2[b];
    acc[k] += q[b] / std::sqrt(d1 * d1 + d2 * d2);
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

double energy(const FlowMap& X, const ScalarField2D& theta0) {
  require_same_grid(X, theta0);
  const Sources src(X);
  const double h = src.g.h();
  std::vector<std::size_t> idx;
  std::vector<double> p1, p2, q;
  for (std::size_t b = 0; b < src.N; ++b) {
    if (theta0.v[b] == 0.0) continue;
    idx.push_back(b);
    p1.push_back(src.x1[b]);
    p2.push_back(src.x2[b]);
    q.push_back(theta0.v[b] * src.jw[b]);
  }
  const std::size_t S = idx.size();
  std::vector<double> per(S);
  parallel_for(S, [&](std::size_t k) {
    const std::size_t a = idx[k];
    const Vec2 xa{p1[k], p2[k]};
    const double inner = kInvTwoPi * (potential_sum(p1.data(), p2.data(), q.data(), 0, k, xa) +
                                      potential_sum(p1.data(), p2.data(), q.data(), k + 1, S, xa));
    const double ga = theta0.v[a] * src.J[a];
    const double self = -h * ga * lattice_constants(src.gradX[a]).Z;
    per[k] = q[k] * (inner + self);
  });
  double e = 0.0;
  for (double v : per) e += v;
  return e;
}

ScalarField2D eulerian_theta(const FlowMap& X, const ScalarField2D& theta0) {
  require_same_grid(X, theta0);
  const Grid2D& g = X.grid;
  ScalarField2D out(g, theta0.gamma);
  const double L = g.L;
  parallel_for(g.size(), [&](std::size_t k) {
    const Vec2 x = g.node(k);
    Vec2 a = x;
    bool clamped = false;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      clamped = false;
      for (double& c : a) {
        if (c > L) { c = L; clamped = true; }
        if (c < -L) { c = -L; clamped = true; }
      }
      const InterpSample p = interpolate(X.y1, g, a);
      const InterpSample q = interpolate(X.y2, g, a);
      const Vec2 r{a[0] + p.value - x[0], a[1] + q.value - x[1]};
      if (std::hypot(r[0], r[1]) <= 1e-13 * L) {
        converged = true;
        break;
      }
      const Mat2 M{1.0 + p.grad[0], p.grad[1], q.grad[0], 1.0 + q.grad[1]};
      const Mat2 inv = inverse(M);
      a[0] -= inv[0] * r[0] + inv[1] * r[1];
      a[1] -= inv[2] * r[0] + inv[3] * r[1];
    }
    if (!converged) {
      if (clamped) {
        out.v[k] = 0.0;  // preimage lies outside the box, where θ₀ vanishes
        return;
      }
      throw NumericalDomainError("eulerian_theta: Newton inversion did not converge");
    }
    out.v[k] = interpolate_value(theta0.v, g, a);
  });
  return out;
}

namespace {

void axpy(FlowMap& out, const FlowMap& X, double s, const VectorField2D& k) {
  for (std::size_t i = 0; i < X.y1.size(); ++i) {
    out.y1[i] = X.y1[i] + s * k.x1[i];
    out.y2[i] = X.y2[i] + s * k.x2[i];
  }
}

}  // namespace

EvolveResult evolve(const ScalarField2D& theta0, const EvolveOptions& opt) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw ValidationError("dt must be > 0");
  if (!(opt.t_end > 0.0) || !std::isfinite(opt.t_end)) throw ValidationError("t_end must be > 0");
  const double ratio = opt.t_end / opt.dt;
  if (ratio > kMaxFlowSteps) throw ValidationError("t_end/dt exceeds the step-count guard of 1e6");
  if (opt.snapshot_stride < 0) throw ValidationError("snapshot stride must be >= 0");
  check_decay(theta0);

  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
  EvolveResult res;
  res.X = FlowMap::identity(theta0.grid, theta0.gamma);
  if (opt.track_energy) res.energy0 = energy(res.X, theta0);
  if (opt.snapshot_stride > 0) {
    res.snapshot_times.push_back(0.0);
    res.snapshots.push_back(res.X);
  }

  FlowMap stage = res.X;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t0 = static_cast<double>(n) * opt.dt;
    const double t1 = n + 1 == steps ? opt.t_end : static_cast<double>(n + 1) * opt.dt;
    const double dt = t1 - t0;
    const FlowMap& X = res.X;
    const VectorField2D k1 = eval_F(X, theta0, false);
    axpy(stage, X, 0.5 * dt, k1);
    const VectorField2D k2 = eval_F(stage, theta0, false);
    axpy(stage, X, 0.5 * dt, k2);
    const VectorField2D k3 = eval_F(stage, theta0, false);
    axpy(stage, X, dt, k3);
    const VectorField2D k4 = eval_F(stage, theta0, false);
    FlowMap next = X;
    for (std::size_t i = 0; i < X.y1.size(); ++i) {
      next.y1[i] += dt / 6.0 * (k1.x1[i] + 2.0 * k2.x1[i] + 2.0 * k3.x1[i] + k4.x1[i]);
      next.y2[i] += dt / 6.0 * (k1.x2[i] + 2.0 * k2.x2[i] + 2.0 * k3.x2[i] + k4.x2[i]);
    }
    res.X = std::move(next);
    res.t = t1;

    StepRecord rec;
    rec.t = t1;
    rec.report = membership(res.X, res.X.gamma);
    const ScalarField2D J = jacobian_det(res.X);
    for (double v : J.v) rec.max_jac_dev = std::max(rec.max_jac_dev, std::abs(v - 1.0));
    res.max_jac_dev = std::max(res.max_jac_dev, rec.max_jac_dev);
    if (rec.report.in_O) {
      res.max_chord_arc = std::max(res.max_chord_arc, rec.report.chord_arc_lambda);
    }
    const bool left = !rec.report.in_O;
    std::string failed = left ? rec.report.failed.front() : "";
    res.steps.push_back(std::move(rec));
    if (opt.snapshot_stride > 0 &&
        ((n + 1) % static_cast<std::size_t>(opt.snapshot_stride) == 0 || n + 1 == steps || left)) {
      res.snapshot_times.push_back(t1);
      res.snapshots.push_back(res.X);
    }
    if (left) {
      std::ostringstream msg;
      msg << "flow left O at t=" << t1 << " (failed " << failed << ")";
      res.halted = true;
      res.halt_reason = msg.str();
      break;
    }
  }
  if (opt.track_energy) res.energy1 = energy(res.X, theta0);
  return res;
}

FlowMap exp_map(const ScalarField2D& theta0, double dt) {
  EvolveOptions opt;
  opt.t_end = 1.0;
  opt.dt = dt;
  opt.track_energy = false;
  EvolveResult r = evolve(theta0, opt);
  if (r.halted) {
    const std::string failed =
        r.steps.empty() || r.steps.back().report.failed.empty() ? "membership"
                                                               : r.steps.back().report.failed.front();
    throw MembershipError(failed, "exp_map: " + r.halt_reason);
  }
  return std::move(r.X);
}

namespace {

ScalarField2D combine(const ScalarField2D& base, double a, const ScalarField2D& d1, double b,
                      const ScalarField2D& d2) {
  ScalarField2D out = base;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += a * d1.v[k] + b * d2.v[k];
  return out;
}

// (E(p) − E(m))·s, on displacement samples.
std::vector<double> scaled_diff(const FlowMap& p, const FlowMap& m, double s) {
  std::vector<double> out(2 * p.y1.size());
  for (std::size_t k = 0; k < p.y1.size(); ++k) {
    out[2 * k] = (p.y1[k] - m.y1[k]) * s;
    out[2 * k + 1] = (p.y2[k] - m.y2[k]) * s;
  }
  return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

}  // namespace

SmoothnessReport fd_smoothness_probe(const ScalarField2D& theta0, const ScalarField2D& dtheta,
                                     const ScalarField2D& dtheta2,
                                     const std::vector<double>& eps_list, double dt) {
  if (eps_list.size() < 3) throw ValidationError("smoothness probe needs at least three eps values");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ValidationError("eps values must be > 0");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw ValidationError("eps values must be strictly decreasing");
    }
  }
  if (!(dtheta.grid == theta0.grid) || !(dtheta2.grid == theta0.grid)) {
    throw ValidationError("perturbation directions must share the grid of theta0");
  }

  SmoothnessReport rep;
  rep.eps = eps_list;
  const FlowMap base = exp_map(theta0, dt);
  std::vector<std::vector<double>> first, second;
  for (double e : eps_list) {
    const FlowMap p = exp_map(combine(theta0, e, dtheta, 0.0, dtheta2), dt);
    const FlowMap m = exp_map(combine(theta0, -e, dtheta, 0.0, dtheta2), dt);
    first.push_back(scaled_diff(p, m, 0.5 / e));
    std::vector<double> sec(2 * p.y1.size());
    for (std::size_t k = 0; k < p.y1.size(); ++k) {
      sec[2 * k] = (p.y1[k] - 2.0 * base.y1[k] + m.y1[k]) / (e * e);
      sec[2 * k + 1] = (p.y2[k] - 2.0 * base.y2[k] + m.y2[k]) / (e * e);
    }
    second.push_back(std::move(sec));

    // Outer step e along one direction, inner e/2 along the other.
    const double in = 0.5 * e;
    auto mixed = [&](const ScalarField2D& outer, const ScalarField2D& inner) {
      const FlowMap pp = exp_map(combine(theta0, e, outer, in, inner), dt);
      const FlowMap pm = exp_map(combine(theta0, e, outer, -in, inner), dt);
      const FlowMap mp = exp_map(combine(theta0, -e, outer, in, inner), dt);
      const FlowMap mm = exp_map(combine(theta0, -e, outer, -in, inner), dt);
      std::vector<double> d(2 * pp.y1.size());
      const double s = 1.0 / (4.0 * e * in);
      for (std::size_t k = 0; k < pp.y1.size(); ++k) {
        d[2 * k] = (pp.y1[k] - pm.y1[k] - mp.y1[k] + mm.y1[k]) * s;
        d[2 * k + 1] = (pp.y2[k] - pm.y2[k] - mp.y2[k] + mm.y2[k]) * s;
      }
      return d;
    };
    rep.mixed_defect.push_back(sup_diff(mixed(dtheta2, dtheta), mixed(dtheta, dtheta2)));
  }
  auto slopes = [&](const std::vector<std::vector<double>>& d, std::vector<double>& diffs,
                    std::vector<double>& sl) {
    for (std::size_t k = 0; k + 1 < d.size(); ++k) diffs.push_back(sup_diff(d[k], d[k + 1]));
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
      sl.push_back(std::log(diffs[k] / diffs[k + 1]) / std::log(eps_list[k] / eps_list[k + 1]));
    }
  };
  slopes(first, rep.first_diff, rep.first_slopes);
  slopes(second, rep.second_diff, rep.second_slopes);
  rep.min_first_slope = std::numeric_limits<double>::infinity();
  for (double s : rep.first_slopes) rep.min_first_slope = std::min(rep.min_first_slope, s);
  rep.mixed_decreasing = true;
  for (std::size_t k = 0; k + 1 < rep.mixed_defect.size(); ++k) {
    rep.mixed_decreasing = rep.mixed_decreasing && rep.mixed_defect[k + 1] < rep.mixed_defect[k];
  }
  return rep;
}

}  // namespace sqg::lagrangian
