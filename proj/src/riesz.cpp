#include "sqg/riesz.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sqg/errors.hpp"
#include "sqg/lattice_correction.hpp"

namespace sqg::lagrangian {

namespace {
constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
}

Vec2 kernel_sum(const double* p1, const double* p2, const double* q,
                const double* w, std::size_t begin, std::size_t end, const Vec2& x,
                double qx) {
  double a1[4] = {0, 0, 0, 0};
  double a2[4] = {0, 0, 0, 0};
  const double x1 = x[0], x2 = x[1];
  std::size_t b = begin;
  for (; b + 4 <= end; b += 4) {
    for (int k = 0; k < 4; ++k) {
      const double d1 = x1 - p1[b + k];
      const double d2 = x2 - p2[b + k];
      const double r2 = d1 * d1 + d2 * d2;
      const double c = (q[b + k] - qx) * w[b + k] / (r2 * std::sqrt(r2));
      a1[k] -= d2 * c;
      a2[k] += d1 * c;
    }
  }
  for (int k = 0; b < end; ++b, ++k) {
    const double d1 = x1 - p1[b];
    const double d2 = x2 - p2[b];
    const double r2 = d1 * d1 + d2 * d2;
    const double c = (q[b] - qx) * w[b] / (r2 * std::sqrt(r2));
    a1[k] -= d2 * c;
    a2[k] += d1 * c;
  }
  return {(a1[0] + a1[1]) + (a1[2] + a1[3]), (a2[0] + a2[1]) + (a2[2] + a2[3])};
}

std::array<double, 4> kernel_sum2(const double* p1, const double* p2,
                                  const double* q1, const double* q2,
                                  const double* w, std::size_t begin,
                                  std::size_t end, const Vec2& x, double qx1,
                                  double qx2) {
  double a[4][4] = {};
  const double x1 = x[0], x2 = x[1];
  auto step = [&](std::size_t bb, int k) {
    const double d1 = x1 - p1[bb];
    const double d2 = x2 - p2[bb];
    const double r2 = d1 * d1 + d2 * d2;
    const double s = w[bb] / (r2 * std::sqrt(r2));
    const double c1 = (q1[bb] - qx1) * s;
    const double c2 = (q2[bb] - qx2) * s;
    a[0][k] -= d2 * c1;
    a[1][k] += d1 * c1;
    a[2][k] -= d2 * c2;
    a[3][k] += d1 * c2;
  };
  std::size_t b = begin;
  for (; b + 4 <= end; b += 4) {
    for (int k = 0; k < 4; ++k) step(b + k, k);
  }
  for (int k = 0; b < end; ++b, ++k) step(b, k);
  std::array<double, 4> out{};
  for (int c = 0; c < 4; ++c) out[c] = (a[c][0] + a[c][1]) + (a[c][2] + a[c][3]);
  return out;
}

namespace {

template <class At>
std::vector<Vec2> walk_boundary(const Grid2D& g, At&& at) {
  const int n = g.n();
  std::vector<Vec2> poly;
  poly.reserve(static_cast<std::size_t>(4 * (n - 1)));
  for (int i = 0; i < n - 1; ++i) poly.push_back(at(i, 0));
  for (int j = 0; j < n - 1; ++j) poly.push_back(at(n - 1, j));
  for (int i = n - 1; i > 0; --i) poly.push_back(at(i, n - 1));
  for (int j = n - 1; j > 0; --j) poly.push_back(at(0, j));
  return poly;
}

// (1/2π) ∫_P^Q dy/|x − y| as a vector along Q − P.
Vec2 segment_term(const Vec2& x, const Vec2& P, const Vec2& Q) {
  const double d1 = Q[0] - P[0], d2 = Q[1] - P[1];
  const double len = std::hypot(d1, d2);
  if (len == 0.0) return {0.0, 0.0};
  const double u1 = d1 / len, u2 = d2 / len;
  const double w1 = x[0] - P[0], w2 = x[1] - P[1];
  const double along = w1 * u1 + w2 * u2;
  const double rho = std::abs(w1 * u2 - w2 * u1);
  const double s0 = -along, s1 = len - along;
  const double r0 = std::hypot(s0, rho), r1 = std::hypot(s1, rho);
  double v;
  if (s0 >= 0.0) {
    v = std::log((s1 + r1) / (s0 + r0));
  } else if (s1 <= 0.0) {
    v = std::log((r0 - s0) / (r1 - s1));
  } else {
    if (rho == 0.0) {
      throw NumericalDomainError("boundary term evaluated on the boundary");
    }
    v = std::asinh(s1 / rho) - std::asinh(s0 / rho);
  }
  return {kInvTwoPi * v * u1, kInvTwoPi * v * u2};
}

// Same integral by 4-point Gauss-Legendre, for segments far from x.
Vec2 segment_term_far(const Vec2& x, const Vec2& P, const Vec2& Q) {
  static constexpr double kNode[2] = {0.33998104358485626, 0.86113631159405258};
  static constexpr double kWeight[2] = {0.65214515486254614, 0.34785484513745386};
  const double d1 = Q[0] - P[0], d2 = Q[1] - P[1];
  const double m1 = 0.5 * (P[0] + Q[0]) - x[0], m2 = 0.5 * (P[1] + Q[1]) - x[1];
  double acc = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double t = 0.5 * kNode[k];
    const double a1 = m1 + t * d1, a2 = m2 + t * d2;
    const double b1 = m1 - t * d1, b2 = m2 - t * d2;
    acc += kWeight[k] * (1.0 / std::sqrt(a1 * a1 + a2 * a2) + 1.0 / std::sqrt(b1 * b1 + b2 * b2));
  }
  const double c = 0.5 * kInvTwoPi * acc;
  return {c * d1, c * d2};
}

}  // namespace

std::vector<Vec2> boundary_polygon(const FlowMap& X) {
  return walk_boundary(X.grid, [&](int i, int j) { return X.X(X.grid.index(i, j)); });
}

std::vector<Vec2> boundary_polygon(const Grid2D& g) {
  return walk_boundary(g, [&](int i, int j) { return Vec2{g.coord(i), g.coord(j)}; });
}

Vec2 boundary_term(const std::vector<Vec2>& polygon, const Vec2& x) {
  Vec2 acc{0.0, 0.0};
  const std::size_t n = polygon.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 s = segment_term(x, polygon[k], polygon[(k + 1) % n]);
    acc[0] += s[0];
    acc[1] += s[1];
  }
  return acc;
}

Vec2 boundary_term(const std::vector<Vec2>& polygon, const Vec2& x,
                   const std::vector<Vec2>& labels, const Vec2& a, double near) {
  Vec2 acc{0.0, 0.0};
  const std::size_t n = polygon.size();
  const double near2 = near * near;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const double c1 = 0.5 * (labels[k][0] + labels[k1][0]) - a[0];
    const double c2 = 0.5 * (labels[k][1] + labels[k1][1]) - a[1];
    const Vec2 s = c1 * c1 + c2 * c2 < near2 ? segment_term(x, polygon[k], polygon[k1])
                                             : segment_term_far(x, polygon[k], polygon[k1]);
    acc[0] += s[0];
    acc[1] += s[1];
  }
  return acc;
}

void check_decay(const ScalarField2D& theta) {
  const double m = theta.margin_max();
  if (!(m < kDecayTolerance)) {
    std::ostringstream msg;
    msg << "theta does not decay: max |theta| in the outer 10% margin is " << m
        << " (needs < 1e-12)";
    throw ValidationError(msg.str());
  }
}

RieszResult riesz_velocity(const ScalarField2D& theta, const Vec2& x) {
  const Grid2D& g = theta.grid;
  if (!g.contains(x)) throw ValidationError("riesz_velocity: point outside the box");
  check_decay(theta);
  const double h = g.h();
  const int n = g.n();
  const int i0 = std::clamp(static_cast<int>(std::lround(x[0] / h)) + g.m, 0, n - 1);
  const int j0 = std::clamp(static_cast<int>(std::lround(x[1] / h)) + g.m, 0, n - 1);
  const Vec2 s{(x[0] - g.coord(i0)) / h, (x[1] - g.coord(j0)) / h};
  const bool on_node = s[0] == 0.0 && s[1] == 0.0;

  double tx;
  Vec2 grad;
  if (on_node) {
    tx = theta.at(i0, j0);
    grad = {diff_x1(theta.v, g, i0, j0), diff_x2(theta.v, g, i0, j0)};
  } else {
    const InterpSample is = interpolate(theta.v, g, x);
    tx = is.value;
    grad = is.grad;
  }

  const std::size_t N = g.size();
  std::vector<double> p1(N), p2(N), w(N);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      p1[k] = g.coord(i);
      p2[k] = g.coord(j);
      w[k] = g.weight(i, j);
    }
  }
  const std::size_t self = g.index(i0, j0);
  const Vec2 lo = kernel_sum(p1.data(), p2.data(), theta.v.data(), w.data(), 0, self, x, tx);
  const Vec2 hi = kernel_sum(p1.data(), p2.data(), theta.v.data(), w.data(), self + 1, N, x, tx);

  RieszResult r;
  r.u = {kInvTwoPi * (lo[0] + hi[0]), kInvTwoPi * (lo[1] + hi[1])};
  if (tx != 0.0) {
    const std::vector<Vec2> poly = boundary_polygon(g);
    const Vec2 B = boundary_term(poly, x, poly, x, kBoundaryNearCells * h);
    r.u[0] += tx * B[0];
    r.u[1] += tx * B[1];
  }
  if (grad[0] != 0.0 || grad[1] != 0.0) {
    const LatticeConstants lc = lattice_constants({1.0, 0.0, 0.0, 1.0}, s);
    r.u[0] += h * (lc.D[0] * grad[0] + lc.D[1] * grad[1]);
    r.u[1] += h * (lc.D[2] * grad[0] + lc.D[3] * grad[1]);
  }

  // Hölder quotient of ∇θ on the surrounding 5×5 nodes.
  double semi = 0.0;
  const double gamma = theta.gamma;
  for (int dj = -2; dj <= 2; ++dj) {
    for (int di = -2; di <= 2; ++di) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || j < 0 || i >= n || j >= n) continue;
      const double dist = std::hypot(g.coord(i) - x[0], g.coord(j) - x[1]);
      if (dist == 0.0) continue;
      const double gx = diff_x1(theta.v, g, i, j) - grad[0];
      const double gy = diff_x2(theta.v, g, i, j) - grad[1];
      semi = std::max(semi, std::max(std::abs(gx), std::abs(gy)) / std::pow(dist, gamma));
    }
  }
  r.local_bound = semi * std::pow(h / std::numbers::sqrt2, 1.0 + gamma) /
                  ((1.0 + gamma) * (1.0 + gamma));
  return r;
}

}  // namespace sqg::lagrangian
