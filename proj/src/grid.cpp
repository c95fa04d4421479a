#include "sqg/grid.hpp"

#include <cmath>
#include <string>

#include "sqg/errors.hpp"

namespace sqg::lagrangian {

Mat2 inverse(const Mat2& m) {
  const double d = det(m);
  if (d == 0.0 || !std::isfinite(d)) {
    throw NumericalDomainError("singular 2x2 matrix");
  }
  return {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
}

Grid2D::Grid2D(double half_width, int cells_per_half) : L(half_width), m(cells_per_half) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("box half-width L must be > 0");
  if (m < 2) throw ValidationError("grid needs at least 2 cells per half side");
  if (m > 4096) throw ValidationError("grid too fine (more than 4096 cells per half side)");
}

Grid2D Grid2D::from_spacing(double half_width, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("grid spacing h must be > 0");
  const double ratio = half_width / h;
  const double r = std::round(ratio);
  if (r < 1.0 || std::abs(ratio - r) > 1e-9 * ratio) {
    throw ValidationError("L/h must be an integer (got " + std::to_string(ratio) + ")");
  }
  return Grid2D(half_width, static_cast<int>(r));
}

bool Grid2D::contains(const Vec2& x) const {
  const double tol = 1e-12 * L;
  return std::abs(x[0]) <= L + tol && std::abs(x[1]) <= L + tol;
}

double Grid2D::weight(int i, int j) const {
  double w = h() * h();
  if (i == 0 || i == n() - 1) w *= 0.5;
  if (j == 0 || j == n() - 1) w *= 0.5;
  return w;
}

ScalarField2D::ScalarField2D(Grid2D g, double gamma_, double fill)
    : grid(g), gamma(gamma_), v(g.size(), fill) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
}

double ScalarField2D::max_abs() const {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double ScalarField2D::margin_max() const {
  const double inner = 0.9 * grid.L;
  double r = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    for (int i = 0; i < grid.n(); ++i) {
      if (std::abs(grid.coord(i)) > inner || std::abs(grid.coord(j)) > inner) {
        r = std::max(r, std::abs(at(i, j)));
      }
    }
  }
  return r;
}

VectorField2D::VectorField2D(Grid2D g) : grid(g), x1(g.size(), 0.0), x2(g.size(), 0.0) {}

MatrixField2D::MatrixField2D(Grid2D g) : grid(g), v(g.size(), Mat2{0, 0, 0, 0}) {}

FlowMap::FlowMap(Grid2D g, double gamma_)
    : grid(g), gamma(gamma_), y1(g.size(), 0.0), y2(g.size(), 0.0) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
}

FlowMap FlowMap::identity(Grid2D g, double gamma_) { return FlowMap(g, gamma_); }

Vec2 FlowMap::X(std::size_t idx) const {
  const Vec2 a = grid.node(idx);
  return {a[0] + y1[idx], a[1] + y2[idx]};
}

namespace {

double diff1(const std::vector<double>& f, const Grid2D& g, int i, int j, bool along_x1) {
  const int n = g.n();
  const int k = along_x1 ? i : j;
  auto at = [&](int kk) {
    return along_x1 ? f[g.index(kk, j)] : f[g.index(i, kk)];
  };
  const double h = g.h();
  if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

}  // namespace

double diff_x1(const std::vector<double>& f, const Grid2D& g, int i, int j) {
  return diff1(f, g, i, j, true);
}

double diff_x2(const std::vector<double>& f, const Grid2D& g, int i, int j) {
  return diff1(f, g, i, j, false);
}

VectorField2D gradient(const ScalarField2D& f) {
  VectorField2D out(f.grid);
  const Grid2D& g = f.grid;
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      out.x1[g.index(i, j)] = diff_x1(f.v, g, i, j);
      out.x2[g.index(i, j)] = diff_x2(f.v, g, i, j);
    }
  }
  return out;
}

MatrixField2D displacement_gradient(const FlowMap& X) {
  MatrixField2D out(X.grid);
  const Grid2D& g = X.grid;
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      out.v[g.index(i, j)] = {diff_x1(X.y1, g, i, j), diff_x2(X.y1, g, i, j),
                              diff_x1(X.y2, g, i, j), diff_x2(X.y2, g, i, j)};
    }
  }
  return out;
}

MatrixField2D flow_gradient(const FlowMap& X) {
  MatrixField2D out = displacement_gradient(X);
  for (auto& m : out.v) {
    m[0] += 1.0;
    m[3] += 1.0;
  }
  return out;
}

ScalarField2D jacobian_det(const FlowMap& X) {
  const MatrixField2D grad = flow_gradient(X);
  ScalarField2D out(X.grid, X.gamma);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = det(grad.v[k]);
  return out;
}

namespace {

constexpr double kKeysA = -0.5;

double keys_w(double s) {
  s = std::abs(s);
  if (s <= 1.0) return ((kKeysA + 2.0) * s - (kKeysA + 3.0)) * s * s + 1.0;
  if (s < 2.0) return ((kKeysA * s - 5.0 * kKeysA) * s + 8.0 * kKeysA) * s - 4.0 * kKeysA;
  return 0.0;
}

double keys_dw(double s) {
  const double sg = s < 0.0 ? -1.0 : 1.0;
  s = std::abs(s);
  if (s <= 1.0) return sg * (3.0 * (kKeysA + 2.0) * s - 2.0 * (kKeysA + 3.0)) * s;
  if (s < 2.0) return sg * ((3.0 * kKeysA * s - 10.0 * kKeysA) * s + 8.0 * kKeysA);
  return 0.0;
}

// Sample with linear extrapolation one node past each edge.
double fetch(const std::vector<double>& f, const Grid2D& g, int i, int j) {
  const int n = g.n();
  if (j < 0) return 2.0 * fetch(f, g, i, 0) - fetch(f, g, i, 1);
  if (j >= n) return 2.0 * fetch(f, g, i, n - 1) - fetch(f, g, i, n - 2);
  if (i < 0) return 2.0 * f[g.index(0, j)] - f[g.index(1, j)];
  if (i >= n) return 2.0 * f[g.index(n - 1, j)] - f[g.index(n - 2, j)];
  return f[g.index(i, j)];
}

void locate(const Grid2D& g, double x, int& i0, double& t) {
  const double u = x / g.h() + g.m;
  i0 = static_cast<int>(std::floor(u));
  i0 = std::clamp(i0, 0, g.n() - 2);
  t = u - i0;
}

}  // namespace

InterpSample interpolate(const std::vector<double>& f, const Grid2D& g, const Vec2& x) {
  if (!g.contains(x)) {
    throw ValidationError("interpolation point outside the box");
  }
  int i0, j0;
  double tx, ty;
  locate(g, x[0], i0, tx);
  locate(g, x[1], j0, ty);
  double wx[4], wy[4], dx[4], dy[4];
  for (int k = 0; k < 4; ++k) {
    wx[k] = keys_w(tx - (k - 1));
    wy[k] = keys_w(ty - (k - 1));
    dx[k] = keys_dw(tx - (k - 1));
    dy[k] = keys_dw(ty - (k - 1));
  }
  InterpSample s;
  for (int l = 0; l < 4; ++l) {
    double row = 0.0, drow = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double v = fetch(f, g, i0 - 1 + k, j0 - 1 + l);
      row += wx[k] * v;
      drow += dx[k] * v;
    }
    s.value += wy[l] * row;
    s.grad[0] += wy[l] * drow;
    s.grad[1] += dy[l] * row;
  }
  s.grad[0] /= g.h();
  s.grad[1] /= g.h();
  return s;
}

double interpolate_value(const std::vector<double>& f, const Grid2D& g, const Vec2& x) {
  return interpolate(f, g, x).value;
}

}  // namespace sqg::lagrangian
