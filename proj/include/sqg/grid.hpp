#pragma once

// Uniform node grid on the box [−L, L]² and the fields sampled on it.
// Nodes sit at x = (i − m)·h, i = 0..2m, with h = L/m; storage is row-major
// with the x1 index fastest (index = j·n + i).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sqg::lagrangian {

using Vec2 = std::array<double, 2>;
// Row-major 2×2: {a11, a12, a21, a22}.
using Mat2 = std::array<double, 4>;

inline double det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }
Mat2 inverse(const Mat2& m);
inline double max_abs_entry(const Mat2& m) {
  double r = 0.0;
  for (double v : m) r = std::max(r, std::abs(v));
  return r;
}

struct Grid2D {
  double L = 4.0;
  int m = 64;  // cells per half side

  Grid2D() = default;
  Grid2D(double half_width, int cells_per_half);
  // h must divide L to within 1e−9 relative.
  static Grid2D from_spacing(double half_width, double h);

  int n() const { return 2 * m + 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(n()) * static_cast<std::size_t>(n());
  }
  double h() const { return L / m; }
  double coord(int i) const { return (i - m) * h(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n()) +
           static_cast<std::size_t>(i);
  }
  int col(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(n())); }
  int row(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(n())); }
  Vec2 node(std::size_t idx) const { return {coord(col(idx)), coord(row(idx))}; }
  bool contains(const Vec2& x) const;
  // Trapezoid weight of a node: h² inside, halved per boundary side.
  double weight(int i, int j) const;

  bool operator==(const Grid2D& o) const { return L == o.L && m == o.m; }
};

struct ScalarField2D {
  Grid2D grid;
  double gamma = 0.5;
  std::vector<double> v;

  ScalarField2D() = default;
  ScalarField2D(Grid2D g, double gamma_, double fill = 0.0);

  double& at(int i, int j) { return v[grid.index(i, j)]; }
  double at(int i, int j) const { return v[grid.index(i, j)]; }
  double max_abs() const;
  // Largest |value| in the outer 10% margin of the box.
  double margin_max() const;
};

struct VectorField2D {
  Grid2D grid;
  std::vector<double> x1, x2;

  VectorField2D() = default;
  explicit VectorField2D(Grid2D g);
};

struct MatrixField2D {
  Grid2D grid;
  std::vector<Mat2> v;

  MatrixField2D() = default;
  explicit MatrixField2D(Grid2D g);
};

// X = id + Y sampled at the nodes.
struct FlowMap {
  Grid2D grid;
  double gamma = 0.5;
  std::vector<double> y1, y2;

  FlowMap() = default;
  FlowMap(Grid2D g, double gamma_);
  static FlowMap identity(Grid2D g, double gamma_ = 0.5);

  Vec2 X(std::size_t idx) const;
  Vec2 Y(std::size_t idx) const { return {y1[idx], y2[idx]}; }
};

// Second-order differences: centred inside, one-sided at the boundary.
double diff_x1(const std::vector<double>& f, const Grid2D& g, int i, int j);
double diff_x2(const std::vector<double>& f, const Grid2D& g, int i, int j);
VectorField2D gradient(const ScalarField2D& f);
// ∇Y; add the identity for ∇X.
MatrixField2D displacement_gradient(const FlowMap& X);
MatrixField2D flow_gradient(const FlowMap& X);
ScalarField2D jacobian_det(const FlowMap& X);

// Keys cubic convolution (a = −1/2) with linear extrapolation past the edge.
// Reproduces the samples and every affine function.
struct InterpSample {
  double value = 0.0;
  Vec2 grad{};
};
InterpSample interpolate(const std::vector<double>& f, const Grid2D& g, const Vec2& x);
double interpolate_value(const std::vector<double>& f, const Grid2D& g, const Vec2& x);

}  // namespace sqg::lagrangian
