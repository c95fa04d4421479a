#include "sqg/membership.hpp"

#include <cmath>
#include <limits>

#include "sqg/errors.hpp"

namespace sqg::lagrangian {

namespace {

struct Offset {
  int di, dj;
  double dist;  // in units of h
};

std::vector<Offset> local_and_axis_offsets(int n) {
  std::vector<Offset> out;
  for (int dj = 0; dj <= 4; ++dj) {
    for (int di = -4; di <= 4; ++di) {
      if (dj == 0 && di <= 0) continue;
      if (di * di + dj * dj > 16) continue;
      out.push_back({di, dj, std::hypot(di, dj)});
    }
  }
  for (int d = 5; d <= n - 1;) {
    out.push_back({d, 0, static_cast<double>(d)});
    out.push_back({0, d, static_cast<double>(d)});
    d = std::max(d + 1, static_cast<int>(std::lround(d * 1.15)));
  }
  return out;
}

template <class Fn>
void visit_pairs(const Grid2D& g, Fn&& fn) {
  const int n = g.n();
  const double h = g.h();
  for (const Offset& o : local_and_axis_offsets(n)) {
    const double dist = o.dist * h;
    const int i_lo = std::max(0, -o.di), i_hi = std::min(n, n - o.di);
    for (int j = 0; j + o.dj < n; ++j) {
      for (int i = i_lo; i < i_hi; ++i) {
        fn(g.index(i, j), g.index(i + o.di, j + o.dj), dist);
      }
    }
  }
  // R2 sequence in four dimensions (plastic-number generalisation).
  constexpr double kPhi4 = 1.1673039782614187;
  const double a1 = 1.0 / kPhi4, a2 = a1 / kPhi4, a3 = a2 / kPhi4, a4 = a3 / kPhi4;
  auto frac = [](double v) { return v - std::floor(v); };
  for (std::size_t k = 1; k <= kLongRangePairs; ++k) {
    const double kk = static_cast<double>(k);
    const int i1 = std::min(n - 1, static_cast<int>(frac(0.5 + a1 * kk) * n));
    const int j1 = std::min(n - 1, static_cast<int>(frac(0.5 + a2 * kk) * n));
    const int i2 = std::min(n - 1, static_cast<int>(frac(0.5 + a3 * kk) * n));
    const int j2 = std::min(n - 1, static_cast<int>(frac(0.5 + a4 * kk) * n));
    if (i1 == i2 && j1 == j2) continue;
    fn(g.index(i1, j1), g.index(i2, j2), h * std::hypot(i2 - i1, j2 - j1));
  }
}

}  // namespace

void for_each_sample_pair(const Grid2D& g,
                          const std::function<void(std::size_t, std::size_t, double)>& fn) {
  visit_pairs(g, fn);
}

HolderParts holder_parts(const FlowMap& Y, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
  HolderParts p;
  for (std::size_t k = 0; k < Y.y1.size(); ++k) {
    p.sup = std::max({p.sup, std::abs(Y.y1[k]), std::abs(Y.y2[k])});
  }
  const MatrixField2D dY = displacement_gradient(Y);
  for (const Mat2& m : dY.v) p.sup_grad = std::max(p.sup_grad, max_abs_entry(m));
  double semi = 0.0;
  visit_pairs(Y.grid, [&](std::size_t a, std::size_t b, double dist) {
    const Mat2& A = dY.v[a];
    const Mat2& B = dY.v[b];
    const double d = std::max({std::abs(A[0] - B[0]), std::abs(A[1] - B[1]),
                               std::abs(A[2] - B[2]), std::abs(A[3] - B[3])});
    if (d > 0.0) semi = std::max(semi, d / std::pow(dist, gamma));
  });
  p.seminorm = semi;
  return p;
}

double holder_norm(const FlowMap& Y, double gamma) { return holder_parts(Y, gamma).total(); }

MembershipReport membership(const FlowMap& X, double gamma) {
  MembershipReport r;
  r.parts = holder_parts(X, gamma);
  r.holder_norm = r.parts.total();
  const MatrixField2D dX = flow_gradient(X);
  r.inf_det = std::numeric_limits<double>::infinity();
  for (const Mat2& m : dX.v) {
    const double d = det(m);
    r.inf_det = std::min(r.inf_det, d);
    if (d > 0.0) {
      r.grad_inv_bound = std::max(r.grad_inv_bound, max_abs_entry(inverse(m)));
    } else {
      r.grad_inv_bound = std::numeric_limits<double>::infinity();
    }
  }
  double lam = 1.0;
  visit_pairs(X.grid, [&](std::size_t a, std::size_t b, double dist) {
    const Vec2 xa = X.X(a), xb = X.X(b);
    const double img = std::hypot(xa[0] - xb[0], xa[1] - xb[1]);
    const double ratio = img / dist;
    lam = std::max(lam, img > 0.0 ? std::max(ratio, 1.0 / ratio)
                                  : std::numeric_limits<double>::infinity());
  });
  r.chord_arc_lambda = lam;
  if (!(r.inf_det > kInfDetBound)) r.failed.push_back("inf_det");
  if (!(r.holder_norm < kHolderBound)) r.failed.push_back("holder_norm");
  r.in_O = r.failed.empty();
  return r;
}

}  // namespace sqg::lagrangian
