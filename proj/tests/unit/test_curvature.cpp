#include <gtest/gtest.h>

#include <cmath>

#include "sqg/curvature.hpp"
#include "sqg/errors.hpp"
#include "support/gen.hpp"

using namespace sqg::curvature;
using sqg::spectral::TrigField;
using sqg::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Values frozen from the independent hand expansion in
// FamilyValuesMatchHandExpansion below.
constexpr double kNegativeOverN3 = -15.046768557437231;
constexpr double kPositiveOverN3 = 4.3181431206838434;

}  // namespace

TEST(Curvature, FamilyValuesMatchHandExpansion) {
  // With F = |p| and p = 2π(1,0): |p∧q|² = 16π⁴ for both families.
  // negative, q = 2π(0,1): F(p±q) = 2π√2, bracket = π(4 − 3√2).
  const double neg_kbar = 16 * std::pow(kPi, 4) / 8 * kPi * (4 - 3 * kSqrt2);
  const double neg_k = neg_kbar / (kPi * kPi);
  // positive, q = 2π(1,1): F(q) = 2π√2, F(p+q) = 2π√5, F(p−q) = 2π.
  const double fp = 2 * kPi, fq = 2 * kPi * kSqrt2, fs = 2 * kPi * std::sqrt(5.0), fd = 2 * kPi;
  const double bracket = 0.25 * (fp - fq) * (fp - fq) * (1 / fs + 1 / fd) - 0.75 * (fs + fd) + fp + fq;
  const double pos_kbar = 16 * std::pow(kPi, 4) / 8 * bracket;
  const double pos_k = pos_kbar / ((fp / 2) * (fq / 2));

  EXPECT_NEAR(neg_k, kNegativeOverN3, 1e-12);
  EXPECT_NEAR(pos_k, kPositiveOverN3, 1e-12);
  EXPECT_NEAR(neg_k, 2 * (4 - 3 * kSqrt2) * std::pow(kPi, 3), 1e-12);
  EXPECT_NEAR(neg_kbar, -148.5, 0.05);
  EXPECT_NEAR(pos_kbar, 60.27, 0.005);
  // 0.19697·π⁵ is a five-digit rounding of 0.196953
  EXPECT_NEAR(pos_kbar / std::pow(kPi, 5), 0.19697, 2e-5);

  const MetricSymbol F = MetricSymbol::sqrt_laplacian();
  for (int n : {1, 2, 5, 9}) {
    const double n3 = double(n) * n * n, n5 = n3 * n * n;
    const CurvatureReport neg = normalized_curvature(family_pair(Family::kNegative, n), F);
    const CurvatureReport pos = normalized_curvature(family_pair(Family::kPositive, n), F);
    ASSERT_TRUE(neg.k && pos.k);
    EXPECT_NEAR(*neg.k / n3, kNegativeOverN3, 1e-12 * std::abs(kNegativeOverN3));
    EXPECT_NEAR(*pos.k / n3, kPositiveOverN3, 1e-12 * kPositiveOverN3);
    EXPECT_NEAR(neg.kbar / n5, neg_kbar, 1e-11 * std::abs(neg_kbar));
    EXPECT_NEAR(pos.kbar / n5, pos_kbar, 1e-11 * pos_kbar);
    EXPECT_NEAR(neg.norm_u2, n * kPi, 1e-12 * n);
    EXPECT_NEAR(pos.norm_v2, n * kPi * kSqrt2, 1e-12 * n);
    EXPECT_EQ(neg.cross, 0.0);
  }
}

TEST(Curvature, ScanIsExactlyCubic) {
  const MetricSymbol F = MetricSymbol::sqrt_laplacian();
  for (Family fam : {Family::kNegative, Family::kPositive}) {
    const auto rows = curvature_scan(fam, 20, F);
    ASSERT_EQ(rows.size(), 20U);
    for (const ScanRow& r : rows) {
      EXPECT_NEAR(r.k_over_n3, rows.front().k_over_n3, 1e-12 * std::abs(rows.front().k_over_n3));
      EXPECT_DOUBLE_EQ(r.k_over_n3, r.k / (double(r.n) * r.n * r.n));
    }
  }
  EXPECT_THROW(curvature_scan(Family::kNegative, 0, F), sqg::ValidationError);
}

TEST(CurvatureProperty, ClosedFormAgreesWithArnoldOracle) {
  Gen gen(11);
  for (const MetricSymbol& F : {MetricSymbol::sqrt_laplacian(), MetricSymbol::sobolev(0.0),
                                MetricSymbol::sobolev(0.7)}) {
    int tried = 0;
    while (tried < 150) {
      const ModePair pair{gen.lattice(5), gen.lattice(5)};
      if (pair.degenerate()) continue;
      ++tried;
      const double closed = khesin_nonnormalized(pair, F);
      const double arnold = arnold_curvature(TrigField::cos_mode(pair.p), TrigField::cos_mode(pair.q), F);
      EXPECT_NEAR(closed, arnold, 1e-10 * std::max(1.0, std::abs(closed)))
          << pair.p.jx() << "," << pair.p.ky() << " / " << pair.q.jx() << "," << pair.q.ky();
      const CurvatureReport a = normalized_curvature(pair, F, Method::kClosedForm);
      const CurvatureReport b = normalized_curvature(pair, F, Method::kArnoldOracle);
      EXPECT_NEAR(*a.k, *b.k, 1e-10 * std::max(1.0, std::abs(*a.k)));
      EXPECT_EQ(b.method, Method::kArnoldOracle);
    }
  }
}

TEST(CurvatureProperty, SymmetricAndScalesAsCube) {
  Gen gen(12);
  const MetricSymbol F = MetricSymbol::sqrt_laplacian();
  for (int t = 0; t < 100; ++t) {
    const ModePair pair{gen.lattice(4), gen.lattice(4)};
    if (pair.degenerate()) continue;
    const double k = *normalized_curvature(pair, F).k;
    EXPECT_NEAR(*normalized_curvature({pair.q, pair.p}, F).k, k, 1e-12 * std::max(1.0, std::abs(k)));
    EXPECT_NEAR(*normalized_curvature({-pair.p, pair.q}, F).k, k, 1e-12 * std::max(1.0, std::abs(k)));
    const ModePair big{{3 * pair.p.jx(), 3 * pair.p.ky()}, {3 * pair.q.jx(), 3 * pair.q.ky()}};
    EXPECT_NEAR(*normalized_curvature(big, F).k, 27.0 * k, 1e-11 * std::max(1.0, 27.0 * std::abs(k)));
  }
}

TEST(Curvature, DegeneratePlanes) {
  const MetricSymbol F = MetricSymbol::sqrt_laplacian();
  const ModePair same{{1, 2}, {1, 2}};
  const ModePair opposite{{1, 2}, {-1, -2}};
  EXPECT_DOUBLE_EQ(khesin_nonnormalized(same, F), 0.0);
  EXPECT_THROW(normalized_curvature(same, F), sqg::UndefinedCurvatureError);
  EXPECT_THROW(normalized_curvature(opposite, F, Method::kArnoldOracle), sqg::UndefinedCurvatureError);
  // parallel but distinct directions are a genuine plane with zero curvature
  const CurvatureReport par = normalized_curvature({{1, 0}, {2, 0}}, F);
  ASSERT_TRUE(par.k);
  EXPECT_NEAR(*par.k, 0.0, 1e-12);
}

TEST(Curvature, Parsing) {
  EXPECT_EQ(parse_family("negative"), Family::kNegative);
  EXPECT_EQ(parse_family("positive"), Family::kPositive);
  EXPECT_EQ(parse_method(to_string(Method::kArnoldOracle)), Method::kArnoldOracle);
  EXPECT_THROW(parse_family("zero"), sqg::ValidationError);
  EXPECT_THROW(parse_method("guess"), sqg::ValidationError);
  EXPECT_THROW(family_pair(Family::kPositive, 0), sqg::ValidationError);
}
