#pragma once

// Sectional curvature at the identity of the exact volumorphism group of the
// torus, for the right-invariant metric with inertia symbol F.

#include <optional>
#include <string>
#include <vector>

#include "sqg/spectral_core.hpp"

namespace sqg::curvature {

using spectral::LatticeVector;
using spectral::MetricSymbol;
using spectral::TrigField;

// Stream functions cos(p·x) and cos(q·x).
struct ModePair {
  LatticeVector p;
  LatticeVector q;

  bool degenerate() const { return q == p || q == -p; }
};

enum class Method { kClosedForm, kArnoldOracle };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct CurvatureReport {
  double kbar = 0.0;
  std::optional<double> k;  // unset when the plane is degenerate
  double norm_u2 = 0.0;
  double norm_v2 = 0.0;
  double cross = 0.0;
  Method method = Method::kClosedForm;
};

// Closed form for two cosine modes:
//   |p∧q|²/8 · { ¼(F(p)−F(q))²(1/F(p+q) + 1/F(p−q))
//               − ¾(F(p+q) + F(p−q)) + F(p) + F(q) }
// Degenerate pairs return 0 without touching F(0).
double khesin_nonnormalized(const ModePair& pair, const MetricSymbol& F);

// Four-term formula built from ad, ad* and the metric pairing:
//   ¼‖ad*_v u + ad*_u v‖² − ⟨⟨ad*_u u, ad*_v v⟩⟩ − ¾‖ad_u v‖²
//   + ½⟨⟨ad_u v, ad*_v u − ad*_u v⟩⟩
double arnold_curvature(const TrigField& u, const TrigField& v,
                        const MetricSymbol& F);

// K = K̄ / (‖u‖²‖v‖² − ⟨⟨u,v⟩⟩²). Throws UndefinedCurvatureError when the
// denominator is not positive.
CurvatureReport normalized_curvature(const ModePair& pair, const MetricSymbol& F,
                                     Method method = Method::kClosedForm);

// negative: p = 2πn(1,0), q = 2πn(0,1).  positive: p = 2πn(1,0), q = 2πn(1,1).
enum class Family { kNegative, kPositive };
std::string to_string(Family f);
Family parse_family(const std::string& s);
ModePair family_pair(Family f, int n);

struct ScanRow {
  int n = 0;
  double k = 0.0;
  double k_over_n3 = 0.0;
  Method method = Method::kClosedForm;
};

std::vector<ScanRow> curvature_scan(Family family, int n_max,
                                    const MetricSymbol& F,
                                    Method method = Method::kClosedForm);

}  // namespace sqg::curvature
