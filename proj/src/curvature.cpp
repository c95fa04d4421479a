#include "sqg/curvature.hpp"

#include <cmath>

#include "sqg/errors.hpp"

namespace sqg::curvature {

using spectral::ad;
using spectral::ad_star;
using spectral::inner_product;

std::string to_string(Method m) {
  return m == Method::kClosedForm ? "closed_form" : "arnold_oracle";
}

Method parse_method(const std::string& s) {
  if (s == "closed_form" || s == "closed-form" || s == "khesin") {
    return Method::kClosedForm;
  }
  if (s == "arnold_oracle" || s == "arnold-oracle" || s == "arnold") {
    return Method::kArnoldOracle;
  }
  throw ValidationError("unknown curvature method '" + s +
                        "' (expected closed_form or arnold_oracle)");
}

std::string to_string(Family f) {
  return f == Family::kNegative ? "negative" : "positive";
}

Family parse_family(const std::string& s) {
  if (s == "negative" || s == "negative_family") return Family::kNegative;
  if (s == "positive" || s == "positive_family") return Family::kPositive;
  throw ValidationError("unknown curvature family '" + s +
                        "' (expected negative or positive)");
}

ModePair family_pair(Family f, int n) {
  if (n < 1) throw ValidationError("family index n must be >= 1");
  if (f == Family::kNegative) return {{n, 0}, {0, n}};
  return {{n, 0}, {n, n}};
}

double khesin_nonnormalized(const ModePair& pair, const MetricSymbol& F) {
  if (pair.p.is_zero() || pair.q.is_zero()) {
    throw ValidationError("curvature modes must be nonzero");
  }
  const double w = spectral::wedge(pair.p, pair.q);
  if (w == 0.0) return 0.0;
  const double fp = F(pair.p);
  const double fq = F(pair.q);
  const double fs = F(pair.p + pair.q);
  const double fd = F(pair.p - pair.q);
  const double brace = 0.25 * (fp - fq) * (fp - fq) * (1.0 / fs + 1.0 / fd) -
                       0.75 * (fs + fd) + fp + fq;
  return w * w / 8.0 * brace;
}

double arnold_curvature(const TrigField& u, const TrigField& v,
                        const MetricSymbol& F) {
  const TrigField ads_vu = ad_star(v, u, F);
  const TrigField ads_uv = ad_star(u, v, F);
  const TrigField ads_uu = ad_star(u, u, F);
  const TrigField ads_vv = ad_star(v, v, F);
  const TrigField ad_uv = ad(u, v);
  const TrigField s = ads_vu + ads_uv;
  const TrigField d = ads_vu - ads_uv;
  return 0.25 * inner_product(s, s, F) - inner_product(ads_uu, ads_vv, F) -
         0.75 * inner_product(ad_uv, ad_uv, F) +
         0.5 * inner_product(ad_uv, d, F);
}

CurvatureReport normalized_curvature(const ModePair& pair, const MetricSymbol& F,
                                     Method method) {
  if (pair.p.is_zero() || pair.q.is_zero()) {
    throw ValidationError("curvature modes must be nonzero");
  }
  const TrigField u = TrigField::cos_mode(pair.p);
  const TrigField v = TrigField::cos_mode(pair.q);
  CurvatureReport r;
  r.method = method;
  r.norm_u2 = inner_product(u, u, F);
  r.norm_v2 = inner_product(v, v, F);
  r.cross = inner_product(u, v, F);
  const double denom = r.norm_u2 * r.norm_v2 - r.cross * r.cross;
  if (!(denom > 0.0)) {
    throw UndefinedCurvatureError(
        "sectional curvature undefined: u and v span a degenerate plane");
  }
  r.kbar = method == Method::kClosedForm ? khesin_nonnormalized(pair, F)
                                         : arnold_curvature(u, v, F);
  r.k = r.kbar / denom;
  return r;
}

std::vector<ScanRow> curvature_scan(Family family, int n_max,
                                    const MetricSymbol& F, Method method) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const CurvatureReport r = normalized_curvature(family_pair(family, n), F, method);
    const double n3 = static_cast<double>(n) * n * n;
    rows.push_back({n, *r.k, *r.k / n3, method});
  }
  return rows;
}

}  // namespace sqg::curvature
