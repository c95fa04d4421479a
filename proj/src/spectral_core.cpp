#include "sqg/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "sqg/errors.hpp"

namespace sqg::spectral {

double LatticeVector::norm() const { return std::hypot(j(), k()); }

int LatticeVector::max_index() const {
  return std::max(std::abs(jx_), std::abs(ky_));
}

double wedge(LatticeVector p, LatticeVector q) {
  return kTwoPi * kTwoPi * static_cast<double>(wedge_index(p, q));
}

std::int64_t wedge_index(LatticeVector p, LatticeVector q) {
  return static_cast<std::int64_t>(p.jx()) * q.ky() -
         static_cast<std::int64_t>(p.ky()) * q.jx();
}

// ---------------------------------------------------------------------------
// TrigField

TrigField TrigField::cos_mode(LatticeVector p, double coef) {
  TrigField f;
  f.add(p, Parity::kCos, coef);
  return f;
}

TrigField TrigField::sin_mode(LatticeVector p, double coef) {
  TrigField f;
  f.add(p, Parity::kSin, coef);
  return f;
}

TrigField TrigField::constant(double c) {
  TrigField f;
  f.add({0, 0}, Parity::kCos, c);
  return f;
}

void TrigField::add(LatticeVector p, Parity parity, double coef) {
  if (!p.is_canonical()) {
    p = -p;
    if (parity == Parity::kSin) coef = -coef;
  }
  if (p.is_zero() && parity == Parity::kSin) return;  // sin(0) ≡ 0
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(ModeKey{p, parity}, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double TrigField::coef(LatticeVector p, Parity parity) const {
  double sign = 1.0;
  if (!p.is_canonical()) {
    p = -p;
    if (parity == Parity::kSin) sign = -1.0;
  }
  auto it = terms_.find(ModeKey{p, parity});
  return it == terms_.end() ? 0.0 : sign * it->second;
}

double TrigField::mean() const { return coef({0, 0}, Parity::kCos); }

TrigField TrigField::without_mean() const {
  TrigField out = *this;
  out.terms_.erase(ModeKey{{0, 0}, Parity::kCos});
  return out;
}

int TrigField::max_index() const {
  int m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, key.p.max_index());
  return m;
}

double TrigField::max_abs_coef() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double TrigField::evaluate(double x, double y) const {
  double s = 0.0;
  for (const auto& [key, c] : terms_) {
    const double phase = key.p.j() * x + key.p.k() * y;
    s += c * (key.parity == Parity::kCos ? std::cos(phase) : std::sin(phase));
  }
  return s;
}

double TrigField::dx(double x, double y) const {
  double s = 0.0;
  for (const auto& [key, c] : terms_) {
    const double phase = key.p.j() * x + key.p.k() * y;
    s += c * key.p.j() *
         (key.parity == Parity::kCos ? -std::sin(phase) : std::cos(phase));
  }
  return s;
}

double TrigField::dy(double x, double y) const {
  double s = 0.0;
  for (const auto& [key, c] : terms_) {
    const double phase = key.p.j() * x + key.p.k() * y;
    s += c * key.p.k() *
         (key.parity == Parity::kCos ? -std::sin(phase) : std::cos(phase));
  }
  return s;
}

TrigField& TrigField::operator+=(const TrigField& o) {
  for (const auto& [key, c] : o.terms_) add(key.p, key.parity, c);
  return *this;
}

TrigField& TrigField::operator-=(const TrigField& o) {
  for (const auto& [key, c] : o.terms_) add(key.p, key.parity, -c);
  return *this;
}

TrigField& TrigField::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// MetricSymbol

MetricSymbol::MetricSymbol(Rule rule, std::string label)
    : rule_(std::move(rule)), label_(std::move(label)) {}

MetricSymbol MetricSymbol::sqrt_laplacian() {
  return MetricSymbol([](double j, double k) { return std::hypot(j, k); },
                      "sqrt_laplacian");
}

MetricSymbol MetricSymbol::sobolev(double s) {
  if (!std::isfinite(s)) throw ValidationError("sobolev exponent must be finite");
  std::ostringstream label;
  label.precision(17);
  label << "sobolev:" << s;
  const double e = 2.0 + 2.0 * s;
  return MetricSymbol(
      [e](double j, double k) { return std::pow(std::hypot(j, k), e); },
      label.str());
}

MetricSymbol MetricSymbol::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ValidationError("constant metric symbol must be positive");
  }
  std::ostringstream label;
  label.precision(17);
  label << "constant:" << c;
  return MetricSymbol([c](double, double) { return c; }, label.str());
}

MetricSymbol MetricSymbol::parse(const std::string& spec) {
  if (spec == "sqrt_laplacian") return sqrt_laplacian();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string tail = spec.substr(colon + 1);
    char* end = nullptr;
    const double v = std::strtod(tail.c_str(), &end);
    if (!tail.empty() && end && *end == '\0') {
      if (head == "sobolev") return sobolev(v);
      if (head == "constant") return constant(v);
    }
  }
  throw ValidationError("unknown metric symbol '" + spec +
                        "' (expected sqrt_laplacian, sobolev:<s> or constant:<c>)");
}

MetricSymbol MetricSymbol::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ValidationError("metric scale factor must be positive");
  }
  std::ostringstream label;
  label.precision(17);
  label << c << "*" << label_;
  Rule inner = rule_;
  return MetricSymbol([inner, c](double j, double k) { return c * inner(j, k); },
                      label.str());
}

double MetricSymbol::operator()(LatticeVector p) const {
  if (p.is_zero()) {
    throw MetricDegeneracyError("metric symbol " + label_ +
                                " requested at zero frequency");
  }
  const double v = rule_(p.j(), p.k());
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw MetricDegeneracyError("metric symbol " + label_ +
                                " is not positive at (" + std::to_string(p.jx()) +
                                ", " + std::to_string(p.ky()) + ")");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Algebra

namespace {

// d/dθ of cos is −sin and of sin is +cos: sign and flipped parity.
constexpr double derivative_sign(Parity t) {
  return t == Parity::kCos ? -1.0 : 1.0;
}
constexpr Parity flipped(Parity t) {
  return t == Parity::kCos ? Parity::kSin : Parity::kCos;
}

// out += c · T_a(p·x) · T_b(q·x), expanded into sum and difference modes.
void add_product(TrigField& out, double c, Parity a, LatticeVector p, Parity b,
                 LatticeVector q) {
  const double h = 0.5 * c;
  const LatticeVector sum = p + q;
  const LatticeVector diff = p - q;
  if (a == Parity::kCos && b == Parity::kCos) {
    out.add(diff, Parity::kCos, h);
    out.add(sum, Parity::kCos, h);
  } else if (a == Parity::kSin && b == Parity::kSin) {
    out.add(diff, Parity::kCos, h);
    out.add(sum, Parity::kCos, -h);
  } else if (a == Parity::kSin) {
    out.add(sum, Parity::kSin, h);
    out.add(diff, Parity::kSin, h);
  } else {
    out.add(sum, Parity::kSin, h);
    out.add(diff, Parity::kSin, -h);
  }
}

}  // namespace

TrigField poisson_bracket(const TrigField& f, const TrigField& g) {
  TrigField out;
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      const std::int64_t w = wedge_index(kf.p, kg.p);
      if (w == 0) continue;  // also covers constants and parallel modes
      const double c = -cf * cg * derivative_sign(kf.parity) *
                       derivative_sign(kg.parity) * wedge(kf.p, kg.p);
      add_product(out, c, flipped(kf.parity), kf.p, flipped(kg.parity), kg.p);
    }
  }
  return out;
}

double inner_product(const TrigField& f, const TrigField& g,
                     const MetricSymbol& symbol) {
  const TrigField& small = f.size() <= g.size() ? f : g;
  const TrigField& large = f.size() <= g.size() ? g : f;
  double s = 0.0;
  for (const auto& [key, c] : small.terms()) {
    if (key.p.is_zero()) continue;
    auto it = large.terms().find(key);
    if (it == large.terms().end()) continue;
    s += symbol(key.p) * c * it->second * 0.5;
  }
  return s;
}

TrigField apply_inertia(const TrigField& f, const MetricSymbol& symbol) {
  TrigField out;
  for (const auto& [key, c] : f.terms()) {
    if (key.p.is_zero()) continue;
    out.add(key.p, key.parity, symbol(key.p) * c);
  }
  return out;
}

TrigField apply_inverse_inertia(const TrigField& f, const MetricSymbol& symbol) {
  TrigField out;
  for (const auto& [key, c] : f.terms()) {
    if (key.p.is_zero()) {
      throw MetricDegeneracyError(
          "inverse inertia applied to a field with nonzero mean");
    }
    out.add(key.p, key.parity, c / symbol(key.p));
  }
  return out;
}

TrigField ad(const TrigField& psi, const TrigField& nu) {
  return poisson_bracket(nu, psi);
}

TrigField ad_star(const TrigField& psi, const TrigField& phi,
                  const MetricSymbol& symbol) {
  if (!phi.is_mean_zero()) {
    throw ValidationError("ad_star: phi must be mean-zero");
  }
  TrigField m = poisson_bracket(apply_inertia(phi, symbol), psi);
  m *= -1.0;
  return apply_inverse_inertia(m, symbol);
}

TrigField euler_arnold_rhs(const TrigField& psi, const MetricSymbol& symbol) {
  if (!psi.is_mean_zero()) {
    throw ValidationError("euler_arnold_rhs: psi must be mean-zero");
  }
  return -ad_star(psi, psi, symbol);
}

std::vector<LatticeVector> canonical_directions(int max_index) {
  std::vector<LatticeVector> out;
  for (int jx = 0; jx <= max_index; ++jx) {
    for (int ky = -max_index; ky <= max_index; ++ky) {
      LatticeVector p{jx, ky};
      if (!p.is_zero() && p.is_canonical()) out.push_back(p);
    }
  }
  return out;
}

nlohmann::json to_json(const TrigField& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, c] : f.terms()) {
    out.push_back({{"jx", key.p.jx()},
                   {"ky", key.p.ky()},
                   {"parity", key.parity == Parity::kCos ? "cos" : "sin"},
                   {"coef", c}});
  }
  return out;
}

TrigField trig_field_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("TrigField JSON must be an array");
  TrigField f;
  for (const auto& rec : j) {
    if (!rec.is_object() || !rec.contains("jx") || !rec.contains("ky") ||
        !rec.contains("parity") || !rec.contains("coef")) {
      throw ValidationError("TrigField record needs jx, ky, parity, coef");
    }
    for (const auto& [k, v] : rec.items()) {
      if (k != "jx" && k != "ky" && k != "parity" && k != "coef") {
        throw ValidationError("TrigField record has unknown key '" + k + "'");
      }
    }
    if (!rec["jx"].is_number_integer() || !rec["ky"].is_number_integer()) {
      throw ValidationError("TrigField frequencies must be integers");
    }
    const std::string parity = rec["parity"].get<std::string>();
    if (parity != "cos" && parity != "sin") {
      throw ValidationError("TrigField parity must be cos or sin");
    }
    const double c = rec["coef"].get<double>();
    if (!std::isfinite(c)) throw ValidationError("TrigField coef must be finite");
    f.add({rec["jx"].get<int>(), rec["ky"].get<int>()},
          parity == "cos" ? Parity::kCos : Parity::kSin, c);
  }
  return f;
}

}  // namespace sqg::spectral
