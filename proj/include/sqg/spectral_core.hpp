#pragma once

// Mode-level Lie algebra of exact area-preserving vector fields on the unit
// torus, written in terms of stream functions. Fields are finite real
// trigonometric sums; every operation below is exact mode bookkeeping.
//
// Conventions used throughout:
//   ∇^⊥ψ = (−ψ_y, ψ_x)
//   {f, g} = ⟨∇f, ∇^⊥g⟩ = −f_x g_y + f_y g_x
//   ad_ψ ν = {ν, ψ}
//   ⟨⟨f, g⟩⟩ = ∫ f Λg dμ,  Λ with Fourier symbol F(p)

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

namespace sqg::spectral {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frequency vector p = 2π·(jx, ky) on the dual lattice of the unit torus.
class LatticeVector {
 public:
  constexpr LatticeVector() = default;
  constexpr LatticeVector(int jx, int ky) : jx_(jx), ky_(ky) {}

  constexpr int jx() const { return jx_; }
  constexpr int ky() const { return ky_; }
  double j() const { return kTwoPi * jx_; }
  double k() const { return kTwoPi * ky_; }
  double norm() const;
  int max_index() const;  // |p/(2π)|_∞
  constexpr bool is_zero() const { return jx_ == 0 && ky_ == 0; }

  // First nonzero component positive (the zero vector is canonical).
  constexpr bool is_canonical() const {
    return jx_ > 0 || (jx_ == 0 && ky_ >= 0);
  }
  constexpr LatticeVector canonical() const {
    return is_canonical() ? *this : -*this;
  }

  constexpr LatticeVector operator-() const { return {-jx_, -ky_}; }
  constexpr LatticeVector operator+(LatticeVector o) const {
    return {jx_ + o.jx_, ky_ + o.ky_};
  }
  constexpr LatticeVector operator-(LatticeVector o) const {
    return {jx_ - o.jx_, ky_ - o.ky_};
  }
  constexpr auto operator<=>(const LatticeVector&) const = default;

 private:
  int jx_ = 0;
  int ky_ = 0;
};

// p∧q = jm − kl for p = (j,k), q = (l,m).
double wedge(LatticeVector p, LatticeVector q);
// Integer part of the wedge, (p∧q)/(2π)².
std::int64_t wedge_index(LatticeVector p, LatticeVector q);

enum class Parity { kCos, kSin };

struct ModeKey {
  LatticeVector p;
  Parity parity = Parity::kCos;
  auto operator<=>(const ModeKey&) const = default;
};

// Finite sum Σ c·cos(p·x) + Σ c·sin(p·x), one entry per canonical direction
// and parity. The zero-frequency cosine term holds the mean.
class TrigField {
 public:
  using Terms = std::map<ModeKey, double>;

  TrigField() = default;

  static TrigField cos_mode(LatticeVector p, double coef = 1.0);
  static TrigField sin_mode(LatticeVector p, double coef = 1.0);
  static TrigField constant(double c);

  // Accumulates coef·trig(p·x), rewriting p into canonical form.
  void add(LatticeVector p, Parity parity, double coef);
  double coef(LatticeVector p, Parity parity) const;

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double mean() const;
  bool is_mean_zero() const { return mean() == 0.0; }
  TrigField without_mean() const;
  int max_index() const;
  double max_abs_coef() const;

  double evaluate(double x, double y) const;
  double dx(double x, double y) const;
  double dy(double x, double y) const;

  TrigField& operator+=(const TrigField& o);
  TrigField& operator-=(const TrigField& o);
  TrigField& operator*=(double s);
  friend TrigField operator+(TrigField a, const TrigField& b) { return a += b; }
  friend TrigField operator-(TrigField a, const TrigField& b) { return a -= b; }
  friend TrigField operator*(double s, TrigField a) { return a *= s; }
  TrigField operator-() const { return -1.0 * *this; }

 private:
  Terms terms_;
};

// Symbol F of the inertia operator Λ on stream functions.
class MetricSymbol {
 public:
  using Rule = std::function<double(double j, double k)>;

  MetricSymbol(Rule rule, std::string label);

  // F(p) = |p|: the Ḣ^{1/2} stream metric, i.e. Ḣ^{-1/2} on velocities.
  static MetricSymbol sqrt_laplacian();
  // F(p) = |p|^{2+2s}: the Ḣ^s metric on velocities (s = −1/2 is sqrt_laplacian).
  static MetricSymbol sobolev(double s);
  static MetricSymbol constant(double c);
  // Parses "sqrt_laplacian", "sobolev:<s>", "constant:<c>".
  static MetricSymbol parse(const std::string& spec);

  MetricSymbol scaled(double c) const;

  // Throws MetricDegeneracyError for p = 0 or a non-positive value.
  double operator()(LatticeVector p) const;
  const std::string& label() const { return label_; }

 private:
  Rule rule_;
  std::string label_;
};

TrigField poisson_bracket(const TrigField& f, const TrigField& g);

// Σ F(p)·f_p·g_p/2 over shared nonzero modes.
double inner_product(const TrigField& f, const TrigField& g,
                     const MetricSymbol& symbol);

// Λ acting mode-wise; the constant term is dropped.
TrigField apply_inertia(const TrigField& f, const MetricSymbol& symbol);
// Λ⁻¹ acting mode-wise; a nonzero constant term raises MetricDegeneracyError.
TrigField apply_inverse_inertia(const TrigField& f, const MetricSymbol& symbol);

TrigField ad(const TrigField& psi, const TrigField& nu);
TrigField ad_star(const TrigField& psi, const TrigField& phi,
                  const MetricSymbol& symbol);
// ψ_t = −ad*_ψ ψ. With sqrt_laplacian this is SQG in stream-function form.
TrigField euler_arnold_rhs(const TrigField& psi, const MetricSymbol& symbol);

// All canonical nonzero directions with |p/(2π)|_∞ ≤ max_index.
std::vector<LatticeVector> canonical_directions(int max_index);

nlohmann::json to_json(const TrigField& f);
TrigField trig_field_from_json(const nlohmann::json& j);

}  // namespace sqg::spectral
