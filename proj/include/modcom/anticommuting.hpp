#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "modcom/pauli_sum.hpp"

namespace modcom {

inline constexpr double kPositivitySlack = 1e-12;
inline constexpr double kSingularThreshold = 1.0 - 1e-12;
inline constexpr double kDefaultRegulator = 1e-9;

struct WeightedString {
  PauliString string;  // canonical string
  double weight;       // real coefficient against the Hermitian letters
};

// rho = 2^{-n} (1 + sum_i a_i P_i) with mutually anticommuting Hermitian P_i.
// Spectrum: (1 +- delta) / 2^n, each 2^{n-1} times, delta = |a|.
class AnticommutingDensity {
 public:
  AnticommutingDensity(UniversePtr universe, std::vector<WeightedString> terms)
      : universe_(std::move(universe)), terms_(std::move(terms)) {
    double s = 0;
    for (const auto& t : terms_) s += t.weight * t.weight;
    delta_ = std::sqrt(s);
  }

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t num_sites() const noexcept { return universe_->size(); }
  const std::vector<WeightedString>& terms() const noexcept { return terms_; }
  double delta() const noexcept { return delta_; }

  // sum_i a_i P_i as a PauliSum (canonical coefficients).
  PauliSum string_sum() const {
    PauliSum out(universe_);
    for (const auto& t : terms_) out.add_term(t.string, t.weight * t.string.hermitian_phase().conj().value());
    return out;
  }

  PauliSum as_pauli_sum() const {
    PauliSum out = PauliSum::identity(universe_) + string_sum();
    return out * std::ldexp(1.0, -static_cast<int>(num_sites()));
  }

 private:
  UniversePtr universe_;
  std::vector<WeightedString> terms_;
  double delta_ = 0;
};

inline AnticommutingDensity as_anticommuting(const PauliSum& rho) {
  const std::size_t n = rho.num_sites();
  const double norm = std::ldexp(1.0, static_cast<int>(n));
  const cplx id = rho.identity_coefficient();
  if (std::abs(id * norm - 1.0) > 1e-12) {
    fail(ErrorCode::NotNormalized, "identity coefficient must be 2^-n");
  }
  std::vector<WeightedString> terms;
  for (const auto& [p, c] : rho.terms()) {
    if (p.is_identity()) continue;
    const cplx a = hermitian_coefficient(p, c) * norm;
    if (std::abs(a.imag()) > 1e-12) fail(ErrorCode::NotHermitian, "non-real coefficient on " + to_string(p));
    terms.push_back({p, a.real()});
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (commutes(terms[i].string, terms[j].string)) {
        fail(ErrorCode::NotAnticommuting,
             to_string(terms[i].string) + " commutes with " + to_string(terms[j].string));
      }
    }
  }
  AnticommutingDensity out(rho.universe(), std::move(terms));
  if (out.delta() * out.delta() > 1.0 + kPositivitySlack) {
    fail(ErrorCode::NotPositive, "sum of squared weights exceeds one");
  }
  return out;
}

// K = -ln rho = constant * 1 + string_part.
struct ModularHamiltonian {
  double constant = 0;
  PauliSum string_part;
  std::optional<double> regulator_used;
  double delta_effective = 0;  // delta after regulation

  // Projector form: K = n ln2 * 1 - ln(1+d) (1+P~)/2 - ln(1-d) (1-P~)/2.
  double plus_log() const { return std::log1p(delta_effective); }
  double minus_log() const { return std::log1p(-delta_effective); }

  PauliSum as_pauli_sum() const { return PauliSum::identity(string_part.universe(), constant) + string_part; }
};

inline ModularHamiltonian modular_hamiltonian_closed(const AnticommutingDensity& rho,
                                                      std::optional<double> regulator = std::nullopt) {
  const double n = static_cast<double>(rho.num_sites());
  double d = rho.delta();
  ModularHamiltonian k;
  if (d >= kSingularThreshold) {
    if (!regulator) fail(ErrorCode::SingularDensity, "delta = 1 requires a regulator");
    if (!(*regulator > 0 && *regulator < 1)) fail(ErrorCode::InvalidArgument, "regulator must lie in (0, 1)");
    d = 1.0 - *regulator;
    k.regulator_used = *regulator;
  }
  k.delta_effective = d;
  k.constant = n * std::numbers::ln2 - 0.5 * std::log1p(-d * d);
  k.string_part = PauliSum(rho.universe());
  if (rho.delta() > 0) {
    // P~ = sum a_i P_i / delta; the regulated case rescales delta -> 1 - eps.
    const double coeff = -0.5 * (std::log1p(d) - std::log1p(-d)) / rho.delta();
    k.string_part = rho.string_sum() * coeff;
  }
  return k;
}

// Von Neumann entropy in nats.
inline double entropy_closed(const AnticommutingDensity& rho) {
  const double n = static_cast<double>(rho.num_sites());
  const double d = std::min(rho.delta(), 1.0);
  auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  return n * std::numbers::ln2 - (xlogx(1 + d) + xlogx(1 - d)) / 2;
}

}  // namespace modcom
