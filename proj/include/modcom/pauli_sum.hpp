#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modcom/pauli_string.hpp"

namespace modcom {

inline constexpr double kCoeffEps = 1e-14;

// Complex-weighted sum of canonical Pauli strings on one site universe.
// Coefficients multiply the canonical (X-before-Z) operator; use
// hermitian_coefficient() to read them against X/Y/Z letters.
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx>;

  PauliSum() = default;
  explicit PauliSum(UniversePtr universe) : universe_(std::move(universe)) {}

  static PauliSum identity(UniversePtr universe, cplx c = 1.0) {
    PauliSum s(universe);
    s.add_term(PauliString::identity(universe), c);
    return s;
  }
  static PauliSum from_string(const PauliString& p, cplx c = 1.0) {
    PauliSum s(p.universe());
    s.add_term(p, c);
    return s;
  }
  // coeff * (operator written in text), e.g. from_text(u, "Z_-1 Y_0 Z_1", 0.5).
  static PauliSum from_text(const UniversePtr& universe, std::string_view text, cplx coeff = 1.0) {
    auto [phase, p] = parse_pauli(universe, text);
    return from_string(p, coeff * phase.value());
  }

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t num_sites() const noexcept { return universe_ ? universe_->size() : 0; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  void add_term(const PauliString& p, cplx c) {
    require_same_universe(universe_, p.universe());
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < kCoeffEps) terms_.erase(it);
  }

  cplx coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? cplx{0.0} : it->second;
  }
  cplx identity_coefficient() const { return coefficient(PauliString::identity(universe_)); }

  // Tr = 2^n * identity coefficient.
  cplx trace() const { return std::ldexp(1.0, static_cast<int>(num_sites())) * identity_coefficient(); }

  void prune(double tol = kCoeffEps) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  }

  PauliSum adjoint() const {
    PauliSum out(universe_);
    for (const auto& [p, c] : terms_) out.terms_.emplace(p, std::conj(c) * static_cast<double>(p.adjoint_sign()));
    return out;
  }

  bool is_hermitian(double tol = 1e-12) const {
    for (const auto& [p, c] : terms_) {
      if (std::abs(c * static_cast<double>(p.adjoint_sign()) - std::conj(c)) > tol) return false;
    }
    return true;
  }

  PauliSum& operator+=(const PauliSum& o) {
    require_same_universe(universe_, o.universe_);
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
  }
  PauliSum& operator-=(const PauliSum& o) {
    require_same_universe(universe_, o.universe_);
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
  }
  PauliSum& operator*=(cplx c) {
    for (auto& [p, v] : terms_) v *= c;
    prune();
    return *this;
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
  friend PauliSum operator*(cplx c, PauliSum a) { return a *= c; }

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    require_same_universe(a.universe_, b.universe_);
    PauliSum out(a.universe_);
    for (const auto& [p, cp] : a.terms_) {
      for (const auto& [q, cq] : b.terms_) {
        auto [phase, r] = mul(p, q);
        out.add_term(r, cp * cq * phase.value());
      }
    }
    return out;
  }

  // Exact equality up to tol on every coefficient.
  bool approx_equal(const PauliSum& o, double tol = 1e-12) const {
    if (!same_universe(universe_, o.universe_)) return false;
    for (const auto& [p, c] : terms_) {
      if (std::abs(c - o.coefficient(p)) > tol) return false;
    }
    for (const auto& [p, c] : o.terms_) {
      if (std::abs(c - coefficient(p)) > tol) return false;
    }
    return true;
  }

 private:
  UniversePtr universe_;
  TermMap terms_;
};

// Coefficient of p when written with Hermitian X/Y/Z letters.
inline cplx hermitian_coefficient(const PauliString& p, cplx canonical_coeff) {
  return canonical_coeff * p.hermitian_phase().value();
}

inline PauliSum add(const PauliSum& a, const PauliSum& b) { return a + b; }
inline PauliSum scale(const PauliSum& a, cplx c) { return a * c; }
inline PauliSum mul_sum(const PauliSum& a, const PauliSum& b) { return a * b; }

inline PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

// Restricts every term to `target`; terms must already be identity elsewhere.
inline PauliSum restrict_to(const PauliSum& s, const UniversePtr& target) {
  PauliSum out(target);
  for (const auto& [p, c] : s.terms()) out.add_term(restrict_to(p, target), c);
  return out;
}
inline PauliSum embed_into(const PauliSum& s, const UniversePtr& target) { return restrict_to(s, target); }

inline UniversePtr universe_without(const SiteUniverse& u, std::span<const SiteId> removed) {
  const auto gone = normalized_sites({removed.begin(), removed.end()});
  std::vector<SiteId> kept;
  for (SiteId s : u.ids()) {
    if (!std::binary_search(gone.begin(), gone.end(), s)) kept.push_back(s);
  }
  return SiteUniverse::make(std::move(kept));
}

// Partial trace over `traced`. Strings acting on a traced site vanish; the
// rest pick up a factor 2 per traced site.
inline PauliSum ptrace_sum(const PauliSum& rho, std::span<const SiteId> traced) {
  const auto& u = *rho.universe();
  std::vector<SiteId> present;
  for (SiteId s : traced) {
    if (!u.contains(s)) fail(ErrorCode::InvalidArgument, "ptrace_sum: traced site " + std::to_string(s) + " not in universe");
    present.push_back(s);
  }
  present = normalized_sites(std::move(present));
  if (present.empty()) return rho;
  const BitVec traced_mask = u.mask(present);
  const UniversePtr kept = universe_without(u, present);
  const double factor = std::ldexp(1.0, static_cast<int>(present.size()));
  PauliSum out(kept);
  for (const auto& [p, c] : rho.terms()) {
    if (BitVec::intersects(p.x() | p.z(), traced_mask)) continue;
    out.add_term(restrict_to(p, kept), c * factor);
  }
  return out;
}

}  // namespace modcom
