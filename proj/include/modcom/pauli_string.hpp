#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modcom/errors.hpp"
#include "modcom/sites.hpp"

namespace modcom {

using cplx = std::complex<double>;

// Element of {+1, +i, -1, -i}, stored as a power of i.
class Phase {
 public:
  constexpr Phase() = default;
  static constexpr Phase from_quarter_turns(int k) { return Phase(static_cast<std::uint8_t>(((k % 4) + 4) % 4)); }
  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int quarter_turns() const { return k_; }
  constexpr Phase operator*(Phase o) const { return Phase(static_cast<std::uint8_t>((k_ + o.k_) & 3)); }
  constexpr Phase& operator*=(Phase o) { return *this = *this * o; }
  constexpr Phase conj() const { return Phase(static_cast<std::uint8_t>((4 - k_) & 3)); }
  constexpr bool is_real() const { return (k_ & 1) == 0; }

  cplx value() const {
    constexpr double re[4] = {1, 0, -1, 0};
    constexpr double im[4] = {0, 1, 0, -1};
    return {re[k_], im[k_]};
  }

  friend constexpr bool operator==(Phase, Phase) = default;

  friend std::ostream& operator<<(std::ostream& os, Phase p) {
    constexpr const char* names[4] = {"+1", "+i", "-1", "-i"};
    return os << names[p.k_];
  }

 private:
  constexpr explicit Phase(std::uint8_t k) : k_(k) {}
  std::uint8_t k_ = 0;
};

// Multi-qubit Pauli operator in symplectic form. The represented operator is
// the site-ascending product of X^x Z^z factors with no global phase, so a
// site carrying both bits stands for XZ = -iY.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(UniversePtr universe)
      : universe_(std::move(universe)), x_(universe_->size()), z_(universe_->size()) {}
  PauliString(UniversePtr universe, BitVec x, BitVec z)
      : universe_(std::move(universe)), x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != universe_->size() || z_.size() != universe_->size()) {
      fail(ErrorCode::InvalidArgument, "bit vector length does not match universe");
    }
  }

  static PauliString identity(UniversePtr universe) { return PauliString(std::move(universe)); }

  static PauliString from_sites(UniversePtr universe, std::span<const SiteId> x_sites,
                                std::span<const SiteId> z_sites) {
    BitVec x = universe->mask(x_sites);
    BitVec z = universe->mask(z_sites);
    return PauliString(std::move(universe), std::move(x), std::move(z));
  }

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t num_sites() const noexcept { return x_.size(); }
  const BitVec& x() const noexcept { return x_; }
  const BitVec& z() const noexcept { return z_; }

  bool is_identity() const noexcept { return !x_.any() && !z_.any(); }
  std::size_t weight() const noexcept { return (x_ | z_).count(); }
  // Number of sites carrying Y, i.e. |x & z|.
  std::size_t y_count() const noexcept { return BitVec::and_count(x_, z_); }

  bool x_at(SiteId s) const { return x_.test(universe_->index(s)); }
  bool z_at(SiteId s) const { return z_.test(universe_->index(s)); }

  // P^dagger = adjoint_sign() * P.
  int adjoint_sign() const noexcept { return (y_count() & 1) ? -1 : 1; }

  // Canonical operator = hermitian_phase() * (product of Hermitian X/Y/Z letters).
  Phase hermitian_phase() const noexcept { return Phase::from_quarter_turns(-static_cast<int>(y_count())); }

  friend bool operator==(const PauliString& a, const PauliString& b) noexcept {
    return a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend auto operator<=>(const PauliString& a, const PauliString& b) noexcept {
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.z_ <=> b.z_;
  }

  std::size_t hash() const noexcept { return x_.hash() * 31 + z_.hash(); }

 private:
  UniversePtr universe_;
  BitVec x_;
  BitVec z_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept { return p.hash(); }
};

// p * q = phase * r.
inline std::pair<Phase, PauliString> mul(const PauliString& p, const PauliString& q) {
  require_same_universe(p.universe(), q.universe());
  // Per site: X^a Z^b X^c Z^d = (-1)^{b c} X^{a+c} Z^{b+d}.
  const std::size_t swaps = BitVec::and_count(p.z(), q.x());
  Phase phase = (swaps & 1) ? Phase::minus_one() : Phase::one();
  return {phase, PauliString(p.universe(), p.x() ^ q.x(), p.z() ^ q.z())};
}

inline bool commutes(const PauliString& p, const PauliString& q) {
  require_same_universe(p.universe(), q.universe());
  const std::size_t overlap = BitVec::and_count(p.x(), q.z()) + BitVec::and_count(p.z(), q.x());
  return (overlap & 1) == 0;
}

inline std::vector<SiteId> support(const PauliString& p) { return p.universe()->sites_of(p.x() | p.z()); }

inline bool restrict_identity_on(const PauliString& p, std::span<const SiteId> sites) {
  const BitVec supp = p.x() | p.z();
  for (SiteId s : sites) {
    if (p.universe()->contains(s) && supp.test(p.universe()->index(s))) return false;
  }
  return true;
}

// X on every second site from n to m inclusive.
inline PauliString x_string(const UniversePtr& universe, SiteId n, SiteId m) {
  if (n > m) fail(ErrorCode::InvalidArgument, "x_string: start exceeds end");
  if (((m - n) % 2) != 0) fail(ErrorCode::InvalidArgument, "x_string: endpoints differ in parity");
  std::vector<SiteId> xs;
  for (SiteId s = n; s <= m; s += 2) xs.push_back(s);
  return PauliString::from_sites(universe, xs, {});
}

// Copy of p on a sub-universe. Requires p to be identity off that universe.
inline PauliString restrict_to(const PauliString& p, const UniversePtr& target) {
  BitVec x(target->size()), z(target->size());
  const auto& src = *p.universe();
  for (std::size_t k = 0; k < src.size(); ++k) {
    const bool xb = p.x().test(k), zb = p.z().test(k);
    if (!xb && !zb) continue;
    const SiteId s = src.id(k);
    if (!target->contains(s)) fail(ErrorCode::InvalidArgument, "restrict_to: string acts on a dropped site");
    const std::size_t t = target->index(s);
    x.set(t, xb);
    z.set(t, zb);
  }
  return PauliString(target, std::move(x), std::move(z));
}

// Copy of p on a universe containing p's sites (identity elsewhere).
inline PauliString embed_into(const PauliString& p, const UniversePtr& target) { return restrict_to(p, target); }

// Renders the Hermitian letters, e.g. "Z_-1 Y_0 Z_1"; identity renders as "I".
// The canonical operator equals hermitian_phase() times the rendered one.
inline std::string to_string(const PauliString& p) {
  std::string out;
  const auto& u = *p.universe();
  for (std::size_t k = 0; k < u.size(); ++k) {
    const bool xb = p.x().test(k), zb = p.z().test(k);
    if (!xb && !zb) continue;
    if (!out.empty()) out += ' ';
    out += xb ? (zb ? 'Y' : 'X') : 'Z';
    out += '_';
    out += std::to_string(u.id(k));
  }
  return out.empty() ? "I" : out;
}

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << to_string(p); }

// Parses "[sign] L_site L_site ..." with L in {I,X,Y,Z} and sign in
// {+,-,i,+i,-i}. Repeated sites multiply left to right. Returns (phase, P)
// such that the written operator equals phase * P.
inline std::pair<Phase, PauliString> parse_pauli(const UniversePtr& universe, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  Phase phase = Phase::one();
  PauliString acc = PauliString::identity(universe);
  bool first = true;
  while (in >> tok) {
    if (first) {
      first = false;
      if (tok == "+" || tok == "+1") continue;
      if (tok == "-" || tok == "-1") { phase = Phase::minus_one(); continue; }
      if (tok == "i" || tok == "+i") { phase = Phase::i(); continue; }
      if (tok == "-i") { phase = Phase::minus_i(); continue; }
    }
    if (tok == "I") continue;
    if (tok.size() < 3 || tok[1] != '_') fail(ErrorCode::ParseError, "bad Pauli token '" + tok + "'");
    SiteId site = 0;
    try {
      std::size_t used = 0;
      site = std::stoll(tok.substr(2), &used);
      if (used != tok.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad site index in '" + tok + "'");
    }
    if (!universe->contains(site)) fail(ErrorCode::ParseError, "site " + std::to_string(site) + " not in universe");
    const std::vector<SiteId> one{site};
    PauliString factor(universe);
    Phase factor_phase = Phase::one();
    switch (tok[0]) {
      case 'X': factor = PauliString::from_sites(universe, one, {}); break;
      case 'Z': factor = PauliString::from_sites(universe, {}, one); break;
      case 'Y':
        // Y = i X Z
        factor = PauliString::from_sites(universe, one, one);
        factor_phase = Phase::i();
        break;
      case 'I': continue;
      default: fail(ErrorCode::ParseError, "unknown Pauli letter in '" + tok + "'");
    }
    auto [ph, prod] = mul(acc, factor);
    phase *= ph * factor_phase;
    acc = std::move(prod);
  }
  return {phase, acc};
}

}  // namespace modcom
