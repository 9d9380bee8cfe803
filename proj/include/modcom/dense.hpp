#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modcom/circuit.hpp"
#include "modcom/generators.hpp"
#include "modcom/pauli_sum.hpp"

namespace modcom {

// Ceilings for the brute-force path. Operators (density and modular
// matrices) are capped at max_dense_qubits; full eigendecompositions at
// max_eigen_qubits. Pure global states are held as vectors and may be larger.
struct DenseLimits {
  int max_dense_qubits = 14;
  int max_eigen_qubits = 12;
  int max_state_qubits = 24;

  // MODCOM_MAX_DENSE_QUBITS overrides the operator ceiling.
  static DenseLimits from_env() {
    DenseLimits l;
    if (const char* v = std::getenv("MODCOM_MAX_DENSE_QUBITS")) {
      try {
        l.max_dense_qubits = std::stoi(v);
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "MODCOM_MAX_DENSE_QUBITS is not an integer");
      }
      l.max_eigen_qubits = std::min(l.max_eigen_qubits, l.max_dense_qubits);
    }
    return l;
  }
};

inline void require_dense_size(std::size_t n, int cap, const char* what) {
  if (static_cast<int>(n) > cap) {
    fail(ErrorCode::TooLarge, std::string(what) + ": " + std::to_string(n) + " qubits exceeds ceiling " + std::to_string(cap));
  }
}

struct DenseOperator {
  UniversePtr universe;
  Eigen::MatrixXcd m;

  std::size_t num_sites() const { return universe->size(); }
  cplx trace() const { return m.trace(); }
};

struct StateVector {
  UniversePtr universe;
  Eigen::VectorXcd v;

  std::size_t num_sites() const { return universe->size(); }
};

namespace detail {

// Internal index q occupies bit (n-1-q): the smallest SiteId is the most
// significant tensor factor.
inline std::uint64_t basis_mask(const BitVec& bits, std::size_t n) {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (bits.test(q)) m |= std::uint64_t{1} << (n - 1 - q);
  }
  return m;
}

inline std::uint64_t site_bit(const SiteUniverse& u, SiteId s) {
  return std::uint64_t{1} << (u.size() - 1 - u.index(s));
}

// Full-space offsets for every basis state of a subset of sites.
inline std::vector<std::uint64_t> subset_offsets(const SiteUniverse& u, const std::vector<SiteId>& sub) {
  const std::size_t k = sub.size();
  std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a < out.size(); ++a) {
    std::uint64_t full = 0;
    for (std::size_t q = 0; q < k; ++q) {
      if ((a >> (k - 1 - q)) & 1u) full |= site_bit(u, sub[q]);
    }
    out[a] = full;
  }
  return out;
}

inline std::vector<SiteId> complement(const SiteUniverse& u, const std::vector<SiteId>& sub) {
  std::vector<SiteId> out;
  for (SiteId s : u.ids()) {
    if (!std::binary_search(sub.begin(), sub.end(), s)) out.push_back(s);
  }
  return out;
}

}  // namespace detail

inline DenseOperator to_dense(const PauliString& p, const DenseLimits& lim = {}) {
  const std::size_t n = p.num_sites();
  require_dense_size(n, lim.max_dense_qubits, "to_dense");
  const std::uint64_t xm = detail::basis_mask(p.x(), n), zm = detail::basis_mask(p.z(), n);
  const std::size_t dim = std::size_t{1} << n;
  DenseOperator out{p.universe(), Eigen::MatrixXcd::Zero(dim, dim)};
  for (std::uint64_t k = 0; k < dim; ++k) {
    out.m(k ^ xm, k) = (std::popcount(zm & k) & 1) ? -1.0 : 1.0;
  }
  return out;
}

inline DenseOperator to_dense(const PauliSum& s, const DenseLimits& lim = {}) {
  const std::size_t n = s.num_sites();
  require_dense_size(n, lim.max_dense_qubits, "to_dense");
  const std::size_t dim = std::size_t{1} << n;
  DenseOperator out{s.universe(), Eigen::MatrixXcd::Zero(dim, dim)};
  for (const auto& [p, c] : s.terms()) {
    const std::uint64_t xm = detail::basis_mask(p.x(), n), zm = detail::basis_mask(p.z(), n);
    for (std::uint64_t k = 0; k < dim; ++k) {
      out.m(k ^ xm, k) += (std::popcount(zm & k) & 1) ? -c : c;
    }
  }
  return out;
}

// Matrix-free action of a PauliSum on a state vector.
inline Eigen::VectorXcd apply(const PauliSum& s, const Eigen::VectorXcd& v) {
  const std::size_t n = s.num_sites();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [p, c] : s.terms()) {
    const std::uint64_t xm = detail::basis_mask(p.x(), n), zm = detail::basis_mask(p.z(), n);
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(v.size()); ++k) {
      out[k ^ xm] += ((std::popcount(zm & k) & 1) ? -c : c) * v[k];
    }
  }
  return out;
}

// prod_i (1 + g_i) / 2 as a matrix.
inline DenseOperator to_dense(const GeneratorSet& gs, const DenseLimits& lim = {}) {
  require_dense_size(gs.universe->size(), std::min(lim.max_dense_qubits, lim.max_eigen_qubits), "to_dense(GeneratorSet)");
  const std::size_t dim = std::size_t{1} << gs.universe->size();
  DenseOperator out{gs.universe, Eigen::MatrixXcd::Identity(dim, dim)};
  for (const auto& g : gs.generators) {
    const Eigen::MatrixXcd gm = to_dense(g, lim).m;
    out.m = out.m * (Eigen::MatrixXcd::Identity(dim, dim) + gm) * 0.5;
  }
  return out;
}

// The common +1 eigenvector of all generators, found by projecting a random
// vector. Fails if the projector has no support on it (rank 0).
inline StateVector ground_state(const GeneratorSet& gs, const DenseLimits& lim = {}, std::uint64_t seed = 12345) {
  const std::size_t n = gs.universe->size();
  require_dense_size(n, lim.max_state_qubits, "ground_state");
  const std::size_t dim = std::size_t{1} << n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::VectorXcd v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = cplx{nd(rng), nd(rng)};
    v.normalize();
    for (const auto& g : gs.generators) v = 0.5 * (v + modcom::apply(g, v));
    const double norm = v.norm();
    if (norm > 1e-6 / std::sqrt(static_cast<double>(dim))) {
      return {gs.universe, v / norm};
    }
  }
  fail(ErrorCode::InvalidArgument, "generator projector annihilates random vectors");
}

inline StateVector plus_state(const UniversePtr& u, const DenseLimits& lim = {}) {
  require_dense_size(u->size(), lim.max_state_qubits, "plus_state");
  const std::size_t dim = std::size_t{1} << u->size();
  return {u, Eigen::VectorXcd::Constant(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0})};
}

// 2x2 unitary with U sigma_k U^dagger = sum_m rotation(m, k) sigma_m.
inline Eigen::Matrix2cd rotation_unitary(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  const Eigen::Vector3d n = aa.axis();
  const double h = aa.angle() / 2;
  const cplx i{0, 1};
  Eigen::Matrix2cd u;
  // exp(-i h n.sigma) = cos h - i sin h n.sigma
  u(0, 0) = std::cos(h) - i * std::sin(h) * n.z();
  u(1, 1) = std::cos(h) + i * std::sin(h) * n.z();
  u(0, 1) = -i * std::sin(h) * cplx{n.x(), -n.y()};
  u(1, 0) = -i * std::sin(h) * cplx{n.x(), n.y()};
  return u;
}

// Gate as a matrix on its own sites, basis index 2*bit(first) + bit(second).
inline Eigen::MatrixXcd gate_matrix(const Gate& gate) {
  return std::visit(
      [](const auto& g) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(g)>;
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
        if constexpr (std::is_same_v<T, CZGate>) {
          m(3, 3) = -1;
          return m;
        } else if constexpr (std::is_same_v<T, CNOTGate>) {
          m.setZero();
          m(0, 0) = m(1, 1) = 1;
          m(2, 3) = m(3, 2) = 1;
          return m;
        } else if constexpr (std::is_same_v<T, RotationGate>) {
          return rotation_unitary(g.rotation);
        } else if constexpr (std::is_same_v<T, ZZRotationGate>) {
          const cplx lo = std::exp(cplx{0, -g.theta / 2}), hi = std::exp(cplx{0, g.theta / 2});
          m.setZero();
          m(0, 0) = m(3, 3) = lo;
          m(1, 1) = m(2, 2) = hi;
          return m;
        } else {
          return g.unitary;
        }
      },
      gate.op);
}

inline void apply_gate(StateVector& psi, const Gate& gate) {
  const auto sites = gate.sites();
  const auto& u = *psi.universe;
  const Eigen::MatrixXcd g = gate_matrix(gate);
  const std::size_t dim = static_cast<std::size_t>(psi.v.size());
  if (sites.size() == 1) {
    const std::uint64_t b = detail::site_bit(u, sites[0]);
    for (std::uint64_t k = 0; k < dim; ++k) {
      if (k & b) continue;
      const cplx a0 = psi.v[k], a1 = psi.v[k | b];
      psi.v[k] = g(0, 0) * a0 + g(0, 1) * a1;
      psi.v[k | b] = g(1, 0) * a0 + g(1, 1) * a1;
    }
    return;
  }
  const std::uint64_t b0 = detail::site_bit(u, sites[0]), b1 = detail::site_bit(u, sites[1]);
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (k & (b0 | b1)) continue;
    const std::uint64_t idx[4] = {k, k | b1, k | b0, k | b0 | b1};
    cplx a[4];
    for (int r = 0; r < 4; ++r) a[r] = psi.v[idx[r]];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0;
      for (int c = 0; c < 4; ++c) acc += g(r, c) * a[c];
      psi.v[idx[r]] = acc;
    }
  }
}

inline StateVector apply_circuit(StateVector psi, const Circuit& c) {
  for (const auto& g : c.gates) apply_gate(psi, g);
  return psi;
}

// C |+...+>.
inline StateVector circuit_state(const Circuit& c, const UniversePtr& u, const DenseLimits& lim = {}) {
  return apply_circuit(plus_state(u, lim), c);
}

// Full unitary of a gate on the universe (small systems only).
inline DenseOperator gate_operator(const Gate& gate, const UniversePtr& u, const DenseLimits& lim = {}) {
  require_dense_size(u->size(), lim.max_dense_qubits, "gate_operator");
  const std::size_t dim = std::size_t{1} << u->size();
  DenseOperator out{u, Eigen::MatrixXcd::Zero(dim, dim)};
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector e{u, Eigen::VectorXcd::Zero(dim)};
    e.v[col] = 1;
    apply_gate(e, gate);
    out.m.col(col) = e.v;
  }
  return out;
}

inline DenseOperator apply_gate(const DenseOperator& rho, const Gate& gate, const DenseLimits& lim = {}) {
  const DenseOperator g = gate_operator(gate, rho.universe, lim);
  return {rho.universe, g.m * rho.m * g.m.adjoint()};
}

inline DenseOperator projector(const StateVector& psi, const DenseLimits& lim = {}) {
  require_dense_size(psi.num_sites(), lim.max_dense_qubits, "projector");
  return {psi.universe, psi.v * psi.v.adjoint()};
}

inline DenseOperator ptrace_dense(const DenseOperator& rho, const std::vector<SiteId>& traced_in) {
  const auto& u = *rho.universe;
  std::vector<SiteId> traced = normalized_sites(traced_in);
  for (SiteId s : traced) {
    if (!u.contains(s)) fail(ErrorCode::InvalidArgument, "ptrace_dense: site not in universe");
  }
  if (traced.empty()) return rho;
  const std::vector<SiteId> kept = detail::complement(u, traced);
  const auto kp = detail::subset_offsets(u, kept);
  const auto tp = detail::subset_offsets(u, traced);
  DenseOperator out{SiteUniverse::make(kept), Eigen::MatrixXcd::Zero(kp.size(), kp.size())};
  for (std::size_t i = 0; i < kp.size(); ++i) {
    for (std::size_t j = 0; j < kp.size(); ++j) {
      cplx acc = 0;
      for (std::uint64_t t : tp) acc += rho.m(kp[i] | t, kp[j] | t);
      out.m(i, j) = acc;
    }
  }
  return out;
}

// Reduced density operator on `keep` from a pure state.
inline DenseOperator reduced_density_dense(const StateVector& psi, const std::vector<SiteId>& keep_in,
                                           const DenseLimits& lim = {}) {
  const auto& u = *psi.universe;
  const std::vector<SiteId> keep = normalized_sites(keep_in);
  require_dense_size(keep.size(), lim.max_dense_qubits, "reduced_density_dense");
  for (SiteId s : keep) {
    if (!u.contains(s)) fail(ErrorCode::InvalidArgument, "reduced_density_dense: site not in universe");
  }
  const auto kp = detail::subset_offsets(u, keep);
  const auto tp = detail::subset_offsets(u, detail::complement(u, keep));
  Eigen::MatrixXcd amp(kp.size(), tp.size());
  for (std::size_t i = 0; i < kp.size(); ++i) {
    for (std::size_t t = 0; t < tp.size(); ++t) amp(i, t) = psi.v[kp[i] | tp[t]];
  }
  return {SiteUniverse::make(keep), amp * amp.adjoint()};
}

// op acting on a subset of `target`'s sites, extended by identity.
inline DenseOperator embed(const DenseOperator& op, const UniversePtr& target, const DenseLimits& lim = {}) {
  require_dense_size(target->size(), lim.max_dense_qubits, "embed");
  const auto& sub = op.universe->ids();
  for (SiteId s : sub) {
    if (!target->contains(s)) fail(ErrorCode::InvalidArgument, "embed: site not in target universe");
  }
  const auto sp = detail::subset_offsets(*target, sub);
  const auto cp = detail::subset_offsets(*target, detail::complement(*target, sub));
  const std::size_t dim = std::size_t{1} << target->size();
  DenseOperator out{target, Eigen::MatrixXcd::Zero(dim, dim)};
  for (std::uint64_t c : cp) {
    for (std::size_t a = 0; a < sp.size(); ++a) {
      for (std::size_t b = 0; b < sp.size(); ++b) out.m(sp[a] | c, sp[b] | c) = op.m(a, b);
    }
  }
  return out;
}

struct RegulatorConfig {
  double epsilon = 1e-9;
  double sweep_lo = 1e-12;
  double sweep_hi = 1e-6;

  void validate() const {
    if (!(epsilon > 0 && epsilon < 1)) fail(ErrorCode::InvalidArgument, "regulator epsilon must lie in (0, 1)");
  }
};

class HermitianSpectrum {
 public:
  explicit HermitianSpectrum(const DenseOperator& rho, const DenseLimits& lim = {}) : universe_(rho.universe) {
    require_dense_size(rho.num_sites(), lim.max_eigen_qubits, "eigendecomposition");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.m);
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  const Eigen::VectorXd& values() const { return values_; }
  const Eigen::MatrixXcd& vectors() const { return vectors_; }

  // -ln with eigenvalues floored at eps.
  DenseOperator minus_log(double eps, bool* clamped = nullptr) const { return minus_log(eps, eps, clamped); }

  // -ln with every eigenvalue below floor replaced by value.
  DenseOperator minus_log(double floor, double value, bool* clamped = nullptr) const {
    Eigen::VectorXd d(values_.size());
    bool any = false;
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      double lam = values_[k];
      if (lam < floor) {
        lam = value;
        any = true;
      }
      d[k] = -std::log(lam);
    }
    if (clamped) *clamped = any;
    return {universe_, vectors_ * d.asDiagonal() * vectors_.adjoint()};
  }

 private:
  UniversePtr universe_;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

struct DenseLog {
  DenseOperator k;
  bool clamped = false;
};

inline DenseLog matrix_log_modular(const DenseOperator& rho, const RegulatorConfig& reg = {}, const DenseLimits& lim = {}) {
  reg.validate();
  DenseLog out;
  out.k = HermitianSpectrum(rho, lim).minus_log(reg.epsilon, &out.clamped);
  return out;
}

inline double entropy_dense(const DenseOperator& rho, const DenseLimits& lim = {}) {
  const HermitianSpectrum spec(rho, lim);
  double s = 0;
  for (double lam : spec.values()) {
    if (lam > 0) s -= lam * std::log(lam);
  }
  return s;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// ---- parent Hamiltonian -----------------------------------------------------

// H = -sum_i g_i.
inline PauliSum parent_hamiltonian(const GeneratorSet& gs) {
  PauliSum h(gs.universe);
  for (const auto& g : gs.generators) h += g * cplx{-1.0};
  return h;
}

struct SpectrumCheck {
  std::size_t qubits = 0;
  bool diagonalized = false;
  double integer_deviation = 0;  // max distance of an eigenvalue from an integer
  double ground_energy = 0;
  std::size_t ground_degeneracy = 0;
  double equivalence_residual = 0;  // matrix-free path: |H C v - C H0 v| / |v|

  bool ok(double tol = 1e-9) const {
    return integer_deviation <= tol && equivalence_residual <= tol && ground_degeneracy == 1;
  }
};

// Integer spectrum and unique ground state of H. Up to max_eigen_qubits the
// matrix is diagonalized. Above that the circuit is required, and the check
// is that H C v = C H0 v on random probes, with H0 = -sum_i X_i; H is then
// unitarily equivalent to H0, whose spectrum is -n, -n+2, ..., n.
inline SpectrumCheck integer_spectrum(const GeneratorSet& gs, const Circuit* circuit, const DenseLimits& lim = {},
                                      int probes = 3, std::uint64_t seed = 7) {
  SpectrumCheck out;
  const std::size_t n = gs.universe->size();
  out.qubits = n;
  const PauliSum h = parent_hamiltonian(gs);
  if (static_cast<int>(n) <= std::min(lim.max_eigen_qubits, lim.max_dense_qubits)) {
    out.diagonalized = true;
    const HermitianSpectrum spec(to_dense(h, lim), lim);
    const Eigen::VectorXd& ev = spec.values();
    out.ground_energy = ev.minCoeff();
    for (double e : ev) {
      out.integer_deviation = std::max(out.integer_deviation, std::abs(e - std::round(e)));
      if (std::abs(e - out.ground_energy) < 1e-9) ++out.ground_degeneracy;
    }
    return out;
  }
  if (!circuit) fail(ErrorCode::TooLarge, "integer_spectrum: no circuit for the matrix-free check");
  require_dense_size(n, lim.max_state_qubits, "integer_spectrum");
  PauliSum h0(gs.universe);
  for (SiteId s : gs.universe->ids()) h0 += detail::single_x(gs.universe, s) * cplx{-1.0};
  const std::size_t dim = std::size_t{1} << n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int k = 0; k < probes; ++k) {
    StateVector v{gs.universe, Eigen::VectorXcd(dim)};
    for (std::size_t i = 0; i < dim; ++i) v.v[i] = cplx{nd(rng), nd(rng)};
    v.v.normalize();
    const Eigen::VectorXcd lhs = modcom::apply(h, apply_circuit(v, *circuit).v);
    const Eigen::VectorXcd rhs = apply_circuit({gs.universe, modcom::apply(h0, v.v)}, *circuit).v;
    out.equivalence_residual = std::max(out.equivalence_residual, (lhs - rhs).norm());
  }
  if (out.equivalence_residual < 1e-9) {
    out.ground_energy = -static_cast<double>(n);
    out.ground_degeneracy = 1;
  }
  return out;
}

}  // namespace modcom
