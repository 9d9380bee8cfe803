#pragma once

#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "modcom/anticommuting.hpp"
#include "modcom/dense.hpp"
#include "modcom/pauli_sum.hpp"
#include "modcom/regions.hpp"

namespace modcom {

enum class Method { ClosedForm, Symbolic, Dense };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::Symbolic: return "symbolic";
    case Method::Dense: return "dense";
  }
  return "unknown";
}

struct ModcomResult {
  double value = 0;  // nats^2
  Method method = Method::ClosedForm;
  std::vector<double> deltas;      // delta of rho_AB, rho_BC (symbolic path)
  std::optional<double> epsilon;   // regulator, when one was needed
  double imag_residual = 0;        // |Im| of i Tr(rho [K_AB, K_BC])
  double epsilon_deviation = 0;    // dense path: spread of J across the regulator sweep
  bool clamped = false;            // dense path: an eigenvalue was floored
};

// rho_ABC = 2^{-n}(1 + alpha P_AB + beta P_BC + i gamma P_AB P_BC).
struct CanonicalABCParams {
  double alpha = 0, beta = 0, gamma = 0;

  void validate() const {
    if (std::abs(alpha) >= 1 || std::abs(beta) >= 1) {
      fail(ErrorCode::InvalidArgument, "|alpha| and |beta| must be below 1 (logarithm diverges)");
    }
    if (alpha * alpha + beta * beta + gamma * gamma > 1 + kPositivitySlack) {
      fail(ErrorCode::NotPositive, "alpha^2 + beta^2 + gamma^2 exceeds 1");
    }
  }
};

inline double log_ratio(double x) { return std::log1p(x) - std::log1p(-x); }

inline double modcom_closed(const CanonicalABCParams& p) {
  p.validate();
  return p.gamma / 2 * log_ratio(p.alpha) * log_ratio(p.beta);
}

struct PerturbationSpec {
  double theta = 0;
  int M = 1;

  double delta() const { return std::sqrt(1 - 2.0 / 3.0 * std::pow(std::cos(theta), 2 * M)); }
};

// cos^{4M} t / (6 sqrt3 delta^2) ln^2((1+delta)/(1-delta)); 0 at cos t = 0.
inline double modcom_perturbed(const PerturbationSpec& p) {
  if (p.M < 1) fail(ErrorCode::InvalidArgument, "M must be positive");
  const double c2m = std::pow(std::cos(p.theta), 2 * p.M);
  if (c2m == 0) return 0;
  const double d2 = 1 - 2.0 / 3.0 * c2m;
  const double d = std::sqrt(d2);
  // 1 - delta = (2/3) c^{2M} / (1 + delta), kept exact for small c.
  const double one_minus = (2.0 / 3.0) * c2m / (1 + d);
  const double lr = std::log1p(d) - std::log(one_minus);
  return c2m * c2m / (6 * std::numbers::sqrt3 * d2) * lr * lr;
}

namespace detail {

struct AbcSplit {
  std::vector<SiteId> a, b, c;
};

inline AbcSplit split_abc(const SiteUniverse& u, const RegionAssignment& r) {
  AbcSplit s;
  for (SiteId x : u.ids()) {
    switch (r.region_of(x)) {
      case Region::A: s.a.push_back(x); break;
      case Region::B: s.b.push_back(x); break;
      case Region::C: s.c.push_back(x); break;
      case Region::D: fail(ErrorCode::InvalidArgument, "rho_ABC contains a D site: " + std::to_string(x));
    }
  }
  return s;
}

}  // namespace detail

// J = i Tr(rho_ABC [K_AB, K_BC]) with K's from the anticommuting closed form.
inline ModcomResult modcom_symbolic(const PauliSum& rho_abc, const RegionAssignment& regions,
                                    std::optional<double> epsilon = std::nullopt) {
  const auto split = detail::split_abc(*rho_abc.universe(), regions);
  const PauliSum rho_ab = ptrace_sum(rho_abc, split.c);
  const PauliSum rho_bc = ptrace_sum(rho_abc, split.a);
  const AnticommutingDensity ab = as_anticommuting(rho_ab);
  const AnticommutingDensity bc = as_anticommuting(rho_bc);
  const ModularHamiltonian k_ab = modular_hamiltonian_closed(ab, epsilon);
  const ModularHamiltonian k_bc = modular_hamiltonian_closed(bc, epsilon);

  // Constants commute away; only the string parts matter.
  const PauliSum x = embed_into(k_ab.string_part, rho_abc.universe());
  const PauliSum y = embed_into(k_bc.string_part, rho_abc.universe());
  const cplx raw = cplx{0, 1} * (rho_abc * commutator(x, y)).trace();

  ModcomResult r;
  r.method = Method::Symbolic;
  r.value = raw.real();
  r.imag_residual = std::abs(raw.imag());
  r.deltas = {ab.delta(), bc.delta()};
  if (k_ab.regulator_used) r.epsilon = k_ab.regulator_used;
  if (k_bc.regulator_used) r.epsilon = k_bc.regulator_used;
  if (r.imag_residual > 1e-10) fail(ErrorCode::NotHermitian, "modular commutator has an imaginary part");
  return r;
}

inline constexpr double kEpsilonStability = 1e-8;

// Brute-force J: eigendecompose rho_AB and rho_BC, floor eigenvalues at eps.
// When the floor bites, the floored eigenvalues are re-set across the sweep
// range and J must not move; eigenvalues above the floor are never touched.
inline ModcomResult modcom_dense(const DenseOperator& rho_abc, const RegionAssignment& regions,
                                 const RegulatorConfig& reg = {}, const DenseLimits& lim = {}) {
  reg.validate();
  const auto split = detail::split_abc(*rho_abc.universe, regions);
  const DenseOperator rho_ab = ptrace_dense(rho_abc, split.c);
  const DenseOperator rho_bc = ptrace_dense(rho_abc, split.a);
  const HermitianSpectrum s_ab(rho_ab, lim), s_bc(rho_bc, lim);

  auto evaluate = [&](double value, bool& clamped) {
    bool c1 = false, c2 = false;
    const Eigen::MatrixXcd kab = embed(s_ab.minus_log(reg.epsilon, value, &c1), rho_abc.universe, lim).m;
    const Eigen::MatrixXcd kbc = embed(s_bc.minus_log(reg.epsilon, value, &c2), rho_abc.universe, lim).m;
    clamped = c1 || c2;
    const Eigen::MatrixXcd comm = kab * kbc - kbc * kab;
    return cplx{0, 1} * (rho_abc.m * comm).trace();
  };

  ModcomResult r;
  r.method = Method::Dense;
  bool clamped = false;
  const cplx raw = evaluate(reg.epsilon, clamped);
  r.value = raw.real();
  r.imag_residual = std::abs(raw.imag());
  r.clamped = clamped;
  if (clamped) {
    r.epsilon = reg.epsilon;
    const double lo = std::log10(reg.sweep_lo), hi = std::log10(reg.sweep_hi);
    constexpr int kSteps = 7;
    for (int k = 0; k < kSteps; ++k) {
      bool c = false;
      const double eps = std::pow(10.0, lo + (hi - lo) * k / (kSteps - 1));
      r.epsilon_deviation = std::max(r.epsilon_deviation, std::abs(evaluate(eps, c).real() - r.value));
    }
  }
  if (r.imag_residual > 1e-10) fail(ErrorCode::NotHermitian, "dense modular commutator has an imaginary part");
  if (r.epsilon_deviation > kEpsilonStability) {
    std::ostringstream msg;
    msg << std::scientific << std::setprecision(3) << "J = " << r.value << " varies by " << r.epsilon_deviation
        << " across the regulator sweep";
    fail(ErrorCode::EpsilonSensitive, msg.str());
  }
  return r;
}

}  // namespace modcom
