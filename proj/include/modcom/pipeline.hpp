#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modcom/builders.hpp"
#include "modcom/dense.hpp"
#include "modcom/honeycomb.hpp"
#include "modcom/modular.hpp"
#include "modcom/reduction.hpp"

namespace modcom {

enum class MethodChoice { Auto, Symbolic, Dense };

inline MethodChoice parse_method(std::string_view s) {
  if (s == "auto") return MethodChoice::Auto;
  if (s == "symbolic") return MethodChoice::Symbolic;
  if (s == "dense") return MethodChoice::Dense;
  fail(ErrorCode::ParseError, "unknown method '" + std::string(s) + "'");
}

// A pure state given both as generators and (optionally) as a circuit on
// |+...+>. The dense path prefers the circuit, which does not share code
// with the generator formulas.
struct PureState {
  GeneratorSet generators;
  std::optional<Circuit> circuit;

  // A full generator set pins down the state; custom-gate states only carry a circuit.
  bool symbolic_available() const { return generators.universe && generators.size() == generators.universe->size(); }
};

struct ComputeOptions {
  MethodChoice method = MethodChoice::Auto;
  std::optional<double> epsilon;  // symbolic regulator; default applied when singular
  RegulatorConfig regulator;      // dense regulator and sweep
  DenseLimits limits = DenseLimits::from_env();
  SweepOptions sweep;
};

inline StateVector dense_state(const PureState& st, const DenseLimits& lim) {
  if (st.circuit) return circuit_state(*st.circuit, st.generators.universe, lim);
  return ground_state(st.generators, lim);
}

inline std::vector<SiteId> abc_in_universe(const RegionAssignment& r, const SiteUniverse& u) {
  std::vector<SiteId> out;
  for (SiteId s : r.abc_sites()) {
    if (u.contains(s)) out.push_back(s);
  }
  return out;
}

inline ModcomResult modcom_state_symbolic(const PureState& st, const RegionAssignment& r, const ComputeOptions& opt) {
  if (!st.symbolic_available()) fail(ErrorCode::UnsupportedSymbolic, "state has no complete generator set");
  const PauliSum rho = reduced_density(st.generators, abc_in_universe(r, *st.generators.universe), opt.sweep);
  try {
    return modcom_symbolic(rho, r, opt.epsilon);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularDensity || opt.epsilon) throw;
    return modcom_symbolic(rho, r, kDefaultRegulator);
  }
}

inline ModcomResult modcom_state_dense(const PureState& st, const RegionAssignment& r, const ComputeOptions& opt) {
  const StateVector psi = dense_state(st, opt.limits);
  const DenseOperator rho = reduced_density_dense(psi, abc_in_universe(r, *psi.universe), opt.limits);
  return modcom_dense(rho, r, opt.regulator, opt.limits);
}

// J for a pure state; Auto tries the symbolic path and falls back to dense.
inline ModcomResult modcom_state(const PureState& st, const RegionAssignment& r, const ComputeOptions& opt = {}) {
  if (!r.covers(*st.generators.universe)) fail(ErrorCode::InvalidArgument, "region assignment does not cover the system");
  if (r.sites(Region::D).empty()) fail(ErrorCode::UndefinedGeometry, "J is only defined here for a nonempty D region");
  switch (opt.method) {
    case MethodChoice::Symbolic: return modcom_state_symbolic(st, r, opt);
    case MethodChoice::Dense: return modcom_state_dense(st, r, opt);
    case MethodChoice::Auto: break;
  }
  try {
    return modcom_state_symbolic(st, r, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAnticommuting && e.code() != ErrorCode::NonChainStructure &&
        e.code() != ErrorCode::SingularDensity && e.code() != ErrorCode::UnsupportedSymbolic) {
      throw;
    }
  }
  return modcom_state_dense(st, r, opt);
}

// ---- model constructors -------------------------------------------------

struct Model {
  PureState state;
  RegionAssignment regions;
};

// Modified chain on [-2N, 2N]; with M >= 1 the U(theta) perturbation on [-2M, 2M].
inline Model model_1d(int N, int M = 0, double theta = 0, const Eigen::Matrix3d& r = standard_r_rotation()) {
  Model m;
  Circuit c = circuit_1d(N, r);
  if (M >= 1) {
    m.state.generators = generators_1d_perturbed(N, M, theta);
    for (const auto& g : perturbation_unitary(M, theta).gates) c.gates.push_back(Gate{g.op, 3});
  } else {
    m.state.generators = generators_1d(N);
  }
  m.state.circuit = std::move(c);
  m.regions = RegionAssignment::canonical_1d(N, M);
  return m;
}

// Plain open cluster chain on [-2N, 2N] with the canonical regions.
inline Model model_cluster(int N, int M = 0) {
  const SiteId L = 2 * static_cast<SiteId>(N);
  const Graph g = Graph::path(-L, L);
  Model m;
  m.state.generators = generators_cluster(g);
  m.state.circuit = modified_cluster_circuit(g, {});
  m.regions = RegionAssignment::canonical_1d(N, M);
  return m;
}

// The 1D circuit with V_{1,0} replaced by an arbitrary gate (dense only).
inline Model model_custom_gate(int N, const Eigen::Matrix4cd& u, int M = 0) {
  const SiteId L = 2 * static_cast<SiteId>(N);
  Model m;
  Circuit c;
  c.add(CustomTwoQubitGate{1, 0, u}, 1);
  for (const auto& g : modified_cluster_circuit(Graph::path(-L, L), {BlueEdge{1, 0}}).gates) {
    if (g.layer == 2) c.gates.push_back(g);
  }
  m.state.generators = GeneratorSet{SiteUniverse::range(-L, L), {}, {}};
  m.state.circuit = std::move(c);
  m.regions = RegionAssignment::canonical_1d(N, M);
  return m;
}

inline bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-10) {
  return u.rows() == u.cols() && (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm() < tol;
}

// ---- 2D ------------------------------------------------------------------

struct HoneycombResult {
  ModcomResult total;  // sum over surviving chains
  ChainReduction reduction;
  std::vector<ModcomResult> per_chain;
  std::size_t boundary_blue_edges = 0;
};

inline HoneycombResult modcom_honeycomb(const HoneycombConfig& cfg, const ComputeOptions& opt = {}) {
  const HoneycombState st = honeycomb_state(cfg);
  HoneycombResult out;
  out.boundary_blue_edges = outer_boundary_blue_edges(st.blue, st.regions).size();
  out.reduction = reduce_2d_to_chains(st.circuit, st.regions);
  if (out.reduction.d_empty) fail(ErrorCode::UndefinedGeometry, "region D is empty");
  out.total.method = opt.method == MethodChoice::Dense ? Method::Dense : Method::Symbolic;
  for (const auto& chain : out.reduction.chains) {
    PureState ps{chain.generators(), chain.circuit};
    const ModcomResult r = modcom_state(ps, chain.regions, opt);
    out.total.value += r.value;
    if (r.method == Method::Dense) out.total.method = Method::Dense;
    if (r.epsilon) out.total.epsilon = r.epsilon;
    out.total.deltas.insert(out.total.deltas.end(), r.deltas.begin(), r.deltas.end());
    out.per_chain.push_back(r);
  }
  return out;
}

// ---- sensitivity -----------------------------------------------------------

struct SensitivityRow {
  SiteId site;
  Region from;
  Region to;
  double J;
  Method method;
};

// Recomputes J with each listed site moved to `to`. With no explicit list,
// every ABC site is moved to D.
inline std::vector<SensitivityRow> sensitivity_scan(const PureState& st, const RegionAssignment& r,
                                                    std::optional<std::vector<SiteId>> sites = std::nullopt,
                                                    Region to = Region::D, const ComputeOptions& opt = {}) {
  const std::vector<SiteId> targets = sites ? *sites : r.abc_sites();
  std::vector<SensitivityRow> rows;
  for (SiteId s : targets) {
    const RegionAssignment moved = move_site(r, s, to);
    const ModcomResult res = modcom_state(st, moved, opt);
    rows.push_back({s, r.region_of(s), to, res.value, res.method});
  }
  return rows;
}

}  // namespace modcom
