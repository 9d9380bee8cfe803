// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every line passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "modcom/modcom.hpp"

using namespace modcom;

namespace {

const double kInvSqrt3 = 1 / std::numbers::sqrt3;

// (1/(2 sqrt3)) ln^2((1 + 1/sqrt3)/(1 - 1/sqrt3)), straight from the formula.
double chain_value() {
  const double l = std::log((1 + kInvSqrt3) / (1 - kInvSqrt3));
  return l * l / (2 * std::numbers::sqrt3);
}

std::vector<SiteId> even_sites(SiteId lo, SiteId hi) {
  std::vector<SiteId> v;
  for (SiteId s = lo; s <= hi; ++s) {
    if (s % 2 == 0) v.push_back(s);
  }
  return v;
}

std::string xs(SiteId n, SiteId m) {
  std::string out;
  for (SiteId s = n; s <= m; s += 2) out += "X_" + std::to_string(s) + " ";
  return out;
}

ComputeOptions opts(MethodChoice m) {
  ComputeOptions o;
  o.method = m;
  return o;
}

double j_dense(const StateVector& psi, const RegionAssignment& r) {
  return modcom_dense(reduced_density_dense(psi, r.abc_sites()), r).value;
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
}

Eigen::VectorXcd random_pure(int dim, std::mt19937_64& rng) { return random_unitary(dim, rng).col(0); }

// Frobenius distance between |a><a| and |b><b| for unit vectors.
// sqrt2 * min over phases of |a - e^{i phi} b|; bounds the Frobenius distance
// of the projectors without the cancellation in 1 - |<a|b>|^2.
double projector_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const cplx o = b.dot(a);
  const cplx phase = std::abs(o) > 0 ? o / std::abs(o) : cplx{1, 0};
  return std::numbers::sqrt2 * (a - phase * b).norm();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

// Applies random unitaries supported inside one region and returns the
// largest change in J.
double single_region_unitary_drift(const StateVector& psi0, const RegionAssignment& r, std::mt19937_64& rng, int trials) {
  const double j0 = j_dense(psi0, r);
  double drift = 0;
  std::uniform_real_distribution<double> ud(-1, 1);
  for (Region reg : kAllRegions) {
    const std::vector<SiteId> sites = r.sites(reg);
    for (int t = 0; t < trials && !sites.empty(); ++t) {
      StateVector psi = psi0;
      if (sites.size() >= 2) {
        const SiteId a = sites[rng() % sites.size()];
        SiteId b = a;
        while (b == a) b = sites[rng() % sites.size()];
        const Eigen::Matrix4cd u = random_unitary(4, rng);
        apply_gate(psi, Gate{CustomTwoQubitGate{a, b, u}, 1});
      }
      const SiteId s = sites[rng() % sites.size()];
      const Eigen::Vector3d axis = Eigen::Vector3d(ud(rng), ud(rng), ud(rng)).normalized();
      apply_gate(psi, Gate{RotationGate{s, axis_angle_rotation(axis, 3 * ud(rng))}, 1});
      drift = std::max(drift, std::abs(j_dense(psi, r) - j0));
    }
  }
  return drift;
}

// ---- criteria -------------------------------------------------------------

Check criterion_1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const double target = chain_value();
  c.require(std::abs(modcom_closed({kInvSqrt3, kInvSqrt3, kInvSqrt3}) - target) < 1e-14, "closed form");
  double sym_err = 0, dense_err = 0;
  for (int N = 1; N <= 6; ++N) {
    const Model m = model_1d(N);
    const ModcomResult r = modcom_state(m.state, m.regions, opts(MethodChoice::Symbolic));
    sym_err = std::max(sym_err, std::abs(r.value - target));
  }
  for (int N = 1; N <= 3; ++N) {
    const Model m = model_1d(N);
    dense_err = std::max(dense_err, std::abs(modcom_state(m.state, m.regions, opts(MethodChoice::Dense)).value - target));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(sym_err < 1e-12, "symbolic N=1..6");
  c.require(dense_err < 1e-9, "dense N=1..3");
  c.require(secs < 10, "runtime");
  c.detail << "J=" << std::setprecision(12) << target << " symbolic max err " << std::setprecision(2) << sym_err
           << " (N=1..6), dense max err " << dense_err << " (N=1..3), " << std::setprecision(3) << secs << " s";
  return c;
}

// The 2M+4-string form of the perturbed reduced state: AB and BC families plus the Y_0 string.
PauliSum perturbed_short_form(int N, int M, double t) {
  const SiteId L = 2 * N;
  auto u = SiteUniverse::make(even_sites(-L, L));
  const double c = std::cos(t), sn = std::sin(t);
  PauliSum rho = PauliSum::identity(u);
  rho += PauliSum::from_text(u, xs(-L, 0), kInvSqrt3 * std::pow(c, M));
  rho += PauliSum::from_text(u, "Z_0 " + xs(2, L), kInvSqrt3 * std::pow(c, M));
  rho += PauliSum::from_text(u, xs(-L, -2) + "Y_0 " + xs(2, L), kInvSqrt3 * std::pow(c, 2 * M));
  for (int j = 0; j <= M - 1; ++j) {
    const SiteId site = -2 * (M - j);
    rho += PauliSum::from_text(u, (site - 2 >= -L ? xs(-L, site - 2) : "") + "Y_" + std::to_string(site),
                               sn * std::pow(c, j));
  }
  for (int k = 0; k <= M - 1; ++k) {
    const SiteId site = 2 * (M - k);
    rho += PauliSum::from_text(u, "Y_" + std::to_string(site) + " " + (site + 2 <= L ? xs(site + 2, L) : ""),
                               sn * std::pow(c, k));
  }
  return rho * cplx(std::ldexp(1.0, -(2 * N + 1)));
}

Check criterion_2() {
  Check c;
  double dense_gap = 0;
  for (int N = 1; N <= 6; ++N) {
    const SiteId L = 2 * N;
    const PauliSum rho = reduced_density(generators_1d(N), even_sites(-L, L));
    auto u = rho.universe();
    const double s = std::ldexp(1.0, -(2 * N + 1));
    const PauliSum expect = PauliSum::identity(u, s) + PauliSum::from_text(u, xs(-L, 0), s * kInvSqrt3) +
                            PauliSum::from_text(u, "Z_0 " + xs(2, L), s * kInvSqrt3) +
                            PauliSum::from_text(u, xs(-L, -2) + "Y_0 " + xs(2, L), s * kInvSqrt3);
    c.require(rho.size() == 4 && rho.approx_equal(expect, 1e-15), "unperturbed chain N=" + std::to_string(N));
    if (N <= 3) {
      const Model m = model_1d(N);
      const StateVector psi = circuit_state(*m.state.circuit, m.state.generators.universe);
      dense_gap = std::max(dense_gap, (to_dense(rho).m - reduced_density_dense(psi, even_sites(-L, L)).m).norm());
    }
  }
  std::ostringstream counts;
  const double t = 0.3;
  for (auto [N, M] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const SiteId L = 2 * N;
    const PauliSum rho = reduced_density(generators_1d_perturbed(N, M, t), even_sites(-L, L));
    const PauliSum short_form = perturbed_short_form(N, M, t);
    // Every string of the short form is present with its coefficient.
    bool all_present = short_form.size() == static_cast<std::size_t>(2 * M + 4);
    for (const auto& [p, coeff] : short_form.terms()) all_present = all_present && std::abs(rho.coefficient(p) - coeff) < 1e-15;
    c.require(all_present, "short-form strings (N,M)=(" + std::to_string(N) + "," + std::to_string(M) + ")");
    // The remainder lives on ABC only and leaves rho_AB and rho_BC untouched.
    const PauliSum rest = rho - short_form;
    const auto r = RegionAssignment::canonical_1d(N, M);
    std::vector<SiteId> a = r.sites(Region::A), cc = r.sites(Region::C);
    c.require(ptrace_sum(rest, cc).approx_equal(PauliSum(ptrace_sum(rest, cc).universe()), 1e-15) &&
                  ptrace_sum(rest, a).approx_equal(PauliSum(ptrace_sum(rest, a).universe()), 1e-15),
              "cross strings vanish on AB and BC");
    c.require(rest.size() == static_cast<std::size_t>((M + 1) * (M + 1) - 1), "cross-string count");
    counts << " (" << N << "," << M << "):" << short_form.size() << "+" << rest.size();
    const Model m = model_1d(N, M, t);
    const StateVector psi = circuit_state(*m.state.circuit, m.state.generators.universe);
    dense_gap = std::max(dense_gap, (to_dense(rho).m - reduced_density_dense(psi, even_sites(-L, L)).m).norm());
  }
  c.require(dense_gap < 1e-12, "dense partial trace");
  c.detail << "unperturbed 4 terms exact (N=1..6); perturbed short-form+cross terms" << counts.str()
           << "; dense gap " << std::setprecision(2) << dense_gap
           << "; the 2M+4-string form omits the AB x BC cross strings, which cancel in rho_AB, rho_BC and J (see README)";
  return c;
}

Check criterion_3() {
  Check c;
  double worst = 0;
  for (int M = 1; M <= 3; ++M) {
    for (int k = 0; k <= 8; ++k) {
      const double t = k * std::numbers::pi / 16;
      const Model m = model_1d(M + 1, M, t);
      const double jd = modcom_state(m.state, m.regions, opts(MethodChoice::Dense)).value;
      worst = std::max(worst, std::abs(jd - modcom_perturbed({t, M})));
    }
  }
  c.require(worst < 1e-8, "grid");
  const double ratio = modcom_perturbed({0.3, 6}) / modcom_perturbed({0.3, 1});
  const double bound = std::pow(std::cos(0.3), 20) * 1.5;
  c.require(ratio < bound, "suppression");
  c.detail << "9x3 grid max |J_dense - J_closed| " << std::setprecision(2) << worst << "; J(6)/J(1) at 0.3 = "
           << std::setprecision(4) << ratio << " < " << bound;
  return c;
}

Check criterion_4() {
  Check c;
  double worst = 0, rot_gap = 0;
  for (int N = 1; N <= 3; ++N) {
    const GeneratorSet gs = generators_1d(N);
    c.require(std::abs(symbolic_trace(gs) - 1) < 1e-12, "rank one");
    const StateVector ref = ground_state(gs);
    std::vector<Eigen::VectorXcd> states;
    for (const Eigen::Matrix3d& r : {standard_r_rotation(), alternate_r_rotation(0.7)}) {
      const StateVector psi = circuit_state(circuit_1d(N, r), gs.universe);
      for (const auto& g : gs.generators) worst = std::max(worst, (modcom::apply(g, psi.v) - psi.v).norm());
      worst = std::max(worst, projector_distance(psi.v, ref.v));
      if (N <= 2) worst = std::max(worst, (to_dense(gs).m - psi.v * psi.v.adjoint()).norm());
      states.push_back(psi.v);
    }
    rot_gap = std::max(rot_gap, projector_distance(states[0], states[1]));
  }
  c.require(worst < 1e-10, "circuit vs generator projector");
  c.require(rot_gap < 1e-10, "rotation independence");
  c.detail << "max projector gap " << std::setprecision(2) << worst << " (N=1..3), two rotations differ by " << rot_gap;
  return c;
}

Check criterion_5() {
  Check c;
  std::mt19937_64 rng(2718);
  double worst = 0;
  std::size_t chains = 0;
  for (const HoneycombConfig& cfg : {minimal_strip_config(1), minimal_strip_config(2), minimal_strip_config(2, 0, true)}) {
    const HoneycombResult res = modcom_honeycomb(cfg, opts(MethodChoice::Symbolic));
    chains = std::max(chains, res.reduction.chains.size());
    c.require(res.reduction.chains.size() == 1, "exactly one chain");
    for (const auto& ch : res.reduction.chains) {
      for (Region reg : kAllRegions) c.require(!ch.regions.sites(reg).empty(), "chain touches all four regions");
    }
    c.require(res.total.method == Method::Symbolic, "symbolic path");
    worst = std::max(worst, std::abs(res.total.value - chain_value()));
  }
  c.require(worst < 1e-12, "2D value");

  // Unitary invariance on the reduced chain and on the 2D state itself.
  const HoneycombState st = honeycomb_state(minimal_strip_config(1));
  const auto red = reduce_2d_to_chains(st.circuit, st.regions);
  const auto& ch = red.chains.at(0);
  const double d1 = single_region_unitary_drift(circuit_state(ch.circuit, ch.universe), ch.regions, rng, 3);
  const std::size_t n2d = st.generators.universe->size();
  const double d2 = single_region_unitary_drift(circuit_state(st.circuit, st.generators.universe), st.regions, rng, 2);
  c.require(std::max(d1, d2) < 1e-9, "unitary invariance");
  c.detail << "one chain per config, |J_2D - J_1D| " << std::setprecision(2) << worst << "; single-region unitary drift "
           << d1 << " (chain, " << ch.universe->size() << " qubits), " << d2 << " (2D strip, " << n2d << " qubits)";
  return c;
}

Check criterion_6() {
  Check c;
  const Model m = model_1d(2);
  const auto rows = sensitivity_scan(m.state, m.regions, std::nullopt, Region::D, opts(MethodChoice::Dense));
  double worst = 0;
  for (const auto& row : rows) worst = std::max(worst, std::abs(row.J));
  c.require(rows.size() == 5, "five even sites");
  c.require(worst < 1e-9, "vanishing J");
  c.detail << rows.size() << " single-site moves, max |J| " << std::setprecision(2) << worst;
  return c;
}

Check criterion_7() {
  Check c;
  double s_err = 0, k_err = 0, leak = 0;
  for (int N = 1; N <= 4; ++N) {
    const SiteId L = 2 * N;
    const Graph g = Graph::path(0, L);
    const PauliSum rho = reduced_density(generators_cluster(g), even_sites(0, L));
    auto u = rho.universe();
    const PauliString x = x_string(u, 0, L);
    const double s = std::ldexp(1.0, -(N + 1));
    c.require(rho.approx_equal(PauliSum::identity(u, s) + PauliSum::from_string(x, s), 1e-15), "reduced form");
    const StateVector psi = circuit_state(modified_cluster_circuit(g, {}), generators_cluster(g).universe);
    const DenseOperator rd = reduced_density_dense(psi, even_sites(0, L));
    c.require((rd.m - to_dense(rho).m).norm() < 1e-12, "dense reduced form");
    s_err = std::max(s_err, std::abs(entropy_dense(rd) - N * std::numbers::ln2));
    s_err = std::max(s_err, std::abs(entropy_closed(as_anticommuting(rho)) - N * std::numbers::ln2));

    // Regulated modular Hamiltonian: (N+1) ln2 - ln(2-eps) (1+X)/2 - ln(eps) (1-X)/2.
    const double eps = 1e-6;
    const PauliSum k = modular_hamiltonian_closed(as_anticommuting(rho), eps).as_pauli_sum();
    const PauliSum plus = (PauliSum::identity(u) + PauliSum::from_string(x)) * cplx(0.5);
    const PauliSum minus = (PauliSum::identity(u) - PauliSum::from_string(x)) * cplx(0.5);
    const PauliSum three = PauliSum::identity(u, (N + 1) * std::numbers::ln2) + plus * cplx(-std::log(2 - eps)) +
                           minus * cplx(-std::log(eps));
    k_err = std::max(k_err, (to_dense(k).m - to_dense(three).m).norm());
    leak = std::max(leak, std::abs(std::log(eps) * (rho * minus).trace().real()));
    RegulatorConfig reg;
    reg.epsilon = eps;
    const DenseLog kd = matrix_log_modular(rd, reg);
    c.require(kd.clamped, "dense regulator engaged");
    const Eigen::MatrixXcd dense_three =
        N * std::numbers::ln2 * to_dense(plus).m - std::log(eps) * to_dense(minus).m;
    k_err = std::max(k_err, (kd.k.m - dense_three).norm());
    leak = std::max(leak, std::abs((rd.m * kd.k.m).trace().real() - N * std::numbers::ln2));
  }
  c.require(s_err < 1e-10, "entropy");
  c.require(k_err < 1e-8, "three-term form");
  c.require(leak < 1e-10, "ln eps term");
  c.detail << "2^-(N+1)(1+X) exact (N=1..4); entropy err " << std::setprecision(2) << s_err << "; three-term form err "
           << k_err << "; ln eps contribution " << leak;
  return c;
}

struct BuilderCase {
  std::string name;
  GeneratorSet gs;
  Circuit circuit;
};

std::vector<BuilderCase> builder_cases(int N) {
  std::vector<BuilderCase> out;
  out.push_back({"1d", generators_1d(N), circuit_1d(N)});
  if (N >= 2) {
    const Model m = model_1d(N, N - 1, 0.7);
    out.push_back({"perturbed", m.state.generators, *m.state.circuit});
  }
  const Model cl = model_cluster(N);
  out.push_back({"cluster", cl.state.generators, *cl.state.circuit});
  const HoneycombState hs = honeycomb_state(minimal_strip_config(N));
  out.push_back({"honeycomb", hs.generators, hs.circuit});
  return out;
}

Check criterion_8() {
  Check c;
  double worst = 0;
  int dense_cases = 0, diag_cases = 0, symbolic_cases = 0;
  const DenseLimits lim;
  for (int N = 1; N <= 4; ++N) {
    for (const auto& b : builder_cases(N)) {
      const std::string tag = b.name + " N=" + std::to_string(N);
      const GeneratorReport rep = validate(b.gs);
      c.require(rep.commuting && rep.involutory && rep.hermitian, tag + " structure");
      c.require(std::abs(rep.trace - 1) < 1e-12, tag + " trace");
      const std::size_t n = b.gs.universe->size();
      if (static_cast<int>(n) <= lim.max_state_qubits) {
        const SpectrumCheck s = integer_spectrum(b.gs, &b.circuit, lim);
        c.require(s.ok(), tag + " spectrum");
        worst = std::max({worst, s.integer_deviation, s.equivalence_residual});
        ++(s.diagonalized ? diag_cases : dense_cases);
      } else {
        // Beyond state-vector size: H equals C (-sum X) C^dagger term for term.
        PauliSum h0(b.gs.universe);
        for (const auto& g : generators_from_circuit(b.circuit, b.gs.universe).generators) h0 += g;
        PauliSum h(b.gs.universe);
        for (const auto& g : b.gs.generators) h += g;
        c.require(h.approx_equal(h0, 1e-12), tag + " symbolic conjugation");
        ++symbolic_cases;
      }
    }
  }
  c.require(worst < 1e-9, "integer spectrum");
  c.detail << "builders 1d/perturbed/cluster/honeycomb, N<=4; " << diag_cases << " diagonalized, " << dense_cases
           << " matrix-free, " << symbolic_cases << " symbolic (over " << lim.max_state_qubits
           << " qubits); max deviation " << std::setprecision(2) << worst;
  return c;
}

Check criterion_9() {
  Check c;
  std::mt19937_64 rng(31415);
  // Additivity: the 1D chain next to a chain built with a random V gate.
  const Model m1 = model_1d(1);
  const Model m2 = model_custom_gate(1, random_unitary(4, rng));
  const StateVector p1 = circuit_state(*m1.state.circuit, m1.state.generators.universe);
  const StateVector p2 = circuit_state(*m2.state.circuit, m2.state.generators.universe);
  const double j1 = j_dense(p1, m1.regions), j2 = j_dense(p2, m2.regions);
  const SiteId shift = 10;
  std::vector<SiteId> ids = p1.universe->ids();
  for (SiteId s : p2.universe->ids()) ids.push_back(s + shift);
  const StateVector joint{SiteUniverse::make(ids), Eigen::kroneckerProduct(p1.v, p2.v).eval()};
  std::vector<SiteId> a = m1.regions.sites(Region::A), b = m1.regions.sites(Region::B), cc = m1.regions.sites(Region::C);
  for (SiteId s : m2.regions.sites(Region::A)) a.push_back(s + shift);
  for (SiteId s : m2.regions.sites(Region::B)) b.push_back(s + shift);
  for (SiteId s : m2.regions.sites(Region::C)) cc.push_back(s + shift);
  const double add_err = std::abs(j_dense(joint, RegionAssignment::from_lists(*joint.universe, a, b, cc)) - (j1 + j2));
  c.require(add_err < 1e-9, "additivity");
  c.require(std::abs(j2) > 1e-3, "nontrivial second factor");

  // Trivial support: a random pure state on three regions times a pure
  // state on the fourth; two qubits per region.
  double worst = 0;
  auto u = SiteUniverse::range(0, 7);
  for (Region lone : kAllRegions) {
    std::vector<Region> order;
    for (Region r : kAllRegions) {
      if (r != lone) order.push_back(r);
    }
    order.push_back(lone);
    std::vector<std::vector<SiteId>> lists(4);
    for (int k = 0; k < 4; ++k) {
      lists[static_cast<int>(order[k])] = {2 * k, 2 * k + 1};
    }
    const auto r = RegionAssignment::from_lists(*u, lists[0], lists[1], lists[2]);
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXcd v = Eigen::kroneckerProduct(random_pure(64, rng), random_pure(4, rng)).eval();
      worst = std::max(worst, std::abs(j_dense({u, v}, r)));
    }
  }
  c.require(worst < 1e-9, "trivial support");
  c.detail << "|J(a x b) - J(a) - J(b)| " << std::setprecision(2) << add_err << " (J(b)=" << std::setprecision(4) << j2
           << "), trivial-support max |J| " << std::setprecision(2) << worst << " over A, B, C, D";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 1D chain value", criterion_1},
      {"2 reduced-state exactness", criterion_2},
      {"3 perturbed closed form", criterion_3},
      {"4 circuit equivalence", criterion_4},
      {"5 2D reduction", criterion_5},
      {"6 sensitivity", criterion_6},
      {"7 cluster-chain suite", criterion_7},
      {"8 structural invariants", criterion_8},
      {"9 general properties", criterion_9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    if (!c.ok) ++failed;
    std::printf("%s  [%s] %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
