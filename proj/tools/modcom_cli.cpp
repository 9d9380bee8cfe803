// modcom: command-line front end for the modular commutator library.
//
// Exit codes: 0 ok, 1 verify failure, 2 bad input, 3 computation flagged.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "modcom/json_io.hpp"
#include "modcom/modcom.hpp"

using namespace modcom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitInput = 2;
constexpr int kExitFlagged = 3;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::UndefinedGeometry:
    case ErrorCode::TooLarge: return kExitInput;
    default: return kExitFlagged;
  }
}

struct Globals {
  std::string method = "auto";
  std::optional<double> epsilon;
  std::string out;
  std::string format = "json";
  std::optional<int> max_qubits;

  ComputeOptions options() const {
    ComputeOptions o;
    o.method = parse_method(method);
    if (epsilon) {
      o.epsilon = *epsilon;
      o.regulator.epsilon = *epsilon;
      o.regulator.validate();
    }
    if (max_qubits) {
      if (*max_qubits < 1) fail(ErrorCode::InvalidArgument, "--max-qubits must be positive");
      o.limits.max_dense_qubits = *max_qubits;
      o.limits.max_eigen_qubits = std::min(o.limits.max_eigen_qubits, *max_qubits);
      o.limits.max_state_qubits = *max_qubits;
    }
    return o;
  }
};

struct ModelArgs {
  std::string model = "1d";
  int N = 1;
  int M = 0;
  double theta = 0;
  std::string config;
};

void add_model_flags(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--model", m.model, "state family")->check(CLI::IsMember({"1d", "2d", "cluster"}));
  cmd->add_option("--N", m.N, "chain half-length (sites -2N..2N)");
  cmd->add_option("--M", m.M, "half-width of region B, and of the perturbation for 1d");
  cmd->add_option("--theta", m.theta, "perturbation angle in radians (1d, M >= 1)");
  cmd->add_option("--config", m.config, "2D configuration JSON (default: minimal strip for N)");
}

Model build_1d_or_cluster(const ModelArgs& a) {
  if (a.model == "cluster") return model_cluster(a.N, a.M);
  if (a.M == 0 && a.theta != 0) fail(ErrorCode::InvalidArgument, "--theta needs --M >= 1");
  if (a.N < 1 || a.M < 0 || a.M > a.N - 1) fail(ErrorCode::InvalidArgument, "need 0 <= M <= N-1");
  return model_1d(a.N, a.M, a.theta);
}

HoneycombConfig load_2d_config(const ModelArgs& a) {
  if (a.config.empty()) return minimal_strip_config(a.N, a.M);
  return honeycomb_config_from_json(read_json_file(a.config));
}

// Writes to --out or stdout.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + g.out);
  f << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_of(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
    os << '\n';
  }
  return os.str();
}

json base_record(const std::string& command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

// ---- modcom -------------------------------------------------------------------

int cmd_modcom(const Globals& g, const ModelArgs& a, bool cross_check) {
  const ComputeOptions opt = g.options();
  json j = base_record("modcom");
  j["model"] = a.model;
  j["N"] = a.N;
  j["M"] = a.M;
  j["theta"] = a.theta;
  ModcomResult r;
  if (a.model == "2d") {
    const HoneycombResult h = modcom_honeycomb(load_2d_config(a), opt);
    r = h.total;
    j["chains"] = h.reduction.chains.size();
    j["removed_gates"] = h.reduction.removed_gates;
    j["boundary_blue_edges"] = h.boundary_blue_edges;
  } else {
    const Model m = build_1d_or_cluster(a);
    r = modcom_state(m.state, m.regions, opt);
    if (cross_check) {
      ComputeOptions d = opt;
      d.method = r.method == Method::Dense ? MethodChoice::Symbolic : MethodChoice::Dense;
      const ModcomResult other = modcom_state(m.state, m.regions, d);
      j["J_cross_check"] = other.value;
      if (std::abs(other.value - r.value) > 1e-8) {
        std::cerr << json{{"error", "MethodDisagreement"},
                          {"message", "symbolic and dense disagree: " + fmt(r.value) + " vs " + fmt(other.value)}}
                         .dump()
                  << "\n";
        return kExitFlagged;
      }
    }
  }
  const json res = to_json(r);
  for (auto it = res.begin(); it != res.end(); ++it) j[it.key()] = it.value();
  j["J_over_pi_over_3"] = r.value / (std::numbers::pi / 3);
  if (g.format == "csv") {
    emit(g, csv_of({"model", "N", "M", "theta", "J", "method"},
                   {{a.model, std::to_string(a.N), std::to_string(a.M), fmt(a.theta), fmt(r.value),
                     std::string(to_string(r.method))}}));
  } else {
    emit(g, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- sweep --------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad --theta-grid entry '" + item + "'");
    }
  }
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
    fail(ErrorCode::ParseError, "--theta-grid must be start:stop:steps with integer steps >= 1");
  }
  const int steps = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) out.push_back(steps == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * k / (steps - 1));
  return out;
}

int cmd_sweep(const Globals& g, const std::string& grid, std::vector<int> ms, std::optional<int> fixed_n) {
  const ComputeOptions opt = g.options();
  const std::vector<double> thetas = parse_grid(grid);
  if (ms.empty()) fail(ErrorCode::InvalidArgument, "empty M list");
  for (int M : ms) {
    if (M < 1) fail(ErrorCode::InvalidArgument, "sweep needs M >= 1");
    if (fixed_n && *fixed_n < M + 1) fail(ErrorCode::InvalidArgument, "--N must be at least M+1");
  }
  struct Row {
    double theta;
    int M, N;
    double closed;
    std::optional<double> dense;
  };
  std::vector<Row> rows;
  bool flagged = false;
  std::string reason;
  for (double t : thetas) {
    for (int M : ms) {
      Row row{t, M, fixed_n.value_or(M + 1), modcom_perturbed({t, M}), std::nullopt};
      if (opt.method != MethodChoice::Symbolic) {
        const Model m = model_1d(row.N, M, t);
        ComputeOptions d = opt;
        d.method = MethodChoice::Dense;
        try {
          row.dense = modcom_state(m.state, m.regions, d).value;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TooLarge || opt.method == MethodChoice::Dense) {
            flagged = true;
            reason = e.what();
          }
        }
        if (row.dense && std::abs(*row.dense - row.closed) > 1e-8) {
          flagged = true;
          reason = "closed form and dense disagree at theta=" + fmt(t) + ", M=" + std::to_string(M);
        }
      }
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& x, const Row& y) { return std::tie(x.theta, x.M) < std::tie(y.theta, y.M); });
  auto abs_gap = [](const Row& r) -> std::optional<double> {
    if (!r.dense) return std::nullopt;
    return std::abs(*r.dense - r.closed);
  };
  // Relative gap is meaningless once J itself is at roundoff level.
  auto rel_gap = [&](const Row& r) -> std::optional<double> {
    if (!r.dense || std::abs(r.closed) < 1e-12) return std::nullopt;
    return *abs_gap(r) / std::abs(r.closed);
  };
  auto cell = [](std::optional<double> v) { return v ? fmt(*v) : std::string(); };
  auto field = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
  if (g.format == "json") {
    json j = base_record("sweep");
    j["method"] = g.method;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      json jr{{"theta", r.theta}, {"M", r.M}, {"N", r.N}, {"J_closed", r.closed}};
      jr["J_dense"] = field(r.dense);
      jr["abs_gap"] = field(abs_gap(r));
      jr["rel_gap"] = field(rel_gap(r));
      j["rows"].push_back(jr);
    }
    emit(g, j.dump(2) + "\n");
  } else {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
      cells.push_back({fmt(r.theta), std::to_string(r.M), std::to_string(r.N), fmt(r.closed),
                       cell(r.dense), cell(abs_gap(r)), cell(rel_gap(r))});
    }
    emit(g, csv_of({"theta", "M", "N", "J_closed", "J_dense", "abs_gap", "rel_gap"}, cells));
  }
  if (flagged) {
    std::cerr << json{{"error", "EpsilonSensitive"}, {"message", reason}}.dump() << "\n";
    return kExitFlagged;
  }
  return kExitOk;
}

// ---- sensitivity --------------------------------------------------------------

int cmd_sensitivity(const Globals& g, const ModelArgs& a, const std::optional<std::vector<SiteId>>& sites,
                    const std::string& to) {
  const ComputeOptions opt = g.options();
  const Model m = build_1d_or_cluster(a);
  for (SiteId s : sites.value_or(std::vector<SiteId>{})) {
    (void)m.regions.region_of(s);  // throws for sites outside the chain
  }
  const auto rows = sensitivity_scan(m.state, m.regions, sites, parse_region(to), opt);
  if (g.format == "csv") {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
      cells.push_back({std::to_string(r.site), std::string(to_string(r.from)), std::string(to_string(r.to)), fmt(r.J),
                       std::string(to_string(r.method))});
    }
    emit(g, csv_of({"site", "from", "to", "J", "method"}, cells));
  } else {
    json j = base_record("sensitivity");
    j["model"] = a.model;
    j["N"] = a.N;
    j["M"] = a.M;
    j["theta"] = a.theta;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"site", r.site},
                           {"from", std::string(to_string(r.from))},
                           {"to", std::string(to_string(r.to))},
                           {"J", r.J},
                           {"method", std::string(to_string(r.method))}});
    }
    emit(g, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- custom gate -----------------------------------------------------------------

int cmd_custom_gate(const Globals& g, const std::string& path, int N, int M) {
  ComputeOptions opt = g.options();
  const Eigen::Matrix4cd u = matrix4_from_json(read_json_file(path));
  if (!is_unitary(u)) fail(ErrorCode::InvalidArgument, "gate in " + path + " is not unitary");
  if (N < 1 || M < 0 || M > N - 1) fail(ErrorCode::InvalidArgument, "need 0 <= M <= N-1");
  const Model m = model_custom_gate(N, u, M);
  opt.method = MethodChoice::Dense;
  const ModcomResult r = modcom_state(m.state, m.regions, opt);
  json j = base_record("custom-gate");
  j["model"] = "1d-custom";
  j["N"] = N;
  j["M"] = M;
  j["theta"] = nullptr;
  const json res = to_json(r);
  for (auto it = res.begin(); it != res.end(); ++it) j[it.key()] = it.value();
  if (g.format == "csv") {
    emit(g, csv_of({"N", "M", "J", "method"}, {{std::to_string(N), std::to_string(M), fmt(r.value), "dense"}}));
  } else {
    emit(g, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  int qubits;  // largest dense system touched
  std::function<std::string()> run;  // returns "" on success, else the reason
};

std::string near(double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return "";
  return "got " + fmt(got) + ", expected " + fmt(want) + " (tol " + fmt(tol) + ")";
}

std::vector<VerifyCheck> verify_suite(bool flip_closed_sign) {
  const double s3 = 1 / std::numbers::sqrt3;
  auto closed = [=](double a, double b, double c) { return (flip_closed_sign ? -1 : 1) * modcom_closed({a, b, c}); };
  ComputeOptions dense;
  dense.method = MethodChoice::Dense;
  ComputeOptions sym;
  sym.method = MethodChoice::Symbolic;
  std::vector<VerifyCheck> v;

  for (int N = 1; N <= 3; ++N) {
    v.push_back({"generators commute, square to 1, fix one state (1d N=" + std::to_string(N) + ")", 0, [N] {
                   return validate(generators_1d(N)).ok() ? "" : "generator report not ok";
                 }});
  }
  v.push_back({"modcom_closed vs dense", 5, [=] {
                 const Model m = model_1d(1);
                 return near(closed(s3, s3, s3), modcom_state(m.state, m.regions, dense).value, 1e-9);
               }});
  for (int N = 1; N <= 4; ++N) {
    v.push_back({"modcom_symbolic vs closed (1d N=" + std::to_string(N) + ")", 0, [=] {
                   const Model m = model_1d(N);
                   return near(modcom_state(m.state, m.regions, sym).value, closed(s3, s3, s3), 1e-12);
                 }});
  }
  for (int N = 2; N <= 3; ++N) {
    v.push_back({"modcom_symbolic vs dense (1d N=" + std::to_string(N) + ")", 4 * N + 1, [=] {
                   const Model m = model_1d(N);
                   return near(modcom_state(m.state, m.regions, sym).value, modcom_state(m.state, m.regions, dense).value,
                               1e-9);
                 }});
  }
  v.push_back({"modcom_perturbed vs dense (N=2, M=1)", 9, [=] {
                 for (int k = 0; k <= 4; ++k) {
                   const double t = k * std::numbers::pi / 8;
                   const Model m = model_1d(2, 1, t);
                   const std::string r = near(modcom_perturbed({t, 1}), modcom_state(m.state, m.regions, dense).value, 1e-8);
                   if (!r.empty()) return "theta=" + fmt(t) + ": " + r;
                 }
                 return std::string();
               }});
  v.push_back({"reduced_density symbolic vs dense (perturbed N=2, M=1)", 9, [] {
                 const Model m = model_1d(2, 1, 0.4);
                 const auto keep = m.regions.abc_sites();
                 const StateVector psi = circuit_state(*m.state.circuit, m.state.generators.universe);
                 const double gap =
                     (to_dense(reduced_density(m.state.generators, keep)).m - reduced_density_dense(psi, keep).m).norm();
                 return gap < 1e-12 ? "" : "gap " + fmt(gap);
               }});
  v.push_back({"circuit vs generator projector (1d N=2)", 9, [] {
                 const GeneratorSet gs = generators_1d(2);
                 const StateVector psi = circuit_state(circuit_1d(2), gs.universe);
                 const double gap = (to_dense(gs).m - psi.v * psi.v.adjoint()).norm();
                 return gap < 1e-10 ? "" : "gap " + fmt(gap);
               }});
  v.push_back({"integer spectrum of H (1d N=1)", 5, [] {
                 return integer_spectrum(generators_1d(1), nullptr).ok() ? "" : "non-integer spectrum";
               }});
  v.push_back({"integer spectrum of H (1d N=2)", 9, [] {
                 const Model m = model_1d(2);
                 return integer_spectrum(m.state.generators, &*m.state.circuit).ok() ? "" : "non-integer spectrum";
               }});
  v.push_back({"sensitivity: single even site moved out (1d N=2)", 9, [=] {
                 const Model m = model_1d(2);
                 for (const auto& row : sensitivity_scan(m.state, m.regions, std::nullopt, Region::D, dense)) {
                   if (std::abs(row.J) > 1e-9) return "site " + std::to_string(row.site) + " gives " + fmt(row.J);
                 }
                 return std::string();
               }});
  v.push_back({"2D minimal strip reduces to one chain", 0, [=] {
                 const HoneycombResult h = modcom_honeycomb(minimal_strip_config(1), sym);
                 if (h.reduction.chains.size() != 1) return "chains: " + std::to_string(h.reduction.chains.size());
                 return near(h.total.value, closed(s3, s3, s3), 1e-12);
               }});
  v.push_back({"2D strip before and after gate removal (dense)", 12, [=] {
                 const HoneycombState st = honeycomb_state(minimal_strip_config(1));
                 const double full = modcom_state({st.generators, st.circuit}, st.regions, dense).value;
                 return near(full, modcom_honeycomb(minimal_strip_config(1), dense).total.value, 1e-10);
               }});
  v.push_back({"unitary inside one region leaves J unchanged (1d N=1)", 5, [=] {
                 const Model m = model_1d(1);
                 StateVector psi = circuit_state(*m.state.circuit, m.state.generators.universe);
                 const double j0 = modcom_dense(reduced_density_dense(psi, m.regions.abc_sites()), m.regions).value;
                 std::mt19937_64 rng(5);
                 std::normal_distribution<double> nd;
                 Eigen::Matrix4cd g;
                 for (int i = 0; i < 4; ++i) {
                   for (int k = 0; k < 4; ++k) g(i, k) = cplx(nd(rng), nd(rng));
                 }
                 const Eigen::Matrix4cd u = Eigen::HouseholderQR<Eigen::Matrix4cd>(g).householderQ();
                 apply_gate(psi, Gate{CustomTwoQubitGate{-1, 1, u}, 1});
                 return near(modcom_dense(reduced_density_dense(psi, m.regions.abc_sites()), m.regions).value, j0, 1e-9);
               }});
  return v;
}

int cmd_verify(const Globals& g, bool flip_closed_sign) {
  const ComputeOptions opt = g.options();
  const int budget = g.max_qubits.value_or(opt.limits.max_dense_qubits);
  json report = base_record("verify");
  report["max_qubits"] = budget;
  report["checks"] = json::array();
  int failed = 0, skipped = 0, passed = 0;
  std::ostringstream text;
  for (const auto& c : verify_suite(flip_closed_sign)) {
    std::string status, reason;
    if (c.qubits > budget) {
      status = "SKIP";
      reason = std::to_string(c.qubits) + " qubits";
      ++skipped;
    } else {
      try {
        reason = c.run();
      } catch (const Error& e) {
        reason = e.what();
      }
      status = reason.empty() ? "PASS" : "FAIL";
      ++(reason.empty() ? passed : failed);
    }
    text << status << "  " << c.name << (reason.empty() ? "" : ": " + reason) << "\n";
    report["checks"].push_back({{"name", c.name}, {"status", status}, {"detail", reason}});
  }
  text << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  report["passed"] = passed;
  report["failed"] = failed;
  report["skipped"] = skipped;
  std::cout << text.str();
  if (!g.out.empty()) {
    Globals file = g;
    emit(file, report.dump(2) + "\n");
  }
  return failed == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular commutator calculator for stabilizer-state chains and honeycomb strips"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--method", g.method, "auto, symbolic or dense")->check(CLI::IsMember({"auto", "symbolic", "dense"}));
  app.add_option("--epsilon", g.epsilon, "regulator for singular densities");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--max-qubits", g.max_qubits, "ceiling on dense system size");

  ModelArgs model;
  bool cross_check = false;
  auto* modcom = app.add_subcommand("modcom", "compute J(A,B,C) for one state");
  add_model_flags(modcom, model);
  modcom->add_flag("--cross-check", cross_check, "also run the other method and require agreement to 1e-8");

  std::string grid = "0:1.5707963267948966:9";
  std::vector<int> ms{1, 2, 3};
  std::optional<int> sweep_n;
  auto* sweep = app.add_subcommand("sweep", "closed form against dense over a theta x M grid");
  sweep->add_option("--theta-grid", grid, "start:stop:steps");
  sweep->add_option("--M", ms, "comma-separated M values")->delimiter(',');
  sweep->add_option("--N", sweep_n, "chain half-length (default M+1 per row)");

  ModelArgs sens_model;
  std::optional<std::vector<SiteId>> sens_sites;
  std::string sens_to = "D";
  auto* sens = app.add_subcommand("sensitivity", "recompute J with single sites moved between regions");
  add_model_flags(sens, sens_model);
  sens->add_option("--sites", sens_sites, "comma-separated sites (default: every site of ABC)")->delimiter(',');
  sens->add_option("--to", sens_to, "target region")->check(CLI::IsMember({"A", "B", "C", "D"}));

  bool inject = false;
  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  verify->add_flag("--inject-closed-sign-fault", inject, "flip the sign of the closed form (self-test of the suite)");

  std::string gate_path;
  int gate_n = 1, gate_m = 0;
  auto* custom = app.add_subcommand("custom-gate", "1D chain with the blue gate replaced by a 4x4 unitary");
  custom->add_option("--gate", gate_path, "JSON file with a 4x4 unitary")->required();
  custom->add_option("--N", gate_n, "chain half-length");
  custom->add_option("--M", gate_m, "half-width of region B");

  int config_n = 1, config_m = 0;
  bool decoys = false;
  auto* config = app.add_subcommand("config", "print the minimal 2D strip configuration as JSON");
  config->add_option("--N", config_n, "strip size");
  config->add_option("--M", config_m, "half-width of region B");
  config->add_flag("--decoys", decoys, "add blue edges inside A and C");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*modcom) return cmd_modcom(g, model, cross_check);
    if (*sweep) return cmd_sweep(g, grid, ms, sweep_n);
    if (*sens) return cmd_sensitivity(g, sens_model, sens_sites, sens_to);
    if (*verify) return cmd_verify(g, inject);
    if (*custom) return cmd_custom_gate(g, gate_path, gate_n, gate_m);
    if (*config) {
      emit(g, to_json(minimal_strip_config(config_n, config_m, decoys)).dump(2) + "\n");
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
