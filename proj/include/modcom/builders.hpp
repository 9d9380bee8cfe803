#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modcom/circuit.hpp"
#include "modcom/generators.hpp"

namespace modcom {

struct Graph {
  std::vector<SiteId> vertices;
  std::vector<std::pair<SiteId, SiteId>> edges;

  static Graph path(SiteId lo, SiteId hi) {
    Graph g;
    for (SiteId s = lo; s <= hi; ++s) g.vertices.push_back(s);
    for (SiteId s = lo; s < hi; ++s) g.edges.emplace_back(s, s + 1);
    return g;
  }
  static Graph cycle(SiteId n) {
    Graph g = path(0, n - 1);
    if (n > 2) g.edges.emplace_back(n - 1, 0);
    return g;
  }

  std::vector<SiteId> neighbors(SiteId v) const {
    std::vector<SiteId> out;
    for (auto [a, b] : edges) {
      if (a == v) out.push_back(b);
      if (b == v) out.push_back(a);
    }
    return normalized_sites(std::move(out));
  }
  bool has_edge(SiteId a, SiteId b) const {
    for (auto [x, y] : edges) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  }

  void validate() const {
    std::set<SiteId> vs(vertices.begin(), vertices.end());
    if (vs.size() != vertices.size()) fail(ErrorCode::InvalidArgument, "duplicate vertex");
    std::set<std::pair<SiteId, SiteId>> seen;
    for (auto [a, b] : edges) {
      if (a == b) fail(ErrorCode::InvalidArgument, "self loop at " + std::to_string(a));
      if (!vs.count(a) || !vs.count(b)) fail(ErrorCode::InvalidArgument, "edge endpoint outside vertex set");
      if (!seen.emplace(std::min(a, b), std::max(a, b)).second) fail(ErrorCode::InvalidArgument, "repeated edge");
    }
  }
};

// Oriented V gate edge: control i1 -> target i0.
struct BlueEdge {
  SiteId control;  // i1
  SiteId target;   // i0
  friend bool operator==(const BlueEdge&, const BlueEdge&) = default;
};

inline void validate_blue_edges(const Graph& g, const std::vector<BlueEdge>& blue) {
  std::set<SiteId> used;
  for (const auto& e : blue) {
    if (!g.has_edge(e.control, e.target)) {
      fail(ErrorCode::InvalidArgument,
           "blue edge " + std::to_string(e.control) + "->" + std::to_string(e.target) + " is not a lattice edge");
    }
    if (!used.insert(e.control).second || !used.insert(e.target).second) {
      fail(ErrorCode::InvalidArgument, "blue edges overlap at a shared site");
    }
  }
}

namespace detail {

inline PauliSum hermitian_term(const UniversePtr& u, const std::vector<SiteId>& xs, const std::vector<SiteId>& ys,
                               const std::vector<SiteId>& zs, double coeff) {
  std::vector<SiteId> xbits = xs, zbits = zs;
  xbits.insert(xbits.end(), ys.begin(), ys.end());
  zbits.insert(zbits.end(), ys.begin(), ys.end());
  const PauliString p = PauliString::from_sites(u, xbits, zbits);
  // Y = i XZ per Y site.
  return PauliSum::from_string(p, coeff * p.hermitian_phase().conj().value());
}

}  // namespace detail

// Modified 1D cluster chain on sites [-2N, 2N].
inline GeneratorSet generators_1d(int N) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "generators_1d requires N >= 1");
  const SiteId L = 2 * static_cast<SiteId>(N);
  auto u = SiteUniverse::range(-L, L);
  GeneratorSet gs{u, {}, {}};
  const double inv_sqrt3 = 1.0 / std::numbers::sqrt3;
  using detail::hermitian_term;
  for (SiteId i = -L; i <= L; ++i) {
    if (i == -L) {
      gs.push(i, hermitian_term(u, {i}, {}, {i + 1}, 1.0));
    } else if (i == L) {
      gs.push(i, hermitian_term(u, {i}, {}, {i - 1}, 1.0));
    } else if (i == 0) {
      gs.push(i, hermitian_term(u, {0}, {}, {-1}, inv_sqrt3) + hermitian_term(u, {}, {}, {0, 1}, inv_sqrt3) +
                     hermitian_term(u, {}, {0}, {-1, 1}, inv_sqrt3));
    } else if (i == 1) {
      gs.push(i, hermitian_term(u, {0, 1}, {}, {-1, 2}, 1.0));
    } else {
      gs.push(i, hermitian_term(u, {i}, {}, {i - 1, i + 1}, 1.0));
    }
  }
  return gs;
}

// U(theta) h_i U(theta)^dagger written out in closed form.
inline GeneratorSet generators_1d_perturbed(int N, int M, double theta) {
  if (M < 1) fail(ErrorCode::InvalidArgument, "perturbation requires M >= 1");
  if (2 * M + 1 > 2 * N - 1) fail(ErrorCode::InvalidArgument, "M too large for N: need 2M+1 <= 2N-1");
  GeneratorSet gs = generators_1d(N);
  const auto& u = gs.universe;
  const double c = std::cos(theta), s = std::sin(theta);
  using detail::hermitian_term;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const SiteId i = gs.labels[k];
    if (i == 0 || i < -2 * M || i > 2 * M) continue;
    PauliSum base = hermitian_term(u, {i}, {}, {i - 1, i + 1}, c);
    PauliSum tail(u);
    const bool even = (i % 2) == 0;
    if (i == 1) {
      base = hermitian_term(u, {0, 1}, {}, {-1, 2}, c);
      tail = hermitian_term(u, {0}, {1}, {-1}, s);
    } else if ((even && i <= -2) || (!even && i >= 3)) {
      tail = hermitian_term(u, {}, {i}, {i - 1}, s);
    } else {
      tail = hermitian_term(u, {}, {i}, {i + 1}, s);
    }
    gs.generators[k] = base + tail;
  }
  return gs;
}

// h_i = X_i prod_{j ~ i} Z_j, ordered by ascending vertex.
inline GeneratorSet generators_cluster(const Graph& graph) {
  graph.validate();
  auto u = SiteUniverse::make(graph.vertices);
  GeneratorSet gs{u, {}, {}};
  for (SiteId v : u->ids()) gs.push(v, detail::hermitian_term(u, {v}, {}, graph.neighbors(v), 1.0));
  return gs;
}

// Cluster generators with the V-gate modification at each blue edge (i1 -> i0):
//   h_i0 = (X_i0 prod_{j~i0, j!=i1} Z_j + Y_i0 prod_{j~i0} Z_j + Z_i0 Z_i1) / sqrt3
//   h_i1 = X_i0 X_i1 prod_{j~i0, j!=i1} Z_j prod_{j~i1, j!=i0} Z_j
inline GeneratorSet modified_cluster_generators(const Graph& graph, const std::vector<BlueEdge>& blue) {
  graph.validate();
  validate_blue_edges(graph, blue);
  auto u = SiteUniverse::make(graph.vertices);
  const double inv_sqrt3 = 1.0 / std::numbers::sqrt3;
  std::map<SiteId, const BlueEdge*> as_target, as_control;
  for (const auto& e : blue) {
    as_target[e.target] = &e;
    as_control[e.control] = &e;
  }
  auto without = [](std::vector<SiteId> v, SiteId s) {
    std::erase(v, s);
    return v;
  };
  using detail::hermitian_term;
  GeneratorSet gs{u, {}, {}};
  for (SiteId v : u->ids()) {
    if (auto it = as_target.find(v); it != as_target.end()) {
      const SiteId i1 = it->second->control;
      const auto nb = graph.neighbors(v);
      gs.push(v, hermitian_term(u, {v}, {}, without(nb, i1), inv_sqrt3) + hermitian_term(u, {}, {v}, nb, inv_sqrt3) +
                     hermitian_term(u, {}, {}, {v, i1}, inv_sqrt3));
    } else if (auto jt = as_control.find(v); jt != as_control.end()) {
      const SiteId i0 = jt->second->target;
      auto zs = without(graph.neighbors(i0), v);
      const auto z1 = without(graph.neighbors(v), i0);
      zs.insert(zs.end(), z1.begin(), z1.end());
      // Z factors on a common neighbour of i0 and i1 cancel.
      std::map<SiteId, int> parity;
      for (SiteId s : zs) parity[s] ^= 1;
      std::vector<SiteId> zfinal;
      for (auto [s, p] : parity) {
        if (p) zfinal.push_back(s);
      }
      gs.push(v, hermitian_term(u, {i0, v}, {}, zfinal, 1.0));
    } else {
      gs.push(v, hermitian_term(u, {v}, {}, graph.neighbors(v), 1.0));
    }
  }
  return gs;
}

// Depth-2 circuit: layer 1 applies V = CNOT(i1 -> i0) R(i0) on blue edges,
// layer 2 applies CZ on every other edge.
inline Circuit modified_cluster_circuit(const Graph& graph, const std::vector<BlueEdge>& blue,
                                        const Eigen::Matrix3d& r = standard_r_rotation()) {
  graph.validate();
  validate_blue_edges(graph, blue);
  Circuit c;
  for (const auto& e : blue) {
    c.add(RotationGate{e.target, r}, 1);
    c.add(CNOTGate{e.control, e.target}, 1);
  }
  for (auto [a, b] : graph.edges) {
    bool is_blue = false;
    for (const auto& e : blue) {
      is_blue = is_blue || (e.control == a && e.target == b) || (e.control == b && e.target == a);
    }
    if (!is_blue) c.add(CZGate{std::min(a, b), std::max(a, b)}, 2);
  }
  return c;
}

inline Circuit circuit_1d(int N, const Eigen::Matrix3d& r = standard_r_rotation()) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "circuit_1d requires N >= 1");
  const SiteId L = 2 * static_cast<SiteId>(N);
  return modified_cluster_circuit(Graph::path(-L, L), {BlueEdge{1, 0}}, r);
}

// U(theta) = prod_j R_{-2j} prod_k R_{2k-1}, R_i = exp(-i theta/2 Z_i Z_{i+1}).
inline Circuit perturbation_unitary(int M, double theta) {
  if (M < 1) fail(ErrorCode::InvalidArgument, "perturbation_unitary requires M >= 1");
  Circuit c;
  for (SiteId j = 1; j <= M; ++j) c.add(ZZRotationGate{-2 * j, -2 * j + 1, theta}, 1);
  for (SiteId k = 1; k <= M; ++k) c.add(ZZRotationGate{2 * k - 1, 2 * k, theta}, 1);
  return c;
}

// Heisenberg-picture images of X_i under the circuit: the state is C |+...+>.
inline GeneratorSet generators_from_circuit(const Circuit& circuit, const UniversePtr& universe) {
  GeneratorSet gs{universe, {}, {}};
  for (SiteId v : universe->ids()) gs.push(v, detail::single_x(universe, v));
  return conjugate(gs, circuit);
}

}  // namespace modcom
