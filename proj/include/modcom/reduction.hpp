#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "modcom/builders.hpp"
#include "modcom/circuit.hpp"
#include "modcom/generators.hpp"
#include "modcom/pauli_sum.hpp"
#include "modcom/regions.hpp"

namespace modcom {

struct SweepOptions {
  bool prune = true;
  // Frontier size beyond which the input is treated as lacking chain structure.
  std::size_t max_frontier = std::size_t{1} << 20;
};

namespace detail {

inline BitVec support_mask(const PauliSum& s) {
  BitVec m(s.num_sites());
  for (const auto& [p, c] : s.terms()) {
    m |= p.x();
    m |= p.z();
  }
  return m;
}

// Tr_{traced} prod_i (1 + g_i)/2, unnormalized, on the kept sites.
inline PauliSum traced_product(const GeneratorSet& gs, const std::vector<SiteId>& keep, const SweepOptions& opt) {
  const auto& u = *gs.universe;
  const std::vector<SiteId> kept = normalized_sites(keep);
  for (SiteId s : kept) {
    if (!u.contains(s)) fail(ErrorCode::InvalidArgument, "keep site " + std::to_string(s) + " not in universe");
  }
  std::vector<SiteId> traced;
  for (SiteId s : u.ids()) {
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);
  }
  const BitVec traced_mask = u.mask(traced);

  // closing_step[k]: traced sites whose last touching generator is k.
  std::vector<BitVec> closing_step(gs.size(), BitVec(u.size()));
  {
    std::vector<long> last(u.size(), -1);
    for (std::size_t k = 0; k < gs.size(); ++k) {
      const BitVec m = support_mask(gs.generators[k]);
      for (std::size_t q = 0; q < u.size(); ++q) {
        if (m.test(q)) last[q] = static_cast<long>(k);
      }
    }
    for (std::size_t q = 0; q < u.size(); ++q) {
      if (last[q] >= 0 && traced_mask.test(q)) closing_step[static_cast<std::size_t>(last[q])].set(q);
    }
  }

  PauliSum frontier = PauliSum::identity(gs.universe);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    frontier = (frontier + frontier * gs.generators[k]) * 0.5;
    if (opt.prune && closing_step[k].any()) {
      PauliSum kept_terms(gs.universe);
      for (const auto& [p, c] : frontier.terms()) {
        if (!BitVec::intersects(p.x() | p.z(), closing_step[k])) kept_terms.add_term(p, c);
      }
      frontier = std::move(kept_terms);
    }
    if (frontier.size() > opt.max_frontier) {
      fail(ErrorCode::NonChainStructure, "sweep frontier exceeded " + std::to_string(opt.max_frontier) + " strings");
    }
  }
  return ptrace_sum(frontier, traced);
}

}  // namespace detail

// Tr prod_i (1 + g_i)/2; equals 1 exactly when the generators fix a unique state.
inline double symbolic_trace(const GeneratorSet& gs, const SweepOptions& opt = {}) {
  return detail::traced_product(gs, {}, opt).identity_coefficient().real();
}

// Reduced density operator of prod_i (1 + g_i)/2 on `keep`, unit trace.
inline PauliSum reduced_density(const GeneratorSet& gs, const std::vector<SiteId>& keep, const SweepOptions& opt = {}) {
  PauliSum rho = detail::traced_product(gs, keep, opt);
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-12) fail(ErrorCode::InvalidArgument, "generator product has zero trace");
  return rho * (1.0 / tr);
}

struct GeneratorReport {
  bool commuting = false;
  bool involutory = false;
  bool hermitian = false;
  double trace = 0;

  bool ok(double tol = 1e-12) const { return commuting && involutory && hermitian && std::abs(trace - 1.0) < tol; }
};

inline GeneratorReport validate(const GeneratorSet& gs) {
  GeneratorReport r;
  r.commuting = gs.all_commute();
  r.involutory = gs.all_involutory();
  r.hermitian = gs.all_hermitian();
  r.trace = symbolic_trace(gs);
  return r;
}

// A decoupled piece of a reduced 2D circuit, relabelled onto signed chain
// indices: the V target sits at 0 and its control at +1.
struct ChainProblem {
  std::vector<SiteId> original_sites;  // in chain order
  std::map<SiteId, SiteId> relabel;    // original -> chain index
  bool is_path = false;
  Circuit circuit;  // on chain indices
  UniversePtr universe;
  RegionAssignment regions;

  GeneratorSet generators() const { return generators_from_circuit(circuit, universe); }
};

struct ChainReduction {
  std::vector<ChainProblem> chains;  // supported on all of A, B, C, D
  std::size_t dropped = 0;           // components lacking one of the regions
  std::size_t removed_gates = 0;
  bool d_empty = false;
};

namespace detail {

inline bool single_region(const std::vector<SiteId>& sites, const RegionAssignment& r) {
  for (SiteId s : sites) {
    if (r.region_of(s) != r.region_of(sites.front())) return false;
  }
  return true;
}

struct UnionFind {
  std::map<SiteId, SiteId> parent;
  SiteId find(SiteId s) {
    auto it = parent.find(s);
    if (it == parent.end()) {
      parent[s] = s;
      return s;
    }
    if (it->second == s) return s;
    return parent[s] = find(it->second);
  }
  void unite(SiteId a, SiteId b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Drops gates that act inside a single region (black layer first, then blue
// units untouched by surviving black gates), splits the rest into connected
// pieces and keeps those touching all four regions.
inline ChainReduction reduce_2d_to_chains(const Circuit& circuit, const RegionAssignment& regions) {
  ChainReduction out;
  out.d_empty = regions.sites(Region::D).empty();

  // Blue units: connected groups of layer-1 gates.
  std::vector<std::size_t> black, blue_gates;
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    (circuit.gates[k].layer >= 2 ? black : blue_gates).push_back(k);
  }
  detail::UnionFind uf_blue;
  for (std::size_t k : blue_gates) {
    const auto s = circuit.gates[k].sites();
    uf_blue.find(s.front());
    for (SiteId x : s) uf_blue.unite(x, s.front());
  }
  std::map<SiteId, std::vector<std::size_t>> units;
  for (std::size_t k : blue_gates) units[uf_blue.find(circuit.gates[k].sites().front())].push_back(k);

  std::vector<bool> keep(circuit.gates.size(), false);
  std::set<SiteId> black_sites;
  for (std::size_t k : black) {
    const auto s = circuit.gates[k].sites();
    if (!detail::single_region(s, regions)) {
      keep[k] = true;
      black_sites.insert(s.begin(), s.end());
    }
  }
  for (const auto& [root, gates] : units) {
    std::vector<SiteId> s;
    for (std::size_t k : gates) {
      const auto gs = circuit.gates[k].sites();
      s.insert(s.end(), gs.begin(), gs.end());
    }
    s = normalized_sites(std::move(s));
    bool touches = false;
    for (SiteId x : s) touches = touches || black_sites.count(x);
    if (touches || !detail::single_region(s, regions)) {
      for (std::size_t k : gates) keep[k] = true;
    }
  }
  out.removed_gates = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), false));

  detail::UnionFind uf;
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    if (!keep[k]) continue;
    const auto s = circuit.gates[k].sites();
    uf.find(s.front());
    for (SiteId x : s) uf.unite(x, s.front());
  }
  std::map<SiteId, std::vector<SiteId>> comps;
  for (auto& [s, p] : uf.parent) comps[uf.find(s)].push_back(s);

  for (auto& [root, sites] : comps) {
    std::set<Region> touched;
    for (SiteId s : sites) touched.insert(regions.region_of(s));
    if (touched.size() < 4) {
      ++out.dropped;
      continue;
    }
    ChainProblem chain;
    // Residual two-qubit adjacency.
    std::map<SiteId, std::vector<SiteId>> adj;
    std::size_t n_edges = 0;
    std::vector<const Gate*> gates;
    std::set<std::pair<SiteId, SiteId>> edge_set;
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
      if (!keep[k] || uf.find(circuit.gates[k].sites().front()) != root) continue;
      gates.push_back(&circuit.gates[k]);
      const auto s = circuit.gates[k].sites();
      if (s.size() == 2 && edge_set.emplace(std::min(s[0], s[1]), std::max(s[0], s[1])).second) {
        adj[s[0]].push_back(s[1]);
        adj[s[1]].push_back(s[0]);
        ++n_edges;
      }
    }
    bool path = n_edges + 1 == sites.size();
    SiteId start = sites.front();
    for (SiteId s : sites) {
      if (adj[s].size() > 2) path = false;
    }
    std::vector<SiteId> order;
    if (path) {
      if (sites.size() > 1) {
        for (SiteId s : sites) {
          if (adj[s].size() == 1) {
            start = s;
            break;
          }
        }
      }
      SiteId prev = start, cur = start;
      order.push_back(cur);
      while (order.size() < sites.size()) {
        SiteId next = prev;
        for (SiteId nb : adj[cur]) {
          if (nb != prev) next = nb;
        }
        if (next == prev && order.size() > 1) break;
        prev = cur;
        cur = next;
        order.push_back(cur);
      }
      path = order.size() == sites.size();
    }
    if (!path) order = normalized_sites(sites);

    // Anchor: target of the (unique) CNOT in the chain at 0, its control at +1.
    std::ptrdiff_t origin = 0;
    bool flip = false;
    const CNOTGate* anchor = nullptr;
    std::size_t n_cnot = 0;
    for (const Gate* g : gates) {
      if (auto* c = std::get_if<CNOTGate>(&g->op)) {
        anchor = c;
        ++n_cnot;
      }
    }
    auto pos = [&](SiteId s) { return std::find(order.begin(), order.end(), s) - order.begin(); };
    if (path && n_cnot == 1) {
      origin = pos(anchor->target);
      flip = pos(anchor->control) < origin;
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto d = static_cast<SiteId>(static_cast<std::ptrdiff_t>(k) - origin);
      chain.relabel[order[k]] = flip ? -d : d;
    }
    chain.original_sites = order;
    chain.is_path = path;
    std::vector<SiteId> ids;
    for (auto [o, idx] : chain.relabel) ids.push_back(idx);
    chain.universe = SiteUniverse::make(ids);
    for (auto [o, idx] : chain.relabel) chain.regions.assign(idx, regions.region_of(o));
    for (const Gate* g : gates) {
      Gate r = *g;
      std::visit(
          [&](auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, RotationGate>) {
              op.site = chain.relabel.at(op.site);
            } else if constexpr (std::is_same_v<T, CNOTGate>) {
              op.control = chain.relabel.at(op.control);
              op.target = chain.relabel.at(op.target);
            } else {
              op.a = chain.relabel.at(op.a);
              op.b = chain.relabel.at(op.b);
              if constexpr (std::is_same_v<T, CZGate>) {
                if (op.a > op.b) std::swap(op.a, op.b);
              }
            }
          },
          r.op);
      chain.circuit.gates.push_back(std::move(r));
    }
    out.chains.push_back(std::move(chain));
  }
  return out;
}

}  // namespace modcom
