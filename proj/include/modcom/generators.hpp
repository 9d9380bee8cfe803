#pragma once

#include <vector>

#include "modcom/pauli_sum.hpp"

namespace modcom {

// Commuting involutory operators g_i; the state is prod_i (1 + g_i) / 2.
struct GeneratorSet {
  UniversePtr universe;
  std::vector<SiteId> labels;        // the site index i of each g_i
  std::vector<PauliSum> generators;  // in sweep order

  std::size_t size() const noexcept { return generators.size(); }

  const PauliSum& at(SiteId label) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] == label) return generators[k];
    }
    fail(ErrorCode::InvalidArgument, "no generator labelled " + std::to_string(label));
  }

  void push(SiteId label, PauliSum g) {
    require_same_universe(universe, g.universe());
    labels.push_back(label);
    generators.push_back(std::move(g));
  }

  std::vector<std::vector<bool>> commutation_matrix(double tol = 1e-12) const {
    const std::size_t n = size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, true));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const PauliSum c = commutator(generators[i], generators[j]);
        bool zero = true;
        for (const auto& [p, v] : c.terms()) zero = zero && std::abs(v) < tol;
        m[i][j] = m[j][i] = zero;
      }
    }
    return m;
  }

  bool all_commute(double tol = 1e-12) const {
    for (const auto& row : commutation_matrix(tol)) {
      for (bool b : row) {
        if (!b) return false;
      }
    }
    return true;
  }

  bool all_involutory(double tol = 1e-12) const {
    const PauliSum one = PauliSum::identity(universe);
    for (const auto& g : generators) {
      if (!(g * g).approx_equal(one, tol)) return false;
    }
    return true;
  }

  bool all_hermitian(double tol = 1e-12) const {
    for (const auto& g : generators) {
      if (!g.is_hermitian(tol)) return false;
    }
    return true;
  }

  bool approx_equal(const GeneratorSet& o, double tol = 1e-12) const {
    if (labels != o.labels || !same_universe(universe, o.universe)) return false;
    for (std::size_t k = 0; k < size(); ++k) {
      if (!generators[k].approx_equal(o.generators[k], tol)) return false;
    }
    return true;
  }
};

}  // namespace modcom
