#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "modcom/builders.hpp"
#include "modcom/regions.hpp"

namespace modcom {

// Honeycomb lattice in brick-wall form. Hexagon (r, k) spans site rows r and
// r+1 and columns c0..c0+2 with c0 = 2k + (r mod 2); sites (r, c) and (r+1, c)
// are linked vertically when r + c is even. SiteId = r * width + c with
// width = 2 * cols + 2.
struct HoneycombLattice {
  int rows = 0;
  int cols = 0;
  Graph graph;
  std::map<SiteId, std::pair<int, int>> coords;

  int width() const { return 2 * cols + 2; }
  SiteId site(int r, int c) const { return static_cast<SiteId>(r) * width() + c; }

  static HoneycombLattice build(int rows, int cols) {
    if (rows < 1 || cols < 1) fail(ErrorCode::InvalidArgument, "honeycomb needs at least one hexagon");
    HoneycombLattice lat;
    lat.rows = rows;
    lat.cols = cols;
    std::set<std::pair<SiteId, SiteId>> edges;
    auto link = [&](int r1, int c1, int r2, int c2) {
      const SiteId a = lat.site(r1, c1), b = lat.site(r2, c2);
      lat.coords[a] = {r1, c1};
      lat.coords[b] = {r2, c2};
      edges.emplace(std::min(a, b), std::max(a, b));
    };
    for (int r = 0; r < rows; ++r) {
      for (int k = 0; k < cols; ++k) {
        const int c0 = 2 * k + (r % 2);
        for (int rr : {r, r + 1}) {
          link(rr, c0, rr, c0 + 1);
          link(rr, c0 + 1, rr, c0 + 2);
        }
        link(r, c0, r + 1, c0);
        link(r, c0 + 2, r + 1, c0 + 2);
      }
    }
    for (auto& [s, rc] : lat.coords) lat.graph.vertices.push_back(s);
    lat.graph.edges.assign(edges.begin(), edges.end());
    return lat;
  }

  // One blue edge per hexagon: its left vertical edge, bottom -> top.
  std::vector<BlueEdge> default_blue_edges() const {
    std::vector<BlueEdge> out;
    for (int r = 0; r < rows; ++r) {
      for (int k = 0; k < cols; ++k) {
        const int c0 = 2 * k + (r % 2);
        out.push_back({site(r + 1, c0), site(r, c0)});
      }
    }
    return out;
  }
};

struct HoneycombConfig {
  int rows = 1;
  int cols = 1;
  std::optional<std::vector<BlueEdge>> blue_edges;  // default placement when absent
  std::vector<SiteId> region_a, region_b, region_c;
};

struct HoneycombState {
  HoneycombLattice lattice;
  std::vector<BlueEdge> blue;
  Circuit circuit;
  GeneratorSet generators;
  RegionAssignment regions;
};

inline HoneycombState honeycomb_state(const HoneycombConfig& cfg, const Eigen::Matrix3d& r = standard_r_rotation()) {
  HoneycombState st;
  st.lattice = HoneycombLattice::build(cfg.rows, cfg.cols);
  st.blue = cfg.blue_edges ? *cfg.blue_edges : st.lattice.default_blue_edges();
  validate_blue_edges(st.lattice.graph, st.blue);
  st.circuit = modified_cluster_circuit(st.lattice.graph, st.blue, r);
  st.generators = modified_cluster_generators(st.lattice.graph, st.blue);
  st.regions = RegionAssignment::from_lists(*st.generators.universe, cfg.region_a, cfg.region_b, cfg.region_c);
  return st;
}

// Blue edges with one end in ABC and the other in D.
inline std::vector<BlueEdge> outer_boundary_blue_edges(const std::vector<BlueEdge>& blue, const RegionAssignment& r) {
  std::vector<BlueEdge> out;
  for (const auto& e : blue) {
    if ((r.region_of(e.control) == Region::D) != (r.region_of(e.target) == Region::D)) out.push_back(e);
  }
  return out;
}

// Single-row strip of 2N hexagons whose bottom site row is the modified
// chain of length 4N+1 (in/out alternating, blue edge at the centre).
// The upper row sits inside ABC, copying the region of the site below or to
// its left, so only the bottom row touches D.
inline HoneycombConfig minimal_strip_config(int N, int M = 0, bool decoy_blue_edges = false) {
  if (N < 1 || M < 0 || M > N - 1) fail(ErrorCode::InvalidArgument, "minimal_strip_config requires 0 <= M <= N-1");
  HoneycombConfig cfg;
  cfg.rows = 1;
  cfg.cols = 2 * N;
  const auto lat = HoneycombLattice::build(cfg.rows, cfg.cols);
  const int centre = 2 * N;
  auto region_for_column = [&](int c) {
    const int even_c = c - (c % 2);
    const int d = even_c - centre;
    return d < -2 * M ? Region::A : (d > 2 * M ? Region::C : Region::B);
  };
  for (int c = 0; c <= 4 * N; ++c) {
    for (int row : {0, 1}) {
      if (row == 1 && c % 2 == 1) continue;  // D
      const SiteId s = lat.site(row, c);
      switch (region_for_column(c)) {
        case Region::A: cfg.region_a.push_back(s); break;
        case Region::B: cfg.region_b.push_back(s); break;
        default: cfg.region_c.push_back(s); break;
      }
    }
  }
  std::vector<BlueEdge> blue{{lat.site(1, centre + 1), lat.site(1, centre)}};
  if (decoy_blue_edges && N >= 2) {
    // Wholly inside A and C, away from any region boundary.
    blue.push_back({lat.site(0, 1), lat.site(0, 0)});
    blue.push_back({lat.site(0, 4 * N - 1), lat.site(0, 4 * N)});
  }
  cfg.blue_edges = blue;
  return cfg;
}

}  // namespace modcom
