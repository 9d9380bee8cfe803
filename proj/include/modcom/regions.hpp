#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "modcom/errors.hpp"
#include "modcom/sites.hpp"

namespace modcom {

enum class Region { A, B, C, D };

inline constexpr std::array<Region, 4> kAllRegions{Region::A, Region::B, Region::C, Region::D};

inline std::string_view to_string(Region r) {
  constexpr std::string_view names[] = {"A", "B", "C", "D"};
  return names[static_cast<int>(r)];
}

inline Region parse_region(std::string_view s) {
  if (s == "A") return Region::A;
  if (s == "B") return Region::B;
  if (s == "C") return Region::C;
  if (s == "D") return Region::D;
  fail(ErrorCode::ParseError, "unknown region '" + std::string(s) + "'");
}

// Total map from sites to {A, B, C, D}; D is the complement of ABC.
class RegionAssignment {
 public:
  RegionAssignment() = default;

  // Every site of `universe` not listed in a, b or c goes to D.
  static RegionAssignment from_lists(const SiteUniverse& universe, const std::vector<SiteId>& a,
                                     const std::vector<SiteId>& b, const std::vector<SiteId>& c) {
    RegionAssignment r;
    for (SiteId s : universe.ids()) r.map_[s] = Region::D;
    auto put = [&](const std::vector<SiteId>& sites, Region reg) {
      for (SiteId s : sites) {
        auto it = r.map_.find(s);
        if (it == r.map_.end()) fail(ErrorCode::InvalidArgument, "region site " + std::to_string(s) + " not in lattice");
        if (it->second != Region::D) fail(ErrorCode::InvalidArgument, "site " + std::to_string(s) + " assigned twice");
        it->second = reg;
      }
    };
    put(a, Region::A);
    put(b, Region::B);
    put(c, Region::C);
    return r;
  }

  // Sites [-2N, 2N]: A = even in [-2N, -2M-2], B = even in [-2M, 2M],
  // C = even in [2M+2, 2N], D = odd.
  static RegionAssignment canonical_1d(int N, int M) {
    if (N < 1 || M < 0 || M > N - 1) fail(ErrorCode::InvalidArgument, "canonical_1d requires 0 <= M <= N-1");
    RegionAssignment r;
    const SiteId L = 2 * static_cast<SiteId>(N), W = 2 * static_cast<SiteId>(M);
    for (SiteId s = -L; s <= L; ++s) {
      Region reg = Region::D;
      if (s % 2 == 0) reg = s < -W ? Region::A : (s > W ? Region::C : Region::B);
      r.map_[s] = reg;
    }
    return r;
  }

  Region region_of(SiteId s) const {
    auto it = map_.find(s);
    if (it == map_.end()) fail(ErrorCode::InvalidArgument, "site " + std::to_string(s) + " has no region");
    return it->second;
  }
  bool contains(SiteId s) const { return map_.count(s) != 0; }

  std::vector<SiteId> sites(Region r) const {
    std::vector<SiteId> out;
    for (auto [s, reg] : map_) {
      if (reg == r) out.push_back(s);
    }
    return out;
  }
  std::vector<SiteId> abc_sites() const {
    std::vector<SiteId> out;
    for (auto [s, reg] : map_) {
      if (reg != Region::D) out.push_back(s);
    }
    return out;
  }
  std::vector<SiteId> all_sites() const {
    std::vector<SiteId> out;
    for (auto [s, reg] : map_) out.push_back(s);
    return out;
  }

  RegionAssignment moved(SiteId site, Region to) const {
    if (!contains(site)) fail(ErrorCode::InvalidArgument, "move_site: unknown site " + std::to_string(site));
    RegionAssignment out = *this;
    out.map_[site] = to;
    return out;
  }

  void assign(SiteId site, Region r) { map_[site] = r; }

  bool covers(const SiteUniverse& u) const {
    if (map_.size() != u.size()) return false;
    for (SiteId s : u.ids()) {
      if (!contains(s)) return false;
    }
    return true;
  }

  const std::map<SiteId, Region>& map() const noexcept { return map_; }

  friend bool operator==(const RegionAssignment&, const RegionAssignment&) = default;

 private:
  std::map<SiteId, Region> map_;
};

inline RegionAssignment move_site(const RegionAssignment& r, SiteId site, Region to) { return r.moved(site, to); }

}  // namespace modcom
