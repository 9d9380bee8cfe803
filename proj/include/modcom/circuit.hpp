#pragma once

#include <cmath>
#include <numbers>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "modcom/generators.hpp"
#include "modcom/pauli_sum.hpp"

namespace modcom {

struct CZGate {
  SiteId a, b;
};
struct CNOTGate {
  SiteId control, target;
};
// Single-qubit rotation given by its action on the (X, Y, Z) coefficient
// vector: U sigma_k U^dagger = sum_m rotation(m, k) sigma_m.
struct RotationGate {
  SiteId site;
  Eigen::Matrix3d rotation;
};
// exp(-i theta/2 Z_a Z_b)
struct ZZRotationGate {
  SiteId a, b;
  double theta;
};
// Arbitrary two-qubit unitary; basis index 2*bit(a) + bit(b). Dense only.
struct CustomTwoQubitGate {
  SiteId a, b;
  Eigen::Matrix4cd unitary;
};

using GateOp = std::variant<CZGate, CNOTGate, RotationGate, ZZRotationGate, CustomTwoQubitGate>;

struct Gate {
  GateOp op;
  int layer = 1;

  std::vector<SiteId> sites() const {
    return std::visit(
        [](const auto& g) -> std::vector<SiteId> {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, RotationGate>) {
            return {g.site};
          } else if constexpr (std::is_same_v<T, CNOTGate>) {
            return {g.control, g.target};
          } else {
            return {g.a, g.b};
          }
        },
        op);
  }
  bool is_symbolic() const { return !std::holds_alternative<CustomTwoQubitGate>(op); }
};

// Gates in application order.
struct Circuit {
  std::vector<Gate> gates;

  int depth() const {
    int d = 0;
    for (const auto& g : gates) d = std::max(d, g.layer);
    return d;
  }
  void add(GateOp op, int layer) { gates.push_back(Gate{std::move(op), layer}); }
};

inline Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

// Rotation about x^ cross (1,1,1)/sqrt3 by arccos(1/sqrt3): sends X to (X+Y+Z)/sqrt3.
inline Eigen::Matrix3d standard_r_rotation() {
  return axis_angle_rotation(Eigen::Vector3d(0.0, -1.0, 1.0), std::acos(1.0 / std::numbers::sqrt3));
}

// Another valid choice: pre-rotate about X, which leaves the X image alone.
inline Eigen::Matrix3d alternate_r_rotation(double twist = 0.7) {
  return standard_r_rotation() * axis_angle_rotation(Eigen::Vector3d::UnitX(), twist);
}

inline bool is_proper_rotation(const Eigen::Matrix3d& m, double tol = 1e-10) {
  return (m.transpose() * m - Eigen::Matrix3d::Identity()).norm() < tol && std::abs(m.determinant() - 1.0) < tol;
}

namespace detail {

inline PauliSum single_x(const UniversePtr& u, SiteId s) {
  return PauliSum::from_string(PauliString::from_sites(u, std::vector<SiteId>{s}, {}));
}
inline PauliSum single_z(const UniversePtr& u, SiteId s) {
  return PauliSum::from_string(PauliString::from_sites(u, {}, std::vector<SiteId>{s}));
}
inline PauliSum single_y(const UniversePtr& u, SiteId s) {
  const std::vector<SiteId> one{s};
  return PauliSum::from_string(PauliString::from_sites(u, one, one), cplx{0, 1});
}

struct LocalImages {
  SiteId a, b;
  PauliSum xa, za, xb, zb;
};

// Conjugates c * p using images of X and Z on the gate's sites.
inline void conjugate_term(const PauliString& p, cplx c, const std::vector<SiteId>& sites,
                           const std::vector<std::pair<PauliSum, PauliSum>>& images, PauliSum& out) {
  const auto& u = p.universe();
  BitVec x = p.x(), z = p.z();
  PauliSum acc(u);
  std::vector<std::pair<bool, bool>> local;
  for (SiteId s : sites) {
    const std::size_t k = u->index(s);
    local.emplace_back(x.test(k), z.test(k));
    x.set(k, false);
    z.set(k, false);
  }
  acc.add_term(PauliString(u, std::move(x), std::move(z)), c);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (local[i].first) acc = acc * images[i].first;
    if (local[i].second) acc = acc * images[i].second;
  }
  out += acc;
}

}  // namespace detail

// G rho G^dagger applied term by term.
inline PauliSum conjugate(const PauliSum& s, const Gate& gate) {
  const auto& u = s.universe();
  using namespace detail;
  return std::visit(
      [&](const auto& g) -> PauliSum {
        using T = std::decay_t<decltype(g)>;
        PauliSum out(u);
        if constexpr (std::is_same_v<T, CustomTwoQubitGate>) {
          fail(ErrorCode::UnsupportedSymbolic, "custom two-qubit gates have no symbolic action");
        } else if constexpr (std::is_same_v<T, ZZRotationGate>) {
          const PauliString zz = PauliString::from_sites(u, {}, std::vector<SiteId>{g.a, g.b});
          const double cs = std::cos(g.theta), sn = std::sin(g.theta);
          for (const auto& [p, c] : s.terms()) {
            if (commutes(p, zz)) {
              out.add_term(p, c);
            } else {
              // e^{-i t ZZ/2} P e^{i t ZZ/2} = (cos t - i sin t ZZ) P
              out.add_term(p, c * cs);
              auto [ph, r] = mul(zz, p);
              out.add_term(r, c * cplx{0, -sn} * ph.value());
            }
          }
        } else {
          std::vector<SiteId> sites;
          std::vector<std::pair<PauliSum, PauliSum>> images;
          if constexpr (std::is_same_v<T, CZGate>) {
            sites = {g.a, g.b};
            images = {{single_x(u, g.a) * single_z(u, g.b), single_z(u, g.a)},
                      {single_z(u, g.a) * single_x(u, g.b), single_z(u, g.b)}};
          } else if constexpr (std::is_same_v<T, CNOTGate>) {
            sites = {g.control, g.target};
            images = {{single_x(u, g.control) * single_x(u, g.target), single_z(u, g.control)},
                      {single_x(u, g.target), single_z(u, g.control) * single_z(u, g.target)}};
          } else if constexpr (std::is_same_v<T, RotationGate>) {
            sites = {g.site};
            auto column = [&](int k) {
              return single_x(u, g.site) * g.rotation(0, k) + single_y(u, g.site) * g.rotation(1, k) +
                     single_z(u, g.site) * g.rotation(2, k);
            };
            images = {{column(0), column(2)}};
          }
          for (const auto& [p, c] : s.terms()) conjugate_term(p, c, sites, images, out);
        }
        return out;
      },
      gate.op);
}

inline PauliSum conjugate(PauliSum s, const Circuit& circuit) {
  for (const auto& g : circuit.gates) s = conjugate(s, g);
  return s;
}

inline GeneratorSet conjugate(const GeneratorSet& gs, const Gate& gate) {
  GeneratorSet out{gs.universe, gs.labels, {}};
  for (const auto& g : gs.generators) out.generators.push_back(conjugate(g, gate));
  return out;
}

inline GeneratorSet conjugate(GeneratorSet gs, const Circuit& circuit) {
  for (const auto& g : circuit.gates) gs = conjugate(gs, g);
  return gs;
}

// apply_gate on symbolic data.
inline PauliSum apply_gate(const PauliSum& rho, const Gate& g) { return conjugate(rho, g); }
inline GeneratorSet apply_gate(const GeneratorSet& gs, const Gate& g) { return conjugate(gs, g); }

}  // namespace modcom
