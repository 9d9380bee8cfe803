#include <gtest/gtest.h>

#include "modcom/dense.hpp"
#include "modcom/pauli_string.hpp"
#include "oracle.hpp"

using namespace modcom;

namespace {

// Dense matrix of the canonical operator: prod over sites of X^x Z^z.
oracle::Mat canonical_matrix(const PauliString& p) {
  const auto& u = *p.universe();
  std::map<int, oracle::Mat2> ops;
  for (std::size_t k = 0; k < u.size(); ++k) {
    oracle::Mat2 f = oracle::Mat2::Identity();
    if (p.x().test(k)) f = f * oracle::pauli('X');
    if (p.z().test(k)) f = f * oracle::pauli('Z');
    ops[static_cast<int>(k)] = f;
  }
  return oracle::kron_ops(static_cast<int>(u.size()), ops);
}

PauliString ps(const UniversePtr& u, std::string_view text) { return parse_pauli(u, text).second; }

}  // namespace

TEST(Phase, CyclicGroupOfOrderFour) {
  const Phase i = Phase::i();
  EXPECT_EQ(i * i, Phase::minus_one());
  EXPECT_EQ(i * i * i * i, Phase::one());
  EXPECT_EQ(Phase::minus_i().conj(), i);
  EXPECT_NEAR(std::abs((i * Phase::minus_i()).value() - cplx(1, 0)), 0, 0);
}

TEST(Mul, XTimesZIsMinusIY) {
  auto u = SiteUniverse::range(0, 0);
  auto [ph, r] = mul(ps(u, "X_0"), ps(u, "Z_0"));
  EXPECT_EQ(r, ps(u, "Y_0"));
  // The canonical string XZ itself equals -i Y.
  EXPECT_EQ(ph * r.hermitian_phase(), Phase::minus_i());
  EXPECT_EQ(to_string(r), "Y_0");
}

TEST(Mul, IdentityIsNeutral) {
  auto u = SiteUniverse::range(-1, 1);
  const PauliString p = ps(u, "Z_-1 Y_0 X_1");
  auto [ph, r] = mul(PauliString::identity(u), p);
  EXPECT_EQ(ph, Phase::one());
  EXPECT_EQ(r, p);
}

TEST(Mul, MatchesDenseOnThreeQubits) {
  auto u = SiteUniverse::range(-1, 1);
  const PauliString p = ps(u, "Z_-1 X_0"), q = ps(u, "Z_0 Z_1");
  auto [ph, r] = mul(p, q);
  const oracle::Mat lhs = canonical_matrix(p) * canonical_matrix(q);
  EXPECT_LT((lhs - ph.value() * canonical_matrix(r)).norm(), 1e-14);
  EXPECT_EQ(r, ps(u, "Z_-1 Y_0 Z_1"));
}

TEST(Mul, SquareGivesSignedIdentity) {
  auto u = SiteUniverse::range(0, 2);
  for (const char* t : {"X_0", "Y_0", "Y_0 Y_1", "Y_0 Y_1 Y_2 ", "X_0 Z_1 Y_2"}) {
    const PauliString p = ps(u, t);
    auto [ph, r] = mul(p, p);
    EXPECT_TRUE(r.is_identity()) << t;
    EXPECT_EQ(ph, p.adjoint_sign() < 0 ? Phase::minus_one() : Phase::one()) << t;
  }
}

// All 16 x 16 ordered pairs of 2-qubit strings, and every triple for associativity.
TEST(Mul, ExhaustiveTwoQubitAgainstDense) {
  auto u = SiteUniverse::range(0, 1);
  std::vector<PauliString> all;
  for (int code = 0; code < 16; ++code) {
    BitVec x(2), z(2);
    x.set(0, code & 1);
    z.set(0, code & 2);
    x.set(1, code & 4);
    z.set(1, code & 8);
    all.emplace_back(u, x, z);
  }
  int checked = 0;
  for (const auto& p : all) {
    for (const auto& q : all) {
      auto [ph, r] = mul(p, q);
      ASSERT_LT((canonical_matrix(p) * canonical_matrix(q) - ph.value() * canonical_matrix(r)).norm(), 1e-14);
      auto [ph2, r2] = mul(q, p);
      EXPECT_EQ(r, r2);
      EXPECT_EQ(commutes(p, q), ph == ph2);
      EXPECT_EQ(!commutes(p, q), ph == ph2 * Phase::minus_one());
      ++checked;
      for (const auto& s : all) {
        auto [a1, pq] = mul(p, q);
        auto [a2, pq_s] = mul(pq, s);
        auto [b1, qs] = mul(q, s);
        auto [b2, p_qs] = mul(p, qs);
        ASSERT_EQ(pq_s, p_qs);
        ASSERT_EQ(a1 * a2, b1 * b2);
      }
    }
  }
  EXPECT_EQ(checked, 256);
}

TEST(Adjoint, SignRuleMatchesDense) {
  auto u = SiteUniverse::range(0, 1);
  for (int code = 0; code < 16; ++code) {
    BitVec x(2), z(2);
    x.set(0, code & 1);
    z.set(0, code & 2);
    x.set(1, code & 4);
    z.set(1, code & 8);
    const PauliString p(u, x, z);
    const oracle::Mat m = canonical_matrix(p);
    EXPECT_LT((m.adjoint() - static_cast<double>(p.adjoint_sign()) * m).norm(), 1e-14);
    // hermitian_phase times the Hermitian letters is the canonical operator.
    std::string word;
    for (std::size_t k = 0; k < 2; ++k) word += p.x().test(k) ? (p.z().test(k) ? 'Y' : 'X') : (p.z().test(k) ? 'Z' : 'I');
    EXPECT_LT((p.hermitian_phase().value() * oracle::pauli_word(word) - m).norm(), 1e-14);
  }
}

TEST(Commutes, Examples) {
  auto u1 = SiteUniverse::range(0, 1);
  EXPECT_FALSE(commutes(ps(u1, "X_0"), ps(u1, "Z_0")));
  EXPECT_TRUE(commutes(ps(u1, "X_0"), ps(u1, "X_1")));

  // X-string over A and B versus Z_0 times the X-string over C, N = 1.
  auto u = SiteUniverse::range(-2, 2);
  const PauliString a = x_string(u, -2, 0);
  const PauliString c = mul(ps(u, "Z_0"), x_string(u, 2, 2)).second;
  EXPECT_FALSE(commutes(a, c));
  const oracle::Mat ma = to_dense(a).m, mc = to_dense(c).m;
  EXPECT_GT((ma * mc - mc * ma).norm(), 1.0);
  EXPECT_LT((ma * mc + mc * ma).norm(), 1e-14);
}

TEST(Support, Examples) {
  auto u = SiteUniverse::range(-4, 4);
  EXPECT_TRUE(support(PauliString::identity(u)).empty());
  EXPECT_EQ(support(ps(u, "Z_-1 X_0")), (std::vector<SiteId>{-1, 0}));
  EXPECT_EQ(support(x_string(u, -4, 0)), (std::vector<SiteId>{-4, -2, 0}));
}

TEST(XString, ExpansionAndErrors) {
  auto u = SiteUniverse::range(-6, 6);
  EXPECT_EQ(x_string(u, 0, 0), ps(u, "X_0"));
  EXPECT_EQ(x_string(u, -4, 0), ps(u, "X_-4 X_-2 X_0"));
  EXPECT_EQ(x_string(u, 2, 6), ps(u, "X_2 X_4 X_6"));
  EXPECT_THROW(x_string(u, 2, 0), Error);
  EXPECT_THROW(x_string(u, 0, 3), Error);
}

TEST(RestrictIdentityOn, Examples) {
  auto u = SiteUniverse::range(-4, 4);
  const std::vector<SiteId> odd{-3, -1, 1, 3};
  EXPECT_TRUE(restrict_identity_on(PauliString::identity(u), odd));
  EXPECT_FALSE(restrict_identity_on(ps(u, "Z_1 X_2 Z_3"), odd));
  EXPECT_TRUE(restrict_identity_on(x_string(u, 0, 4), odd));
}

TEST(Text, RoundTrip) {
  auto u = SiteUniverse::range(-2, 2);
  for (const char* t : {"I", "Z_-1 X_0 Z_1", "Z_-1 Y_0 Z_1", "X_-2 Y_-1 Z_2"}) {
    auto [ph, p] = parse_pauli(u, t);
    EXPECT_EQ(to_string(p), t);
    // Written Hermitian letters == phase * canonical.
    EXPECT_EQ(ph, p.hermitian_phase().conj());
  }
  auto [ph, p] = parse_pauli(u, "- X_0 Z_0");
  EXPECT_EQ(to_string(p), "Y_0");
  EXPECT_EQ(ph, Phase::minus_one());
  EXPECT_THROW(parse_pauli(u, "Q_0"), Error);
  EXPECT_THROW(parse_pauli(u, "X_7"), Error);
  EXPECT_THROW(parse_pauli(u, "X_a"), Error);
}

TEST(Universe, SignedIdsMapToDenseIndices) {
  auto u = SiteUniverse::range(-3, 2);
  EXPECT_EQ(u->size(), 6u);
  EXPECT_EQ(u->index(-3), 0u);
  EXPECT_EQ(u->index(2), 5u);
  EXPECT_THROW(u->index(7), Error);
  EXPECT_THROW(SiteUniverse::make({1, 1}), Error);
}
