#include <gtest/gtest.h>

#include "dyadcert/clopen.hpp"
#include "dyadcert/errors.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace dyadcert;

TEST(Clopen, CoordinateCylinders) {
  const ClopenSet v0 = ClopenSet::Coordinate(0, 0);
  EXPECT_EQ(lambda(v0), Rational(1, 2));
  EXPECT_EQ(v0.level(), 0u);
  EXPECT_TRUE(v0.has_atom(0));
  EXPECT_FALSE(v0.has_atom(1));
  const ClopenSet v3 = ClopenSet::Coordinate(3, 1);
  EXPECT_EQ(lambda(v3), Rational(1, 2));
  EXPECT_EQ(phi(v3, 3), Rational(1, 2));
  EXPECT_EQ(phi(v3, 2), Rational(0));
  EXPECT_EQ(complement(v3), ClopenSet::Coordinate(3, 0));
}

TEST(Clopen, AtomContainment) {
  // atom 5 of level 3 lies in atom 5 mod 4 = 1 of level 1
  const ClopenSet fine = ClopenSet::Atom({3, 5});
  EXPECT_TRUE(subset(fine, ClopenSet::Atom({1, 1})));
  EXPECT_FALSE(subset(fine, ClopenSet::Atom({1, 3})));
  EXPECT_EQ(lambda(AtomId{3, 5}), Rational(1, 16));
}

TEST(Clopen, EqualityIsSemantic) {
  const ClopenSet a = ClopenSet::Coordinate(0, 1);
  EXPECT_EQ(a, a.at_level(6));
  EXPECT_EQ(a.at_level(6).canonical().level(), 0u);
  EXPECT_EQ(a.at_level(6).minimal_level(), 0u);
  EXPECT_EQ(ClopenSet::Empty(), ClopenSet::FromAtoms(4, {}));
  EXPECT_EQ(ClopenSet::Full().at_level(3).atom_count(), 16u);
}

TEST(Clopen, NormalizeBelowMinimalLevelFails) {
  EXPECT_THROW(normalize(ClopenSet::Atom({3, 2}), 1), LevelError);
  EXPECT_EQ(normalize(ClopenSet::Atom({1, 2}), 3).level(), 3u);
}

TEST(Clopen, CanonicalKeyIgnoresLevel) {
  const ClopenSet a = ClopenSet::Atom({2, 6});
  EXPECT_EQ(CanonicalKey(a), CanonicalKey(a.at_level(7)));
  EXPECT_NE(CanonicalKey(a), CanonicalKey(ClopenSet::Atom({2, 5})));
}

TEST(Clopen, MaskHexRoundTrip) {
  gen::Gen g(3);
  for (int i = 0; i < 50; ++i) {
    const ClopenSet s = g.any_set(9);
    const AtomMask back = ParseMaskHex(s.level(), MaskHex(s.mask()));
    EXPECT_EQ(ClopenSet::FromMask(back), s);
  }
}

TEST(Clopen, SetOpsAgreeWithReference) {
  gen::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const unsigned l = g.range(0, 7);
    const ClopenSet a = g.any_set(l), b = g.any_set(l);
    const auto oa = oracle::Expand(a, 7), ob = oracle::Expand(b, 7);
    EXPECT_TRUE(oracle::Same(oracle::Expand(meet(a, b), 7), oracle::Meet(oa, ob)));
    EXPECT_TRUE(oracle::Same(oracle::Expand(join(a, b), 7), oracle::Join(oa, ob)));
    EXPECT_TRUE(oracle::Same(oracle::Expand(difference(a, b), 7), oracle::Minus(oa, ob)));
    EXPECT_TRUE(oracle::Same(oracle::Expand(symdiff(a, b), 7), oracle::Sym(oa, ob)));
    EXPECT_EQ(lambda(a), oracle::Measure(oa));
    for (unsigned m = 0; m <= 8; ++m) {
      EXPECT_EQ(signed_balance(a, m), m <= 7 ? oracle::Balance(oa, m) : Rational(0));
      if (m <= 7) EXPECT_EQ(psi(a, b, m), oracle::Psi(oa, ob, m));
    }
    EXPECT_EQ(subset(a, b), oracle::Measure(oracle::Minus(oa, ob)).is_zero());
    EXPECT_EQ(disjoint(a, b), oracle::Measure(oracle::Meet(oa, ob)).is_zero());
  }
}

TEST(Clopen, PhiVanishesAboveCanonicalLevel) {
  gen::Gen g(12);
  for (int i = 0; i < 300; ++i) {
    const ClopenSet a = g.any_set(8);
    const unsigned c = a.canonical().level();
    EXPECT_TRUE(phi(a, c + 1 + g.range(0, 20)).is_zero());
  }
}

TEST(Clopen, AlgebraDispatch) {
  const ClopenSet a = ClopenSet::Coordinate(0, 0), b = ClopenSet::Coordinate(1, 0);
  EXPECT_EQ(algebra(SetOp::kMeet, a, b), meet(a, b));
  EXPECT_EQ(algebra(SetOp::kComplement, a, std::nullopt), complement(a));
  EXPECT_EQ(ParseSetOp("symdiff"), SetOp::kSymdiff);
  EXPECT_FALSE(ParseSetOp("nope").has_value());
  EXPECT_THROW(algebra(SetOp::kJoin, a, std::nullopt), InputError);
}

TEST(Clopen, OccupancyCountsAndBalances) {
  // atoms 0 and 4 of level 2 both lie in atom 0 of level 1, differing in coordinate 2
  const std::uint64_t idx[] = {0, 4, 1};
  const ClopenSet a = ClopenSet::FromAtoms(2, idx);
  const Occupancy occ = occupancy(a, 1);
  EXPECT_EQ(occ.count[0], 2u);
  EXPECT_EQ(occ.count[1], 1u);
  EXPECT_EQ(occ.balance_at(0, 2), 0);
  EXPECT_EQ(occ.balance_at(1, 2), 1);
}

TEST(Clopen, MaxCanonicalLevel) {
  const std::vector<ClopenSet> f = {ClopenSet::Atom({3, 1}).at_level(6), ClopenSet::Coordinate(1, 0)};
  EXPECT_EQ(max_canonical_level(f), 3u);
}
