#include <gtest/gtest.h>

#include "dyadcert/codec.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dyadcert;
using codec::Json;

TEST(Codec, ParseErrorNamesTheByte) {
  try {
    codec::ParseDocument("{\"level\": 3,", "stdin");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("stdin: parse error at byte"), std::string::npos) << e.what();
  }
}

TEST(Codec, SetFormsAgree) {
  const Json hex = {{"level", 2}, {"atoms", codec::ToJson(ClopenSet::Atom({2, 5}))["atoms"]}};
  const Json list = {{"level", 2}, {"atomList", {5}}};
  EXPECT_EQ(codec::SetFrom(list, "s"), ClopenSet::Atom({2, 5}));
  EXPECT_EQ(codec::SetFrom(codec::ToJson(ClopenSet::Atom({2, 5})), "s"), codec::SetFrom(list, "s"));
  (void)hex;
}

TEST(Codec, SetRoundTrip) {
  gen::Gen g(51);
  for (int i = 0; i < 100; ++i) {
    const ClopenSet s = g.any_set(10);
    EXPECT_EQ(codec::SetFrom(codec::ToJson(s), "s"), s);
  }
}

TEST(Codec, ErrorsCarryJsonPath) {
  const Json bad = {{"family", {{{"level", 1}, {"atomList", {9}}}}}};
  try {
    codec::FamilyFrom(bad, "family");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("family"), std::string::npos) << e.what();
  }
  EXPECT_THROW(codec::RationalFrom(Json("1/0"), "x"), InputError);
  EXPECT_THROW(codec::UnsignedFrom(Json(-1), "x"), InputError);
}

TEST(Codec, RationalsAcceptStringsAndIntegers) {
  EXPECT_EQ(codec::RationalFrom(Json("3/8"), "x"), Rational(3, 8));
  EXPECT_EQ(codec::RationalFrom(Json(2), "x"), Rational(2));
  EXPECT_EQ(codec::ToJson(Rational(0)), Json("0/1"));
}

TEST(Codec, MeasureRoundTrip) {
  const SignedMeasure nu(3, {{1, Rational(1, 4)}, {6, Rational(-1, 2)}});
  const SignedMeasure back = codec::MeasureFrom(codec::ToJson(nu), "nu");
  EXPECT_EQ(back.level(), 3u);
  EXPECT_EQ(back.values(), nu.values());
}

TEST(Codec, InstanceRoundTrip) {
  gen::Gen g(52);
  const TalagrandInstance inst = gen::RelaxedInstance(g);
  const TalagrandInstance back = codec::InstanceFrom(codec::ToJson(inst));
  EXPECT_EQ(back.t, inst.t);
  EXPECT_EQ(back.n, inst.n);
  EXPECT_EQ(back.eta, inst.eta);
  EXPECT_EQ(back.q, inst.q);
  EXPECT_EQ(back.g, inst.g);
  EXPECT_EQ(back.relaxed, inst.relaxed);
}

TEST(Codec, QuadrupleRoundTrip) {
  gen::Gen g(53);
  const auto sq = fixtures::MakeSyntheticQuadruple(g);
  const GoodQuadruple back = codec::QuadrupleFrom(codec::ToJson(sq.e));
  EXPECT_EQ(back.m, sq.e.m);
  EXPECT_EQ(back.n, sq.e.n);
  EXPECT_EQ(back.kernels, sq.e.kernels);
  ASSERT_EQ(back.families.size(), sq.e.families.size());
  EXPECT_EQ(codec::ToJson(back).dump(), codec::ToJson(sq.e).dump());
}

TEST(Codec, ReportsSerialize) {
  const ScaleReport s{"too fine", 30, 22, 28, 1u << 20};
  const Json j = codec::ToJson(s);
  EXPECT_EQ(j["requiredLevel"], 30);
  EXPECT_EQ(j["nZero"], 28);
  const Json c = codec::ToJson(build_vw_counterexample(ClopenSet::Coordinate(0, 0), 3));
  EXPECT_TRUE(c.is_object());
}
