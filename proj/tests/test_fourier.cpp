#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sphase/fourier.hpp"
#include "sphase/json_io.hpp"
#include "support.hpp"

namespace {

using namespace sphase;
namespace st = sphase::testing;
using R = Rational;

const BasePoint kZero = BasePoint::finite(0.0);
const BasePoint kInf = BasePoint::infinity();

SingularityData airy_data() {
  return {Line::V, {PointData{kInf, {FactorOrbit::make(PuiseuxGerm(kInf, 1, {{R{3}, 1.0 / 3.0}}), 1)}}}};
}

SingularityData sample(const char* name) { return load_data(std::string(SPHASE_SOURCE_DIR) + "/samples/" + name); }

// Does some conjugate of a lie in the class of b?
bool same_orbit(const PuiseuxGerm& a, const PuiseuxGerm& b) {
  const int p = static_cast<int>(lcm(a.ramification(), b.ramification()));
  for (int j = 0; j < p; ++j) {
    if (same_class(monodromy(a, j), b)) return true;
  }
  return false;
}

// Same points, and at each point a multiplicity-preserving bijection of orbits.
::testing::AssertionResult same_data(const SingularityData& x, const SingularityData& y) {
  if (x.points.size() != y.points.size()) return ::testing::AssertionFailure() << "point count";
  for (const auto& px : x.points) {
    const PointData* py = y.find(px.point);
    if (!py) return ::testing::AssertionFailure() << "missing point";
    if (px.factors.size() != py->factors.size()) return ::testing::AssertionFailure() << "orbit count";
    for (const auto& o : px.factors) {
      const auto hit = std::find_if(py->factors.begin(), py->factors.end(), [&](const FactorOrbit& q) {
        return q.multiplicity == o.multiplicity && q.orbit_size == o.orbit_size &&
               same_orbit(q.representative, o.representative);
      });
      if (hit == py->factors.end()) return ::testing::AssertionFailure() << "orbit not matched";
    }
  }
  return ::testing::AssertionSuccess();
}

std::vector<int> multiplicities(const SingularityData& d) {
  std::vector<int> out;
  for (const auto& pd : d.points) {
    for (const auto& o : pd.factors) out.push_back(o.multiplicity);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- examples

TEST(FourierTransform, Airy) {
  const TransformResult r = fourier_transform(airy_data());
  EXPECT_EQ(r.data.line, Line::VStar);
  ASSERT_EQ(r.data.points.size(), 1u);
  const PointData& pd = r.data.points[0];
  EXPECT_TRUE(pd.point.is_infinity());
  ASSERT_EQ(pd.factors.size(), 1u);
  const FactorOrbit& o = pd.factors[0];
  EXPECT_EQ(o.multiplicity, 1);
  EXPECT_EQ(o.orbit_size, 2);
  // both signs of (2/3) w^(3/2) are members
  const PuiseuxGerm plus(kInf, 2, {{R(3, 2), 2.0 / 3.0}});
  const PuiseuxGerm minus(kInf, 2, {{R(3, 2), -2.0 / 3.0}});
  EXPECT_TRUE(same_orbit(o.representative, plus));
  EXPECT_TRUE(same_orbit(o.representative, minus));
  EXPECT_TRUE(r.report.skipped.empty());
  EXPECT_TRUE(r.report.merges.empty());
  ASSERT_EQ(r.report.entries.size(), 1u);
  EXPECT_LT(r.report.entries[0].residual, 1e-9);
}

TEST(FourierTransform, SimplePoleKeepsMultiplicity) {
  const SingularityData d{Line::V, {PointData{kZero, {FactorOrbit::make(PuiseuxGerm(kZero, 1, {{R{1}, 1.0}}), 2)}}}};
  const TransformResult r = fourier_transform(d);
  ASSERT_EQ(r.data.points.size(), 1u);
  EXPECT_TRUE(r.data.points[0].point.is_infinity());
  const FactorOrbit& o = r.data.points[0].factors.at(0);
  EXPECT_EQ(o.multiplicity, 2);
  EXPECT_EQ(o.orbit_size, 2);
  EXPECT_EQ(*pole_order(o.representative), R(1, 2));
  EXPECT_NEAR(std::abs(o.representative.terms().begin()->second), 2.0, 1e-12);
}

TEST(FourierTransform, EmptyData) {
  const TransformResult r = fourier_transform(SingularityData{});
  EXPECT_TRUE(r.data.points.empty());
  EXPECT_TRUE(r.report.entries.empty());
  EXPECT_TRUE(r.report.skipped.empty());
  const TransformResult back = inverse_fourier_transform(SingularityData{Line::VStar, {}});
  EXPECT_TRUE(back.data.points.empty());
}

TEST(FourierTransform, LinearTwistLandsAtFinitePoint) {
  const SingularityData d{Line::V,
                          {PointData{kInf, {FactorOrbit::make(PuiseuxGerm(kInf, 3, {{R{1}, 3.0}, {R(1, 3), 1.0}}), 1)}}}};
  const TransformResult r = fourier_transform(d);
  ASSERT_EQ(r.data.points.size(), 1u);
  ASSERT_FALSE(r.data.points[0].point.is_infinity());
  EXPECT_NEAR(std::abs(r.data.points[0].point.value() - Complex{3.0}), 0.0, 1e-12);
  EXPECT_EQ(*pole_order(r.data.points[0].factors.at(0).representative), R(1, 2));
}

TEST(FourierTransform, MixedSample) {
  const TransformResult r = fourier_transform(sample("mixed.json"));
  ASSERT_EQ(r.report.skipped.size(), 1u);
  EXPECT_EQ(r.report.skipped[0].reason, InadmissibleReason::Linear);
  EXPECT_EQ(r.report.entries.size(), 4u);
  EXPECT_TRUE(r.report.merges.empty());
  for (const auto& e : r.report.entries) EXPECT_LT(e.residual, 1e-9);

  ASSERT_EQ(r.data.points.size(), 2u);
  const PointData* three = r.data.find(BasePoint::finite(3.0));
  ASSERT_NE(three, nullptr);
  EXPECT_EQ(three->factors.size(), 1u);
  const PointData* inf = r.data.find(kInf);
  ASSERT_NE(inf, nullptr);
  ASSERT_EQ(inf->factors.size(), 3u);
  std::vector<R> orders;
  for (const auto& o : inf->factors) orders.push_back(*pole_order(o.representative));
  std::sort(orders.begin(), orders.end());
  // z^(-1) -> 1/2; the pole at 1-i carries the linear part -(1-i) w; z^2 -> 2
  EXPECT_EQ(orders, (std::vector<R>{R(1, 2), R{1}, R{2}}));
  EXPECT_EQ(multiplicities(r.data), (std::vector<int>{1, 1, 2, 3}));

  // the translated pole: linear coefficient -(1 - i), then order 3/5
  for (const auto& o : inf->factors) {
    if (*pole_order(o.representative) != R{1}) continue;
    const auto& t = o.representative.terms();
    EXPECT_NEAR(std::abs(t.at(R{1}) + Complex{1.0, -1.0}), 0.0, 1e-12);
    EXPECT_EQ(std::next(t.begin())->first, R(3, 5));
  }
}

TEST(FourierTransform, RejectsWrongLineAndInvalidData) {
  EXPECT_THROW((void)inverse_fourier_transform(airy_data()), Error);
  SingularityData bad{Line::V,
                      {PointData{kZero,
                                 {FactorOrbit::make(PuiseuxGerm(kZero, 1, {{R{1}, 1.0}}), 1),
                                  FactorOrbit::make(PuiseuxGerm(kZero, 1, {{R{1}, 1.0}, {R{0}, 2.0}}), 1)}}}};
  try {
    (void)fourier_transform(bad);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidData);
  }
}

TEST(InverseFourierTransform, UndoesAiry) {
  const TransformResult there = fourier_transform(airy_data());
  const TransformResult back = inverse_fourier_transform(there.data);
  EXPECT_EQ(back.data.line, Line::V);
  EXPECT_TRUE(same_data(back.data, airy_data()));
}

// ---- stationary phase

TEST(StationaryPhase, AiryExamples) {
  const DirectedGerm f{PuiseuxGerm(kInf, 1, {{R{3}, 1.0 / 3.0}}), Direction{kInf, kPi, 0}};
  const StationaryPhaseCheck c = check_stationary_phase(airy_data(), f);
  EXPECT_EQ(c.lhs, 1);
  EXPECT_EQ(c.rhs, 1);
  EXPECT_NEAR(std::abs(wrap_angle(c.eta.angle)), 0.0, 1e-12);

  for (const double phi : {0.3, 1.0, 2.5, 4.0}) {
    const DirectedGerm q{PuiseuxGerm(kInf, 1, {{R{2}, 1.0}}), Direction{kInf, phi, 0}};
    const StationaryPhaseCheck z2 = check_stationary_phase(airy_data(), q);
    EXPECT_EQ(z2.lhs, 0);
    EXPECT_EQ(z2.rhs, 0);
  }
}

// ---- properties

class RandomData : public ::testing::Test {
 protected:
  static const std::vector<SingularityData>& sets() {
    static const std::vector<SingularityData> s = [] {
      st::Rng rng(4242);
      std::vector<SingularityData> out;
      for (int i = 0; i < 50; ++i) out.push_back(st::random_dataset(rng));
      return out;
    }();
    return s;
  }
};

TEST_F(RandomData, CoversAllThreeCases) {
  bool seen[3] = {false, false, false};
  for (const auto& d : sets()) {
    for (const auto& e : fourier_transform(d).report.entries) {
      seen[static_cast<int>(e.admissibility.kind)] = true;
    }
  }
  EXPECT_TRUE(seen[static_cast<int>(TransformCase::FiniteToInfinity)]);
  EXPECT_TRUE(seen[static_cast<int>(TransformCase::LinearTwistToFinite)]);
  EXPECT_TRUE(seen[static_cast<int>(TransformCase::InfinityToInfinity)]);
}

TEST_F(RandomData, MultiplicitiesAreConservedAndNothingMerges) {
  for (const auto& d : sets()) {
    const TransformResult r = fourier_transform(d);
    EXPECT_TRUE(r.report.skipped.empty());
    EXPECT_TRUE(r.report.merges.empty());
    EXPECT_EQ(multiplicities(r.data), multiplicities(d));
    EXPECT_TRUE(validate(r.data).empty());
    for (const auto& e : r.report.entries) EXPECT_LT(e.residual, 1e-9);
  }
}

TEST_F(RandomData, RoundTrip) {
  for (const auto& d : sets()) {
    const TransformResult there = fourier_transform(d);
    const TransformResult back = inverse_fourier_transform(there.data);
    EXPECT_TRUE(back.report.merges.empty());
    EXPECT_TRUE(same_data(back.data, d));
  }
}

TEST_F(RandomData, StationaryPhaseHoldsForEveryFactor) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  int checked = 0;
  for (const auto& d : sets()) {
    for (const auto& pd : d.points) {
      for (const auto& o : pd.factors) {
        const DirectedGerm f{o.representative, Direction{pd.point, ang(rng), 0}};
        const StationaryPhaseCheck c = check_stationary_phase(d, f);
        EXPECT_EQ(c.rhs, o.multiplicity);
        EXPECT_EQ(c.lhs, c.rhs);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST_F(RandomData, AllBranchesLandInOneOrbit) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (const auto& d : sets()) {
    for (const auto& pd : d.points) {
      for (const auto& o : pd.factors) {
        const double phi = ang(rng);
        const int p = o.representative.ramification();
        const PuiseuxGerm first = legendre_transform(DirectedGerm{o.representative, Direction{pd.point, phi, 0}}).target.germ;
        for (int k = 1; k < p; ++k) {
          const LegendrePair pair = legendre_transform(DirectedGerm{o.representative, Direction{pd.point, phi, k}});
          EXPECT_TRUE(same_orbit(pair.target.germ, first));
        }
      }
    }
  }
}

}  // namespace
