#include <gtest/gtest.h>

#include "sphase/legendre.hpp"
#include "support.hpp"

namespace {

using namespace sphase;
namespace st = sphase::testing;
using R = Rational;

const BasePoint kZero = BasePoint::finite(0.0);
const BasePoint kInf = BasePoint::infinity();

DirectedGerm at(BasePoint b, int p, PuiseuxGerm::TermMap t, double angle, int branch = 0) {
  return {PuiseuxGerm(b, p, std::move(t)), Direction{b, angle, branch}};
}

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

// ---- classify

TEST(Classify, Examples) {
  const auto airy = classify(at(kInf, 1, {{R{3}, 1.0 / 3.0}}, 0.0));
  EXPECT_EQ(airy.kind, TransformCase::InfinityToInfinity);
  EXPECT_EQ(airy.lambda, R{3});

  const auto pole = classify(at(kZero, 1, {{R{1}, 1.0}}, 0.0));
  EXPECT_EQ(pole.kind, TransformCase::FiniteToInfinity);
  EXPECT_EQ(pole.lambda, R{1});

  const auto twist = classify(at(kInf, 2, {{R{1}, 2.0}, {R{1, 2}, 1.0}}, 0.0));
  EXPECT_EQ(twist.kind, TransformCase::LinearTwistToFinite);
  EXPECT_EQ(twist.b, Complex{2.0});
  EXPECT_EQ(twist.lambda, R(1, 2));
  EXPECT_EQ(twist.target_order(), R{1});

  const auto linear = classify(at(kInf, 1, {{R{1}, 1.0}, {R{0}, 5.0}}, 0.0));
  EXPECT_EQ(linear.kind, TransformCase::Inadmissible);
  EXPECT_EQ(linear.reason, InadmissibleReason::Linear);

  const auto bounded = classify(at(kZero, 1, {{R{0}, 1.0}, {R{-1}, 1.0}}, 0.0));
  EXPECT_EQ(bounded.reason, InadmissibleReason::Bounded);
}

TEST(Classify, SubLinearWithoutLinearPartIsCaseTwo) {
  const auto k = classify(at(kInf, 3, {{R{2, 3}, 1.0}}, 0.0));
  EXPECT_EQ(k.kind, TransformCase::LinearTwistToFinite);
  EXPECT_EQ(k.b, Complex{});
  EXPECT_EQ(k.target_order(), R{2});
}

TEST(Classify, UndecidableOrderThrows) {
  const DirectedGerm f{PuiseuxGerm(kZero, 1, {}, R{-1}), Direction{kZero, 0.0, 0}};
  EXPECT_THROW((void)classify(f), Error);
}

// ---- invert_series

TEST(InvertSeries, SquareAtInfinity) {
  const DirectedGerm psi = invert_series(PuiseuxGerm(kInf, 1, {{R{2}, 1.0}}), Direction{kInf, 0.0, 0});
  EXPECT_TRUE(psi.dir.base.is_infinity());
  EXPECT_NEAR(psi.dir.angle, 0.0, 1e-15);
  ASSERT_EQ(psi.germ.terms().size(), 1u);
  EXPECT_NEAR(std::abs(psi.germ.coefficient(R{1, 2}) - 1.0), 0.0, 1e-14);
  // psi -> +infinity along angle 0
  EXPECT_NEAR(std::abs(evaluate(psi.germ, 9.0, psi.dir) - 3.0), 0.0, 1e-13);
}

TEST(InvertSeries, InverseSquareAtZero) {
  // w = -z^-2; along z > 0 the dual runs to -infinity and z = (-w)^(-1/2)
  const DirectedGerm psi = invert_series(PuiseuxGerm(kZero, 1, {{R{2}, -1.0}}), Direction{kZero, 0.0, 0});
  EXPECT_TRUE(psi.dir.base.is_infinity());
  EXPECT_NEAR(psi.dir.angle, kPi, 1e-14);
  EXPECT_NEAR(std::abs(evaluate(psi.germ, -4.0, psi.dir) - 0.5), 0.0, 1e-14);
}

TEST(InvertSeries, Identity) {
  const DirectedGerm psi = invert_series(PuiseuxGerm(kInf, 1, {{R{1}, 1.0}}), Direction{kInf, 0.0, 0});
  ASSERT_EQ(psi.germ.terms().size(), 1u);
  EXPECT_NEAR(std::abs(psi.germ.coefficient(R{1}) - 1.0), 0.0, 1e-15);
}

// ---- legendre_transform examples

TEST(Legendre, AiryBothRays) {
  const LegendrePair minus = legendre_transform(at(kInf, 1, {{R{3}, 1.0 / 3.0}}, 0.0));
  EXPECT_TRUE(minus.target.dir.base.is_infinity());
  EXPECT_NEAR(angle_gap(minus.target.dir.angle, 0.0), 0.0, 1e-14);
  ASSERT_EQ(minus.target.germ.terms().size(), 1u);
  EXPECT_NEAR(std::abs(minus.target.germ.coefficient(R{3, 2}) - (-2.0 / 3.0)), 0.0, 1e-12);

  const LegendrePair plus = legendre_transform(at(kInf, 1, {{R{3}, 1.0 / 3.0}}, kPi));
  EXPECT_NEAR(angle_gap(plus.target.dir.angle, 0.0), 0.0, 1e-14);
  ASSERT_EQ(plus.target.germ.terms().size(), 1u);
  EXPECT_NEAR(std::abs(plus.target.germ.coefficient(R{3, 2}) - 2.0 / 3.0), 0.0, 1e-12);
  EXPECT_EQ(pole_order(plus.target.germ), PoleOrder{R(3, 2)});
  EXPECT_LT(plus.residual, 1e-15);
}

TEST(Legendre, InversePoleAtZero) {
  const LegendrePair p = legendre_transform(at(kZero, 1, {{R{1}, 1.0}}, 0.0));
  EXPECT_TRUE(p.target.dir.base.is_infinity());
  EXPECT_NEAR(angle_gap(p.target.dir.angle, kPi), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.beta - Complex{-1.0}), 0.0, 1e-15);
  EXPECT_EQ(pole_order(p.target.germ), PoleOrder{R(1, 2)});
  // g = 2(-w)^(1/2): at w = -4 the value is 4
  EXPECT_NEAR(std::abs(evaluate(p.target.germ, -4.0, p.target.dir) - 4.0), 0.0, 1e-13);
  EXPECT_LT(p.residual, 1e-15);
}

TEST(Legendre, TranslatedPoleCarriesLinearPart) {
  const Complex a{1.0, -1.0};
  const BasePoint base = BasePoint::finite(a);
  const LegendrePair shifted = legendre_transform(at(base, 2, {{R{3, 2}, Complex{2, -1}}}, 0.3));
  const LegendrePair plain = legendre_transform(at(kZero, 2, {{R{3, 2}, Complex{2, -1}}}, 0.3));
  EXPECT_NEAR(std::abs(shifted.target.germ.coefficient(R{1}) + a), 0.0, 1e-14);
  EXPECT_TRUE(same_class(shifted.reduced_target(), plain.target.germ));
  EXPECT_EQ(pole_order(shifted.reduced_target()), PoleOrder{R(3, 5)});
}

TEST(Legendre, LinearTwistGoesToFinitePoint) {
  const LegendrePair p = legendre_transform(at(kInf, 2, {{R{1}, 2.0}, {R{1, 2}, 1.0}}, 0.0));
  ASSERT_TRUE(p.target.dir.base.is_finite());
  EXPECT_EQ(p.target.dir.base.value(), Complex{2.0});
  EXPECT_EQ(pole_order(p.target.germ), PoleOrder{R{1}});
  // w - 2 = (1/2) z^(-1/2) inverts to z = (1/4) T^-2, so g has leading term (1/4) T^-1
  EXPECT_NEAR(std::abs(p.target.germ.coefficient(R{1}) - 0.25), 0.0, 1e-14);
}

TEST(Legendre, ThreeZPlusCubeRootGoesToThree) {
  const LegendrePair p = legendre_transform(at(kInf, 3, {{R{1}, 3.0}, {R{1, 3}, 1.0}}, 0.0));
  ASSERT_TRUE(p.target.dir.base.is_finite());
  EXPECT_EQ(p.target.dir.base.value(), Complex{3.0});
  EXPECT_EQ(pole_order(p.target.germ), PoleOrder{R(1, 2)});
  EXPECT_LT(p.residual, kResidualTolerance);
}

TEST(Legendre, InadmissibleGermThrows) {
  try {
    (void)legendre_transform(at(kInf, 1, {{R{1}, 1.0}, {R{0}, 5.0}}, 0.0));
    FAIL() << "expected InadmissibleGerm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissibleGerm);
  }
}

TEST(Legendre, ShortTruncatedInputThrows) {
  const DirectedGerm f{PuiseuxGerm(kInf, 1, {{R{3}, 1.0}, {R{2}, 1.0}}, R{-1}), Direction{kInf, 0.0, 0}};
  try {
    (void)legendre_transform(f, 16);
    FAIL() << "expected TruncationInsufficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationInsufficient);
  }
}

TEST(Legendre, PrecisionCountsTermsBelowPolarPart) {
  const LegendrePair p = legendre_transform(at(kInf, 1, {{R{4}, 1.0}, {R{2}, 0.5}}, 0.4), 10);
  ASSERT_TRUE(p.target.germ.known_order().has_value());
  // lattice 1/3, 10 steps below the constant term
  EXPECT_EQ(*p.target.germ.known_order(), R(10, 3));
}

// ---- inverse examples

TEST(InverseLegendre, AiryBack) {
  const DirectedGerm g{PuiseuxGerm(kInf, 2, {{R{3, 2}, -2.0 / 3.0}}), Direction{kInf, 0.0, 0}};
  const LegendrePair p = inverse_legendre(g);
  EXPECT_TRUE(p.inverse);
  EXPECT_NEAR(angle_gap(p.target.dir.angle, 0.0), 0.0, 1e-14);
  ASSERT_EQ(p.target.germ.terms().size(), 1u);
  EXPECT_NEAR(std::abs(p.target.germ.coefficient(R{3}) - 1.0 / 3.0), 0.0, 1e-13);
}

TEST(InverseLegendre, UndoesAiry) {
  const DirectedGerm f = at(kInf, 1, {{R{3}, 1.0 / 3.0}}, kPi);
  const LegendrePair back = inverse_legendre(legendre_transform(f).target);
  EXPECT_TRUE(same_class(back.target.germ, f.germ));
  EXPECT_NEAR(angle_gap(back.target.dir.angle, kPi), 0.0, 1e-12);
}

// ---- corpus properties

class Corpus : public ::testing::Test {
 protected:
  static const std::vector<st::AdmissibleSample>& corpus() {
    static const auto c = st::admissible_corpus();
    return c;
  }
};

TEST_F(Corpus, PoleOrderLawsAreExact) {
  for (const auto& s : corpus()) {
    const LegendrePair p = legendre_transform(s.f);
    const Rational l = s.lambda;
    Rational want;
    switch (s.kind) {
      case st::Kind::Finite: want = l / (l + Rational{1}); break;
      case st::Kind::LinearTwist: want = l / (Rational{1} - l); break;
      case st::Kind::InfinityLarge: want = l / (l - Rational{1}); break;
    }
    EXPECT_EQ(pole_order(p.reduced_target()), PoleOrder{want});
    EXPECT_EQ(p.admissibility.target_order(), want);
  }
}

TEST_F(Corpus, DefiningIdentityResidual) {
  for (const auto& s : corpus()) {
    EXPECT_LT(legendre_transform(s.f).residual, kResidualTolerance) << print_germ(s.f.germ);
  }
}

TEST_F(Corpus, TargetBaseMatchesCase) {
  for (const auto& s : corpus()) {
    const LegendrePair p = legendre_transform(s.f);
    if (s.kind == st::Kind::LinearTwist) {
      ASSERT_TRUE(p.target.dir.base.is_finite());
      EXPECT_EQ(p.target.dir.base.value(), s.f.germ.coefficient(Rational{1}));
    } else {
      EXPECT_TRUE(p.target.dir.base.is_infinity());
    }
  }
}

TEST_F(Corpus, RoundTripRestoresClassAndDirection) {
  for (const auto& s : corpus()) {
    const LegendrePair there = legendre_transform(s.f);
    const LegendrePair back = inverse_legendre(there.target);
    EXPECT_TRUE(same_point(back.target.dir.base, s.f.dir.base));
    EXPECT_TRUE(same_class(back.target.germ, at_branch_zero(s.f.germ, s.f.dir))) << print_germ(s.f.germ);
    EXPECT_LT(angle_gap(back.target.dir.angle, s.f.dir.angle), 1e-9);
    EXPECT_EQ(back.target.dir.branch, 0);
  }
}

TEST_F(Corpus, RoundTripRestoresDetermination) {
  // the source read along its own branch and the returned germ read at branch 0 are the same function
  for (const auto& s : corpus()) {
    const LegendrePair back = inverse_legendre(legendre_transform(s.f).target);
    const PuiseuxGerm src = polar_part(s.f.germ);
    const PuiseuxGerm out = polar_part(back.target.germ);
    const BasePoint& base = s.f.dir.base;
    const Complex ray = std::polar(1.0, s.f.dir.angle);
    const Complex z = base.is_infinity() ? 20.0 * ray : base.value() + 0.05 * ray;
    const Complex a = evaluate(src, z, s.f.dir);
    const Complex b = evaluate(out, z, back.target.dir);
    EXPECT_LT(std::abs(a - b), 1e-8 * std::max(1.0, std::abs(a))) << print_germ(s.f.germ);
  }
}

TEST_F(Corpus, BoundedPerturbationChangesNothing) {
  st::Rng rng(99);
  for (const auto& s : corpus()) {
    const PuiseuxGerm& f = s.f.germ;
    const DirectedGerm moved{add(f, st::random_bounded(rng, f.base(), f.ramification())), s.f.dir};
    const LegendrePair a = legendre_transform(s.f);
    const LegendrePair b = legendre_transform(moved);
    EXPECT_TRUE(same_point(a.target.dir.base, b.target.dir.base));
    EXPECT_LT(angle_gap(a.target.dir.angle, b.target.dir.angle), 1e-9);
    EXPECT_TRUE(same_class(a.target.germ, b.target.germ)) << print_germ(f);
  }
}

TEST_F(Corpus, DualRelationZEqualsMinusGPrime) {
  for (const auto& s : corpus()) {
    const LegendrePair p = legendre_transform(s.f);
    const BasePoint tb = p.target.dir.base;
    PuiseuxGerm z = p.psi;
    if (s.f.germ.base().is_finite()) z = add(z, PuiseuxGerm::monomial(tb, Rational{0}, s.f.germ.base().value()));
    const PuiseuxGerm dg = derive(p.target.germ);
    const PuiseuxGerm sum = add(dg, z);
    for (const auto& [mu, c] : sum.terms()) {
      const double scale = std::max({1.0, std::abs(dg.coefficient(mu)), std::abs(z.coefficient(mu))});
      EXPECT_LT(std::abs(c), 1e-9 * scale) << print_germ(s.f.germ) << " at " << mu.str();
    }
  }
}

TEST_F(Corpus, BetaFormulaMatchesContinuedLift) {
  for (const auto& s : corpus()) {
    const LegendrePair p = legendre_transform(s.f);
    EXPECT_LT(angle_gap(std::arg(p.beta), p.target.dir.angle), 1e-9);
  }
}

}  // namespace
