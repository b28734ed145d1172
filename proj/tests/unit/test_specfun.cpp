#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "potts/mc/rng.hpp"
#include "potts/specfun.hpp"

namespace {

using potts::QuadratureSpec;
using potts::SignedLog;
using potts::UpsilonParams;

constexpr double kBetaMax = 1.224744871391589;  // sqrt(3/2)

TEST(SignedLog, ArithmeticAndZero) {
  const auto a = SignedLog::from_value(-2.0);
  const auto b = SignedLog::from_value(8.0);
  EXPECT_DOUBLE_EQ((a * b).value(), -16.0);
  EXPECT_DOUBLE_EQ((b / a).value(), -4.0);
  EXPECT_TRUE((a * SignedLog::zero()).is_zero());
  EXPECT_EQ(SignedLog::zero().value(), 0.0);
  EXPECT_THROW(a / SignedLog::zero(), potts::DomainError);
}

TEST(GammaRatio, MatchesTgammaQuotient) {
  potts::mc::Xoshiro256 rng(11);
  for (int i = 0; i < 200; ++i) {
    double x = -4.5 + 9.0 * rng.uniform();
    if (std::abs(x - std::round(x)) < 0.05) continue;
    const double want = oracle::gamma_ratio(x);
    EXPECT_NEAR(potts::gamma_ratio(x), want, 1e-12 * std::abs(want)) << "x = " << x;
  }
}

TEST(GammaRatio, ZerosAndPoles) {
  EXPECT_EQ(potts::gamma_ratio(1.0), 0.0);
  EXPECT_EQ(potts::gamma_ratio(3.0), 0.0);
  EXPECT_THROW(potts::gamma_ratio(0.0), potts::DomainError);
  EXPECT_THROW(potts::gamma_ratio(-2.0), potts::DomainError);
  EXPECT_NEAR(potts::gamma_ratio(0.5), 1.0, 1e-15);
}

// 30-digit values of the defining integral.
struct Frozen {
  double beta, z, ln_upsilon;
};
constexpr Frozen kFrozen[] = {
    {1.1, 0.3, -0.99092192427841242248},
    {1.1, 1.0, -0.000032424973438994465587},
    {1.154700538379251529, 0.77, -0.092102990408575798884},
    {1.0954451150103322269, 1.5, -0.42800085904371084091},
    {1.2247, 0.05, -3.0020349933840393109},
    {1.05, 1.9, -2.1797845235617094951},
};

TEST(Upsilon, FrozenHighPrecisionValues) {
  for (const auto& f : kFrozen) {
    const UpsilonParams p(f.beta);
    EXPECT_NEAR(potts::log_upsilon(f.z, p).log_abs, f.ln_upsilon, 1e-11) << "beta " << f.beta << " z " << f.z;
  }
}

TEST(Upsilon, StripAgreesWithTrapezoidOracle) {
  potts::mc::Xoshiro256 rng(12);
  for (int i = 0; i < 40; ++i) {
    const double beta = 1.0 + (kBetaMax - 1.0) * rng.uniform();
    const UpsilonParams p(beta);
    const double z = p.Q() * (0.02 + 0.96 * rng.uniform());
    EXPECT_NEAR(potts::ln_upsilon_strip(z, p), oracle::ln_upsilon(z, beta), 1e-10) << "beta " << beta << " z " << z;
  }
}

TEST(Upsilon, CentreIsOne) {
  for (double beta : {0.7, 1.0, 1.2, 2.0}) {
    const UpsilonParams p(beta);
    EXPECT_EQ(potts::upsilon(p.Q() / 2, p), 1.0);
  }
}

TEST(Upsilon, ReflectionAndDuality) {
  potts::mc::Xoshiro256 rng(13);
  for (int i = 0; i < 200; ++i) {
    const UpsilonParams p(1.0 + (kBetaMax - 1.0) * rng.uniform());
    const double z = p.Q() * rng.uniform();
    const double u = potts::upsilon(z, p);
    EXPECT_NEAR(potts::upsilon(p.Q() - z, p), u, 1e-11 * u);
    EXPECT_NEAR(potts::upsilon(z, p.dual()), u, 1e-11 * u);
  }
}

TEST(Upsilon, ShiftRelationsInsideTheStrip) {
  potts::mc::Xoshiro256 rng(14);
  for (int i = 0; i < 100; ++i) {
    const UpsilonParams p(1.0 + (kBetaMax - 1.0) * rng.uniform());
    const double b = p.beta();
    const double z = (0.03 + 0.94 * rng.uniform()) / b;
    const double lhs = std::exp(oracle::ln_upsilon(z + b, b));
    const double rhs = oracle::gamma_ratio(b * z) * std::pow(b, 1.0 - 2.0 * b * z) * std::exp(oracle::ln_upsilon(z, b));
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::abs(rhs));
    EXPECT_NEAR(potts::upsilon(z + b, p), lhs, 1e-9 * std::abs(lhs));
  }
}

TEST(Upsilon, NearTheStripEdges) {
  const UpsilonParams p(1.15);
  for (double z : {1e-8, 1e-4, 3e-3}) {
    // Upsilon'(0) > 0, so Upsilon(z) ~ Upsilon'(0) z.
    const double u0 = potts::upsilon(z, p);
    EXPECT_GT(u0, 0.0);
    // Q - z is rounded; compare against the distance it actually represents.
    const double zr = p.Q() - z;
    const double d = p.Q() - zr;
    EXPECT_NEAR(potts::upsilon(zr, p), potts::upsilon(d, p), 1e-11 * u0);
    EXPECT_NEAR(d, z, 4e-16);
    const double ratio = potts::upsilon(2.0 * z, p) / u0;
    EXPECT_NEAR(ratio, 2.0, 0.02);
  }
}

TEST(Upsilon, ContinuationSignsAndZeros) {
  const UpsilonParams p(1.1);
  const double b = p.beta();
  EXPECT_TRUE(potts::log_upsilon(0.0, p).is_zero());
  EXPECT_TRUE(potts::log_upsilon(p.Q(), p).is_zero());
  EXPECT_TRUE(potts::log_upsilon(-b, p).is_zero());
  EXPECT_EQ(potts::log_upsilon(-0.01, p).sign, -1);
  EXPECT_EQ(potts::log_upsilon(p.Q() + 0.01, p).sign, -1);
  EXPECT_LT(std::abs(potts::upsilon(p.Q() + 1.0 / b, p)), 1e-12);
}

TEST(Upsilon, ContinuationAgreesAcrossDualShifts) {
  potts::mc::Xoshiro256 rng(15);
  for (int i = 0; i < 60; ++i) {
    const UpsilonParams p(1.0 + (kBetaMax - 1.0) * rng.uniform());
    const double z = -2.0 + (p.Q() + 4.0) * rng.uniform();
    const auto a = potts::log_upsilon(z, p);
    const auto d = potts::log_upsilon(z, p.dual());
    ASSERT_EQ(a.sign, d.sign) << "z = " << z;
    EXPECT_NEAR(a.log_abs, d.log_abs, 1e-10) << "z = " << z;
  }
}

TEST(Upsilon, RefinementIsSelfConsistent) {
  potts::mc::Xoshiro256 rng(16);
  QuadratureSpec coarse;
  QuadratureSpec fine;
  fine.rel_tol = coarse.rel_tol / 2;
  for (int i = 0; i < 30; ++i) {
    const UpsilonParams p(1.0 + (kBetaMax - 1.0) * rng.uniform());
    const double z = p.Q() * (0.02 + 0.96 * rng.uniform());
    const double c = potts::ln_upsilon_strip(z, p, coarse);
    EXPECT_NEAR(potts::ln_upsilon_strip(z, p, fine), c, coarse.rel_tol * std::abs(c) + coarse.abs_tol);
  }
}

TEST(Upsilon, Errors) {
  EXPECT_THROW(UpsilonParams(0.0), potts::DomainError);
  EXPECT_THROW(UpsilonParams(-1.0), potts::DomainError);
  const UpsilonParams p(1.1);
  EXPECT_THROW(potts::ln_upsilon_strip(0.0, p), potts::DomainError);
  EXPECT_THROW(potts::ln_upsilon_strip(p.Q() + 0.1, p), potts::DomainError);
  EXPECT_THROW(potts::upsilon(std::nan(""), p), potts::DomainError);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(potts::ln_upsilon_strip(1.0, p, bad), potts::DomainError);
  QuadratureSpec short_range;
  short_range.t_max = 5.0;
  EXPECT_THROW(potts::ln_upsilon_strip(0.01, p, short_range), potts::ConvergenceError);
  QuadratureSpec tiny_budget;
  tiny_budget.max_subdivisions = 4;
  tiny_budget.rel_tol = 1e-15;
  tiny_budget.abs_tol = 1e-18;
  EXPECT_THROW(potts::ln_upsilon_strip(0.05, p, tiny_budget), potts::ConvergenceError);
}

}  // namespace
