#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "morgreed/error.hpp"
#include "morgreed/system.hpp"
#include "support/oracle.hpp"

using namespace morgreed;

namespace {

DelaySystem scalar_system(double a) {
  DelaySystem d;
  d.order = 1;
  d.delays = {0.0};
  d.E = {SparseTriplets::identity(1)};
  SparseTriplets am(1, 1);
  am.add(0, 0, a);
  d.A = {am};
  d.B = ComplexMatrix::Ones(1, 1);
  d.C = ComplexMatrix::Ones(1, 1);
  return d;
}

FrequencyPoint at_s(Complex s) { return FrequencyPoint{s.imag() / (2.0 * std::numbers::pi), s}; }

}  // namespace

TEST(FrequencyPoint, LaplaceVariableOnImaginaryAxis) {
  const FrequencyPoint p = FrequencyPoint::from_hz(3.5e9);
  EXPECT_EQ(p.s.real(), 0.0);
  EXPECT_EQ(p.s.imag(), 2.0 * std::numbers::pi * 3.5e9);
}

TEST(MakeGrid, Linear) {
  const auto g = make_grid(1.0, 3.0, 3, Spacing::Linear);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].f, 1.0);
  EXPECT_EQ(g[1].f, 2.0);
  EXPECT_EQ(g[2].f, 3.0);
}

TEST(MakeGrid, Log) {
  const auto g = make_grid(1.0, 100.0, 3, Spacing::Log);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].f, 1.0);
  EXPECT_NEAR(g[1].f, 10.0, 1e-12);
  EXPECT_EQ(g[2].f, 100.0);
}

TEST(MakeGrid, BandEndpointsExact) {
  const auto g = make_grid(1e6, 2e10, 40, Spacing::Linear);
  ASSERT_EQ(g.size(), 40u);
  EXPECT_EQ(g.front().f, 1e6);
  EXPECT_EQ(g.back().f, 2e10);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i].f, g[i - 1].f);
  for (const auto& p : g) EXPECT_EQ(p.s, FrequencyPoint::from_hz(p.f).s);
}

TEST(MakeGrid, InvalidRange) {
  for (auto call : {+[] { make_grid(0.0, 1.0, 3, Spacing::Linear); }, +[] { make_grid(2.0, 1.0, 3, Spacing::Log); },
                    +[] { make_grid(1.0, 2.0, 1, Spacing::Linear); }}) {
    try {
      call();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
    }
  }
}

TEST(Assemble, SingleTermIsSIdentity) {
  DelaySystem d;
  d.order = 3;
  d.delays = {0.0};
  d.E = {SparseTriplets::identity(3)};
  d.A = {SparseTriplets(3, 3)};
  d.B = ComplexMatrix::Ones(3, 1);
  d.C = ComplexMatrix::Ones(1, 3);
  const ParametricSystem sys(d);
  const Complex s(0.0, 2.0 * std::numbers::pi);
  EXPECT_LE((assemble(sys, FrequencyPoint::from_hz(1.0)) - s * ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Assemble, DelayedIdentityAtIPi) {
  DelaySystem d;
  d.order = 2;
  d.delays = {0.0, 1.0};
  d.E = {SparseTriplets(2, 2), SparseTriplets(2, 2)};
  d.A = {SparseTriplets(2, 2), SparseTriplets::identity(2)};
  d.B = ComplexMatrix::Ones(2, 1);
  d.C = ComplexMatrix::Ones(1, 2);
  const ParametricSystem sys(d);
  // s = i pi: -e^{-i pi} I = I
  const ComplexMatrix k = assemble(sys, at_s({0.0, std::numbers::pi}));
  EXPECT_LE((k - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Assemble, ZeroFrequencyIsMinusSumA) {
  std::mt19937_64 rng(11);
  const DelaySystem d = oracle::random_delay_system(rng, 12, 3, 2, 2);
  const ParametricSystem sys(d);
  ComplexMatrix sum = ComplexMatrix::Zero(12, 12);
  for (const auto& a : d.A) sum -= oracle::dense(a);
  EXPECT_EQ(assemble(sys, FrequencyPoint::from_hz(0.0)), sum);
}

TEST(Assemble, MatchesOracle) {
  std::mt19937_64 rng(12);
  const DelaySystem d = oracle::random_delay_system(rng, 20, 4, 2, 3);
  const ParametricSystem sys(d);
  for (double f : {0.01, 0.3, 1.7}) {
    const ComplexMatrix ref = oracle::delay_k(d, oracle::s_of(f));
    EXPECT_LE((assemble(sys, FrequencyPoint::from_hz(f)) - ref).norm(), 1e-13 * ref.norm());
  }
}

TEST(SolveFom, ScalarSystem) {
  // K(s) = s - a with s = 2a (taken off the imaginary axis deliberately)
  const double a = 3.0;
  const ParametricSystem sys(scalar_system(a));
  const ComplexMatrix x = solve_fom(sys, FrequencyPoint{0.0, Complex(2.0 * a, 0.0)});
  EXPECT_NEAR(std::abs(x(0, 0) - 1.0 / a), 0.0, 1e-15);
}

TEST(SolveFom, CountsOneSolvePerCall) {
  std::mt19937_64 rng(13);
  const ParametricSystem sys(oracle::random_delay_system(rng, 15, 2, 4, 1));
  SolveCounter counter;
  solve_fom(sys, FrequencyPoint::from_hz(0.4), &counter);
  EXPECT_EQ(counter.count(), 1u);
  transfer_function(sys, FrequencyPoint::from_hz(0.5), &counter);
  EXPECT_EQ(counter.count(), 2u);
}

TEST(SolveFom, RelativeResidual) {
  std::mt19937_64 rng(14);
  const DelaySystem d = oracle::random_delay_system(rng, 40, 5, 3, 2);
  const ParametricSystem sys(d);
  for (double f : {0.0, 0.2, 0.9, 2.5}) {
    const ComplexMatrix x = solve_fom(sys, FrequencyPoint::from_hz(f));
    const ComplexMatrix k = oracle::delay_k(d, oracle::s_of(f));
    EXPECT_LE((k * x - d.B).norm() / d.B.norm(), 1e-8);
  }
}

TEST(TransferFunction, IdentitySystem) {
  AffineSystem a;
  a.terms.push_back({Coefficient{CoefficientKind::Constant, 0.0, 1.0}, SparseTriplets::identity(3)});
  a.B = ComplexMatrix::Identity(3, 3);
  a.C = ComplexMatrix::Identity(3, 3);
  const ParametricSystem sys(a);
  EXPECT_LE((transfer_function(sys, FrequencyPoint::from_hz(5.0)) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(TransferFunction, ScalarClosedForm) {
  const double a = -2.0;
  const ParametricSystem sys(scalar_system(a));
  for (double f : {0.1, 1.0, 10.0}) {
    const FrequencyPoint p = FrequencyPoint::from_hz(f);
    EXPECT_LE(std::abs(transfer_function(sys, p)(0, 0) - 1.0 / (p.s - a)), 1e-15);
  }
}

TEST(TransferFunction, ConjugateSymmetryForRealMatrices) {
  std::mt19937_64 rng(15);
  const ParametricSystem sys(oracle::random_delay_system(rng, 30, 3, 2, 2));
  for (double f : {0.05, 0.7, 3.0}) {
    const ComplexMatrix h = transfer_function(sys, FrequencyPoint::from_hz(f));
    const ComplexMatrix hc = transfer_function(sys, FrequencyPoint::from_hz(-f));
    EXPECT_LE((hc - h.conjugate()).norm(), 1e-12 * h.norm());
  }
}

TEST(TransferFunction, MatchesOracle) {
  std::mt19937_64 rng(16);
  const DelaySystem d = oracle::random_delay_system(rng, 35, 2, 2, 3);
  const ParametricSystem sys(d);
  const ComplexMatrix h = transfer_function(sys, FrequencyPoint::from_hz(0.8));
  const ComplexMatrix ref = oracle::transfer(d, oracle::s_of(0.8));
  EXPECT_LE((h - ref).norm(), 1e-10 * ref.norm());
}

TEST(ApplyOperator, MatchesAssembledProduct) {
  std::mt19937_64 rng(17);
  const ParametricSystem sys(oracle::random_delay_system(rng, 25, 3, 2, 2));
  const FrequencyPoint p = FrequencyPoint::from_hz(0.6);
  const ComplexMatrix y = ComplexMatrix::Random(25, 3);
  EXPECT_LE((apply_operator(sys, p, y) - assemble(sys, p) * y).norm(), 1e-12 * y.norm());
}

TEST(DelaySystem, RejectsBadDelays) {
  std::mt19937_64 rng(18);
  DelaySystem d = oracle::random_delay_system(rng, 5, 2, 1, 1);
  d.delays[2] = d.delays[1];
  EXPECT_THROW(ParametricSystem{d}, Error);
  d.delays = {0.5, 1.0, 2.0};
  EXPECT_THROW(ParametricSystem{d}, Error);
}

TEST(DelaySystem, RejectsInconsistentDimensions) {
  std::mt19937_64 rng(19);
  DelaySystem d = oracle::random_delay_system(rng, 5, 1, 1, 1);
  d.B = ComplexMatrix::Ones(4, 1);
  try {
    ParametricSystem sys(d);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(AffineSystem, CoefficientTags) {
  const Complex s(0.0, 3.0);
  const double tau = 0.25;
  EXPECT_EQ((Coefficient{CoefficientKind::Constant, 0.0, 2.0}(s)), Complex(2.0, 0.0));
  EXPECT_EQ((Coefficient{CoefficientKind::S, 0.0, 2.0}(s)), 2.0 * s);
  EXPECT_LE(std::abs(Coefficient{CoefficientKind::SExpDelay, tau, 1.0}(s) - s * std::exp(-s * tau)), 1e-15);
  EXPECT_LE(std::abs(Coefficient{CoefficientKind::ExpDelay, tau, -1.0}(s) + std::exp(-s * tau)), 1e-15);
}

TEST(AffineSystem, EquivalentToDelayForm) {
  std::mt19937_64 rng(20);
  const DelaySystem d = oracle::random_delay_system(rng, 18, 2, 2, 2);
  AffineSystem a;
  const auto coefficients = delay_coefficients(d.delays);
  for (std::size_t j = 0; j < d.delays.size(); ++j) a.terms.push_back({coefficients[j], d.E[j]});
  for (std::size_t j = 0; j < d.delays.size(); ++j) a.terms.push_back({coefficients[d.delays.size() + j], d.A[j]});
  a.B = d.B;
  a.C = d.C;
  const ParametricSystem delay(d);
  const ParametricSystem affine(a);
  const FrequencyPoint p = FrequencyPoint::from_hz(0.45);
  EXPECT_EQ(assemble(delay, p), assemble(affine, p));
}
