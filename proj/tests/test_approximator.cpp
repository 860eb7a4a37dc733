#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/error_code.hpp"
#include "support/oracles.hpp"
#include "tperm/approximator.hpp"
#include "tperm/sampling.hpp"

using oracle::code_of;
using tperm::Complex;
using tperm::EntryKind;
using tperm::ErrorCode;
using tperm::Tensor;

namespace {

Tensor scale(const Tensor& r, Complex s) {
  return tperm::affine_combine(0.0, r, s);
}

Tensor draw(EntryKind kind, Complex mu, int d, int n, std::uint64_t seed) {
  return tperm::sample_tensor(tperm::make_distribution(kind, mu), d, n, {seed, 0});
}

// |log p - log q| in the complex logarithm, with the angle wrapped.
double log_distance(const tperm::PermanentValue& p, const tperm::PermanentValue& q) {
  const double dlog = p.log_magnitude - q.log_magnitude;
  const double darg = std::remainder(p.argument - q.argument, 2 * std::numbers::pi);
  return std::hypot(dlog, darg);
}

}  // namespace

TEST(TruncationOrder, Examples) {
  EXPECT_EQ(tperm::truncation_order(100, 0.1), 7);
  EXPECT_EQ(tperm::truncation_order(10, 0.99), 3);
  EXPECT_EQ(tperm::truncation_order(3, 0.001), 3);
  EXPECT_EQ(tperm::truncation_order(1, 0.9), 1);
  for (double bad : {0.0, 1.0, -0.5, 2.0, std::nan("")}) {
    EXPECT_EQ(code_of([&] { tperm::truncation_order(10, bad); }), ErrorCode::kInvalidArgument);
  }
}

TEST(TruncationOrder, FormulaAndClamp) {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(2, 100000);
    const double eps = std::exp(gen.real(-12.0, -0.01));
    const double raw = std::ceil(std::log(n) + std::log(1.0 / eps));
    EXPECT_EQ(tperm::truncation_order(n, eps), static_cast<int>(std::min<double>(raw, n)));
  }
}

TEST(Admissibility, Examples) {
  // L = ln 10^6 / 64 = 0.2159 < 1, so L^-c > 1 >= |mu| = 1: inadmissible.
  const auto big = tperm::admissibility_check(1'000'000, 3, 1.0, 0.1);
  EXPECT_NEAR(big.log_ratio, std::log(1e6) / 64.0, 1e-15);
  EXPECT_NEAR(big.mu_bound, std::pow(std::log(1e6) / 64.0, -0.1), 1e-15);
  EXPECT_NEAR(big.z_bound, std::pow(std::log(1e6) / 64.0, 0.1), 1e-15);
  EXPECT_FALSE(big.admissible);

  const auto zero = tperm::admissibility_check(100, 3, 0.0, 0.1);
  EXPECT_FALSE(zero.admissible);
  EXPECT_NE(zero.diagnostic.find("mu = 0"), std::string::npos);

  const auto small = tperm::admissibility_check(8, 3, 0.01, 0.1);
  EXPECT_FALSE(small.admissible);
  EXPECT_NE(small.diagnostic.find("inadmissible"), std::string::npos);

  // d = 2: L = ln n, so for large n the bounds straddle 1.
  const auto matrix = tperm::admissibility_check(1000, 2, 1.0, 0.1);
  EXPECT_TRUE(matrix.admissible);
  EXPECT_LT(matrix.mu_bound, 1.0);
  EXPECT_GT(matrix.z_bound, 1.0);

  const auto one = tperm::admissibility_check(1, 3, 1.0, 0.1);
  EXPECT_FALSE(one.admissible);
  EXPECT_TRUE(std::isnan(one.mu_bound));
}

TEST(AssembleEstimate, DirectAndLogPathsAgree) {
  const auto p = tperm::assemble_estimate(Complex{1.0, 0.2}, 4, 3, 1.0);
  const Complex want = std::pow(Complex{1.0, 0.2}, 4) * 576.0;
  EXPECT_LE(oracle::rel_err(p.value, want), 1e-14);

  const auto huge = tperm::assemble_estimate(2.0, 50, 4, Complex{0.0, 1.0});
  EXPECT_NEAR(huge.log_magnitude, 50 * std::log(2.0) + 3 * std::lgamma(51.0), 1e-9);
  EXPECT_NEAR(huge.argument, std::numbers::pi / 2, 1e-12);
  EXPECT_TRUE(tperm::assemble_estimate(1.0, 3, 3, 0.0).is_zero());
}

TEST(ApproxPermanent, PointMassGivesExactClosedForm) {
  for (Complex mu : {Complex{1.0, 0.0}, Complex{1.0, 0.2}, Complex{-0.7, 1.5}}) {
    const Tensor r = scale(tperm::all_ones(3, 4), mu);
    const auto res = tperm::approx_permanent(r, mu, 0.5);
    EXPECT_EQ(res.normalized_series, Complex(1));
    EXPECT_EQ(res.value.value, tperm::assemble_estimate(mu, 4, 3, 1.0).value);
    EXPECT_EQ(res.method, tperm::ApproxMethod::kTruncatedSeries);
    EXPECT_LE(oracle::rel_err(res.value.value, tperm::permanent_exact(r).value), 1e-13);
  }
}

TEST(ApproxPermanent, FullTruncationReproducesExactPermanent) {
  const Complex mu{1.0, 0.2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Tensor r = draw(EntryKind::kComplexGaussian, mu, 3, 4, seed);
    tperm::ApproxOptions opts;
    opts.t = 4;
    const auto res = tperm::approx_permanent(r, mu, 0.5, opts);
    EXPECT_EQ(res.params.t, 4);
    EXPECT_LE(oracle::rel_err(res.value.value, tperm::permanent_exact(r).value), 1e-9);
  }
}

TEST(ApproxPermanent, Params) {
  const Complex mu{0.6, -0.8};
  const Tensor r = draw(EntryKind::kRealGaussian, mu, 3, 5, 1);
  const auto res = tperm::approx_permanent(r, mu, 0.5);
  EXPECT_EQ(res.params.t, tperm::truncation_order(5, 0.5));
  EXPECT_EQ(res.params.epsilon, 0.5);
  EXPECT_EQ(res.params.mu, mu);
  EXPECT_LE(std::abs(res.params.z * mu - 1.0), 1e-15);
  const auto mag = res.value.value / tperm::assemble_estimate(mu, 5, 3, 1.0).value;
  EXPECT_LE(oracle::rel_err(mag, res.normalized_series), 1e-12);
}

TEST(ApproxPermanent, ScalingConsistency) {
  oracle::Gen gen(42);
  for (Complex s : {Complex{2.0, 0.0}, Complex{0.0, 1.0}, Complex{0.5, 0.0}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Complex mu = Complex{1.0, 0.0} + gen.complex_in_disk(0.5);
      const Tensor r = draw(EntryKind::kComplexGaussian, mu, 3, 5, 100 + trial);
      const auto base = tperm::approx_permanent(r, mu, 0.3);
      const auto scaled = tperm::approx_permanent(scale(r, s), s * mu, 0.3);
      auto expected = base.value;
      expected.log_magnitude += 5 * std::log(std::abs(s));
      expected.argument += 5 * std::arg(s);
      EXPECT_LE(log_distance(scaled.value, expected), 1e-10) << "s=" << s;
    }
  }
}

TEST(ApproxPermanent, Errors) {
  const Tensor r = tperm::all_ones(3, 4);
  EXPECT_EQ(code_of([&] { tperm::approx_permanent(r, 0.0, 0.5); }), ErrorCode::kZeroMean);
  EXPECT_EQ(code_of([&] { tperm::ptas_estimate(r, 0.0, 0.0); }), ErrorCode::kZeroMean);
  EXPECT_EQ(code_of([&] { tperm::approx_permanent(r, 1.0, 1.5); }), ErrorCode::kInvalidArgument);
  tperm::ApproxOptions opts;
  opts.t = 5;
  EXPECT_EQ(code_of([&] { tperm::approx_permanent(r, 1.0, 0.5, opts); }), ErrorCode::kOutOfRange);
  opts.t = 4;
  opts.series.budget = 10;
  EXPECT_EQ(code_of([&] { tperm::approx_permanent(r, 1.0, 0.5, opts); }),
            ErrorCode::kBudgetExceeded);
}

TEST(PtasEstimate, Examples) {
  const Complex mu{0.9, 0.3};
  const Tensor r = scale(tperm::all_ones(3, 5), mu);
  const auto flat = tperm::ptas_estimate(r, mu, 0.0);
  EXPECT_EQ(flat.normalized_series, Complex(1));
  EXPECT_EQ(flat.value.value, tperm::assemble_estimate(mu, 5, 3, 1.0).value);
  EXPECT_EQ(flat.method, tperm::ApproxMethod::kPtasClosedForm);
  EXPECT_TRUE(std::isnan(flat.params.epsilon));

  const Tensor g = draw(EntryKind::kComplexGaussian, mu, 3, 5, 9);
  Complex v1{0.0, 0.0};
  for (auto x : g.entries()) v1 += x - mu;
  v1 /= 25.0;
  const auto res = tperm::ptas_estimate(g, mu, 0.0);
  EXPECT_LE(oracle::rel_err(res.normalized_series, std::exp(v1 / mu)), 1e-12);
  const auto with_xi = tperm::ptas_estimate(g, mu, 1.0);
  EXPECT_LE(oracle::rel_err(with_xi.normalized_series,
                            std::exp(v1 / mu - 0.5 / (mu * mu))),
            1e-12);
}

TEST(PtasDispatch, Branches) {
  EXPECT_FALSE(tperm::ptas_branch(100, 0.5, 0.1));
  EXPECT_TRUE(tperm::ptas_branch(100, 0.7, 0.1));

  const Tensor r = draw(EntryKind::kComplexGaussian, 1.0, 3, 5, 3);
  const auto series = tperm::ptas_dispatch(r, 1.0, 0.0, 0.5, 0.1);
  EXPECT_EQ(series.method, tperm::ApproxMethod::kTruncatedSeries);
  const auto closed = tperm::ptas_dispatch(r, 1.0, 0.0, 0.9, 0.1);
  EXPECT_EQ(closed.method, tperm::ApproxMethod::kPtasClosedForm);
  EXPECT_EQ(closed.params.epsilon, 0.9);
  EXPECT_EQ(closed.value.value, tperm::ptas_estimate(r, 1.0, 0.0).value.value);

  const auto again = tperm::ptas_dispatch(r, 1.0, 0.0, 0.5, 0.1);
  EXPECT_EQ(again.value.value, series.value.value);

  for (double rho : {0.0, 0.125, -0.1, 0.5}) {
    EXPECT_EQ(code_of([&] { tperm::ptas_dispatch(r, 1.0, 0.0, 0.5, rho); }),
              ErrorCode::kInvalidArgument);
  }
}

TEST(ApproxMethodName, Tags) {
  EXPECT_EQ(tperm::approx_method_name(tperm::ApproxMethod::kTruncatedSeries), "TRUNCATED_SERIES");
  EXPECT_EQ(tperm::approx_method_name(tperm::ApproxMethod::kPtasClosedForm), "PTAS_CLOSED_FORM");
}
