#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "tperm/permanent.hpp"

using tperm::Complex;
using tperm::Tensor;

namespace {

Tensor permute_mode(const Tensor& a, int mode, const std::vector<int>& perm) {
  // Entry (.., i_mode, ..) of the result is entry (.., perm[i_mode], ..) of a.
  const int d = a.order();
  const int n = a.dim();
  std::vector<Complex> out(a.size());
  std::vector<int> idx(d, 1);
  for (std::size_t off = 0; off < a.size(); ++off) {
    std::vector<int> src = idx;
    src[mode - 1] = perm[idx[mode - 1] - 1];
    out[off] = a.at(src);
    for (int m = d - 1; m >= 0; --m) {
      if (++idx[m] <= n) break;
      idx[m] = 1;
    }
  }
  return tperm::make_tensor(d, n, std::move(out));
}

}  // namespace

TEST(PermanentExact, IdentityAndSmallCases) {
  EXPECT_EQ(tperm::permanent_exact(tperm::make_tensor(2, 2, {1, 0, 0, 1})).value, Complex(1));
  EXPECT_EQ(tperm::permanent_exact(tperm::make_tensor(2, 2, {1, 2, 3, 4})).value, Complex(10));
  EXPECT_EQ(tperm::permanent_exact(tperm::make_tensor(3, 1, {Complex{2, -1}})).value,
            Complex(2, -1));
  EXPECT_EQ(tperm::permanent_exact(tperm::all_ones(3, 2)).value, Complex(4));
}

TEST(PermanentExact, OnesClosedFormIsExact) {
  for (int d = 2; d <= 4; ++d) {
    for (int n = 1; n <= 5; ++n) {
      const double expected = std::pow(oracle::factorial(n), d - 1);
      const auto p = tperm::permanent_exact(tperm::all_ones(d, n), {1e12, 1});
      EXPECT_EQ(p.value, Complex(expected)) << "d=" << d << " n=" << n;
    }
  }
}

TEST(PermanentExact, MatchesNaiveEnumeration) {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(1, d == 4 ? 4 : 5);
    const Tensor a = gen.tensor(d, n);
    EXPECT_LE(oracle::rel_err(tperm::permanent_exact(a).value, oracle::naive_permanent(a)), 1e-12)
        << "d=" << d << " n=" << n;
  }
}

TEST(PermanentExact, AgreesWithRyser) {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 8);
    const Tensor m = gen.tensor(2, n);
    EXPECT_LE(oracle::rel_err(tperm::permanent_exact(m).value,
                              tperm::permanent_matrix_ryser(m).value),
              1e-11);
  }
}

TEST(PermanentExact, InvariantUnderIndexPermutationOfAnyMode) {
  oracle::Gen gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(2, 4);
    const Tensor a = gen.tensor(d, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    const int mode = gen.integer(1, d);
    EXPECT_LE(oracle::rel_err(tperm::permanent_exact(permute_mode(a, mode, perm)).value,
                              tperm::permanent_exact(a).value),
              1e-12);
  }
}

TEST(PermanentExact, MultilinearInEachFirstModeSlice) {
  oracle::Gen gen(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(2, 4);
    const Tensor x = gen.tensor(d, n);
    const Tensor y = gen.tensor(d, n);
    const int row = gen.integer(0, n - 1);
    const Complex alpha = gen.complex_normal();
    const Complex beta = gen.complex_normal();
    // Three tensors equal to x outside slice `row`; inside it they hold the
    // slice of x, of y, and alpha*x + beta*y.
    const std::size_t slice = x.stride(1);
    std::vector<Complex> vx(x.entries().begin(), x.entries().end());
    std::vector<Complex> vy = vx, vm = vx;
    for (std::size_t i = 0; i < slice; ++i) {
      const std::size_t off = row * slice + i;
      vy[off] = y[off];
      vm[off] = alpha * x[off] + beta * y[off];
    }
    const Complex px = tperm::permanent_exact(tperm::make_tensor(d, n, vx)).value;
    const Complex py = tperm::permanent_exact(tperm::make_tensor(d, n, vy)).value;
    const Complex pm = tperm::permanent_exact(tperm::make_tensor(d, n, vm)).value;
    EXPECT_LE(std::abs(pm - (alpha * px + beta * py)),
              1e-11 * (std::abs(alpha * px) + std::abs(beta * py) + 1.0));
  }
}

TEST(PermanentExact, ThreadCountDoesNotChangeBits) {
  oracle::Gen gen(15);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(3, d == 2 ? 8 : 5);
    const Tensor a = gen.tensor(d, n);
    const Complex one = tperm::permanent_exact(a, {1e12, 1}).value;
    for (unsigned threads : {2u, 3u, 4u, 0u}) {
      const Complex many = tperm::permanent_exact(a, {1e12, threads}).value;
      EXPECT_EQ(one.real(), many.real());
      EXPECT_EQ(one.imag(), many.imag());
    }
  }
}

TEST(PermanentExact, BudgetAndSizeErrors) {
  try {
    tperm::permanent_exact(tperm::all_ones(3, 7), {1e6, 1});
    FAIL();
  } catch (const tperm::Error& e) {
    EXPECT_EQ(e.code(), tperm::ErrorCode::kBudgetExceeded);
  }
  try {
    tperm::permanent_exact(tperm::all_ones(2, 64), {1e300, 1});
    FAIL();
  } catch (const tperm::Error& e) {
    EXPECT_EQ(e.code(), tperm::ErrorCode::kInvalidArgument);
  }
}

TEST(PermanentValue, LogFormIsConsistent) {
  oracle::Gen gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = tperm::permanent_exact(gen.tensor(3, 4));
    const Complex rebuilt = std::polar(std::exp(p.log_magnitude), p.argument);
    EXPECT_LE(oracle::rel_err(rebuilt, p.value), 1e-10);
    EXPECT_LE(std::abs(p.argument), std::numbers::pi);
  }
  const auto zero = tperm::PermanentValue::from_complex(0.0);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_TRUE(std::isinf(zero.log_magnitude) && zero.log_magnitude < 0);
  EXPECT_EQ(zero.argument, 0.0);
}

TEST(PermanentScaled, ExamplesAndOverflow) {
  const auto p = tperm::permanent_scaled(tperm::all_ones(3, 2), 2.0);
  EXPECT_LE(oracle::rel_err(p.value, 16.0), 1e-14);

  const auto z = tperm::permanent_scaled(tperm::all_ones(3, 2), 0.0);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.value, Complex(0));

  // 10^400 * per(J_{2,4}) = 10^400 * 24 (d=3): only the log form survives.
  const auto big = tperm::permanent_scaled(tperm::all_ones(3, 4), 1e100);
  EXPECT_NEAR(big.log_magnitude, 400 * std::log(10.0) + std::log(576.0), 1e-9);
  EXPECT_FALSE(std::isfinite(std::abs(big.value)));

  const auto rot = tperm::permanent_scaled(tperm::all_ones(2, 3), Complex{0.0, 1.0});
  EXPECT_LE(oracle::rel_err(rot.value, Complex{0.0, -6.0}), 1e-14);
}

TEST(Ryser, RequiresMatrix) {
  EXPECT_THROW(tperm::permanent_matrix_ryser(tperm::all_ones(3, 2)), tperm::Error);
  EXPECT_EQ(tperm::permanent_matrix_ryser(tperm::all_ones(2, 5)).value, Complex(120));
}
