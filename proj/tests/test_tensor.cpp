#include <gtest/gtest.h>

#include "support/error_code.hpp"
#include "support/oracles.hpp"
#include "tperm/tensor.hpp"

using tperm::Complex;
using tperm::Error;
using tperm::ErrorCode;
using tperm::Tensor;

using oracle::code_of;

TEST(MakeTensor, IdentityMatrix) {
  const Tensor t = tperm::make_tensor(2, 2, {1, 0, 0, 1});
  EXPECT_EQ(t.order(), 2);
  EXPECT_EQ(t.dim(), 2);
  const std::vector<int> i11{1, 1}, i12{1, 2}, i21{2, 1}, i22{2, 2};
  EXPECT_EQ(t.at(i11), Complex(1));
  EXPECT_EQ(t.at(i12), Complex(0));
  EXPECT_EQ(t.at(i21), Complex(0));
  EXPECT_EQ(t.at(i22), Complex(1));
}

TEST(MakeTensor, EightOnesIsOrderThreeOnes) {
  const Tensor t = tperm::make_tensor(3, 2, std::vector<Complex>(8, 1.0));
  EXPECT_EQ(t.size(), 8u);
  for (auto v : t.entries()) EXPECT_EQ(v, Complex(1));
}

TEST(MakeTensor, RejectsLengthMismatch) {
  EXPECT_EQ(code_of([] { tperm::make_tensor(3, 2, std::vector<Complex>(7, 1.0)); }),
            ErrorCode::kLengthMismatch);
}

TEST(MakeTensor, RejectsNonFinite) {
  std::vector<Complex> v(4, 1.0);
  v[2] = Complex{std::nan(""), 0.0};
  EXPECT_EQ(code_of([&] { tperm::make_tensor(2, 2, v); }), ErrorCode::kNonFinite);
  v[2] = Complex{0.0, INFINITY};
  EXPECT_EQ(code_of([&] { tperm::make_tensor(2, 2, v); }), ErrorCode::kNonFinite);
}

TEST(MakeTensor, RejectsBadShape) {
  EXPECT_EQ(code_of([] { tperm::make_tensor(1, 2, {1, 2}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { tperm::make_tensor(2, 0, {}); }), ErrorCode::kInvalidArgument);
}

TEST(StorageCap, RejectsBeforeAllocating) {
  EXPECT_EQ(code_of([] { tperm::all_ones(4, 1000); }), ErrorCode::kStorageCapExceeded);
  EXPECT_EQ(code_of([] { tperm::checked_entry_count(3, 10, 999); }),
            ErrorCode::kStorageCapExceeded);
  EXPECT_EQ(tperm::checked_entry_count(3, 10, 1000), 1000u);
  EXPECT_EQ(code_of([] { tperm::checked_entry_count(64, 1 << 20); }),
            ErrorCode::kStorageCapExceeded);
}

TEST(AllOnes, Shapes) {
  EXPECT_EQ(tperm::all_ones(2, 3).size(), 9u);
  EXPECT_EQ(tperm::all_ones(3, 1).size(), 1u);
  const Tensor j = tperm::all_ones(3, 2);
  EXPECT_EQ(j.size(), 8u);
  for (auto v : j.entries()) EXPECT_EQ(v, Complex(1));
}

TEST(AffineCombine, Examples) {
  const Tensor zero = tperm::affine_combine(0.0, tperm::all_ones(3, 2), 0.0);
  const Tensor j = tperm::affine_combine(1.0, zero, 5.0);
  for (auto v : j.entries()) EXPECT_EQ(v, Complex(1));

  oracle::Gen gen(1);
  const Tensor a = gen.tensor(3, 3);
  const Tensor same = tperm::affine_combine(0.0, a, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(same[i], a[i]);

  const Complex mu{0.7, -1.3};
  const Tensor flat = tperm::affine_combine(mu, zero, 1.0);
  const Tensor back = tperm::affine_combine(-mu, flat, 1.0);
  for (auto v : back.entries()) EXPECT_EQ(v, Complex(0));
}

TEST(AffineCombine, RejectsOverflowToInfinity) {
  const Tensor big = tperm::make_tensor(2, 1, {1e300});
  EXPECT_EQ(code_of([&] { tperm::affine_combine(0.0, big, 1e300); }), ErrorCode::kNonFinite);
}

TEST(AffineCombine, CenterThenRescaleGivesR_over_mu) {
  oracle::Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor r = gen.tensor(3, 3);
    const Complex mu = gen.complex_in_disk(2.0) + Complex{0.1, 0.0};
    const Tensor a = tperm::affine_combine(-mu, r, 1.0);
    const Tensor x = tperm::affine_combine(1.0, a, 1.0 / mu);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_LE(oracle::rel_err(x[i], r[i] / mu), 1e-12);
    }
  }
}

TEST(Subtensor, Examples) {
  oracle::Gen gen(3);
  const Tensor a = gen.tensor(3, 3);
  const Tensor copy = tperm::subtensor(a, tperm::IndexSelection::full(3, 3));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(copy[i], a[i]);

  tperm::IndexSelection one;
  one.modes = {{2}, {1}, {3}};
  const Tensor single = tperm::subtensor(tperm::all_ones(3, 3), one);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], Complex(1));

  const Tensor m = tperm::make_tensor(2, 2, {1, 2, 3, 4});
  tperm::IndexSelection rc;
  rc.modes = {{2}, {1}};
  EXPECT_EQ(tperm::subtensor(m, rc)[0], Complex(3));
}

TEST(Subtensor, Errors) {
  const Tensor a = tperm::all_ones(3, 3);
  tperm::IndexSelection bad;
  bad.modes = {{1, 2}, {1, 2}, {1, 4}};
  EXPECT_EQ(code_of([&] { tperm::subtensor(a, bad); }), ErrorCode::kOutOfRange);
  bad.modes = {{1, 2}, {1}, {1, 2}};
  EXPECT_EQ(code_of([&] { tperm::subtensor(a, bad); }), ErrorCode::kInvalidArgument);
  bad.modes = {{2, 1}, {1, 2}, {1, 2}};
  EXPECT_EQ(code_of([&] { tperm::subtensor(a, bad); }), ErrorCode::kInvalidArgument);
  bad.modes = {{1}, {1}};
  EXPECT_EQ(code_of([&] { tperm::subtensor(a, bad); }), ErrorCode::kInvalidArgument);
}

TEST(Subtensor, NestedSelectionsCompose) {
  oracle::Gen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(3, 5);
    const Tensor a = gen.tensor(d, n);
    const int k1 = gen.integer(2, n);
    const int k2 = gen.integer(1, k1);
    tperm::IndexSelection s1, s2, composed;
    for (int m = 0; m < d; ++m) {
      auto all1 = oracle::subsets(n, k1);
      const auto outer = all1[gen.integer(0, static_cast<int>(all1.size()) - 1)];
      auto all2 = oracle::subsets(k1, k2);
      const auto inner = all2[gen.integer(0, static_cast<int>(all2.size()) - 1)];
      s1.modes.push_back(outer);
      s2.modes.push_back(inner);
      std::vector<int> c;
      for (int i : inner) c.push_back(outer[i - 1]);
      composed.modes.push_back(c);
    }
    const Tensor lhs = tperm::subtensor(tperm::subtensor(a, s1), s2);
    const Tensor rhs = tperm::subtensor(a, composed);
    ASSERT_EQ(lhs.size(), rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_EQ(lhs[i], rhs[i]);
  }
}

TEST(HyperplaneSum, Examples) {
  const Tensor j = tperm::all_ones(3, 4);
  for (int mode = 1; mode <= 3; ++mode) {
    for (int idx = 1; idx <= 4; ++idx) EXPECT_EQ(tperm::hyperplane_sum(j, mode, idx), Complex(16));
  }
  const Tensor zero = tperm::affine_combine(0.0, j, 0.0);
  EXPECT_EQ(tperm::hyperplane_sum(zero, 2, 3), Complex(0));
}

TEST(HyperplaneSum, MatchesNaiveLoop) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(1, 5);
    const Tensor a = gen.tensor(d, n);
    for (int mode = 1; mode <= d; ++mode) {
      for (int idx = 1; idx <= n; ++idx) {
        EXPECT_LE(oracle::rel_err(tperm::hyperplane_sum(a, mode, idx),
                                  oracle::naive_hyperplane(a, mode, idx)),
                  1e-12);
      }
    }
  }
}

TEST(HyperplaneSum, EveryModeTotalsTheSame) {
  oracle::Gen gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 4);
    const int n = gen.integer(1, 6);
    const Tensor a = gen.tensor(d, n);
    Complex reference{0.0, 0.0};
    for (auto v : a.entries()) reference += v;
    for (int mode = 1; mode <= d; ++mode) {
      Complex total{0.0, 0.0};
      for (int idx = 1; idx <= n; ++idx) total += tperm::hyperplane_sum(a, mode, idx);
      EXPECT_LE(std::abs(total - reference), 1e-12 * (1.0 + std::abs(reference)) * a.size());
    }
  }
}

TEST(HyperplaneSum, Errors) {
  const Tensor a = tperm::all_ones(3, 2);
  EXPECT_EQ(code_of([&] { tperm::hyperplane_sum(a, 0, 1); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of([&] { tperm::hyperplane_sum(a, 4, 1); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of([&] { tperm::hyperplane_sum(a, 1, 3); }), ErrorCode::kOutOfRange);
}
