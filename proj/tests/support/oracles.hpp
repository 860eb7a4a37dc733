#pragma once

// Independent reference implementations and random generators for tests.
// Nothing here calls the library's expansion kernel, coefficient sums or
// Newton recursion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "tperm/tensor.hpp"

namespace oracle {

using tperm::Complex;
using tperm::Tensor;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  Complex complex_normal() { return Complex{normal(), normal()} / std::sqrt(2.0); }
  Complex complex_in_disk(double radius) {
    for (;;) {
      const Complex z{real(-radius, radius), real(-radius, radius)};
      if (std::abs(z) <= radius) return z;
    }
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Tensor tensor(int d, int n) {
    std::vector<Complex> v(static_cast<std::size_t>(std::pow(n, d)));
    for (auto& x : v) x = complex_normal();
    return tperm::make_tensor(d, n, std::move(v));
  }

  std::vector<Complex> complex_list(int len) {
    std::vector<Complex> v(len);
    for (auto& x : v) x = complex_normal();
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(Complex a, Complex b) {
  const double scale = std::max(std::abs(b), 1e-300);
  return std::abs(a - b) / scale;
}

// Sum over (sigma_2..sigma_d) of prod_i A[i, sigma_2(i), ..., sigma_d(i)],
// enumerating each permutation with std::next_permutation.
inline Complex naive_permanent(const Tensor& a) {
  const int d = a.order();
  const int n = a.dim();
  std::vector<std::vector<int>> perms(d - 1, std::vector<int>(n));
  for (auto& p : perms) std::iota(p.begin(), p.end(), 0);
  Complex total{0.0, 0.0};
  std::vector<int> idx(d);
  for (;;) {
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      idx[0] = i + 1;
      for (int m = 1; m < d; ++m) idx[m] = perms[m - 1][i] + 1;
      prod *= a.at(idx);
    }
    total += prod;
    int m = d - 2;
    while (m >= 0 && !std::next_permutation(perms[m].begin(), perms[m].end())) --m;
    if (m < 0) break;
  }
  return total;
}

// All k-subsets of {1..n}, each sorted.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (pick[i]) s.push_back(i + 1);
    }
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// Sum of naive_permanent over every k x ... x k subtensor, divided by
// (n(n-1)...(n-k+1))^(d-1).
inline Complex naive_coefficient(const Tensor& a, int k) {
  if (k == 0) return Complex{1.0, 0.0};
  const int d = a.order();
  const int n = a.dim();
  const auto sets = subsets(n, k);
  Complex total{0.0, 0.0};
  std::vector<std::size_t> choice(d, 0);
  for (;;) {
    tperm::IndexSelection sel;
    for (int m = 0; m < d; ++m) sel.modes.push_back(sets[choice[m]]);
    total += naive_permanent(tperm::subtensor(a, sel));
    int m = d - 1;
    while (m >= 0 && ++choice[m] == sets.size()) choice[m--] = 0;
    if (m < 0) break;
  }
  double falling = 1.0;
  for (int i = 0; i < k; ++i) falling *= n - i;
  return total / std::pow(falling, d - 1);
}

// e_k by summing products over all k-subsets.
inline Complex brute_elementary(const std::vector<Complex>& xs, int k) {
  if (k == 0) return Complex{1.0, 0.0};
  Complex total{0.0, 0.0};
  for (const auto& s : subsets(static_cast<int>(xs.size()), k)) {
    Complex p{1.0, 0.0};
    for (int i : s) p *= xs[i - 1];
    total += p;
  }
  return total;
}

// Hyperplane sum by decoding every storage offset into its index tuple.
inline Complex naive_hyperplane(const Tensor& a, int mode, int index) {
  const int d = a.order();
  const int n = a.dim();
  Complex total{0.0, 0.0};
  for (std::size_t off = 0; off < a.size(); ++off) {
    std::size_t rest = off;
    int digit = 0;
    for (int m = d; m >= 1; --m) {
      const int v = static_cast<int>(rest % n) + 1;
      rest /= n;
      if (m == mode) digit = v;
    }
    if (digit == index) total += a[off];
  }
  return total;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace oracle
