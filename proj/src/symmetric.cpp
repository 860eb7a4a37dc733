#include "tperm/symmetric.hpp"

#include <cmath>
#include <string>

namespace tperm {

namespace {

void check_kmax(int kmax, std::size_t limit, const char* what) {
  if (kmax < 0 || static_cast<std::size_t>(kmax) > limit) {
    throw Error(ErrorCode::kOutOfRange, std::string(what) + ": kmax=" +
                                            std::to_string(kmax) + " outside 0.." +
                                            std::to_string(limit));
  }
}

// C_j / n^{(d-1)/2}; the k-th power sum / elementary polynomial of these is
// D_k / V_k directly.
std::vector<Complex> normalized_scores(const HyperplaneScores& s) {
  const double norm = std::pow(static_cast<double>(s.dim), 0.5 * (s.order - 1));
  std::vector<Complex> out(s.scores.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = s.scores[j] / norm;
  return out;
}

}  // namespace

HyperplaneScores scores_from_sums(std::vector<Complex> sums, int order, int dim) {
  const double norm = std::sqrt(std::pow(static_cast<double>(dim), order - 1));
  for (auto& c : sums) c /= norm;
  return HyperplaneScores{std::move(sums), order, dim};
}

HyperplaneScores hyperplane_scores(const Tensor& a) {
  const int n = a.dim();
  const std::size_t inner = a.stride(2);
  const std::size_t block = inner * static_cast<std::size_t>(n);
  std::vector<Complex> sums(n, Complex{0.0, 0.0});
  const auto entries = a.entries();
  // Storage order, so each C_j sees its entries in the same order as
  // hyperplane_sum(a, 2, j).
  for (std::size_t start = 0; start < entries.size(); start += block) {
    for (int j = 0; j < n; ++j) {
      const std::size_t base = start + static_cast<std::size_t>(j) * inner;
      Complex acc = sums[j];
      for (std::size_t i = 0; i < inner; ++i) acc += entries[base + i];
      sums[j] = acc;
    }
  }
  return scores_from_sums(std::move(sums), a.order(), n);
}

std::vector<Complex> power_sums(std::span<const Complex> xs, int kmax) {
  if (kmax < 0) {
    throw Error(ErrorCode::kOutOfRange, "power_sums: kmax must be >= 0");
  }
  std::vector<Complex> s(kmax + 1, Complex{0.0, 0.0});
  s[0] = Complex{static_cast<double>(xs.size()), 0.0};
  for (const Complex& x : xs) {
    Complex p = x;
    for (int k = 1; k <= kmax; ++k) {
      s[k] += p;
      p *= x;
    }
  }
  return s;
}

std::vector<Complex> elementary_symmetric(std::span<const Complex> xs, int kmax) {
  check_kmax(kmax, xs.size(), "elementary_symmetric");
  const std::vector<Complex> s = power_sums(xs, kmax);
  std::vector<Complex> e(kmax + 1, Complex{0.0, 0.0});
  e[0] = Complex{1.0, 0.0};
  for (int m = 1; m <= kmax; ++m) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
      const Complex term = e[m - k - 1] * s[k + 1];
      if (k % 2 == 0) acc += term;
      else acc -= term;
    }
    e[m] = acc / static_cast<double>(m);
  }
  return e;
}

CoefficientSeries V_coeffs(const HyperplaneScores& scores, int kmax) {
  check_kmax(kmax, scores.scores.size(), "V_coeffs");
  const std::vector<Complex> c = normalized_scores(scores);
  CoefficientSeries out;
  out.kind = SeriesKind::kV;
  out.t = kmax;
  out.order = scores.order;
  out.dim = scores.dim;
  out.coefficients = elementary_symmetric(c, kmax);
  return out;
}

CoefficientSeries V_coeffs(const Tensor& a, int kmax) {
  check_kmax(kmax, static_cast<std::size_t>(a.dim()), "V_coeffs");
  return V_coeffs(hyperplane_scores(a), kmax);
}

std::vector<Complex> D_moments(const HyperplaneScores& scores, int kmax) {
  if (kmax < 1) {
    throw Error(ErrorCode::kOutOfRange, "D_moments: kmax must be >= 1");
  }
  return power_sums(normalized_scores(scores), kmax);
}

std::vector<Complex> D_moments(const Tensor& a, int kmax) {
  return D_moments(hyperplane_scores(a), kmax);
}

Complex hermite_h(int k, Complex x) {
  if (k < 0) throw Error(ErrorCode::kOutOfRange, "hermite_h: k must be >= 0");
  Complex prev{1.0, 0.0};
  if (k == 0) return prev;
  Complex cur = x;
  for (int m = 2; m <= k; ++m) {
    const Complex next = (x * cur - prev) / static_cast<double>(m);
    prev = cur;
    cur = next;
  }
  return cur;
}

CoefficientSeries vprime_recursion(Complex v1, Complex xi, int kmax) {
  if (kmax < 0) throw Error(ErrorCode::kOutOfRange, "vprime_recursion: kmax must be >= 0");
  CoefficientSeries out;
  out.kind = SeriesKind::kVPrime;
  out.t = kmax;
  out.coefficients.resize(kmax + 1);
  out.coefficients[0] = Complex{1.0, 0.0};
  if (kmax >= 1) out.coefficients[1] = v1;
  for (int k = 2; k <= kmax; ++k) {
    out.coefficients[k] =
        (out.coefficients[k - 1] * v1 - out.coefficients[k - 2] * xi) /
        static_cast<double>(k);
  }
  return out;
}

Complex vprime_closed(Complex v1, Complex xi, int k) {
  if (k < 0) throw Error(ErrorCode::kOutOfRange, "vprime_closed: k must be >= 0");
  if (xi == Complex{0.0, 0.0}) {
    Complex acc{1.0, 0.0};
    for (int i = 1; i <= k; ++i) acc *= v1 / static_cast<double>(i);
    return acc;
  }
  const Complex root = std::sqrt(xi);
  Complex power{1.0, 0.0};
  for (int i = 0; i < k; ++i) power *= root;
  return power * hermite_h(k, v1 / root);
}

Complex gaussian_gf(const GaussianParams& p) {
  return std::exp(p.v1 * p.z - 0.5 * p.xi * p.z * p.z);
}

}  // namespace tperm
