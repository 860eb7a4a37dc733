#include "tperm/combinatorics.hpp"

#include <algorithm>
#include <cmath>

namespace tperm {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_falling_factorial(int n, int k) {
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += std::log(static_cast<double>(n - i));
  return acc;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

double coefficient_work(int order, int dim, int k) {
  const double c = binomial(dim, k);
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  return std::pow(c, order) * std::pow(kfact, order - 1);
}

std::vector<int> lexicographic_combinations(int n, int k) {
  std::vector<int> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.insert(out.end(), cur.begin(), cur.end());
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace tperm
