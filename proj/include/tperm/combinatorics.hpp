#pragma once

#include <cstdint>
#include <vector>

namespace tperm {

/// ln n! via lgamma.
double log_factorial(int n);

/// ln of the falling factorial n(n-1)...(n-k+1); 0 for k = 0.
double log_falling_factorial(int n, int k);

/// C(n, k) as a double (exact while it fits in 53 bits).
double binomial(int n, int k);

/// C(n, k)^d * (k!)^(d-1): products needed for one coefficient a_k.
double coefficient_work(int order, int dim, int k);

/// All k-combinations of {0..n-1} in lexicographic order, flattened: row r
/// occupies [r*k, (r+1)*k).
std::vector<int> lexicographic_combinations(int n, int k);

}  // namespace tperm
