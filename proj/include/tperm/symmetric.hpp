#pragma once

#include <span>
#include <vector>

#include "tperm/coeff_series.hpp"
#include "tperm/tensor.hpp"

namespace tperm {

/// C_j = (sum of the type-2 hyperplane at j) / sqrt(n^(d-1)), j = 1..n.
struct HyperplaneScores {
  std::vector<Complex> scores;
  int order = 0;
  int dim = 0;
};

struct GaussianParams {
  Complex v1{0.0, 0.0};
  Complex xi{0.0, 0.0};
  Complex z{0.0, 0.0};
};

HyperplaneScores hyperplane_scores(const Tensor& a);

/// Builds scores from raw type-2 hyperplane sums (already accumulated).
HyperplaneScores scores_from_sums(std::vector<Complex> sums, int order, int dim);

/// S_k = sum_i x_i^k for k = 0..kmax (S_0 = length).
std::vector<Complex> power_sums(std::span<const Complex> xs, int kmax);

/// e_0..e_kmax from power sums via Newton's identity
/// e_m = (1/m) sum_{k=0}^{m-1} (-1)^k e_{m-k-1} S_{k+1}.
std::vector<Complex> elementary_symmetric(std::span<const Complex> xs, int kmax);

/// V_k = e_k(C_1..C_n) / n^{k(d-1)/2}, k = 0..kmax.
CoefficientSeries V_coeffs(const Tensor& a, int kmax);
CoefficientSeries V_coeffs(const HyperplaneScores& scores, int kmax);

/// D_k = S_k(C_1..C_n) / n^{k(d-1)/2} at index k, k = 0..kmax (D_0 = n).
std::vector<Complex> D_moments(const Tensor& a, int kmax);
std::vector<Complex> D_moments(const HyperplaneScores& scores, int kmax);

/// h_k = He_k / k!, via h_k = (x h_{k-1} - h_{k-2}) / k.
Complex hermite_h(int k, Complex x);

/// V'_0 = 1, V'_1 = V1, V'_k = (V'_{k-1} V'_1 - V'_{k-2} xi) / k.
CoefficientSeries vprime_recursion(Complex v1, Complex xi, int kmax);

/// V1^k / k! when xi = 0, otherwise xi^{k/2} h_k(V1 / sqrt(xi)) with the
/// principal square root used on both sides.
Complex vprime_closed(Complex v1, Complex xi, int k);

/// exp(V1 z - xi z^2 / 2).
Complex gaussian_gf(const GaussianParams& p);

}  // namespace tperm
