#pragma once

#include <string_view>
#include <vector>

#include "tperm/permanent.hpp"
#include "tperm/tensor.hpp"

namespace tperm {

enum class SeriesKind { kA, kV, kVPrime };

std::string_view series_kind_name(SeriesKind kind);

/// Coefficients 0..t of one of the three series. coefficients[0] is always
/// exactly 1.
struct CoefficientSeries {
  SeriesKind kind = SeriesKind::kA;
  std::vector<Complex> coefficients;
  int t = 0;
  int order = 0;
  int dim = 0;
};

struct SeriesOptions {
  /// Upper bound on C(n,k)^d (k!)^(d-1) for any single coefficient.
  double budget = kDefaultWorkBudget;
  /// 0 = hardware concurrency. The result does not depend on this value.
  unsigned threads = 1;
};

/// a_k = (n^{(k)})^{-(d-1)} * sum of per(B) over every k x ... x k subtensor B,
/// where n^{(k)} is the falling factorial. Subtensor permanents are summed in
/// lexicographic selection order (last mode fastest) in fixed-size chunks.
Complex coefficient_a(const Tensor& a, int k, const SeriesOptions& opts = {});

/// a_0 .. a_t.
CoefficientSeries coefficients_upto(const Tensor& a, int t,
                                    const SeriesOptions& opts = {});

/// Horner evaluation of sum_k c_k z^k.
Complex eval_series(const CoefficientSeries& s, Complex z);

/// Relative residual between (n!)^(d-1) * sum_{k<=n} a_k z^k and per(J + zA).
double verify_identity(const Tensor& a, Complex z, const SeriesOptions& opts = {});

}  // namespace tperm
