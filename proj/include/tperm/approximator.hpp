#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tperm/coeff_series.hpp"
#include "tperm/permanent.hpp"
#include "tperm/tensor.hpp"

namespace tperm {

enum class ApproxMethod { kTruncatedSeries, kPtasClosedForm };

std::string_view approx_method_name(ApproxMethod m);  // TRUNCATED_SERIES, ...

/// Result of the admissibility test |mu| >= L^{-c}, |z| <= L^c with
/// L = ln n / (d-1)^6. Purely informational.
struct Admissibility {
  bool admissible = false;
  double log_ratio = 0.0;  // L; non-positive means the bounds are undefined
  double mu_bound = 0.0;   // L^{-c}
  double z_bound = 0.0;    // L^{c}
  std::string diagnostic;
};

struct ApproxParams {
  double epsilon = 0.0;  // NaN for the closed form, which takes no epsilon
  int t = 0;
  Complex z{0.0, 0.0};
  Complex mu{0.0, 0.0};
  Admissibility admissibility;
};

struct ApproxResult {
  PermanentValue value;
  Complex normalized_series{0.0, 0.0};
  ApproxMethod method = ApproxMethod::kTruncatedSeries;
  ApproxParams params;
};

struct ApproxOptions {
  /// Replaces ceil(ln n + ln 1/epsilon) when set; must lie in 0..n.
  std::optional<int> t;
  /// Exponent c of the admissibility diagnostic.
  double c = 0.1;
  SeriesOptions series;
};

/// mu^n (n!)^(d-1) s. Direct complex products while the magnitude is far
/// from overflow (so mu^n (n!)^(d-1) * 1 is the same double every time it is
/// formed), log-space composition beyond that.
PermanentValue assemble_estimate(Complex mu, int n, int d, Complex s);

/// ceil(ln n + ln(1/epsilon)) clamped to [1, n]. Throws kInvalidArgument
/// unless 0 < epsilon < 1.
int truncation_order(int n, double epsilon);

Admissibility admissibility_check(int n, int d, Complex mu, double c = 0.1);

/// mu^n (n!)^(d-1) sum_{k<=t} a_k z^k with A = R - mu J and z = 1/mu.
/// Throws kZeroMean for mu = 0 and kBudgetExceeded before any work when a
/// coefficient is over budget.
ApproxResult approx_permanent(const Tensor& r, Complex mu, double epsilon,
                              const ApproxOptions& opts = {});

/// mu^n (n!)^(d-1) exp(V_1 z - xi z^2 / 2). One pass over the entries.
ApproxResult ptas_estimate(const Tensor& r, Complex mu, Complex xi,
                           const ApproxOptions& opts = {});

/// True when epsilon > n^{-rho_exponent}, i.e. the closed form is used.
bool ptas_branch(int n, double epsilon, double rho_exponent);

/// Closed form if ptas_branch(), truncated series otherwise. Throws
/// kInvalidArgument unless 0 < rho_exponent < 1/8.
ApproxResult ptas_dispatch(const Tensor& r, Complex mu, Complex xi, double epsilon,
                           double rho_exponent = 0.1, const ApproxOptions& opts = {});

}  // namespace tperm
