#include "tperm/approximator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tperm/combinatorics.hpp"
#include "tperm/sampling.hpp"
#include "tperm/symmetric.hpp"

namespace tperm {

namespace {

// Direct assembly stays well inside double range below this log magnitude.
constexpr double kDirectLogLimit = 600.0;

void check_mu(Complex mu) {
  if (mu == Complex{0.0, 0.0}) {
    throw Error(ErrorCode::kZeroMean, "mu = 0: z = 1/mu is undefined");
  }
}

ApproxParams base_params(const Tensor& r, Complex mu, double epsilon, int t, double c) {
  ApproxParams p;
  p.epsilon = epsilon;
  p.t = t;
  p.mu = mu;
  p.z = Complex{1.0, 0.0} / mu;
  p.admissibility = admissibility_check(r.dim(), r.order(), mu, c);
  return p;
}

}  // namespace

std::string_view approx_method_name(ApproxMethod m) {
  switch (m) {
    case ApproxMethod::kTruncatedSeries: return "TRUNCATED_SERIES";
    case ApproxMethod::kPtasClosedForm: return "PTAS_CLOSED_FORM";
  }
  return "UNKNOWN";
}

PermanentValue assemble_estimate(Complex mu, int n, int d, Complex s) {
  if (s == Complex{0.0, 0.0} || mu == Complex{0.0, 0.0}) {
    return PermanentValue::from_complex(Complex{0.0, 0.0});
  }
  const double log_scale = n * std::log(std::abs(mu)) + (d - 1) * log_factorial(n);
  const double log_total = log_scale + std::log(std::abs(s));
  if (std::abs(log_scale) < kDirectLogLimit && std::abs(log_total) < kDirectLogLimit) {
    Complex scale{1.0, 0.0};
    for (int i = 0; i < n; ++i) scale = scale * mu;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    for (int m = 1; m < d; ++m) scale *= fact;
    return PermanentValue::from_complex(scale * s);
  }
  return PermanentValue::from_log(log_total, n * std::arg(mu) + std::arg(s));
}

int truncation_order(int n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  }
  const double raw = std::ceil(std::log(static_cast<double>(n)) + std::log(1.0 / epsilon));
  const double clamped = std::min(std::max(raw, 1.0), static_cast<double>(std::max(n, 1)));
  return static_cast<int>(clamped);
}

Admissibility admissibility_check(int n, int d, Complex mu, double c) {
  Admissibility a;
  std::ostringstream msg;
  msg.precision(6);
  if (mu == Complex{0.0, 0.0}) {
    a.diagnostic = "inadmissible: mu = 0, z = 1/mu undefined";
    return a;
  }
  a.log_ratio = std::log(static_cast<double>(n)) / std::pow(d - 1.0, 6.0);
  if (!(a.log_ratio > 0.0)) {
    a.mu_bound = std::numeric_limits<double>::quiet_NaN();
    a.z_bound = std::numeric_limits<double>::quiet_NaN();
    msg << "inadmissible: ln n / (d-1)^6 = " << a.log_ratio << " is not positive";
    a.diagnostic = msg.str();
    return a;
  }
  a.mu_bound = std::pow(a.log_ratio, -c);
  a.z_bound = std::pow(a.log_ratio, c);
  const double abs_mu = std::abs(mu);
  const double abs_z = 1.0 / abs_mu;
  const bool mu_ok = abs_mu >= a.mu_bound;
  const bool z_ok = abs_z <= a.z_bound;
  a.admissible = mu_ok && z_ok;
  msg << (a.admissible ? "admissible" : "inadmissible") << ": |mu| = " << abs_mu
      << (mu_ok ? " >= " : " < ") << a.mu_bound << ", |z| = " << abs_z
      << (z_ok ? " <= " : " > ") << a.z_bound << " (L = ln n/(d-1)^6 = " << a.log_ratio
      << ", c = " << c << ")";
  a.diagnostic = msg.str();
  return a;
}

ApproxResult approx_permanent(const Tensor& r, Complex mu, double epsilon,
                              const ApproxOptions& opts) {
  check_mu(mu);
  const int n = r.dim();
  const int d = r.order();
  int t = 0;
  if (opts.t) {
    t = *opts.t;
    if (t < 0 || t > n) {
      throw Error(ErrorCode::kOutOfRange, "truncation order t=" + std::to_string(t) +
                                              " outside 0.." + std::to_string(n));
    }
  } else {
    t = truncation_order(n, epsilon);
  }
  ApproxResult out;
  out.method = ApproxMethod::kTruncatedSeries;
  out.params = base_params(r, mu, epsilon, t, opts.c);
  const Tensor a = centered(r, mu);
  out.normalized_series = eval_series(coefficients_upto(a, t, opts.series), out.params.z);
  out.value = assemble_estimate(mu, n, d, out.normalized_series);
  return out;
}

ApproxResult ptas_estimate(const Tensor& r, Complex mu, Complex xi, const ApproxOptions& opts) {
  check_mu(mu);
  ApproxResult out;
  out.method = ApproxMethod::kPtasClosedForm;
  out.params = base_params(r, mu, std::numeric_limits<double>::quiet_NaN(), 1, opts.c);
  const Complex v1 = V_coeffs(centered(r, mu), 1).coefficients[1];
  out.normalized_series = gaussian_gf(GaussianParams{v1, xi, out.params.z});
  out.value = assemble_estimate(mu, r.dim(), r.order(), out.normalized_series);
  return out;
}

bool ptas_branch(int n, double epsilon, double rho_exponent) {
  return epsilon > std::pow(static_cast<double>(n), -rho_exponent);
}

ApproxResult ptas_dispatch(const Tensor& r, Complex mu, Complex xi, double epsilon,
                           double rho_exponent, const ApproxOptions& opts) {
  if (!(rho_exponent > 0.0 && rho_exponent < 0.125)) {
    throw Error(ErrorCode::kInvalidArgument, "rho exponent must lie in (0, 1/8)");
  }
  if (ptas_branch(r.dim(), epsilon, rho_exponent)) {
    ApproxResult out = ptas_estimate(r, mu, xi, opts);
    out.params.epsilon = epsilon;
    return out;
  }
  return approx_permanent(r, mu, epsilon, opts);
}

}  // namespace tperm
