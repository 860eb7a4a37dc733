#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tperm/sampling.hpp"
#include "tperm/symmetric.hpp"

namespace tperm {

/// How a row's pass flag is decided.
///   kWithinSe: |empirical - target| <= tolerance * se + floor
///   kAtMost:   empirical <= target (a frozen threshold)
///   kFlag:     empirical is 1 (true) or 0 (false); passes when 1
///   kRecord:   informational, always passes
enum class RowCheck { kWithinSe, kAtMost, kFlag, kRecord };

std::string_view row_check_name(RowCheck c);

struct StatRow {
  std::string name;
  double empirical = 0.0;
  double target = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  /// Absolute slack for rounding, nonzero only on rows whose quantity is
  /// exactly zero in exact arithmetic for some k (a_1 - V_1).
  double floor = 0.0;
  RowCheck check = RowCheck::kRecord;
  bool pass = true;
};

struct ExperimentReport {
  std::string experiment;
  int order = 0;
  std::vector<int> dims;
  EntryKind kind = EntryKind::kComplexGaussian;
  Complex mu{0.0, 0.0};
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<StatRow> rows;
  std::optional<double> seconds;
  /// Per-trial values, CSV with header; empty when the experiment has none.
  std::string trial_csv;

  bool all_pass() const;
  const StatRow* find(std::string_view name) const;
};

/// Row name -> frozen threshold. A row whose name appears here is checked
/// as kAtMost against the stored value instead of its default rule.
using Thresholds = std::map<std::string, double, std::less<>>;

struct VerifyOptions {
  unsigned threads = 1;
  /// Record wall-clock seconds in the report.
  bool timing = true;
  Thresholds thresholds;
  /// Width of the standard-error band for kWithinSe rows.
  double tolerance = 5.0;
};

inline constexpr int kBatchCount = 20;

/// Mean and batch-means standard error (kBatchCount contiguous batches).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe batch_mean(std::span<const double> values);

/// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Hyperplane scores of sample_tensor(dist, d, n, seed) computed without
/// storing the tensor; bitwise equal to hyperplane_scores() of it.
HyperplaneScores streamed_scores(const EntryDistribution& dist, int order, int dim,
                                 SeedSpec seed);

/// E|a_k|^2 = 1 / (k! (n^{(k)})^{d-2}).
double second_moment_a(int d, int n, int k);
/// E|V_k|^2 = C(n,k) / n^{k(d-1)}.
double second_moment_v(int d, int n, int k);
/// E|a_k - V_k|^2 for i.i.d. zero-mean unit-variance entries.
double second_moment_gap(int d, int n, int k);

/// Means of a_k, |a_k|^2, a_k conj(a_l), V_k, |V_k|^2, a_k - V_k and
/// |a_k - V_k|^2 over zero-mean trials against their analytic values.
/// Requires trials >= 1000.
ExperimentReport moment_experiment(EntryKind kind, int d, int n, int kmax, int trials,
                                   std::uint64_t seed, const VerifyOptions& opts = {});

/// Medians and 95th percentiles of |D_2 - xi| and |D_k| (3 <= k <= kmax) for
/// each n, trend flags across n, the A = J control, and n^{d-2} D_2 against
/// xi. Requires kmax >= 3.
ExperimentReport concentration_experiment(EntryKind kind, int d, std::span<const int> dims,
                                          int kmax, int trials, std::uint64_t seed,
                                          const VerifyOptions& opts = {});

/// Tail beyond t, the a/V gap, |V'_k - V_k|, |V_k - a_k| and the Gaussian
/// factor per trial, with the A = 0 control. t defaults to
/// truncation_order(n, epsilon).
ExperimentReport closeness_experiment(EntryKind kind, int d, int n, double epsilon, Complex z,
                                      int trials, std::uint64_t seed,
                                      const VerifyOptions& opts = {},
                                      std::optional<int> t = std::nullopt);

/// Relative errors of the truncated series and the closed form against the
/// exact permanent, the t = 1..n sweep, and the R = mu J control.
ExperimentReport end_to_end_experiment(EntryKind kind, int d, int n, Complex mu,
                                       double epsilon, int trials, std::uint64_t seed,
                                       const VerifyOptions& opts = {});

/// One line per row: experiment,name,empirical,target,se,tolerance,check,pass.
std::string report_rows_csv(const ExperimentReport& r);

}  // namespace tperm
