#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tperm {

struct BenchGrid {
  std::vector<int> orders;
  std::vector<int> dims;
  std::vector<int> ks;
  std::uint64_t seed = 0;
  /// Rows whose C(n,k)^d (k!)^(d-1) exceeds this are skipped.
  double budget = 1e11;
  /// Each row is repeated until this much time has passed; the mean is kept.
  double min_seconds = 0.05;
  /// Leave `seconds` empty (for byte-identical output).
  bool timing = true;
  unsigned threads = 1;
};

struct BenchRow {
  int d = 0;
  int n = 0;
  int k = 0;
  std::optional<std::uint64_t> subtensor_count;  // C(n,k)^d; empty on overflow
  double predicted_work = 0.0;                   // C(n,k)^d (k!)^(d-1)
  std::optional<double> seconds;
  std::string status;  // "ok", "budget_exceeded", "invalid"
};

struct BenchSlope {
  int d = 0;
  int n = 0;
  int points = 0;
  std::optional<double> slope;  // least squares of ln seconds on ln work
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSlope> slopes;
};

/// C(n,k)^d when it fits in 64 bits.
std::optional<std::uint64_t> subtensor_count(int d, int n, int k);

/// Times coefficient_a on a seeded complex-gaussian tensor for every
/// (d, n, k) in the grid, in the order d, n, k.
BenchReport run_bench(const BenchGrid& grid);

/// Least-squares slope of ln y on ln x; empty with fewer than two points.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// d,n,k,subtensor_count,predicted_work,seconds,status
std::string bench_csv(const BenchReport& r);

}  // namespace tperm
