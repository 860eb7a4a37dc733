#include "tperm/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tperm/coeff_series.hpp"
#include "tperm/combinatorics.hpp"
#include "tperm/sampling.hpp"

namespace tperm {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::optional<std::uint64_t> subtensor_count(int d, int n, int k) {
  if (k < 0 || k > n) return std::uint64_t{0};
  // C(n,k) by the multiplicative formula: c * (n-k+i) is divisible by i, so
  // cancel the common factor first to keep intermediates small.
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
    const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
    if (__builtin_mul_overflow(c / g, num / den, &c)) return std::nullopt;
  }
  std::uint64_t total = 1;
  for (int m = 0; m < d; ++m) {
    if (__builtin_mul_overflow(total, c, &total)) return std::nullopt;
  }
  return total;
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

BenchReport run_bench(const BenchGrid& grid) {
  using Clock = std::chrono::steady_clock;
  BenchReport report;
  const EntryDistribution dist = make_distribution(EntryKind::kComplexGaussian, Complex{0.0, 0.0});
  for (int d : grid.orders) {
    for (int n : grid.dims) {
      std::vector<double> work, secs;
      std::optional<Tensor> a;
      for (int k : grid.ks) {
        BenchRow row;
        row.d = d;
        row.n = n;
        row.k = k;
        if (d < 2 || n < 1 || k < 1 || k > n) {
          row.status = "invalid";
          report.rows.push_back(row);
          continue;
        }
        row.subtensor_count = subtensor_count(d, n, k);
        row.predicted_work = coefficient_work(d, n, k);
        if (!(row.predicted_work <= grid.budget)) {
          row.status = "budget_exceeded";
          report.rows.push_back(row);
          continue;
        }
        if (!a) a = sample_tensor(dist, d, n, SeedSpec{grid.seed, 0});
        const SeriesOptions opts{grid.budget, grid.threads};
        int runs = 0;
        const auto t0 = Clock::now();
        double elapsed = 0.0;
        do {
          coefficient_a(*a, k, opts);
          ++runs;
          elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        } while (grid.timing && elapsed < grid.min_seconds);
        if (grid.timing) {
          row.seconds = elapsed / runs;
          work.push_back(row.predicted_work);
          secs.push_back(*row.seconds);
        }
        row.status = "ok";
        report.rows.push_back(row);
      }
      BenchSlope s;
      s.d = d;
      s.n = n;
      s.points = static_cast<int>(work.size());
      s.slope = log_log_slope(work, secs);
      report.slopes.push_back(s);
    }
  }
  return report;
}

std::string bench_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "d,n,k,subtensor_count,predicted_work,seconds,status\n";
  for (const BenchRow& row : r.rows) {
    out << row.d << ',' << row.n << ',' << row.k << ',';
    if (row.subtensor_count) out << *row.subtensor_count;
    out << ',' << fmt(row.predicted_work) << ',';
    if (row.seconds) out << fmt(*row.seconds);
    out << ',' << row.status << '\n';
  }
  return out.str();
}

}  // namespace tperm
