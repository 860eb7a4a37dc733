#include "tperm/verify.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "tperm/approximator.hpp"
#include "tperm/coeff_series.hpp"
#include "tperm/combinatorics.hpp"
#include "tperm/parallel.hpp"
#include "tperm/permanent.hpp"

namespace tperm {

namespace {

using Clock = std::chrono::steady_clock;

// Relative rounding slack for rows that vanish in exact arithmetic.
constexpr double kRoundingFloor = 1e-12;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string suffix(int n) { return "_n" + std::to_string(n); }

class RowBuilder {
 public:
  RowBuilder(const VerifyOptions& opts, std::vector<StatRow>& rows)
      : opts_(opts), rows_(rows) {}

  void within(std::string name, MeanSe m, double target, double floor = 0.0) {
    add({std::move(name), m.mean, target, m.se, opts_.tolerance, floor, RowCheck::kWithinSe});
  }
  // Deterministic quantity: zero standard error, so only equality passes.
  void exact(std::string name, double value, double target) {
    add({std::move(name), value, target, 0.0, opts_.tolerance, 0.0, RowCheck::kWithinSe});
  }
  void at_most(std::string name, double value, double bound) {
    add({std::move(name), value, bound, 0.0, 0.0, 0.0, RowCheck::kAtMost});
  }
  void flag(std::string name, bool value) {
    add({std::move(name), value ? 1.0 : 0.0, 1.0, 0.0, 0.0, 0.0, RowCheck::kFlag});
  }
  void record(std::string name, double value) {
    add({std::move(name), value, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0,
         RowCheck::kRecord});
  }

 private:
  void add(StatRow row) {
    if (auto it = opts_.thresholds.find(row.name); it != opts_.thresholds.end()) {
      row.check = RowCheck::kAtMost;
      row.target = it->second;
      row.se = 0.0;
      row.tolerance = 0.0;
      row.floor = 0.0;
    }
    switch (row.check) {
      case RowCheck::kWithinSe:
        row.pass = std::abs(row.empirical - row.target) <= row.tolerance * row.se + row.floor;
        break;
      case RowCheck::kAtMost: row.pass = row.empirical <= row.target; break;
      case RowCheck::kFlag: row.pass = row.empirical == 1.0; break;
      case RowCheck::kRecord: row.pass = true; break;
    }
    rows_.push_back(std::move(row));
  }

  const VerifyOptions& opts_;
  std::vector<StatRow>& rows_;
};

// Runs fn(trial) for every trial, in parallel, results in trial order.
template <class T, class Fn>
std::vector<T> run_trials(int trials, unsigned threads, Fn fn) {
  std::vector<T> out(static_cast<std::size_t>(trials));
  for_each_chunk(out.size(), 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(static_cast<std::uint64_t>(i));
  });
  return out;
}

void check_trials(int trials, int minimum) {
  if (trials < minimum) {
    throw Error(ErrorCode::kInvalidArgument,
                "at least " + std::to_string(minimum) + " trials are required, got " +
                    std::to_string(trials));
  }
}

template <class Fn>
std::vector<double> column(std::size_t count, Fn fn) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] <= v[i - 1])) return false;
  }
  return true;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double relative_error(Complex estimate, Complex exact) {
  return std::abs(exact - estimate) / std::abs(exact);
}

ExperimentReport start(std::string name, EntryKind kind, int d, std::vector<int> dims,
                       Complex mu, int trials, std::uint64_t seed) {
  ExperimentReport r;
  r.experiment = std::move(name);
  r.order = d;
  r.dims = std::move(dims);
  r.kind = kind;
  r.mu = mu;
  r.trials = trials;
  r.seed = seed;
  return r;
}

void finish(ExperimentReport& r, Clock::time_point t0, const VerifyOptions& opts) {
  if (opts.timing) r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::string_view row_check_name(RowCheck c) {
  switch (c) {
    case RowCheck::kWithinSe: return "within_se";
    case RowCheck::kAtMost: return "at_most";
    case RowCheck::kFlag: return "flag";
    case RowCheck::kRecord: return "record";
  }
  return "unknown";
}

bool ExperimentReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const StatRow& r) { return r.pass; });
}

const StatRow* ExperimentReport::find(std::string_view name) const {
  for (const StatRow& r : rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

MeanSe batch_mean(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < static_cast<std::size_t>(kBatchCount)) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch means need at least " + std::to_string(kBatchCount) + " values");
  }
  // Batch b covers [b*n/B, (b+1)*n/B).
  std::vector<double> means(kBatchCount);
  double total = 0.0;
  for (int b = 0; b < kBatchCount; ++b) {
    const std::size_t lo = b * n / kBatchCount;
    const std::size_t hi = (b + 1) * n / kBatchCount;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += values[i];
    total += acc;
    means[b] = acc / static_cast<double>(hi - lo);
  }
  MeanSe out;
  out.mean = total / static_cast<double>(n);
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= kBatchCount;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  out.se = std::sqrt(ss / (kBatchCount - 1) / kBatchCount);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

HyperplaneScores streamed_scores(const EntryDistribution& dist, int order, int dim,
                                 SeedSpec seed) {
  const std::size_t total = checked_entry_count(order, dim, ~std::size_t{0});
  const std::size_t n = static_cast<std::size_t>(dim);
  const std::size_t inner = total / n / n;  // n^{d-2}
  const EntrySampler sampler(dist, seed);
  std::vector<Complex> sums(n, Complex{0.0, 0.0});
  std::uint64_t ordinal = 0;
  for (std::size_t block = 0; block < n; ++block) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = sums[j];
      for (std::size_t i = 0; i < inner; ++i) acc += sampler(ordinal++);
      sums[j] = acc;
    }
  }
  return scores_from_sums(std::move(sums), order, dim);
}

double second_moment_a(int d, int n, int k) {
  return std::exp(-log_factorial(k) - (d - 2) * log_falling_factorial(n, k));
}

double second_moment_v(int d, int n, int k) {
  return binomial(n, k) * std::exp(-k * (d - 1) * std::log(static_cast<double>(n)));
}

double second_moment_gap(int d, int n, int k) {
  // Products over k entries with distinct mode-2 indices are orthonormal.
  // a_k weights those with all modes distinct by alpha = (n^{(k)})^{-(d-1)};
  // V_k weights every one of them by beta = n^{-k(d-1)}.
  const double log_distinct = (d - 1) * log_falling_factorial(n, k);
  const double log_all = k * (d - 1) * std::log(static_cast<double>(n));
  const double alpha = std::exp(-log_distinct);
  const double beta = std::exp(-log_all);
  const double distinct = std::exp(log_distinct);
  const double all = std::exp(log_all);
  return binomial(n, k) * (distinct * (alpha - beta) * (alpha - beta) +
                           (all - distinct) * beta * beta);
}

ExperimentReport moment_experiment(EntryKind kind, int d, int n, int kmax, int trials,
                                   std::uint64_t seed, const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  check_trials(trials, 1000);
  if (kmax < 0 || kmax > n) {
    throw Error(ErrorCode::kOutOfRange, "kmax outside 0..n");
  }
  const SeriesOptions series{kDefaultWorkBudget, 1};
  for (int k = 1; k <= kmax; ++k) {
    if (!(coefficient_work(d, n, k) <= series.budget)) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "coefficient a_" + std::to_string(k) + " is over the work budget");
    }
  }
  const EntryDistribution dist = make_distribution(kind, Complex{0.0, 0.0});

  struct Trial {
    std::vector<Complex> a;
    std::vector<Complex> v;
  };
  const auto results = run_trials<Trial>(trials, opts.threads, [&](std::uint64_t i) {
    const Tensor a = sample_tensor(dist, d, n, SeedSpec{seed, i});
    Trial t;
    t.a.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) t.a[k] = coefficient_a(a, k, series);
    t.v = V_coeffs(a, kmax).coefficients;
    return t;
  });

  ExperimentReport r = start("moments", kind, d, {n}, Complex{0.0, 0.0}, trials, seed);
  RowBuilder rows(opts, r.rows);
  const std::size_t m = results.size();
  auto a = [&](std::size_t i, int k) { return results[i].a[k]; };
  auto v = [&](std::size_t i, int k) { return results[i].v[k]; };

  rows.exact("mean_a0", batch_mean(column(m, [&](std::size_t i) { return a(i, 0).real(); })).mean,
             1.0);
  for (int k = 1; k <= kmax; ++k) {
    const std::string ks = std::to_string(k);
    rows.within("mean_re_a" + ks, batch_mean(column(m, [&](std::size_t i) { return a(i, k).real(); })), 0.0);
    rows.within("mean_im_a" + ks, batch_mean(column(m, [&](std::size_t i) { return a(i, k).imag(); })), 0.0);
    rows.within("mean_abs2_a" + ks,
                batch_mean(column(m, [&](std::size_t i) { return std::norm(a(i, k)); })),
                second_moment_a(d, n, k));
    for (int l = k + 1; l <= kmax; ++l) {
      const std::string kl = ks + "_conj_a" + std::to_string(l);
      rows.within("mean_re_a" + kl, batch_mean(column(m, [&](std::size_t i) {
                    return (a(i, k) * std::conj(a(i, l))).real();
                  })), 0.0);
      rows.within("mean_im_a" + kl, batch_mean(column(m, [&](std::size_t i) {
                    return (a(i, k) * std::conj(a(i, l))).imag();
                  })), 0.0);
    }
    rows.within("mean_re_v" + ks, batch_mean(column(m, [&](std::size_t i) { return v(i, k).real(); })), 0.0);
    rows.within("mean_im_v" + ks, batch_mean(column(m, [&](std::size_t i) { return v(i, k).imag(); })), 0.0);
    rows.within("mean_abs2_v" + ks,
                batch_mean(column(m, [&](std::size_t i) { return std::norm(v(i, k)); })),
                second_moment_v(d, n, k));
    // a_1 = V_1 identically, so these rows carry a rounding floor relative
    // to the size of a_k itself.
    const double scale2 = second_moment_a(d, n, k);
    const double floor1 = kRoundingFloor * std::sqrt(scale2);
    const double floor2 = kRoundingFloor * scale2;
    rows.within("mean_re_a" + ks + "_minus_v" + ks,
                batch_mean(column(m, [&](std::size_t i) { return (a(i, k) - v(i, k)).real(); })),
                0.0, floor1);
    rows.within("mean_im_a" + ks + "_minus_v" + ks,
                batch_mean(column(m, [&](std::size_t i) { return (a(i, k) - v(i, k)).imag(); })),
                0.0, floor1);
    rows.within("mean_abs2_a" + ks + "_minus_v" + ks,
                batch_mean(column(m, [&](std::size_t i) { return std::norm(a(i, k) - v(i, k)); })),
                second_moment_gap(d, n, k), floor2);
  }
  finish(r, t0, opts);
  return r;
}

ExperimentReport concentration_experiment(EntryKind kind, int d, std::span<const int> dims,
                                          int kmax, int trials, std::uint64_t seed,
                                          const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  check_trials(trials, kBatchCount);
  if (kmax < 3) throw Error(ErrorCode::kOutOfRange, "concentration needs kmax >= 3");
  if (dims.empty()) throw Error(ErrorCode::kInvalidArgument, "empty list of dimensions");
  for (int n : dims) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "dimensions must be positive");
    checked_entry_count(d - 1, n);
  }
  const EntryDistribution dist = make_distribution(kind, Complex{0.0, 0.0});

  ExperimentReport r = start("concentration", kind, d, {dims.begin(), dims.end()},
                             Complex{0.0, 0.0}, trials, seed);
  RowBuilder rows(opts, r.rows);
  std::vector<double> d2_medians;
  std::vector<std::vector<double>> dk_medians(kmax + 1);

  for (int n : dims) {
    const auto results = run_trials<std::vector<Complex>>(trials, opts.threads, [&](std::uint64_t i) {
      const SeedSpec s{seed, (static_cast<std::uint64_t>(n) << 32) | i};
      return D_moments(streamed_scores(dist, d, n, s), kmax);
    });
    const std::size_t m = results.size();
    const std::string sn = suffix(n);
    const auto d2_dev = column(m, [&](std::size_t i) { return std::abs(results[i][2] - dist.xi); });
    d2_medians.push_back(median(d2_dev));
    rows.record("median_abs_d2_minus_xi" + sn, d2_medians.back());
    rows.record("p95_abs_d2_minus_xi" + sn, quantile(d2_dev, 0.95));
    for (int k = 3; k <= kmax; ++k) {
      const auto dk = column(m, [&](std::size_t i) { return std::abs(results[i][k]); });
      dk_medians[k].push_back(median(dk));
      rows.record("median_abs_d" + std::to_string(k) + sn, dk_medians[k].back());
      rows.record("p95_abs_d" + std::to_string(k) + sn, quantile(dk, 0.95));
    }
    // E[D_2] = xi n^{2-d}; the rescaled value is centred on xi itself.
    const double scale = std::pow(static_cast<double>(n), d - 2);
    rows.within("mean_re_scaled_d2" + sn,
                batch_mean(column(m, [&](std::size_t i) { return scale * results[i][2].real(); })),
                dist.xi.real());
    rows.within("mean_im_scaled_d2" + sn,
                batch_mean(column(m, [&](std::size_t i) { return scale * results[i][2].imag(); })),
                dist.xi.imag());
  }

  const int n0 = *std::min_element(dims.begin(), dims.end());
  const std::vector<Complex> control = D_moments(all_ones(d, n0), 2);
  rows.exact("control_ones_d2" + suffix(n0), control[2].real(), static_cast<double>(n0));

  if (dims.size() >= 2) {
    rows.flag("trend_median_abs_d2_minus_xi_decreasing", strictly_decreasing(d2_medians));
    for (int k = 3; k <= kmax; ++k) {
      rows.flag("trend_median_abs_d" + std::to_string(k) + "_decreasing",
                strictly_decreasing(dk_medians[k]));
    }
  }
  finish(r, t0, opts);
  return r;
}

ExperimentReport closeness_experiment(EntryKind kind, int d, int n, double epsilon, Complex z,
                                      int trials, std::uint64_t seed, const VerifyOptions& opts,
                                      std::optional<int> t_override) {
  const auto t0 = Clock::now();
  check_trials(trials, kBatchCount);
  const int t = t_override ? *t_override : truncation_order(n, epsilon);
  if (t < 0 || t > n) throw Error(ErrorCode::kOutOfRange, "truncation order outside 0..n");
  const SeriesOptions series{kDefaultWorkBudget, 1};
  for (int k = 1; k <= n; ++k) {
    if (!(coefficient_work(d, n, k) <= series.budget)) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "coefficient a_" + std::to_string(k) + " is over the work budget");
    }
  }
  const EntryDistribution dist = make_distribution(kind, Complex{0.0, 0.0});

  struct Trial {
    double tail = 0.0;
    double tail_bound = 0.0;
    double gap = 0.0;
    double gf = 0.0;
    std::vector<double> vprime_gap;  // |V'_k - V_k|, k = 0..n
    std::vector<double> va_gap;      // |V_k - a_k|
  };
  auto evaluate = [&](const Tensor& a, Complex xi) {
    const auto coeffs = coefficients_upto(a, n, series).coefficients;
    const auto v = V_coeffs(a, n).coefficients;
    const auto vp = vprime_recursion(v[1], xi, n).coefficients;
    Trial out;
    Complex tail{0.0, 0.0};
    Complex gap{0.0, 0.0};
    Complex zk{1.0, 0.0};
    out.vprime_gap.resize(n + 1);
    out.va_gap.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      if (k > t) {
        tail += coeffs[k] * zk;
        out.tail_bound += std::abs(coeffs[k] * zk);
      } else {
        gap += (coeffs[k] - v[k]) * zk;
      }
      out.vprime_gap[k] = std::abs(vp[k] - v[k]);
      out.va_gap[k] = std::abs(v[k] - coeffs[k]);
      zk *= z;
    }
    out.tail = std::abs(tail);
    out.gap = std::abs(gap);
    out.gf = std::abs(gaussian_gf(GaussianParams{v[1], xi, z}));
    return out;
  };
  const auto results = run_trials<Trial>(trials, opts.threads, [&](std::uint64_t i) {
    return evaluate(sample_tensor(dist, d, n, SeedSpec{seed, i}), dist.xi);
  });

  ExperimentReport r = start("closeness", kind, d, {n}, Complex{0.0, 0.0}, trials, seed);
  RowBuilder rows(opts, r.rows);
  const std::size_t m = results.size();
  rows.record("truncation_order", t);
  const auto tails = column(m, [&](std::size_t i) { return results[i].tail; });
  const auto bounds = column(m, [&](std::size_t i) { return results[i].tail_bound; });
  rows.record("median_tail", median(tails));
  rows.record("median_tail_triangle_bound", median(bounds));
  bool triangle = true;
  for (std::size_t i = 0; i < m; ++i) {
    triangle = triangle && tails[i] <= bounds[i] * (1.0 + 1e-12);
  }
  rows.flag("tail_within_triangle_bound_every_trial", triangle);
  rows.flag("median_tail_at_most_median_triangle_bound", median(tails) <= median(bounds) * (1.0 + 1e-12));
  rows.record("median_gap", median(column(m, [&](std::size_t i) { return results[i].gap; })));
  for (int k = 1; k <= n; ++k) {
    const std::string ks = std::to_string(k);
    rows.record("median_abs_vprime" + ks + "_minus_v" + ks,
                median(column(m, [&](std::size_t i) { return results[i].vprime_gap[k]; })));
    rows.record("median_abs_v" + ks + "_minus_a" + ks,
                median(column(m, [&](std::size_t i) { return results[i].va_gap[k]; })));
  }
  const auto gfs = column(m, [&](std::size_t i) { return results[i].gf; });
  rows.record("median_abs_gaussian_factor", median(gfs));
  rows.record("min_abs_gaussian_factor", *std::min_element(gfs.begin(), gfs.end()));

  // |z|^{2(k+1)} / (k+1)! < 1 / (2 (d-1)^6) for every t <= k < n.
  bool condition = true;
  const double limit = -std::log(2.0) - 6.0 * std::log(d - 1.0);
  for (int k = t; k < n; ++k) {
    condition = condition && 2.0 * (k + 1) * std::log(std::abs(z)) - log_factorial(k + 1) < limit;
  }
  rows.record("tail_condition_holds", condition ? 1.0 : 0.0);

  // A = 0 is a sample of the point mass at 0, whose quasi-variance is 0.
  const Trial zero = evaluate(
      affine_combine(Complex{0.0, 0.0}, all_ones(d, n), Complex{0.0, 0.0}), Complex{0.0, 0.0});
  rows.exact("control_zero_tail", zero.tail, 0.0);
  rows.exact("control_zero_gap", zero.gap, 0.0);
  rows.exact("control_zero_gaussian_factor", zero.gf, 1.0);

  std::ostringstream csv;
  csv << "trial,tail,tail_bound,gap,gaussian_factor_abs";
  for (int k = 1; k <= n; ++k) csv << ",abs_vprime" << k << "_minus_v" << k;
  for (int k = 1; k <= n; ++k) csv << ",abs_v" << k << "_minus_a" << k;
  csv << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    const Trial& tr = results[i];
    csv << i << ',' << fmt(tr.tail) << ',' << fmt(tr.tail_bound) << ',' << fmt(tr.gap) << ','
        << fmt(tr.gf);
    for (int k = 1; k <= n; ++k) csv << ',' << fmt(tr.vprime_gap[k]);
    for (int k = 1; k <= n; ++k) csv << ',' << fmt(tr.va_gap[k]);
    csv << '\n';
  }
  r.trial_csv = csv.str();
  finish(r, t0, opts);
  return r;
}

ExperimentReport end_to_end_experiment(EntryKind kind, int d, int n, Complex mu,
                                       double epsilon, int trials, std::uint64_t seed,
                                       const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  check_trials(trials, kBatchCount);
  if (mu == Complex{0.0, 0.0}) throw Error(ErrorCode::kZeroMean, "mu = 0");
  const int t = truncation_order(n, epsilon);
  const SeriesOptions series{kDefaultWorkBudget, 1};
  for (int k = 1; k <= n; ++k) {
    if (!(coefficient_work(d, n, k) <= series.budget)) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "coefficient a_" + std::to_string(k) + " is over the work budget");
    }
  }
  if (!(permanent_term_count(d, n) <= kDefaultWorkBudget)) {
    throw Error(ErrorCode::kBudgetExceeded, "exact permanent is over the work budget");
  }
  const EntryDistribution dist = make_distribution(kind, mu);
  ApproxOptions approx;
  approx.series = series;

  struct Trial {
    Complex exact;
    Complex series;
    Complex ptas;
    double series_error = 0.0;
    double ptas_error = 0.0;
    std::vector<double> sweep;  // error at t = 1..n, index t-1
  };
  const auto results = run_trials<Trial>(trials, opts.threads, [&](std::uint64_t i) {
    const Tensor rt = sample_tensor(dist, d, n, SeedSpec{seed, i});
    Trial tr;
    tr.exact = permanent_exact(rt).value;
    tr.series = approx_permanent(rt, mu, epsilon, approx).value.value;
    tr.ptas = ptas_estimate(rt, mu, dist.xi, approx).value.value;
    tr.series_error = relative_error(tr.series, tr.exact);
    tr.ptas_error = relative_error(tr.ptas, tr.exact);
    const auto full = coefficients_upto(centered(rt, mu), n, series);
    for (int s = 1; s <= n; ++s) {
      CoefficientSeries cut = full;
      cut.coefficients.resize(s + 1);
      cut.t = s;
      const Complex sum = eval_series(cut, Complex{1.0, 0.0} / mu);
      tr.sweep.push_back(relative_error(assemble_estimate(mu, n, d, sum).value, tr.exact));
    }
    return tr;
  });

  ExperimentReport r = start("end-to-end", kind, d, {n}, mu, trials, seed);
  RowBuilder rows(opts, r.rows);
  const std::size_t m = results.size();
  rows.record("truncation_order", t);
  const auto se = column(m, [&](std::size_t i) { return results[i].series_error; });
  const auto pe = column(m, [&](std::size_t i) { return results[i].ptas_error; });
  auto fraction_within = [&](const std::vector<double>& e) {
    const auto hits = std::count_if(e.begin(), e.end(), [&](double x) { return x <= epsilon; });
    return static_cast<double>(hits) / static_cast<double>(e.size());
  };
  rows.record("median_series_error", median(se));
  rows.record("p95_series_error", quantile(se, 0.95));
  rows.record("fraction_series_within_epsilon", fraction_within(se));
  rows.record("median_ptas_error", median(pe));
  rows.record("p95_ptas_error", quantile(pe, 0.95));
  rows.record("fraction_ptas_within_epsilon", fraction_within(pe));

  std::vector<double> sweep_medians;
  for (int s = 1; s <= n; ++s) {
    sweep_medians.push_back(median(column(m, [&](std::size_t i) { return results[i].sweep[s - 1]; })));
    rows.record("median_error_t" + std::to_string(s), sweep_medians.back());
  }
  rows.flag("trend_median_error_nonincreasing_in_t", non_increasing(sweep_medians));
  const auto full_errors = column(m, [&](std::size_t i) { return results[i].sweep[n - 1]; });
  rows.at_most("max_error_t_full", *std::max_element(full_errors.begin(), full_errors.end()), 1e-9);

  // R = mu J: A = 0 and the entry law is a point mass, whose quasi-variance is 0.
  const Tensor flat = affine_combine(mu, all_ones(d, n), Complex{0.0, 0.0});
  const Complex closed = assemble_estimate(mu, n, d, Complex{1.0, 0.0}).value;
  rows.exact("control_mu_j_series_error",
             relative_error(approx_permanent(flat, mu, epsilon, approx).value.value, closed), 0.0);
  rows.exact("control_mu_j_ptas_error",
             relative_error(ptas_estimate(flat, mu, Complex{0.0, 0.0}, approx).value.value, closed),
             0.0);
  rows.at_most("control_mu_j_exact_oracle_error",
               relative_error(permanent_exact(flat).value, closed), 1e-12);

  std::ostringstream csv;
  csv << "trial,exact_re,exact_im,series_re,series_im,series_error,ptas_re,ptas_im,ptas_error";
  for (int s = 1; s <= n; ++s) csv << ",error_t" << s;
  csv << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    const Trial& tr = results[i];
    csv << i << ',' << fmt(tr.exact.real()) << ',' << fmt(tr.exact.imag()) << ','
        << fmt(tr.series.real()) << ',' << fmt(tr.series.imag()) << ',' << fmt(tr.series_error)
        << ',' << fmt(tr.ptas.real()) << ',' << fmt(tr.ptas.imag()) << ',' << fmt(tr.ptas_error);
    for (double e : tr.sweep) csv << ',' << fmt(e);
    csv << '\n';
  }
  r.trial_csv = csv.str();
  finish(r, t0, opts);
  return r;
}

std::string report_rows_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "experiment,name,empirical,target,se,tolerance,check,pass\n";
  for (const StatRow& row : r.rows) {
    out << r.experiment << ',' << row.name << ',' << fmt(row.empirical) << ','
        << fmt(row.target) << ',' << fmt(row.se) << ',' << fmt(row.tolerance) << ','
        << row_check_name(row.check) << ',' << (row.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace tperm
