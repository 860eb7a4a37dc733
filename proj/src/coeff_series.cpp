#include "tperm/coeff_series.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cmath>
#include <optional>
#include <string>

#include "tperm/combinatorics.hpp"
#include "tperm/parallel.hpp"

namespace tperm {

namespace {

constexpr std::size_t kSelectionChunk = 1024;

// Below this, integer powers of falling factorials are exact in a double.
constexpr double kExactIntegerLog = 36.7;  // ln 2^53 ~= 36.74

void check_work(int d, int n, int k, double budget) {
  const double work = coefficient_work(d, n, k);
  if (!(work <= budget)) {
    throw Error(ErrorCode::kBudgetExceeded,
                "coefficient a_" + std::to_string(k) + " needs C(n,k)^d (k!)^(d-1) = " +
                    std::to_string(work) + " products, budget is " +
                    std::to_string(budget));
  }
}

// Divides by (n^{(k)})^(d-1). Exact division while the denominator is an
// exactly representable integer, otherwise a log-space scale factor.
Complex divide_by_falling_power(Complex sum, int n, int k, int power) {
  const double log_denominator = power * log_falling_factorial(n, k);
  if (log_denominator < kExactIntegerLog) {
    double denominator = 1.0;
    for (int p = 0; p < power; ++p) {
      for (int i = 0; i < k; ++i) denominator *= static_cast<double>(n - i);
    }
    return sum / denominator;
  }
  return sum * std::exp(-log_denominator);
}

// Largest (k!)^(d-1) for which the subtensor expansion is precompiled.
constexpr double kMaxProgramTerms = double(1 << 22);

// The first-row expansion of a k x ... x k permanent, unrolled once per
// (d, k) into flat offset tables. Rows 0..k-3 are enumerated as tree levels
// (children of a node are contiguous on the next level); the last two rows
// use the 2^(d-1) swap patterns. Evaluation is a bottom-up sweep of plain
// loops, with no recursion or bitmask work per subtensor.
class ExpansionProgram {
 public:
  static bool fits(int d, int k) {
    return d <= kMaxKernelOrder && k >= 1 && k <= 63 &&
           std::pow(std::tgamma(k + 1.0), d - 1) <= kMaxProgramTerms;
  }

  ExpansionProgram(int d, int k) : d_(d), k_(k), levels_(std::max(k - 2, 0)) {
    stride_.assign(d, 1);
    for (int m = d - 2; m >= 0; --m) stride_[m] = stride_[m + 1] * static_cast<std::uint32_t>(k);
    entry_.resize(levels_);
    end_.resize(levels_);
    value_.resize(levels_);
    std::vector<std::uint64_t> free(d, (std::uint64_t{1} << k) - 1);
    build(0, free);
    for (int r = 0; r < levels_; ++r) value_[r].resize(entry_[r].size());
  }

  Complex evaluate(const Complex* sub) {
    if (k_ == 1) return sub[0];
    if (levels_ == 0) return pattern_sum(sub, 0, pairs_.size() / 2);
    const int last = levels_ - 1;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < entry_[last].size(); ++i) {
      const std::size_t end = end_[last][i];
      value_[last][i] = complex_mul(sub[entry_[last][i]], pattern_sum(sub, begin, end));
      begin = end;
    }
    for (int r = last - 1; r >= 0; --r) {
      begin = 0;
      for (std::size_t i = 0; i < entry_[r].size(); ++i) {
        const std::size_t end = end_[r][i];
        Complex acc{0.0, 0.0};
        for (std::size_t c = begin; c < end; ++c) acc += value_[r + 1][c];
        value_[r][i] = complex_mul(sub[entry_[r][i]], acc);
        begin = end;
      }
    }
    Complex acc{0.0, 0.0};
    for (const Complex& v : value_[0]) acc += v;
    return acc;
  }

 private:
  Complex pattern_sum(const Complex* sub, std::size_t begin, std::size_t end) const {
    Complex acc{0.0, 0.0};
    for (std::size_t p = begin; p < end; ++p) {
      acc += complex_mul(sub[pairs_[2 * p]], sub[pairs_[2 * p + 1]]);
    }
    return acc;
  }

  // Appends the nodes below a partial assignment of rows 0..row-1.
  void build(int row, std::vector<std::uint64_t>& free) {
    const std::uint32_t row_offset = static_cast<std::uint32_t>(row) * stride_[0];
    if (row == levels_) {
      // Two rows left (or k < 2, handled in evaluate).
      if (k_ < 2) return;
      const std::uint32_t patterns = std::uint32_t{1} << (d_ - 1);
      for (std::uint32_t p = 0; p < patterns; ++p) {
        std::uint32_t upper = row_offset;
        std::uint32_t lower = row_offset + stride_[0];
        for (int m = 1; m < d_; ++m) {
          const std::uint64_t f = free[m];
          const auto lo = static_cast<std::uint32_t>(std::countr_zero(f)) * stride_[m];
          const auto hi = static_cast<std::uint32_t>(std::countr_zero(f & (f - 1))) * stride_[m];
          const bool swap = (p >> (m - 1)) & 1U;
          upper += swap ? hi : lo;
          lower += swap ? lo : hi;
        }
        pairs_.push_back(upper);
        pairs_.push_back(lower);
      }
      return;
    }
    tuples(row, 1, row_offset, free);
  }

  void tuples(int row, int mode, std::uint32_t offset, std::vector<std::uint64_t>& free) {
    std::uint64_t mask = free[mode];
    while (mask != 0) {
      const int j = std::countr_zero(mask);
      mask &= mask - 1;
      const std::uint64_t bit = std::uint64_t{1} << j;
      const std::uint32_t next = offset + static_cast<std::uint32_t>(j) * stride_[mode];
      free[mode] &= ~bit;
      if (mode == d_ - 1) {
        entry_[row].push_back(next);
        build(row + 1, free);
        end_[row].push_back(static_cast<std::uint32_t>(
            row + 1 < levels_ ? entry_[row + 1].size() : pairs_.size() / 2));
      } else {
        tuples(row, mode + 1, next, free);
      }
      free[mode] |= bit;
    }
  }

  int d_;
  int k_;
  int levels_;
  std::vector<std::uint32_t> stride_;
  std::vector<std::vector<std::uint32_t>> entry_;
  std::vector<std::vector<std::uint32_t>> end_;
  std::vector<std::uint32_t> pairs_;
  std::vector<std::vector<Complex>> value_;
};

}  // namespace

std::string_view series_kind_name(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::kA: return "A_COEFF";
    case SeriesKind::kV: return "V_COEFF";
    case SeriesKind::kVPrime: return "VPRIME_COEFF";
  }
  return "UNKNOWN";
}

Complex coefficient_a(const Tensor& a, int k, const SeriesOptions& opts) {
  const int d = a.order();
  const int n = a.dim();
  if (k < 0 || k > n) {
    throw Error(ErrorCode::kOutOfRange, "coefficient index k=" + std::to_string(k) +
                                            " outside 0.." + std::to_string(n));
  }
  if (k == 0) return Complex{1.0, 0.0};
  check_work(d, n, k, opts.budget);

  const std::vector<int> combos = lexicographic_combinations(n, k);
  const std::size_t ncomb = combos.size() / static_cast<std::size_t>(k);
  std::size_t selections = 1;
  std::size_t sub_size = 1;
  for (int m = 0; m < d; ++m) {
    selections *= ncomb;
    sub_size *= static_cast<std::size_t>(k);
  }

  // offsets[m][c*k + j]: storage offset contributed by mode m when the c-th
  // combination is selected there and the j-th of its indices is used.
  std::vector<std::vector<std::size_t>> offsets(d);
  for (int m = 0; m < d; ++m) {
    const std::size_t s = a.stride(m + 1);
    offsets[m].resize(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
      offsets[m][i] = static_cast<std::size_t>(combos[i]) * s;
    }
  }

  const auto entries = a.entries();
  const std::size_t chunks = (selections + kSelectionChunk - 1) / kSelectionChunk;
  std::vector<Complex> partials(chunks);

  for_each_chunk(selections, kSelectionChunk, opts.threads,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    PermanentKernel kernel;
    std::optional<ExpansionProgram> program;
    if (ExpansionProgram::fits(d, k)) program.emplace(d, k);
    std::vector<Complex> sub(sub_size);
    std::vector<Complex> values(end - begin);
    std::vector<std::size_t> digit(d);
    std::size_t rest = begin;
    for (int m = d - 1; m >= 0; --m) {
      digit[m] = rest % ncomb;
      rest /= ncomb;
    }
    std::array<const std::size_t*, kMaxKernelOrder> mode_offsets{};
    std::array<int, kMaxKernelOrder> j{};
    std::array<std::size_t, kMaxKernelOrder + 1> partial{};

    for (std::size_t s = begin; s < end; ++s) {
      for (int m = 0; m < d; ++m) {
        mode_offsets[m] = offsets[m].data() + digit[m] * static_cast<std::size_t>(k);
      }
      // Odometer over the first d-1 modes; the last mode is the inner loop.
      partial[0] = 0;
      for (int m = 0; m + 1 < d; ++m) {
        j[m] = 0;
        partial[m + 1] = partial[m] + mode_offsets[m][0];
      }
      const std::size_t* inner = mode_offsets[d - 1];
      std::size_t pos = 0;
      for (;;) {
        const std::size_t base = partial[d - 1];
        for (int q = 0; q < k; ++q) sub[pos++] = entries[base + inner[q]];
        int m = d - 2;
        while (m >= 0 && ++j[m] == k) {
          j[m] = 0;
          --m;
        }
        if (m < 0) break;
        partial[m + 1] = partial[m] + mode_offsets[m][j[m]];
        for (int q = m + 1; q + 1 < d; ++q) partial[q + 1] = partial[q] + mode_offsets[q][0];
      }
      values[s - begin] = program ? program->evaluate(sub.data()) : kernel.evaluate(sub, d, k);

      for (int m = d - 1; m >= 0; --m) {
        if (++digit[m] < ncomb) break;
        digit[m] = 0;
      }
    }
    partials[chunk] = pairwise_sum(std::span<const Complex>(values));
  });

  const Complex total = pairwise_sum(std::span<const Complex>(partials));
  return divide_by_falling_power(total, n, k, d - 1);
}

CoefficientSeries coefficients_upto(const Tensor& a, int t, const SeriesOptions& opts) {
  const int d = a.order();
  const int n = a.dim();
  if (t < 0 || t > n) {
    throw Error(ErrorCode::kOutOfRange, "truncation order t=" + std::to_string(t) +
                                            " outside 0.." + std::to_string(n));
  }
  for (int k = 1; k <= t; ++k) check_work(d, n, k, opts.budget);

  CoefficientSeries series;
  series.kind = SeriesKind::kA;
  series.t = t;
  series.order = d;
  series.dim = n;
  series.coefficients.reserve(t + 1);
  for (int k = 0; k <= t; ++k) series.coefficients.push_back(coefficient_a(a, k, opts));
  return series;
}

Complex eval_series(const CoefficientSeries& s, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = s.coefficients.rbegin(); it != s.coefficients.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

double verify_identity(const Tensor& a, Complex z, const SeriesOptions& opts) {
  const int d = a.order();
  const int n = a.dim();
  const CoefficientSeries series = coefficients_upto(a, n, opts);
  const Complex normalized = eval_series(series, z);

  const PermanentValue rhs = permanent_exact(
      affine_combine(Complex{1.0, 0.0}, a, z), ExactOptions{opts.budget, opts.threads});

  Complex lhs;
  const double scale = permanent_term_count(d, n);
  if (std::isfinite(scale)) {
    lhs = normalized * scale;
  } else {
    lhs = PermanentValue::from_log(
              std::log(std::abs(normalized)) + (d - 1) * log_factorial(n),
              std::arg(normalized))
              .value;
  }
  return std::abs(lhs - rhs.value) / std::max(std::abs(rhs.value), 1e-300);
}

}  // namespace tperm
