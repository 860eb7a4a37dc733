#include "tperm/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tperm/combinatorics.hpp"
#include "tperm/parallel.hpp"

namespace tperm {

namespace {

constexpr int kMaxDim = 63;

void check_dim(int dim) {
  if (dim > kMaxDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "exact permanent supports n <= 63, got " + std::to_string(dim));
  }
}

}  // namespace

PermanentValue PermanentValue::from_complex(Complex v) {
  PermanentValue p;
  p.value = v;
  if (v == Complex{0.0, 0.0}) {
    p.log_magnitude = -std::numeric_limits<double>::infinity();
    p.argument = 0.0;
  } else {
    p.log_magnitude = std::log(std::abs(v));
    p.argument = std::arg(v);
  }
  return p;
}

PermanentValue PermanentValue::from_log(double log_magnitude, double argument) {
  PermanentValue p;
  p.log_magnitude = log_magnitude;
  if (std::isinf(log_magnitude) && log_magnitude < 0) {
    p.argument = 0.0;
    p.value = Complex{0.0, 0.0};
    return p;
  }
  p.argument = wrap_angle(argument);
  p.value = std::polar(std::exp(log_magnitude), p.argument);
  return p;
}

bool PermanentValue::is_zero() const {
  return std::isinf(log_magnitude) && log_magnitude < 0;
}

double wrap_angle(double radians) {
  return std::remainder(radians, 2.0 * std::numbers::pi);
}

double permanent_term_count(int order, int dim) {
  double fact = 1.0;
  for (int i = 2; i <= dim; ++i) fact *= i;
  return std::pow(fact, order - 1);
}

// --- kernel ---------------------------------------------------------------

std::size_t PermanentKernel::branch_count(int order, int dim) {
  if (dim < 3) return 1;
  std::size_t count = 1;
  for (int m = 1; m < order; ++m) count *= static_cast<std::size_t>(dim);
  return count;
}

void PermanentKernel::bind(std::span<const Complex> entries, int order, int dim) {
  if (order > kMaxKernelOrder) {
    throw Error(ErrorCode::kInvalidArgument,
                "exact permanent supports order <= " +
                    std::to_string(kMaxKernelOrder));
  }
  data_ = entries.data();
  order_ = order;
  dim_ = dim;
  stride_[order - 1] = 1;
  for (int m = order - 2; m >= 0; --m) {
    stride_[m] = stride_[m + 1] * static_cast<std::size_t>(dim);
  }
  const std::uint64_t all =
      dim == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1;
  for (int m = 0; m < order; ++m) free_[m] = all;
}

Complex PermanentKernel::rows_from(int row) {
  const int remaining = dim_ - row;
  if (remaining == 0) return Complex{1.0, 0.0};
  const std::size_t row_offset = static_cast<std::size_t>(row) * stride_[0];
  if (remaining == 1) {
    std::size_t offset = row_offset;
    for (int m = 1; m < order_; ++m) {
      offset += static_cast<std::size_t>(std::countr_zero(free_[m])) * stride_[m];
    }
    return data_[offset];
  }
  if (remaining == 2) {
    // Two rows left: each remaining mode has exactly two free indices, and
    // every assignment is a choice of which one goes to the upper row.
    std::array<std::size_t, kMaxKernelOrder> lo;
    std::array<std::size_t, kMaxKernelOrder> hi;
    std::size_t upper_base = row_offset;
    for (int m = 1; m < order_; ++m) {
      const std::uint64_t f = free_[m];
      lo[m] = static_cast<std::size_t>(std::countr_zero(f)) * stride_[m];
      hi[m] = static_cast<std::size_t>(std::countr_zero(f & (f - 1))) * stride_[m];
      upper_base += lo[m];
    }
    const std::size_t lower_base = upper_base + stride_[0];
    // Pattern bit m-1 set means mode m swaps: upper gets hi, lower gets lo.
    Complex acc{0.0, 0.0};
    const std::uint64_t patterns = std::uint64_t{1} << (order_ - 1);
    for (std::uint64_t p = 0; p < patterns; ++p) {
      std::size_t upper = upper_base;
      std::size_t lower = lower_base;
      for (int m = 1; m < order_; ++m) {
        if ((p >> (m - 1)) & 1U) {
          upper += hi[m] - lo[m];
        } else {
          lower += hi[m] - lo[m];
        }
      }
      acc += complex_mul(data_[upper], data_[lower]);
    }
    return acc;
  }
  return pick(row, 1, row_offset);
}

Complex PermanentKernel::pick(int row, int mode, std::size_t offset) {
  Complex acc{0.0, 0.0};
  std::uint64_t mask = free_[mode];
  const bool last = mode == order_ - 1;
  while (mask != 0) {
    const int j = std::countr_zero(mask);
    const std::uint64_t bit = std::uint64_t{1} << j;
    mask &= mask - 1;
    const std::size_t next = offset + static_cast<std::size_t>(j) * stride_[mode];
    free_[mode] &= ~bit;
    if (last) {
      const Complex v = data_[next];
      if (v != Complex{0.0, 0.0}) acc += complex_mul(v, rows_from(row + 1));
    } else {
      acc += pick(row, mode + 1, next);
    }
    free_[mode] |= bit;
  }
  return acc;
}

Complex PermanentKernel::branch_value(std::size_t id) {
  std::size_t offset = 0;
  std::size_t rest = id;
  std::array<std::uint64_t, kMaxKernelOrder> saved;
  std::copy_n(free_.begin(), order_, saved.begin());
  for (int m = order_ - 1; m >= 1; --m) {
    const auto j = rest % static_cast<std::size_t>(dim_);
    rest /= static_cast<std::size_t>(dim_);
    offset += j * stride_[m];
    free_[m] &= ~(std::uint64_t{1} << j);
  }
  const Complex v = data_[offset];
  Complex out{0.0, 0.0};
  if (v != Complex{0.0, 0.0}) out = complex_mul(v, rows_from(1));
  std::copy_n(saved.begin(), order_, free_.begin());
  return out;
}

Complex PermanentKernel::branch(std::span<const Complex> entries, int order,
                                int dim, std::size_t id) {
  bind(entries, order, dim);
  if (dim < 3) return rows_from(0);
  return branch_value(id);
}

Complex PermanentKernel::evaluate(std::span<const Complex> entries, int order,
                                  int dim) {
  bind(entries, order, dim);
  if (dim < 3) return rows_from(0);
  const std::size_t count = branch_count(order, dim);
  branches_.resize(count);
  for (std::size_t id = 0; id < count; ++id) branches_[id] = branch_value(id);
  return pairwise_sum(std::span<const Complex>(branches_));
}

// --- public entry points --------------------------------------------------

PermanentValue permanent_exact(const Tensor& a, const ExactOptions& opts) {
  const int d = a.order();
  const int n = a.dim();
  check_dim(n);
  const double terms = permanent_term_count(d, n);
  if (!(terms <= opts.budget)) {
    throw Error(ErrorCode::kBudgetExceeded,
                "exact permanent needs (n!)^(d-1) = " + std::to_string(terms) +
                    " products, budget is " + std::to_string(opts.budget));
  }
  const auto entries = a.entries();
  const std::size_t count = PermanentKernel::branch_count(d, n);
  if (resolve_threads(opts.threads) <= 1 || count == 1) {
    PermanentKernel kernel;
    return PermanentValue::from_complex(kernel.evaluate(entries, d, n));
  }
  std::vector<Complex> branches(count);
  for_each_chunk(count, 1, opts.threads,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   PermanentKernel kernel;
                   for (std::size_t id = begin; id < end; ++id) {
                     branches[id] = kernel.branch(entries, d, n, id);
                   }
                 });
  return PermanentValue::from_complex(
      pairwise_sum(std::span<const Complex>(branches)));
}

PermanentValue permanent_matrix_ryser(const Tensor& m) {
  if (m.order() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "Ryser's formula needs an order-2 tensor, got order " +
                    std::to_string(m.order()));
  }
  const int n = m.dim();
  if (n > 30) {
    throw Error(ErrorCode::kInvalidArgument,
                "Ryser evaluation supports n <= 30, got " + std::to_string(n));
  }
  // per(M) = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} m_ij, visiting the
  // subsets S in Gray-code order so each step adds or removes one column.
  std::vector<Complex> row_sums(n, Complex{0.0, 0.0});
  Complex total{0.0, 0.0};
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < subsets; ++step) {
    const int j = std::countr_zero(step);
    const std::uint64_t bit = std::uint64_t{1} << j;
    const bool adding = (gray & bit) == 0;
    gray ^= bit;
    for (int i = 0; i < n; ++i) {
      const Complex mij = m[static_cast<std::size_t>(i) * n + j];
      row_sums[i] += adding ? mij : -mij;
    }
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= row_sums[i];
    if (std::popcount(gray) % 2 == 1) total -= prod;
    else total += prod;
  }
  if (n % 2 == 1) total = -total;
  return PermanentValue::from_complex(total);
}

PermanentValue permanent_scaled(const Tensor& a, Complex s,
                                const ExactOptions& opts) {
  const PermanentValue base = permanent_exact(a, opts);
  if (s == Complex{0.0, 0.0} || base.is_zero()) {
    return PermanentValue::from_complex(Complex{0.0, 0.0});
  }
  const double n = a.dim();
  return PermanentValue::from_log(n * std::log(std::abs(s)) + base.log_magnitude,
                                  n * std::arg(s) + base.argument);
}

}  // namespace tperm
