#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tperm/tensor.hpp"

namespace tperm {

/// A permanent together with its polar/log form.
///
/// log_magnitude is -infinity for a zero permanent. When the magnitude
/// overflows a double, `value` is non-finite but the log form stays exact.
struct PermanentValue {
  Complex value{0.0, 0.0};
  double log_magnitude = 0.0;
  double argument = 0.0;

  static PermanentValue from_complex(Complex v);
  static PermanentValue from_log(double log_magnitude, double argument);

  bool is_zero() const;
};

/// Folds an angle into [-pi, pi].
double wrap_angle(double radians);

/// Plain complex product. std::complex's operator* takes the C99 inf/nan
/// recovery path, which dominates the cost of small permanents.
inline Complex complex_mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

/// Defaults shared by every exact routine.
inline constexpr double kDefaultWorkBudget = 1e9;

struct ExactOptions {
  /// Upper bound on (n!)^(d-1), the number of products in the expansion.
  double budget = kDefaultWorkBudget;
  /// 0 = hardware concurrency. The result does not depend on this value.
  unsigned threads = 1;
};

/// (n!)^(d-1) as a double.
double permanent_term_count(int order, int dim);

/// Exact tensor permanent by recursive first-mode expansion with one
/// availability bitmask per remaining mode. Throws kBudgetExceeded when
/// (n!)^(d-1) is above the budget and kInvalidArgument for n > 63.
PermanentValue permanent_exact(const Tensor& a, const ExactOptions& opts = {});

/// Ryser inclusion-exclusion with Gray-code ordering; order-2 tensors only.
PermanentValue permanent_matrix_ryser(const Tensor& m);

/// s^n * per(A), assembled in log space.
PermanentValue permanent_scaled(const Tensor& a, Complex s,
                                const ExactOptions& opts = {});

/// Largest order the expansion kernel accepts.
inline constexpr int kMaxKernelOrder = 32;

/// Reusable expansion kernel over raw row-major storage.
///
/// The first row's index tuples are the top-level branches; their values are
/// combined with pairwise_sum, so evaluate() and a branch-parallel evaluation
/// agree bit for bit. Scratch space is kept between calls so the coefficient
/// sums do not allocate per subtensor.
class PermanentKernel {
 public:
  Complex evaluate(std::span<const Complex> entries, int order, int dim);

  /// Number of top-level branches (n^(d-1) for n >= 3, otherwise 1).
  static std::size_t branch_count(int order, int dim);

  /// Value of one top-level branch.
  Complex branch(std::span<const Complex> entries, int order, int dim,
                 std::size_t id);

 private:
  void bind(std::span<const Complex> entries, int order, int dim);
  Complex branch_value(std::size_t id);
  Complex rows_from(int row);
  Complex pick(int row, int mode, std::size_t offset);

  const Complex* data_ = nullptr;
  int order_ = 0;
  int dim_ = 0;
  std::array<std::size_t, kMaxKernelOrder> stride_{};
  std::array<std::uint64_t, kMaxKernelOrder> free_{};
  std::vector<Complex> branches_;
};

}  // namespace tperm
