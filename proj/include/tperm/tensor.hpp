#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tperm/error.hpp"

namespace tperm {

/// Default ceiling on n^d; construction fails before allocating past it.
inline constexpr std::size_t kDefaultStorageCap = 100'000'000;

/// Returns n^d, or throws kStorageCapExceeded if it is larger than `cap`.
std::size_t checked_entry_count(int order, int dim,
                                std::size_t cap = kDefaultStorageCap);

/// Dense complex tensor of order d and dimension n.
///
/// Entries are stored row-major in lexicographic order of the index tuple
/// (i_1, ..., i_d). Public indexing is 1-based (modes 1..d, indices 1..n)
/// and maps onto 0-based storage. A Tensor never changes after construction,
/// so it can be read from any number of threads.
class Tensor {
 public:
  /// Validates shape and finiteness; throws kLengthMismatch / kNonFinite /
  /// kStorageCapExceeded / kInvalidArgument.
  static Tensor make(int order, int dim, std::vector<Complex> values,
                     std::size_t cap = kDefaultStorageCap);

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Complex> entries() const noexcept { return entries_; }

  /// Storage distance between consecutive indices of `mode` (1-based).
  std::size_t stride(int mode) const;

  /// Entry at a 1-based index tuple.
  Complex at(std::span<const int> index) const;

  const Complex& operator[](std::size_t offset) const { return entries_[offset]; }

 private:
  Tensor(int order, int dim, std::vector<Complex> entries)
      : order_(order), dim_(dim), entries_(std::move(entries)) {}

  int order_;
  int dim_;
  std::vector<Complex> entries_;
};

/// One strictly increasing list of 1-based indices per mode, all of length k.
struct IndexSelection {
  std::vector<std::vector<int>> modes;

  std::size_t size() const { return modes.empty() ? 0 : modes.front().size(); }

  /// Throws kInvalidArgument (ragged, wrong mode count, unsorted) or
  /// kOutOfRange (index outside 1..dim).
  void validate(int order, int dim) const;

  static IndexSelection full(int order, int dim);
};

Tensor make_tensor(int order, int dim, std::vector<Complex> values);

Tensor all_ones(int order, int dim, std::size_t cap = kDefaultStorageCap);

/// Elementwise alpha + z * a.
Tensor affine_combine(Complex alpha, const Tensor& a, Complex z);

Tensor subtensor(const Tensor& a, const IndexSelection& sel);

/// Sum of the n^(d-1) entries whose `mode` index equals `index` (both 1-based).
/// Entries are accumulated in storage order.
Complex hyperplane_sum(const Tensor& a, int mode, int index);

}  // namespace tperm
