#include "tperm/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tperm {

std::size_t checked_entry_count(int order, int dim, std::size_t cap) {
  if (order < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "tensor order must be >= 2, got " + std::to_string(order));
  }
  if (dim < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "tensor dimension must be >= 1, got " + std::to_string(dim));
  }
  std::size_t count = 1;
  for (int m = 0; m < order; ++m) {
    if (count > cap / static_cast<std::size_t>(dim)) {
      throw Error(ErrorCode::kStorageCapExceeded,
                  "n^d exceeds the storage cap of " + std::to_string(cap) +
                      " entries (d=" + std::to_string(order) +
                      ", n=" + std::to_string(dim) + ")");
    }
    count *= static_cast<std::size_t>(dim);
  }
  return count;
}

Tensor Tensor::make(int order, int dim, std::vector<Complex> values,
                    std::size_t cap) {
  const std::size_t expected = checked_entry_count(order, dim, cap);
  if (values.size() != expected) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      throw Error(ErrorCode::kNonFinite,
                  "entry " + std::to_string(i) + " is not finite");
    }
  }
  return Tensor(order, dim, std::move(values));
}

std::size_t Tensor::stride(int mode) const {
  if (mode < 1 || mode > order_) {
    throw Error(ErrorCode::kOutOfRange, "mode " + std::to_string(mode) +
                                            " outside 1.." +
                                            std::to_string(order_));
  }
  std::size_t s = 1;
  for (int m = mode; m < order_; ++m) s *= static_cast<std::size_t>(dim_);
  return s;
}

Complex Tensor::at(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) {
    throw Error(ErrorCode::kInvalidArgument, "index tuple has wrong length");
  }
  std::size_t offset = 0;
  for (int m = 0; m < order_; ++m) {
    const int i = index[m];
    if (i < 1 || i > dim_) {
      throw Error(ErrorCode::kOutOfRange,
                  "index " + std::to_string(i) + " outside 1.." +
                      std::to_string(dim_));
    }
    offset = offset * static_cast<std::size_t>(dim_) +
             static_cast<std::size_t>(i - 1);
  }
  return entries_[offset];
}

void IndexSelection::validate(int order, int dim) const {
  if (static_cast<int>(modes.size()) != order) {
    throw Error(ErrorCode::kInvalidArgument,
                "selection has " + std::to_string(modes.size()) +
                    " index lists, tensor has order " + std::to_string(order));
  }
  const std::size_t k = modes.front().size();
  for (const auto& list : modes) {
    if (list.size() != k) {
      throw Error(ErrorCode::kInvalidArgument, "ragged index selection");
    }
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (list[j] < 1 || list[j] > dim) {
        throw Error(ErrorCode::kOutOfRange,
                    "selected index " + std::to_string(list[j]) +
                        " outside 1.." + std::to_string(dim));
      }
      if (j > 0 && list[j] <= list[j - 1]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "selection lists must be strictly increasing");
      }
    }
  }
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty index selection");
  }
}

IndexSelection IndexSelection::full(int order, int dim) {
  IndexSelection sel;
  sel.modes.assign(order, std::vector<int>(dim));
  for (auto& list : sel.modes) {
    for (int j = 0; j < dim; ++j) list[j] = j + 1;
  }
  return sel;
}

Tensor make_tensor(int order, int dim, std::vector<Complex> values) {
  return Tensor::make(order, dim, std::move(values));
}

Tensor all_ones(int order, int dim, std::size_t cap) {
  const std::size_t count = checked_entry_count(order, dim, cap);
  return Tensor::make(order, dim, std::vector<Complex>(count, Complex{1.0, 0.0}),
                      cap);
}

Tensor affine_combine(Complex alpha, const Tensor& a, Complex z) {
  std::vector<Complex> out(a.size());
  const auto in = a.entries();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha + z * in[i];
  return Tensor::make(a.order(), a.dim(), std::move(out),
                      std::numeric_limits<std::size_t>::max());
}

Tensor subtensor(const Tensor& a, const IndexSelection& sel) {
  const int d = a.order();
  sel.validate(d, a.dim());
  const int k = static_cast<int>(sel.size());

  std::vector<std::vector<std::size_t>> offsets(d);
  for (int m = 0; m < d; ++m) {
    const std::size_t s = a.stride(m + 1);
    for (int idx : sel.modes[m]) {
      offsets[m].push_back(static_cast<std::size_t>(idx - 1) * s);
    }
  }

  std::size_t count = 1;
  for (int m = 0; m < d; ++m) count *= static_cast<std::size_t>(k);
  std::vector<Complex> out(count);
  std::vector<int> digit(d, 0);
  for (std::size_t e = 0; e < count; ++e) {
    std::size_t offset = 0;
    for (int m = 0; m < d; ++m) offset += offsets[m][digit[m]];
    out[e] = a[offset];
    for (int m = d - 1; m >= 0; --m) {
      if (++digit[m] < k) break;
      digit[m] = 0;
    }
  }
  return Tensor::make(d, k, std::move(out),
                      std::numeric_limits<std::size_t>::max());
}

Complex hyperplane_sum(const Tensor& a, int mode, int index) {
  if (mode < 1 || mode > a.order()) {
    throw Error(ErrorCode::kOutOfRange,
                "mode " + std::to_string(mode) + " outside 1.." +
                    std::to_string(a.order()));
  }
  if (index < 1 || index > a.dim()) {
    throw Error(ErrorCode::kOutOfRange,
                "index " + std::to_string(index) + " outside 1.." +
                    std::to_string(a.dim()));
  }
  // Entries with i_mode fixed form `outer` blocks of `inner` contiguous values.
  const std::size_t n = static_cast<std::size_t>(a.dim());
  const std::size_t inner = a.stride(mode);
  const std::size_t outer = a.size() / (inner * n);
  const std::size_t base = static_cast<std::size_t>(index - 1) * inner;
  Complex sum{0.0, 0.0};
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t start = o * inner * n + base;
    for (std::size_t i = 0; i < inner; ++i) sum += a[start + i];
  }
  return sum;
}

}  // namespace tperm
