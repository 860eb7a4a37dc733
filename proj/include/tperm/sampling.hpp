#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "tperm/philox.hpp"
#include "tperm/tensor.hpp"

namespace tperm {

enum class EntryKind { kComplexGaussian, kRealGaussian, kShiftedRademacher };

std::string_view entry_kind_name(EntryKind kind);  // "complex-gaussian", ...
std::optional<EntryKind> parse_entry_kind(std::string_view name);

/// Entry law with mean mu, unit variance E|x-mu|^2 = 1, quasi-variance
/// xi = E[(x-mu)^2] and third absolute central moment rho = E|x-mu|^3.
struct EntryDistribution {
  EntryKind kind = EntryKind::kComplexGaussian;
  Complex mu{0.0, 0.0};
  Complex xi{0.0, 0.0};
  double rho = 0.0;
};

/// complex-gaussian: independent N(0,1/2) parts, xi = 0, rho = (3/4)sqrt(pi).
/// real-gaussian:    N(0,1),                     xi = 1, rho = 2 sqrt(2/pi).
/// shifted-rademacher: mu +- 1,                  xi = 1, rho = 1.
EntryDistribution make_distribution(EntryKind kind, Complex mu);

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// Standard normal quantile at u in (0, 1).
double normal_quantile(double u);

/// Draws entries keyed by (master_seed, stream_id, ordinal). Cheap to copy.
class EntrySampler {
 public:
  EntrySampler(const EntryDistribution& dist, SeedSpec seed);

  /// The entry at canonical storage position `ordinal`.
  Complex operator()(std::uint64_t ordinal) const {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(ordinal), static_cast<std::uint32_t>(ordinal >> 32),
        static_cast<std::uint32_t>(seed_.stream_id),
        static_cast<std::uint32_t>(seed_.stream_id >> 32)};
    const auto r = Philox4x32::generate(ctr, key_);
    switch (dist_.kind) {
      case EntryKind::kComplexGaussian:
        return dist_.mu + Complex{normal_quantile(to_open_unit(r[0], r[1])),
                                  normal_quantile(to_open_unit(r[2], r[3]))} *
                              kHalfSqrt2;
      case EntryKind::kRealGaussian:
        return dist_.mu + normal_quantile(to_open_unit(r[0], r[1]));
      case EntryKind::kShiftedRademacher:
        return dist_.mu + ((r[0] & 1U) != 0 ? 1.0 : -1.0);
    }
    return dist_.mu;
  }

  /// Midpoint of one of 2^52 equal cells of (0, 1), from two counter words.
  /// Every value is exact and the largest is 1 - 2^-53, never 1.
  static double to_open_unit(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
  }

 private:
  static constexpr double kHalfSqrt2 = 0.70710678118654752440;  // 1/sqrt(2)

  EntryDistribution dist_;
  SeedSpec seed_;
  Philox4x32::Key key_;
};

/// n^d i.i.d. draws in canonical layout; a pure function of its arguments.
/// Entry ranges are filled in parallel when threads != 1.
Tensor sample_tensor(const EntryDistribution& dist, int order, int dim, SeedSpec seed,
                     std::size_t cap = kDefaultStorageCap, unsigned threads = 1);

/// R - mu J.
Tensor centered(const Tensor& r, Complex mu);

}  // namespace tperm
