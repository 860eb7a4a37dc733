#include "tperm/sampling.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "tperm/parallel.hpp"

namespace tperm {

std::string_view entry_kind_name(EntryKind kind) {
  switch (kind) {
    case EntryKind::kComplexGaussian: return "complex-gaussian";
    case EntryKind::kRealGaussian: return "real-gaussian";
    case EntryKind::kShiftedRademacher: return "shifted-rademacher";
  }
  return "unknown";
}

std::optional<EntryKind> parse_entry_kind(std::string_view name) {
  for (EntryKind k : {EntryKind::kComplexGaussian, EntryKind::kRealGaussian,
                      EntryKind::kShiftedRademacher}) {
    if (entry_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

EntryDistribution make_distribution(EntryKind kind, Complex mu) {
  EntryDistribution d;
  d.kind = kind;
  d.mu = mu;
  switch (kind) {
    case EntryKind::kComplexGaussian:
      d.xi = Complex{0.0, 0.0};
      d.rho = 0.75 * std::sqrt(std::numbers::pi);
      break;
    case EntryKind::kRealGaussian:
      d.xi = Complex{1.0, 0.0};
      d.rho = 2.0 * std::sqrt(2.0 / std::numbers::pi);
      break;
    case EntryKind::kShiftedRademacher:
      d.xi = Complex{1.0, 0.0};
      d.rho = 1.0;
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument, "unknown entry distribution kind");
  }
  return d;
}

double normal_quantile(double u) {
  using NoPromotion = boost::math::policies::policy<
      boost::math::policies::promote_double<false>>;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u, NoPromotion());
}

EntrySampler::EntrySampler(const EntryDistribution& dist, SeedSpec seed)
    : dist_(dist),
      seed_(seed),
      key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)} {}

Tensor sample_tensor(const EntryDistribution& dist, int order, int dim, SeedSpec seed,
                     std::size_t cap, unsigned threads) {
  const std::size_t count = checked_entry_count(order, dim, cap);
  std::vector<Complex> values(count);
  const EntrySampler sampler(dist, seed);
  for_each_chunk(count, std::size_t{1} << 16, threads,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) values[i] = sampler(i);
                 });
  return Tensor::make(order, dim, std::move(values), cap);
}

Tensor centered(const Tensor& r, Complex mu) {
  return affine_combine(-mu, r, Complex{1.0, 0.0});
}

}  // namespace tperm
