#include "docforge/curation/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "docforge/core/error.hpp"
#include "docforge/core/rng.hpp"

namespace docforge::curation {

std::vector<std::uint64_t> allocate_counts(const MixtureConfig& config) {
  if (config.components.empty()) throw Error(ErrorCode::PreconditionFailed, "mixture has no components");
  if (config.total_samples == 0) throw Error(ErrorCode::PreconditionFailed, "mixture total must be positive");

  long double sum = 0.0L;
  for (const auto& c : config.components) {
    if (!(c.weight > 0.0 && c.weight <= 1.0)) {
      throw Error(ErrorCode::InvalidWeights, "weight of '" + c.label + "' outside (0, 1]");
    }
    sum += c.weight;
  }
  if (!config.renormalize && std::fabs(static_cast<double>(sum) - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidWeights, "weights sum to " + std::to_string(static_cast<double>(sum)));
  }
  const long double divisor = config.renormalize ? sum : 1.0L;

  const std::size_t n = config.components.size();
  std::vector<std::uint64_t> counts(n);
  std::vector<long double> remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double quota =
        static_cast<long double>(config.components[i].weight) / divisor * static_cast<long double>(config.total_samples);
    counts[i] = static_cast<std::uint64_t>(std::floor(quota));
    remainder[i] = quota - static_cast<long double>(counts[i]);
    assigned += counts[i];
  }
  if (assigned > config.total_samples) {
    throw Error(ErrorCode::InvalidWeights, "weights allocate more than the total");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  std::uint64_t left = config.total_samples - assigned;
  for (std::size_t k = 0; left > 0; k = (k + 1) % n, --left) ++counts[order[k]];
  return counts;
}

std::vector<std::string> mixture_sample(const MixtureConfig& config, std::uint64_t seed) {
  const std::vector<std::uint64_t> counts = allocate_counts(config);
  std::vector<std::string> labels;
  labels.reserve(config.total_samples);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    labels.insert(labels.end(), counts[i], config.components[i].label);
  }
  Rng rng(seed);
  rng.shuffle(labels);
  return labels;
}

}  // namespace docforge::curation
