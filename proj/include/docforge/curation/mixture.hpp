#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace docforge::curation {

struct MixtureComponent {
  std::string label;
  double weight = 0.0;
};

struct MixtureConfig {
  std::vector<MixtureComponent> components;
  std::uint64_t total_samples = 0;
  /// Divide weights by their sum first. Needed for published percentages
  /// that were rounded and no longer sum to 1.
  bool renormalize = false;
};

/// Largest-remainder apportionment: floor(w_i * total) each, then one more
/// to the largest fractional parts (ties to the earlier component).
/// Throws InvalidWeights unless every weight is in (0, 1] and (without
/// renormalize) the weights sum to 1 within 1e-6; PreconditionFailed for an
/// empty component list or zero total.
std::vector<std::uint64_t> allocate_counts(const MixtureConfig& config);

/// Exact counts from allocate_counts, then a seeded Fisher-Yates shuffle.
std::vector<std::string> mixture_sample(const MixtureConfig& config, std::uint64_t seed);

}  // namespace docforge::curation
