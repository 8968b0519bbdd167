#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "docforge/core/image.hpp"
#include "docforge/core/manifest.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/synth/augment.hpp"
#include "docforge/synth/config.hpp"

namespace docforge::synth {

/// Everything produced for one sample index, before anything touches disk.
struct GeneratedSample {
  ManifestEntry entry;
  Image image;
  std::vector<docmodel::ContentBlock> blocks;  // the drawn tree; empty when failed
  std::string ground_truth;  // serialized in the config's mode; empty when failed
  AugmentationSpec augmentation;  // ops applied to the image
  std::vector<std::string> render_log;  // filled when requested
};

/// "syn-000001" style id for a zero-based index.
std::string sample_id(std::size_t index);

/// Generates sample `index` in isolation. Seed streams of the derived
/// sample seed: 0 profile choice, 1 layout, 2 augmentation draw, 3
/// augmentation pixels. Errors during composition or rendering yield a
/// failed entry instead of throwing.
GeneratedSample generate_sample(const GenerationConfig& config, std::size_t index, bool keep_log = false);

/// Writes images/<id>.png, gt/<id>.gt.txt and manifest.jsonl under
/// `out_dir` using `jobs` worker threads (0: hardware concurrency).
/// Manifest order is the sample index order. Throws PreconditionFailed for
/// zero samples and IoFailure when output cannot be written.
CorpusManifest generate_corpus(const GenerationConfig& config, const std::filesystem::path& out_dir,
                               unsigned jobs = 0);

}  // namespace docforge::synth
