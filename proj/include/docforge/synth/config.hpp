#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docforge/docmodel/markup.hpp"
#include "docforge/synth/assets.hpp"
#include "docforge/synth/augment.hpp"
#include "docforge/synth/layout.hpp"
#include "docforge/synth/lexicon.hpp"
#include "docforge/synth/render_spec.hpp"

namespace docforge::synth {

/// A weighted document family: its category label, lexicon and layout.
struct Profile {
  std::string category;
  double weight = 1.0;
  std::string lexicon;  // key into GenerationConfig::lexicons
  LayoutSpec layout;
  std::optional<double> handwriting_fraction;  // overrides the render value
};

struct GenerationConfig {
  std::size_t samples = 0;
  std::uint64_t master_seed = 0;
  docmodel::SupervisionMode mode = docmodel::SupervisionMode::structure_mode;
  std::map<std::string, Lexicon> lexicons;
  AssetPool pool;
  RenderSpec render;
  std::vector<Profile> profiles;
  bool augment = true;
  AugmentationPolicy augmentation;
  std::string fingerprint;  // SHA-256 of the effective configuration
};

struct ConfigOverrides {
  std::optional<std::uint64_t> master_seed;
  std::optional<std::size_t> samples;
};

/// Parses a JSON generation config; relative paths resolve against
/// `base_dir`. Unknown keys are rejected. The fingerprint hashes the
/// canonical dump of the document after overrides are applied.
/// Errors: InvalidConfig, IoFailure and the loaders' own errors.
GenerationConfig parse_generation_config(std::string_view json_text, const std::filesystem::path& base_dir,
                                         const ConfigOverrides& overrides = {});

GenerationConfig load_generation_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace docforge::synth
