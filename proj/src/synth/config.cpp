#include "docforge/synth/config.hpp"

#include <json.hpp>
#include <set>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"

namespace docforge::synth {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidConfig, message); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) invalid("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + "." + key + " is missing or has the wrong type");
  }
}

template <class T>
void read_opt(const json& obj, const std::string& key, const std::string& where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::filesystem::path> path_list(const json& obj, const std::string& key, const std::string& where,
                                             const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  if (!obj.contains(key)) return out;
  for (const auto& s : get<std::vector<std::string>>(obj, key, where)) out.push_back(resolve(base, s));
  return out;
}

void read_range(const json& obj, const std::string& key, const std::string& where, IntRange& out) {
  if (!obj.contains(key)) return;
  const auto v = get<std::vector<int>>(obj, key, where);
  if (v.size() != 2) invalid(where + "." + key + " must be [lo, hi]");
  out = {v[0], v[1]};
}

Rgb read_color(const json& obj, const std::string& key, const std::string& where, Rgb fallback) {
  if (!obj.contains(key)) return fallback;
  const auto v = get<std::vector<int>>(obj, key, where);
  if (v.size() != 3) invalid(where + "." + key + " must be [r, g, b]");
  for (int c : v) {
    if (c < 0 || c > 255) invalid(where + "." + key + " component outside [0, 255]");
  }
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
}

constexpr std::array<std::string_view, 6> kBlockKeys{"heading", "paragraph", "table", "figure", "equation", "list_item"};

void apply_layout(const json& obj, const std::string& where, LayoutSpec& spec) {
  check_keys(obj, where,
             {"columns", "block_mix", "table_rows", "table_cols", "blocks_per_page", "paragraph_words",
              "heading_words", "list_item_words", "list_items", "cell_words", "span_probability",
              "numeric_cell_probability", "figure_width_pct", "figure_max_height_fraction", "column_gap_px"});
  read_opt(obj, "columns", where, spec.columns);
  if (obj.contains("block_mix")) {
    const json& mix = obj.at("block_mix");
    check_keys(mix, where + ".block_mix",
               {kBlockKeys[0], kBlockKeys[1], kBlockKeys[2], kBlockKeys[3], kBlockKeys[4], kBlockKeys[5]});
    // A partial mix lists only the kinds that may appear.
    spec.block_mix.fill(0.0);
    for (std::size_t k = 0; k < kBlockKeys.size(); ++k) {
      read_opt(mix, std::string(kBlockKeys[k]), where + ".block_mix", spec.block_mix[k]);
    }
  }
  read_range(obj, "table_rows", where, spec.table_rows);
  read_range(obj, "table_cols", where, spec.table_cols);
  read_range(obj, "blocks_per_page", where, spec.blocks_per_page);
  read_range(obj, "paragraph_words", where, spec.paragraph_words);
  read_range(obj, "heading_words", where, spec.heading_words);
  read_range(obj, "list_item_words", where, spec.list_item_words);
  read_range(obj, "list_items", where, spec.list_items);
  read_range(obj, "cell_words", where, spec.cell_words);
  read_range(obj, "figure_width_pct", where, spec.figure_width_pct);
  read_opt(obj, "span_probability", where, spec.span_probability);
  read_opt(obj, "numeric_cell_probability", where, spec.numeric_cell_probability);
  read_opt(obj, "figure_max_height_fraction", where, spec.figure_max_height_fraction);
  read_opt(obj, "column_gap_px", where, spec.column_gap_px);
  try {
    validate(spec);
  } catch (const Error& e) {
    invalid(where + ": " + e.what());
  }
}

RenderSpec parse_render(const json& obj, const std::filesystem::path& base) {
  const std::string where = "render";
  check_keys(obj, where,
             {"fonts", "heading_fonts", "handwriting_fonts", "handwriting_fraction", "equation_font",
              "font_size_range", "page_size", "margin", "line_spacing", "ink_color", "paper_color"});
  RenderSpec spec;
  spec.font_paths = path_list(obj, "fonts", where, base);
  spec.heading_font_paths = path_list(obj, "heading_fonts", where, base);
  spec.handwriting_font_paths = path_list(obj, "handwriting_fonts", where, base);
  if (obj.contains("equation_font")) spec.equation_font_path = resolve(base, get<std::string>(obj, "equation_font", where));
  read_opt(obj, "handwriting_fraction", where, spec.handwriting_fraction);
  IntRange size{spec.min_pt, spec.max_pt};
  read_range(obj, "font_size_range", where, size);
  spec.min_pt = size.lo;
  spec.max_pt = size.hi;
  IntRange page{spec.page_width, spec.page_height};
  read_range(obj, "page_size", where, page);
  spec.page_width = page.lo;
  spec.page_height = page.hi;
  read_opt(obj, "margin", where, spec.margin_px);
  read_opt(obj, "line_spacing", where, spec.line_spacing);
  spec.ink_color = read_color(obj, "ink_color", where, spec.ink_color);
  spec.paper_color = read_color(obj, "paper_color", where, spec.paper_color);
  try {
    validate(spec);
  } catch (const Error& e) {
    invalid(std::string("render: ") + e.what());
  }
  for (const auto* list : {&spec.font_paths, &spec.heading_font_paths, &spec.handwriting_font_paths}) {
    for (const auto& p : *list) {
      if (!std::filesystem::exists(p)) throw Error(ErrorCode::IoFailure, "font not found: " + p.string());
    }
  }
  return spec;
}

AugmentationPolicy parse_augmentation(const json& obj, bool& enabled) {
  const std::string where = "augmentation";
  check_keys(obj, where, {"enabled", "fraction", "max_ops", "ops"});
  AugmentationPolicy policy;
  read_opt(obj, "enabled", where, enabled);
  read_opt(obj, "fraction", where, policy.fraction);
  read_opt(obj, "max_ops", where, policy.max_ops);
  if (obj.contains("ops")) {
    const json& ops = obj.at("ops");
    if (!ops.is_object()) invalid("augmentation.ops must be an object of op name -> [lo, hi]");
    policy.enabled.clear();
    for (std::size_t k = 0; k < kAugOpKinds; ++k) {
      const std::string name(op_name(k));
      if (!ops.contains(name)) continue;
      const auto v = get<std::vector<double>>(ops, name, "augmentation.ops");
      if (v.size() != 2) invalid("augmentation.ops." + name + " must be [lo, hi]");
      policy.ranges[k] = {v[0], v[1]};
      policy.enabled.push_back(k);
    }
    if (policy.enabled.size() != ops.size()) invalid("augmentation.ops names an unknown op");
  }
  try {
    validate(policy);
  } catch (const Error& e) {
    invalid(std::string("augmentation: ") + e.what());
  }
  return policy;
}

}  // namespace

GenerationConfig parse_generation_config(std::string_view json_text, const std::filesystem::path& base_dir,
                                         const ConfigOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config",
             {"samples", "master_seed", "mode", "lexicons", "asset_pool", "render", "layout", "profiles",
              "augmentation", "qc"});
  if (overrides.master_seed) doc["master_seed"] = *overrides.master_seed;
  if (overrides.samples) doc["samples"] = *overrides.samples;

  GenerationConfig cfg;
  cfg.samples = get<std::size_t>(doc, "samples", "config");
  cfg.master_seed = get<std::uint64_t>(doc, "master_seed", "config");
  if (doc.contains("mode")) cfg.mode = docmodel::supervision_mode_from_string(get<std::string>(doc, "mode", "config"));

  const json& lexicons = doc.contains("lexicons") ? doc.at("lexicons") : json::object();
  if (!lexicons.is_object() || lexicons.empty()) invalid("config.lexicons must name at least one lexicon file");
  for (const auto& [name, value] : lexicons.items()) {
    if (!value.is_string()) invalid("config.lexicons." + name + " must be a path");
    cfg.lexicons.emplace(name, load_lexicon(resolve(base_dir, value.get<std::string>())));
  }
  cfg.pool = load_asset_pool(resolve(base_dir, get<std::string>(doc, "asset_pool", "config")));
  cfg.render = parse_render(doc.contains("render") ? doc.at("render") : json::object(), base_dir);

  LayoutSpec base_layout;
  if (doc.contains("layout")) apply_layout(doc.at("layout"), "layout", base_layout);

  if (!doc.contains("profiles")) {
    cfg.profiles.push_back({"Synthetic", 1.0, cfg.lexicons.begin()->first, base_layout, std::nullopt});
  } else {
    const json& profiles = doc.at("profiles");
    if (!profiles.is_array() || profiles.empty()) invalid("config.profiles must be a non-empty array");
    std::set<std::string> categories;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const std::string where = "profiles[" + std::to_string(i) + "]";
      const json& p = profiles[i];
      check_keys(p, where, {"category", "weight", "lexicon", "layout", "handwriting_fraction"});
      Profile profile{get<std::string>(p, "category", where), 1.0, cfg.lexicons.begin()->first, base_layout,
                      std::nullopt};
      if (profile.category.empty()) invalid(where + ".category is empty");
      if (!categories.insert(profile.category).second) invalid(where + " repeats category " + profile.category);
      read_opt(p, "weight", where, profile.weight);
      if (!(profile.weight >= 0.0)) invalid(where + ".weight is negative");
      read_opt(p, "lexicon", where, profile.lexicon);
      if (!cfg.lexicons.contains(profile.lexicon)) invalid(where + " names unknown lexicon " + profile.lexicon);
      if (p.contains("layout")) apply_layout(p.at("layout"), where + ".layout", profile.layout);
      if (p.contains("handwriting_fraction")) {
        const double f = get<double>(p, "handwriting_fraction", where);
        if (!(f >= 0.0 && f <= 1.0)) invalid(where + ".handwriting_fraction outside [0, 1]");
        profile.handwriting_fraction = f;
      }
      cfg.profiles.push_back(std::move(profile));
    }
    double total = 0.0;
    for (const auto& p : cfg.profiles) total += p.weight;
    if (!(total > 0.0)) invalid("profile weights sum to zero");
  }

  if (doc.contains("augmentation")) cfg.augmentation = parse_augmentation(doc.at("augmentation"), cfg.augment);
  cfg.fingerprint = sha256_hex(doc.dump());
  return cfg;
}

GenerationConfig load_generation_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  return parse_generation_config(read_text_file(path), path.parent_path(), overrides);
}

}  // namespace docforge::synth
