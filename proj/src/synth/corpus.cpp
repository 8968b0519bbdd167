#include "docforge/synth/corpus.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/synth/raster.hpp"

namespace docforge::synth {

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "syn-%06zu", index + 1);
  return buf;
}

GeneratedSample generate_sample(const GenerationConfig& config, std::size_t index, bool keep_log) {
  GeneratedSample out;
  ManifestEntry& entry = out.entry;
  entry.id = sample_id(index);
  entry.image_path = "images/" + entry.id + ".png";
  entry.gt_path = "gt/" + entry.id + ".gt.txt";
  entry.mode = std::string(docmodel::to_string(config.mode));
  entry.seed = derive_sample_seed(config.master_seed, index);
  entry.config_fingerprint = config.fingerprint;

  if (config.profiles.empty()) throw Error(ErrorCode::InvalidConfig, "no profiles configured");
  std::vector<double> weights;
  for (const auto& p : config.profiles) weights.push_back(p.weight);
  Rng pick(derive_stream_seed(entry.seed, 0));
  const Profile& profile = config.profiles[pick.weighted_index(weights)];
  entry.category = profile.category;

  try {
    const auto lexicon = config.lexicons.find(profile.lexicon);
    if (lexicon == config.lexicons.end()) {
      throw Error(ErrorCode::InvalidConfig, "unknown lexicon " + profile.lexicon);
    }
    RenderSpec render = config.render;
    if (profile.handwriting_fraction) render.handwriting_fraction = *profile.handwriting_fraction;
    const PagePlan plan =
        compose_layout(profile.layout, lexicon->second, config.pool, render, derive_stream_seed(entry.seed, 1));
    RasterizedPage page = rasterize_page(plan, render, keep_log ? &out.render_log : nullptr);
    entry.language = std::string(docmodel::to_string(page.tree.language()));
    out.ground_truth = docmodel::serialize(page.tree, config.mode);
    entry.anchor_text = docmodel::plain_text(page.tree);
    out.blocks.assign(page.tree.blocks().begin(), page.tree.blocks().end());
    if (config.augment) {
      out.augmentation = sample_augmentation(config.augmentation, derive_stream_seed(entry.seed, 2));
      out.image = augment(page.image, out.augmentation, derive_stream_seed(entry.seed, 3), render.paper_color);
    } else {
      out.image = std::move(page.image);
    }
  } catch (const Error& e) {
    entry.status = "failed";
    entry.error = e.what();
    entry.anchor_text.reset();
    out.blocks.clear();
    out.ground_truth.clear();
    out.augmentation = {};
    out.image = Image();
  }
  return out;
}

CorpusManifest generate_corpus(const GenerationConfig& config, const std::filesystem::path& out_dir, unsigned jobs) {
  if (config.samples == 0) throw Error(ErrorCode::PreconditionFailed, "sample count must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  std::filesystem::create_directories(out_dir / "gt", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

  CorpusManifest manifest;
  manifest.base_dir = out_dir;
  manifest.config_fingerprint = config.fingerprint;
  manifest.entries.resize(config.samples);

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, config.samples));
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.samples) return;
      try {
        GeneratedSample sample = generate_sample(config, i);
        if (!sample.entry.failed()) {
          write_png(sample.image, out_dir / sample.entry.image_path);
          write_text_file(out_dir / sample.entry.gt_path, sample.ground_truth);
        }
        manifest.entries[i] = std::move(sample.entry);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(config.samples);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  write_text_file(out_dir / "manifest.jsonl", serialize_manifest(manifest));
  return manifest;
}

}  // namespace docforge::synth
