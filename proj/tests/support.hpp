#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "docforge/core/error.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/synth/config.hpp"

namespace docforge::testing {

/// Code of the docforge::Error thrown by `f`; fails the test when none is.
inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a docforge::Error");
}

inline std::filesystem::path data_dir() { return DOCFORGE_DATA_DIR; }

inline std::filesystem::path default_config_path() { return data_dir() / "configs" / "thai_synthetic.json"; }

inline synth::GenerationConfig load_config(std::size_t samples, std::uint64_t seed) {
  return synth::load_generation_config(default_config_path(), {seed, samples});
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("docforge-" + name + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

// Hand-rolled generators for the property tests.

inline const std::vector<std::string>& thai_syllables() {
  static const std::vector<std::string> s{"กิ", "น", "ข้า", "ว", "น้ำ", "ผู้", "ใหญ่", "ไม้", "เกี๊ยะ", "สวัสดี",
                                          "ครับ", "ค่ะ", "ประเทศ", "ไทย", "ภาษา", "เรียน", "ที่", "๑๒๓"};
  return s;
}

inline const std::vector<std::string>& latin_words() {
  static const std::vector<std::string> w{"report", "table", "Total", "x", "alpha", "beta", "2024", "12.5",
                                          "45%", "data", "(note)", "a,b", "end."};
  return w;
}

inline std::string random_word(Rng& rng) {
  std::string word;
  const auto parts = rng.between(1, 3);
  for (std::int64_t i = 0; i < parts; ++i) {
    if (rng.bernoulli(0.6)) {
      word += thai_syllables()[rng.below(thai_syllables().size())];
    } else {
      word += latin_words()[rng.below(latin_words().size())];
    }
  }
  return word;
}

inline std::string random_line(Rng& rng, int lo, int hi) {
  std::string out;
  const auto n = rng.between(lo, hi);
  for (std::int64_t i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += random_word(rng);
  }
  return out;
}

inline docmodel::Table random_table(Rng& rng) {
  const auto rows = static_cast<std::size_t>(rng.between(1, 5));
  const auto cols = static_cast<std::size_t>(rng.between(1, 4));
  // Occupancy grid so random spans never overlap or leave holes.
  std::vector<std::vector<bool>> used(rows, std::vector<bool>(cols, false));
  docmodel::Table t;
  t.rows.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[r][c]) continue;
      int cs = 1;
      int rs = 1;
      if (rng.bernoulli(0.25)) {
        while (c + cs < cols && !used[r][c + cs] && rng.bernoulli(0.5)) ++cs;
      }
      if (rng.bernoulli(0.25)) {
        while (r + rs < rows && rng.bernoulli(0.5)) {
          bool free = true;
          for (int k = 0; k < cs; ++k) free = free && !used[r + rs][c + k];
          if (!free) break;
          ++rs;
        }
      }
      for (int dr = 0; dr < rs; ++dr) {
        for (int dc = 0; dc < cs; ++dc) used[r + dr][c + dc] = true;
      }
      std::string text = rng.bernoulli(0.1) ? std::string() : random_line(rng, 1, 3);
      t.rows[r].push_back({std::move(text), cs, rs});
    }
  }
  return t;
}

inline docmodel::ContentBlock random_block(Rng& rng) {
  using namespace docmodel;
  switch (rng.below(6)) {
    case 0: return Heading{static_cast<int>(rng.between(1, 6)), random_line(rng, 1, 5)};
    case 1: {
      std::string text = random_line(rng, 1, 12);
      if (rng.bernoulli(0.2)) text += "\n" + random_line(rng, 1, 6);
      return Paragraph{text};
    }
    case 2: return random_table(rng);
    case 3: return Figure{random_line(rng, 2, 8)};
    case 4: {
      static const std::vector<std::string> eq{"E = mc^{2}", "\\frac{a}{b} + c", "\\sum_{i=1}^{n} x_i",
                                               "a^{2} + b^{2} = c^{2}", "\\int_0^1 f(x)\\,dx"};
      std::string src = eq[rng.below(eq.size())];
      if (rng.bernoulli(0.2)) src += "\n" + eq[rng.below(eq.size())];
      return Equation{src};
    }
    default: return ListItem{static_cast<int>(rng.between(0, 4)), random_line(rng, 1, 6)};
  }
}

inline std::vector<docmodel::ContentBlock> random_blocks(Rng& rng, int lo = 1, int hi = 10) {
  std::vector<docmodel::ContentBlock> blocks;
  const auto n = rng.between(lo, hi);
  for (std::int64_t i = 0; i < n; ++i) blocks.push_back(random_block(rng));
  return blocks;
}

}  // namespace docforge::testing
