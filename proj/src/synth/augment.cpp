#include "docforge/synth/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "docforge/core/error.hpp"
#include "docforge/core/rng.hpp"

namespace docforge::synth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::array<std::string_view, kAugOpKinds> kOpNames{
    "gaussian_blur", "additive_noise", "block_quantization", "illumination_gradient", "perspective_warp",
    "salt_pepper"};

// Valid parameter interval per op kind.
constexpr std::array<std::array<double, 2>, kAugOpKinds> kValidRanges{
    {{0.3, 1.5}, {2.0, 12.0}, {1.0, 4.0}, {0.05, 0.3}, {0.0, 2.0}, {0.0, 0.5}}};

// Application order used by sample_augmentation, indexed by op kind.
constexpr std::array<int, kAugOpKinds> kPipelineRank{2, 3, 5, 1, 0, 4};

double parameter_of(const AugOp& op) {
  return std::visit(overloaded{
                        [](const GaussianBlur& o) { return o.sigma; },
                        [](const AdditiveNoise& o) { return o.sigma; },
                        [](const BlockQuantization& o) { return o.strength; },
                        [](const IlluminationGradient& o) { return o.amplitude; },
                        [](const PerspectiveWarp& o) { return o.max_shift_pct; },
                        [](const SaltPepper& o) { return o.rate_pct; },
                    },
                    op);
}

AugOp make_op(std::size_t kind, double value) {
  switch (kind) {
    case 0: return GaussianBlur{value};
    case 1: return AdditiveNoise{value};
    case 2: return BlockQuantization{value};
    case 3: return IlluminationGradient{value};
    case 4: return PerspectiveWarp{value};
    default: return SaltPepper{value};
  }
}

struct Planes {
  int width = 0;
  int height = 0;
  std::array<Plane, 3> rgb;
};

Planes to_planes(const Image& image) {
  Planes p;
  p.width = image.width();
  p.height = image.height();
  const std::size_t n = static_cast<std::size_t>(p.width) * p.height;
  for (auto& plane : p.rgb) plane = Plane{p.width, p.height, std::vector<float>(n)};
  const auto bytes = image.bytes();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) p.rgb[c].values[i] = bytes[i * 3 + c];
  }
  return p;
}

Image to_image(const Planes& p) {
  Image image(p.width, p.height);
  auto bytes = image.bytes();
  const std::size_t n = static_cast<std::size_t>(p.width) * p.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const float v = std::clamp(p.rgb[c].values[i], 0.0f, 255.0f);
      bytes[i * 3 + c] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return image;
}

void apply_noise(Planes& p, double sigma, Rng& rng) {
  // Box-Muller, using both outputs of each transform.
  const std::size_t n = p.rgb[0].values.size();
  for (auto& plane : p.rgb) {
    for (std::size_t i = 0; i < n; i += 2) {
      double u1 = rng.uniform();
      while (u1 <= 0.0) u1 = rng.uniform();
      const double r = std::sqrt(-2.0 * std::log(u1)) * sigma;
      const double t = 2.0 * std::numbers::pi * rng.uniform();
      plane.values[i] += static_cast<float>(r * std::cos(t));
      if (i + 1 < n) plane.values[i + 1] += static_cast<float>(r * std::sin(t));
    }
  }
}

void apply_quantization(Planes& p, double strength) {
  const float alpha = static_cast<float>(strength / 8.0);
  for (int by = 0; by < p.height; by += 8) {
    for (int bx = 0; bx < p.width; bx += 8) {
      const int x1 = std::min(bx + 8, p.width);
      const int y1 = std::min(by + 8, p.height);
      double sum = 0.0;
      for (int y = by; y < y1; ++y) {
        for (int x = bx; x < x1; ++x) {
          sum += 0.299 * p.rgb[0].at(x, y) + 0.587 * p.rgb[1].at(x, y) + 0.114 * p.rgb[2].at(x, y);
        }
      }
      const float mean = static_cast<float>(sum / ((x1 - bx) * (y1 - by)));
      for (int y = by; y < y1; ++y) {
        for (int x = bx; x < x1; ++x) {
          const float luma = 0.299f * p.rgb[0].at(x, y) + 0.587f * p.rgb[1].at(x, y) + 0.114f * p.rgb[2].at(x, y);
          // Equal shifts of R, G and B move luma by the same amount and keep chroma.
          const float delta = alpha * (mean - luma);
          for (auto& plane : p.rgb) plane.at(x, y) += delta;
        }
      }
    }
  }
}

void apply_illumination(Planes& p, double amplitude, Rng& rng) {
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  double lo = 1e300;
  double hi = -1e300;
  for (double cx : {0.0, static_cast<double>(p.width)}) {
    for (double cy : {0.0, static_cast<double>(p.height)}) {
      lo = std::min(lo, cx * dx + cy * dy);
      hi = std::max(hi, cx * dx + cy * dy);
    }
  }
  const double span = hi - lo > 0.0 ? hi - lo : 1.0;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const double g = ((x + 0.5) * dx + (y + 0.5) * dy - lo) / span;
      const auto factor = static_cast<float>(1.0 - amplitude * std::clamp(g, 0.0, 1.0));
      for (auto& plane : p.rgb) plane.at(x, y) *= factor;
    }
  }
}

/// Solves the 8 homography coefficients mapping from[i] -> to[i].
std::array<double, 9> homography(const std::array<std::array<double, 2>, 4>& from,
                                 const std::array<std::array<double, 2>, 4>& to) {
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = from[i][0], y = from[i][1], u = to[i][0], v = to[i][1];
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x, r0[1] = y, r0[2] = 1, r0[6] = -u * x, r0[7] = -u * y, r0[8] = u;
    r1[3] = x, r1[4] = y, r1[5] = 1, r1[6] = -v * x, r1[7] = -v * y, r1[8] = v;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    for (int k = 0; k < 9; ++k) std::swap(a[col][k], a[pivot][k]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < 9; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::array<double, 9> h{};
  for (int i = 0; i < 8; ++i) h[static_cast<std::size_t>(i)] = a[i][8] / a[i][i];
  h[8] = 1.0;
  return h;
}

void apply_warp(Planes& p, const std::array<std::array<double, 2>, 4>& dest, Rgb paper) {
  const double w = p.width;
  const double h = p.height;
  const std::array<std::array<double, 2>, 4> src{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  const auto m = homography(dest, src);  // output position -> source position
  const std::array<float, 3> fill{static_cast<float>(paper.r), static_cast<float>(paper.g),
                                  static_cast<float>(paper.b)};
  Planes out = p;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const double ox = x + 0.5;
      const double oy = y + 0.5;
      const double d = m[6] * ox + m[7] * oy + m[8];
      const double sx = (m[0] * ox + m[1] * oy + m[2]) / d;
      const double sy = (m[3] * ox + m[4] * oy + m[5]) / d;
      if (sx < 0.0 || sy < 0.0 || sx > w || sy > h) {
        for (std::size_t c = 0; c < 3; ++c) out.rgb[c].at(x, y) = fill[c];
        continue;
      }
      const double fx = std::clamp(sx - 0.5, 0.0, w - 1.0);
      const double fy = std::clamp(sy - 0.5, 0.0, h - 1.0);
      const int x0 = static_cast<int>(fx);
      const int y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, p.width - 1);
      const int y1 = std::min(y0 + 1, p.height - 1);
      const auto tx = static_cast<float>(fx - x0);
      const auto ty = static_cast<float>(fy - y0);
      for (std::size_t c = 0; c < 3; ++c) {
        const Plane& s = p.rgb[c];
        const float top = s.at(x0, y0) + (s.at(x1, y0) - s.at(x0, y0)) * tx;
        const float bottom = s.at(x0, y1) + (s.at(x1, y1) - s.at(x0, y1)) * tx;
        out.rgb[c].at(x, y) = top + (bottom - top) * ty;
      }
    }
  }
  p = std::move(out);
}

void apply_salt_pepper(Planes& p, double rate_pct, Rng& rng) {
  const double rate = rate_pct / 100.0;
  const std::size_t n = static_cast<std::size_t>(p.width) * p.height;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rng.bernoulli(rate)) continue;
    const float v = rng.bernoulli(0.5) ? 255.0f : 0.0f;
    for (auto& plane : p.rgb) plane.values[i] = v;
  }
}

}  // namespace

std::string_view op_name(std::size_t kind) noexcept { return kind < kAugOpKinds ? kOpNames[kind] : "unknown"; }
std::string_view op_name(const AugOp& op) noexcept { return op_name(op.index()); }

void validate(const AugmentationSpec& spec) {
  if (spec.ops.size() > 4) throw Error(ErrorCode::InvalidSpec, "more than 4 augmentation ops");
  for (const auto& op : spec.ops) {
    const auto& range = kValidRanges[op.index()];
    const double v = parameter_of(op);
    if (!(v >= range[0] && v <= range[1])) {
      throw Error(ErrorCode::InvalidSpec, std::string(op_name(op)) + " parameter " + std::to_string(v) +
                                              " outside [" + std::to_string(range[0]) + ", " +
                                              std::to_string(range[1]) + "]");
    }
  }
}

Plane gaussian_blur(const Plane& plane, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const int w = plane.width;
  const int h = plane.height;
  const std::size_t taps = kernel.size();
  Plane tmp{w, h, std::vector<float>(plane.values.size())};
  std::vector<double> row(static_cast<std::size_t>(w + 2 * radius));
  for (int y = 0; y < h; ++y) {
    for (int x = -radius; x < w + radius; ++x) row[static_cast<std::size_t>(x + radius)] = plane.at(std::clamp(x, 0, w - 1), y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      const double* src = &row[static_cast<std::size_t>(x)];
      for (std::size_t k = 0; k < taps; ++k) acc += kernel[k] * src[k];
      tmp.at(x, y) = static_cast<float>(acc);
    }
  }
  Plane out{w, h, std::vector<float>(plane.values.size())};
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int k = -radius; k <= radius; ++k) {
      const double weight = kernel[static_cast<std::size_t>(k + radius)];
      const float* src = &tmp.values[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w];
      for (int x = 0; x < w; ++x) acc[static_cast<std::size_t>(x)] += weight * src[x];
    }
    for (int x = 0; x < w; ++x) out.at(x, y) = static_cast<float>(acc[static_cast<std::size_t>(x)]);
  }
  return out;
}

std::array<std::array<double, 2>, 4> warp_corners(const PerspectiveWarp& op, int width, int height,
                                                  std::uint64_t seed, std::size_t op_index) {
  Rng rng(derive_stream_seed(seed, op_index));
  const double sx = op.max_shift_pct / 100.0 * width;
  const double sy = op.max_shift_pct / 100.0 * height;
  const double w = width;
  const double h = height;
  std::array<std::array<double, 2>, 4> corners{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  for (auto& c : corners) {
    c[0] += rng.uniform(-sx, sx);
    c[1] += rng.uniform(-sy, sy);
  }
  return corners;
}

Image augment(const Image& image, const AugmentationSpec& spec, std::uint64_t seed, Rgb paper) {
  validate(spec);
  if (spec.ops.empty() || image.empty()) return image;
  Planes planes = to_planes(image);
  for (std::size_t i = 0; i < spec.ops.size(); ++i) {
    Rng rng(derive_stream_seed(seed, i));
    std::visit(overloaded{
                   [&](const GaussianBlur& o) {
                     for (auto& plane : planes.rgb) plane = gaussian_blur(plane, o.sigma);
                   },
                   [&](const AdditiveNoise& o) { apply_noise(planes, o.sigma, rng); },
                   [&](const BlockQuantization& o) { apply_quantization(planes, o.strength); },
                   [&](const IlluminationGradient& o) { apply_illumination(planes, o.amplitude, rng); },
                   [&](const PerspectiveWarp& o) {
                     apply_warp(planes, warp_corners(o, planes.width, planes.height, seed, i), paper);
                   },
                   [&](const SaltPepper& o) { apply_salt_pepper(planes, o.rate_pct, rng); },
               },
               spec.ops[i]);
  }
  return to_image(planes);
}

void validate(const AugmentationPolicy& policy) {
  auto fail = [](const std::string& message) { throw Error(ErrorCode::InvalidSpec, message); };
  if (!(policy.fraction >= 0.0 && policy.fraction <= 1.0)) fail("augment fraction outside [0, 1]");
  if (policy.max_ops < 1 || policy.max_ops > 4) fail("max_ops outside [1, 4]");
  for (std::size_t kind : policy.enabled) {
    if (kind >= kAugOpKinds) fail("unknown augmentation op index");
    if (std::count(policy.enabled.begin(), policy.enabled.end(), kind) > 1) fail("augmentation op listed twice");
  }
  for (std::size_t k = 0; k < kAugOpKinds; ++k) {
    const auto& r = policy.ranges[k];
    if (!(r[0] <= r[1] && r[0] >= kValidRanges[k][0] && r[1] <= kValidRanges[k][1])) {
      fail(std::string(kOpNames[k]) + " range outside its valid interval");
    }
  }
}

AugmentationSpec sample_augmentation(const AugmentationPolicy& policy, std::uint64_t seed) {
  validate(policy);
  AugmentationSpec spec;
  Rng rng(seed);
  if (policy.enabled.empty() || !rng.bernoulli(policy.fraction)) return spec;
  const auto limit = static_cast<std::int64_t>(std::min(policy.max_ops, policy.enabled.size()));
  const auto count = static_cast<std::size_t>(rng.between(1, limit));
  std::vector<std::size_t> kinds = policy.enabled;
  rng.shuffle(kinds);
  kinds.resize(count);
  std::sort(kinds.begin(), kinds.end(), [](std::size_t a, std::size_t b) { return kPipelineRank[a] < kPipelineRank[b]; });
  for (std::size_t kind : kinds) {
    const auto& r = policy.ranges[kind];
    spec.ops.push_back(make_op(kind, rng.uniform(r[0], r[1])));
  }
  return spec;
}

}  // namespace docforge::synth
