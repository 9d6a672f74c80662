#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hdrbench/manifest.hpp"
#include "hdrbench/yuv_io.hpp"

namespace testsupport {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "hdrbench") {
    std::random_device rd;
    path_ = fs::temp_directory_path() / (tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    if (!std::getenv("HDRBENCH_KEEP_TMP")) fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline hdrbench::VideoSpec spec(int w, int h, int bit_depth = 10) {
  hdrbench::VideoSpec s;
  s.width = w;
  s.height = h;
  s.bit_depth = bit_depth;
  return s;
}

inline hdrbench::Plane random_plane(int w, int h, std::mt19937& rng, int max_code = 1023) {
  hdrbench::Plane p;
  p.width = w;
  p.height = h;
  std::uniform_int_distribution<int> d(0, max_code);
  p.samples.resize(static_cast<std::size_t>(w) * h);
  for (auto& s : p.samples) s = static_cast<std::uint16_t>(d(rng));
  return p;
}

inline hdrbench::PlanarFrame random_frame(const hdrbench::VideoSpec& s, std::mt19937& rng) {
  hdrbench::PlanarFrame f;
  f.bit_depth = s.bit_depth;
  f.y = random_plane(s.width, s.height, rng, s.max_code());
  f.u = random_plane(s.chroma_width(), s.chroma_height(), rng, s.max_code());
  f.v = random_plane(s.chroma_width(), s.chroma_height(), rng, s.max_code());
  return f;
}

// Moving textured gradient with mild noise; compresses like natural content
// so PSNR rises with bitrate.
inline hdrbench::PlanarFrame synthetic_frame(const hdrbench::VideoSpec& s, int t, int seed, std::mt19937& rng) {
  hdrbench::PlanarFrame f = hdrbench::PlanarFrame::filled(s, 0, 512);
  std::uniform_int_distribution<int> noise(0, 24);
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const double v = 200.0 + 300.0 * std::sin((x + 3.0 * t * (seed + 1)) / 7.0) * std::cos((y - t) / 5.0) +
                       400.0 * x / s.width + noise(rng);
      f.y.samples[static_cast<std::size_t>(y) * s.width + x] =
          static_cast<std::uint16_t>(std::clamp(v, 64.0, 940.0));
    }
  }
  for (int y = 0; y < s.chroma_height(); ++y) {
    for (int x = 0; x < s.chroma_width(); ++x) {
      f.u.samples[static_cast<std::size_t>(y) * s.chroma_width() + x] = static_cast<std::uint16_t>(480 + x * (seed + 1));
      f.v.samples[static_cast<std::size_t>(y) * s.chroma_width() + x] = static_cast<std::uint16_t>(540 - y * (seed + 1));
    }
  }
  return f;
}

inline void write_sequence(const fs::path& path, const hdrbench::VideoSpec& s, int frames, int seed) {
  std::mt19937 rng(static_cast<unsigned>(seed) * 7919u + 1u);
  hdrbench::YuvWriter w(path, s);
  for (int t = 0; t < frames; ++t) w.write_frame(synthetic_frame(s, t, seed, rng));
  w.close();
}

// Manifest of `count` synthetic sequences S0..S<count-1> written into dir.
inline fs::path write_synthetic_dataset(const fs::path& dir, int count, int w, int h, int frames) {
  hdrbench::Manifest m;
  m.dataset_name = "synthetic";
  for (int k = 0; k < count; ++k) {
    hdrbench::ManifestEntry e;
    e.sequence_id = "S" + std::to_string(k);
    e.abbreviation = e.sequence_id;
    e.genre = "synthetic";
    e.spec = spec(w, h);
    e.spec.frame_count = frames;
    e.yuv_path = dir / (e.sequence_id + ".yuv");
    write_sequence(e.yuv_path, e.spec, frames, k);
    m.entries.push_back(e);
  }
  const fs::path manifest = dir / "manifest.json";
  hdrbench::save_manifest(m, manifest);
  return manifest;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace testsupport
