#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdrbench {

struct Rational {
  std::int64_t num = 30;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  static Rational parse(const std::string& text);

  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class ChromaFormat { k420 };

// Integer codes as understood by the encoders (ISO/IEC 23091-2 numbering).
// Defaults describe BT.2020 primaries, PQ transfer, BT.2020 NCL, limited range.
struct ColorMeta {
  int primaries = 9;
  int transfer = 16;
  int matrix = 9;
  int range = 1;

  friend bool operator==(const ColorMeta&, const ColorMeta&) = default;
};

struct VideoSpec {
  int width = 0;
  int height = 0;
  int bit_depth = 10;
  ChromaFormat chroma = ChromaFormat::k420;
  Rational frame_rate{};
  std::optional<std::int64_t> frame_count;
  ColorMeta color{};

  // Throws Error(SpecMismatch) when an invariant is broken.
  void validate() const;

  int chroma_width() const { return width / 2; }
  int chroma_height() const { return height / 2; }
  int bytes_per_sample() const { return bit_depth > 8 ? 2 : 1; }
  std::uint16_t max_code() const { return static_cast<std::uint16_t>((1u << bit_depth) - 1u); }
  // ffmpeg pixel format name for the raw layout.
  std::string pix_fmt() const { return bit_depth > 8 ? "yuv420p10le" : "yuv420p"; }

  friend bool operator==(const VideoSpec&, const VideoSpec&) = default;
};

std::size_t frame_byte_size(const VideoSpec& spec);

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> samples;

  Plane() = default;
  Plane(int w, int h, std::uint16_t fill = 0)
      : width(w), height(h), samples(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint16_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return samples.size(); }

  friend bool operator==(const Plane&, const Plane&) = default;
};

struct PlanarFrame {
  Plane y;
  Plane u;
  Plane v;
  int bit_depth = 10;

  static PlanarFrame filled(const VideoSpec& spec, std::uint16_t luma, std::uint16_t chroma);
  bool matches(const VideoSpec& spec) const;

  friend bool operator==(const PlanarFrame&, const PlanarFrame&) = default;
};

struct ReadOptions {
  // Reject 10-bit containers holding values above the bit-depth maximum
  // instead of masking them to the significant bits.
  bool strict_range = false;
};

// Single-reader stream over a headerless planar file. Holds one frame's worth
// of raw bytes as a reusable buffer; decoded frames are handed out by value.
class YuvReader {
 public:
  YuvReader(const std::filesystem::path& path, VideoSpec spec, ReadOptions options = {});

  const VideoSpec& spec() const { return spec_; }
  std::int64_t frame_count() const { return *spec_.frame_count; }
  std::int64_t frames_read() const { return frames_read_; }
  std::uint64_t bytes_consumed() const { return bytes_consumed_; }
  std::size_t buffer_bytes() const { return buffer_.capacity(); }

  std::optional<PlanarFrame> read_frame();

 private:
  std::filesystem::path path_;
  VideoSpec spec_;
  ReadOptions options_;
  std::ifstream in_;
  std::vector<char> buffer_;
  std::int64_t frames_read_ = 0;
  std::uint64_t bytes_consumed_ = 0;
};

class YuvWriter {
 public:
  YuvWriter(const std::filesystem::path& path, VideoSpec spec);

  void write_frame(const PlanarFrame& frame);
  void close();
  std::int64_t frames_written() const { return frames_written_; }

 private:
  std::filesystem::path path_;
  VideoSpec spec_;
  std::ofstream out_;
  std::vector<char> buffer_;
  std::int64_t frames_written_ = 0;
};

// Opens a stream; when spec.frame_count is unset it is derived from the file size.
YuvReader open_sequence(const std::filesystem::path& path, const VideoSpec& spec,
                        ReadOptions options = {});

// Decodes one frame's worth of raw bytes. Exposed for tests and fixtures.
PlanarFrame decode_frame(std::span<const char> bytes, const VideoSpec& spec, ReadOptions options = {});
void encode_frame(const PlanarFrame& frame, const VideoSpec& spec, std::vector<char>& out);

}  // namespace hdrbench
