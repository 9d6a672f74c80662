#include "hdrbench/yuv_io.hpp"

#include <charconv>

#include "hdrbench/error.hpp"

namespace hdrbench {

namespace fs = std::filesystem;

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(const std::string& text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::ParseError, "bad frame rate '" + text + "'");
    }
    return value;
  };
  Rational r;
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    r.num = parse_int(text);
    r.den = 1;
  } else {
    r.num = parse_int(std::string_view(text).substr(0, slash));
    r.den = parse_int(std::string_view(text).substr(slash + 1));
  }
  if (r.num <= 0 || r.den <= 0) throw Error(ErrorCode::InvalidValue, "frame rate must be positive: " + text);
  return r;
}

void VideoSpec::validate() const {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::SpecMismatch, "width and height must be positive");
  }
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::SpecMismatch, "4:2:0 requires even dimensions, got " +
                                             std::to_string(width) + "x" + std::to_string(height));
  }
  if (bit_depth != 8 && bit_depth != 10) {
    throw Error(ErrorCode::SpecMismatch, "bit_depth must be 8 or 10, got " + std::to_string(bit_depth));
  }
  if (frame_rate.num <= 0 || frame_rate.den <= 0) {
    throw Error(ErrorCode::SpecMismatch, "frame_rate must be positive");
  }
  if (frame_count && *frame_count < 0) {
    throw Error(ErrorCode::SpecMismatch, "frame_count must not be negative");
  }
}

std::size_t frame_byte_size(const VideoSpec& spec) {
  const auto luma = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
  const auto chroma = static_cast<std::size_t>(spec.chroma_width()) * static_cast<std::size_t>(spec.chroma_height());
  return (luma + 2 * chroma) * static_cast<std::size_t>(spec.bytes_per_sample());
}

PlanarFrame PlanarFrame::filled(const VideoSpec& spec, std::uint16_t luma, std::uint16_t chroma) {
  PlanarFrame f;
  f.y = Plane(spec.width, spec.height, luma);
  f.u = Plane(spec.chroma_width(), spec.chroma_height(), chroma);
  f.v = Plane(spec.chroma_width(), spec.chroma_height(), chroma);
  f.bit_depth = spec.bit_depth;
  return f;
}

bool PlanarFrame::matches(const VideoSpec& spec) const {
  auto plane_ok = [](const Plane& p, int w, int h) {
    return p.width == w && p.height == h && p.samples.size() == static_cast<std::size_t>(w) * h;
  };
  return bit_depth == spec.bit_depth && plane_ok(y, spec.width, spec.height) &&
         plane_ok(u, spec.chroma_width(), spec.chroma_height()) &&
         plane_ok(v, spec.chroma_width(), spec.chroma_height());
}

namespace {

std::size_t decode_plane(std::span<const char> bytes, std::size_t offset, Plane& plane, int bytes_per_sample,
                         std::uint16_t max_code, bool strict) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data()) + offset;
  const std::size_t n = plane.samples.size();
  if (bytes_per_sample == 1) {
    for (std::size_t i = 0; i < n; ++i) plane.samples[i] = data[i];
    return offset + n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto value = static_cast<std::uint16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    if (value > max_code) {
      if (strict) {
        throw Error(ErrorCode::RangeViolation,
                    "sample value " + std::to_string(value) + " exceeds " + std::to_string(max_code));
      }
      plane.samples[i] = value & max_code;
    } else {
      plane.samples[i] = value;
    }
  }
  return offset + 2 * n;
}

void encode_plane(const Plane& plane, int bytes_per_sample, std::vector<char>& out) {
  if (bytes_per_sample == 1) {
    for (auto s : plane.samples) out.push_back(static_cast<char>(s & 0xFF));
    return;
  }
  for (auto s : plane.samples) {
    out.push_back(static_cast<char>(s & 0xFF));
    out.push_back(static_cast<char>(s >> 8));
  }
}

}  // namespace

PlanarFrame decode_frame(std::span<const char> bytes, const VideoSpec& spec, ReadOptions options) {
  if (bytes.size() != frame_byte_size(spec)) {
    throw Error(ErrorCode::SizeMismatch, "frame buffer has " + std::to_string(bytes.size()) + " bytes, expected " +
                                             std::to_string(frame_byte_size(spec)));
  }
  PlanarFrame f = PlanarFrame::filled(spec, 0, 0);
  const int bps = spec.bytes_per_sample();
  const auto max_code = spec.max_code();
  std::size_t offset = decode_plane(bytes, 0, f.y, bps, max_code, options.strict_range);
  offset = decode_plane(bytes, offset, f.u, bps, max_code, options.strict_range);
  decode_plane(bytes, offset, f.v, bps, max_code, options.strict_range);
  return f;
}

void encode_frame(const PlanarFrame& frame, const VideoSpec& spec, std::vector<char>& out) {
  if (!frame.matches(spec)) {
    throw Error(ErrorCode::SpecMismatch, "frame geometry or bit depth does not match the stream spec");
  }
  const auto max_code = spec.max_code();
  for (const Plane* p : {&frame.y, &frame.u, &frame.v}) {
    for (auto s : p->samples) {
      if (s > max_code) {
        throw Error(ErrorCode::RangeViolation, "sample value " + std::to_string(s) + " exceeds " +
                                                   std::to_string(max_code));
      }
    }
  }
  out.clear();
  out.reserve(frame_byte_size(spec));
  const int bps = spec.bytes_per_sample();
  encode_plane(frame.y, bps, out);
  encode_plane(frame.u, bps, out);
  encode_plane(frame.v, bps, out);
}

YuvReader::YuvReader(const fs::path& path, VideoSpec spec, ReadOptions options)
    : path_(path), spec_(std::move(spec)), options_(options) {
  spec_.validate();
  std::error_code ec;
  const auto size = fs::file_size(path_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot stat " + path_.string() + ": " + ec.message());
  const auto fbs = frame_byte_size(spec_);
  if (!spec_.frame_count) {
    if (size % fbs != 0) {
      throw Error(ErrorCode::SizeMismatch, path_.string() + " holds " + std::to_string(size) +
                                               " bytes, not a multiple of the frame size " + std::to_string(fbs));
    }
    spec_.frame_count = static_cast<std::int64_t>(size / fbs);
  }
  in_.open(path_, std::ios::binary);
  if (!in_) throw Error(ErrorCode::IoError, "cannot open " + path_.string());
  buffer_.resize(fbs);
}

std::optional<PlanarFrame> YuvReader::read_frame() {
  if (frames_read_ >= *spec_.frame_count) return std::nullopt;
  in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got != buffer_.size()) {
    if (in_.bad()) throw Error(ErrorCode::IoError, "read failed on " + path_.string());
    throw Error(ErrorCode::TruncatedFrame, path_.string() + " ends inside frame " + std::to_string(frames_read_) +
                                               " (" + std::to_string(got) + " of " +
                                               std::to_string(buffer_.size()) + " bytes)");
  }
  auto frame = decode_frame(buffer_, spec_, options_);
  ++frames_read_;
  bytes_consumed_ += got;
  return frame;
}

YuvReader open_sequence(const fs::path& path, const VideoSpec& spec, ReadOptions options) {
  return YuvReader(path, spec, options);
}

YuvWriter::YuvWriter(const fs::path& path, VideoSpec spec) : path_(path), spec_(std::move(spec)) {
  spec_.validate();
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::IoError, "cannot open " + path_.string() + " for writing");
}

void YuvWriter::write_frame(const PlanarFrame& frame) {
  encode_frame(frame, spec_, buffer_);
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!out_) throw Error(ErrorCode::IoError, "write failed on " + path_.string());
  ++frames_written_;
}

void YuvWriter::close() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "flush failed on " + path_.string());
  out_.close();
}

}  // namespace hdrbench
