#include "hdrbench/codec.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "hdrbench/error.hpp"

namespace hdrbench {

std::string_view codec_id(Codec codec) {
  switch (codec) {
    case Codec::kH264: return "h264";
    case Codec::kH265: return "h265";
    case Codec::kVp9: return "vp9";
    case Codec::kAv1: return "av1";
  }
  return "?";
}

std::string_view codec_label(Codec codec) {
  switch (codec) {
    case Codec::kH264: return "X264";
    case Codec::kH265: return "X265";
    case Codec::kVp9: return "VP9";
    case Codec::kAv1: return "AV1";
  }
  return "?";
}

std::string_view ffmpeg_encoder(Codec codec) {
  switch (codec) {
    case Codec::kH264: return "libx264";
    case Codec::kH265: return "libx265";
    case Codec::kVp9: return "libvpx-vp9";
    case Codec::kAv1: return "libaom-av1";
  }
  return "?";
}

Codec parse_codec(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "h264" || lower == "x264" || lower == "avc" || lower == "libx264") return Codec::kH264;
  if (lower == "h265" || lower == "x265" || lower == "hevc" || lower == "libx265") return Codec::kH265;
  if (lower == "vp9" || lower == "libvpx-vp9") return Codec::kVp9;
  if (lower == "av1" || lower == "libaom-av1" || lower == "aom") return Codec::kAv1;
  throw Error(ErrorCode::UnknownCodec, "unknown codec '" + std::string(name) + "'");
}

CrfRange crf_range(Codec codec) {
  switch (codec) {
    case Codec::kH264:
    case Codec::kH265: return {0, 51};
    case Codec::kVp9:
    case Codec::kAv1: return {0, 63};
  }
  return {0, 0};
}

}  // namespace hdrbench
