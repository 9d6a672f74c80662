#pragma once

#include <span>
#include <string>
#include <string_view>

namespace hdrbench {

enum class Codec { kH264, kH265, kVp9, kAv1 };

inline constexpr Codec kAllCodecs[] = {Codec::kH264, Codec::kH265, Codec::kVp9, Codec::kAv1};

// Canonical id used in job ids, ledgers and CSVs: h264, h265, vp9, av1.
std::string_view codec_id(Codec codec);
// Display label used in report headers: X264, X265, VP9, AV1.
std::string_view codec_label(Codec codec);
// ffmpeg encoder name: libx264, libx265, libvpx-vp9, libaom-av1.
std::string_view ffmpeg_encoder(Codec codec);

// Accepts canonical ids and the common aliases (x264, avc, libx264, hevc, ...).
// Throws Error(UnknownCodec).
Codec parse_codec(std::string_view name);

// Inclusive CRF range accepted by the codec's encoder.
struct CrfRange {
  int min;
  int max;
};
CrfRange crf_range(Codec codec);

}  // namespace hdrbench
