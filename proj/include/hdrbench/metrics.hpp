#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdrbench/yuv_io.hpp"

namespace hdrbench::metrics {

// Per-frame PSNR of identical frames. Kept verbatim in per-frame series and
// replaced by a finite cap only when pooling.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultPsnrCapDb = 100.0;

struct MetricSeries {
  std::string metric_id;
  std::vector<double> per_frame;
  double summary = 0.0;
  // Number of video frames the series describes. For "ti" the series holds
  // frame_count - 1 entries; for summary-only imports it is 0.
  std::size_t frame_count = 0;
};

// nominal: 2^bd - 1 (1023 at 10 bit). paper: 2^bd (1024 at 10 bit).
enum class PeakMode { kNominal, kPaper };

struct PeakConvention {
  PeakMode mode = PeakMode::kNominal;
  int bit_depth = 10;

  double value() const;
  static PeakConvention parse(const std::string& name, int bit_depth = 10);
  std::string name() const { return mode == PeakMode::kNominal ? "nominal" : "paper"; }
};

double mse_plane(const Plane& a, const Plane& b);

// Luma PSNR in dB; kInfinitePsnr when the planes are identical.
double psnr_frame(const PlanarFrame& ref, const PlanarFrame& dist, const PeakConvention& peak);
double psnr_plane(const Plane& ref, const Plane& dist, double peak_value);

// Arithmetic mean with +inf entries replaced by cap.
double mean_capped(std::span<const double> values, double cap);

struct PsnrVideo {
  MetricSeries y;  // "psnr_y", the headline value
  MetricSeries u;  // "psnr_u"
  MetricSeries v;  // "psnr_v"
};

PsnrVideo psnr_video_planes(YuvReader& ref, YuvReader& dist, const PeakConvention& peak,
                            double cap_db = kDefaultPsnrCapDb);
MetricSeries psnr_video(YuvReader& ref, YuvReader& dist, const PeakConvention& peak,
                        double cap_db = kDefaultPsnrCapDb);

// Population standard deviation of the Sobel gradient magnitude over the
// luma plane, 1-pixel border excluded. 0 for planes smaller than 3x3.
double spatial_information(const Plane& luma);
// Population standard deviation of cur - prev.
double temporal_information(const Plane& prev, const Plane& cur);

struct SiTi {
  double si = 0.0;
  std::optional<double> ti;  // absent for single-frame input
  MetricSeries si_series;    // "si", one value per frame
  MetricSeries ti_series;    // "ti", frame_count - 1 values
};

// Max-over-frames pooling for both measures, native code values.
SiTi siti_video(YuvReader& stream);

// log2 of the ratio between the upper and lower 1% luma order statistics.
double dr_frame(const PlanarFrame& frame);
double dr_plane(const Plane& luma);
MetricSeries dr_video(YuvReader& stream);

// Reads `frame,value` rows, or a `value` header followed by one summary row.
MetricSeries ingest_external_scores(const std::filesystem::path& csv_path, const std::string& metric_id);

}  // namespace hdrbench::metrics
