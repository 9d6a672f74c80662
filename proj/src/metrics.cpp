#include "hdrbench/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hdrbench/error.hpp"

namespace hdrbench::metrics {

double PeakConvention::value() const {
  const double full = std::ldexp(1.0, bit_depth);
  return mode == PeakMode::kNominal ? full - 1.0 : full;
}

PeakConvention PeakConvention::parse(const std::string& name, int bit_depth) {
  if (name == "nominal" || name == "nominal_1023") return {PeakMode::kNominal, bit_depth};
  if (name == "paper" || name == "paper_1024") return {PeakMode::kPaper, bit_depth};
  throw Error(ErrorCode::InvalidValue, "unknown peak convention '" + name + "' (expected nominal|paper)");
}

double mse_plane(const Plane& a, const Plane& b) {
  if (a.width != b.width || a.height != b.height || a.samples.size() != b.samples.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                                                  std::to_string(b.width) + "x" + std::to_string(b.height));
  }
  if (a.samples.empty()) throw Error(ErrorCode::DimensionMismatch, "empty plane");
  // Exact integer accumulation; a UHD 10-bit plane peaks near 8.7e12.
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(a.samples[i]) - static_cast<std::int64_t>(b.samples[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.samples.size());
}

double psnr_plane(const Plane& ref, const Plane& dist, double peak_value) {
  const double mse = mse_plane(ref, dist);
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(peak_value * peak_value / mse);
}

double psnr_frame(const PlanarFrame& ref, const PlanarFrame& dist, const PeakConvention& peak) {
  if (ref.bit_depth != dist.bit_depth) throw Error(ErrorCode::DimensionMismatch, "bit depth differs");
  return psnr_plane(ref.y, dist.y, peak.value());
}

double mean_capped(std::span<const double> values, double cap) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::isinf(v) && v > 0 ? cap : v;
  return sum / static_cast<double>(values.size());
}

PsnrVideo psnr_video_planes(YuvReader& ref, YuvReader& dist, const PeakConvention& peak, double cap_db) {
  if (ref.frame_count() != dist.frame_count()) {
    throw Error(ErrorCode::FrameCountMismatch, "reference has " + std::to_string(ref.frame_count()) +
                                                   " frames, distorted has " + std::to_string(dist.frame_count()));
  }
  PsnrVideo out;
  out.y.metric_id = "psnr_y";
  out.u.metric_id = "psnr_u";
  out.v.metric_id = "psnr_v";
  const double peak_value = peak.value();
  while (auto r = ref.read_frame()) {
    auto d = dist.read_frame();
    if (!d) throw Error(ErrorCode::FrameCountMismatch, "distorted stream ended early");
    if (r->bit_depth != d->bit_depth) throw Error(ErrorCode::DimensionMismatch, "bit depth differs");
    out.y.per_frame.push_back(psnr_plane(r->y, d->y, peak_value));
    out.u.per_frame.push_back(psnr_plane(r->u, d->u, peak_value));
    out.v.per_frame.push_back(psnr_plane(r->v, d->v, peak_value));
  }
  for (MetricSeries* s : {&out.y, &out.u, &out.v}) {
    s->frame_count = s->per_frame.size();
    s->summary = mean_capped(s->per_frame, cap_db);
  }
  return out;
}

MetricSeries psnr_video(YuvReader& ref, YuvReader& dist, const PeakConvention& peak, double cap_db) {
  return psnr_video_planes(ref, dist, peak, cap_db).y;
}

namespace {

double population_stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

}  // namespace

double spatial_information(const Plane& luma) {
  const int w = luma.width;
  const int h = luma.height;
  if (w < 3 || h < 3) return 0.0;
  std::vector<double> magnitude;
  magnitude.reserve(static_cast<std::size_t>(w - 2) * (h - 2));
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const int tl = luma.at(x - 1, y - 1), tc = luma.at(x, y - 1), tr = luma.at(x + 1, y - 1);
      const int ml = luma.at(x - 1, y), mr = luma.at(x + 1, y);
      const int bl = luma.at(x - 1, y + 1), bc = luma.at(x, y + 1), br = luma.at(x + 1, y + 1);
      const int gx = (tr + 2 * mr + br) - (tl + 2 * ml + bl);
      const int gy = (bl + 2 * bc + br) - (tl + 2 * tc + tr);
      magnitude.push_back(std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy));
    }
  }
  return population_stddev(magnitude);
}

double temporal_information(const Plane& prev, const Plane& cur) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw Error(ErrorCode::DimensionMismatch, "frame size changed mid-sequence");
  }
  std::vector<double> diff(cur.samples.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = static_cast<double>(cur.samples[i]) - static_cast<double>(prev.samples[i]);
  }
  return population_stddev(diff);
}

SiTi siti_video(YuvReader& stream) {
  SiTi out;
  out.si_series.metric_id = "si";
  out.ti_series.metric_id = "ti";
  std::optional<Plane> prev;
  while (auto frame = stream.read_frame()) {
    out.si_series.per_frame.push_back(spatial_information(frame->y));
    if (prev) out.ti_series.per_frame.push_back(temporal_information(*prev, frame->y));
    prev = std::move(frame->y);
  }
  const auto frames = out.si_series.per_frame.size();
  if (frames == 0) throw Error(ErrorCode::EmptySequence, "SI/TI needs at least one frame");
  out.si_series.frame_count = frames;
  out.ti_series.frame_count = frames;
  out.si = *std::max_element(out.si_series.per_frame.begin(), out.si_series.per_frame.end());
  out.si_series.summary = out.si;
  if (!out.ti_series.per_frame.empty()) {
    out.ti = *std::max_element(out.ti_series.per_frame.begin(), out.ti_series.per_frame.end());
    out.ti_series.summary = *out.ti;
  } else {
    out.ti_series.summary = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double dr_plane(const Plane& luma) {
  const std::size_t n = luma.samples.size();
  if (n < 100) {
    throw Error(ErrorCode::TooFewSamples, "dynamic range needs at least 100 luma samples, got " + std::to_string(n));
  }
  // 1-based order statistics k and n - k with k = floor(n / 100).
  const std::size_t k = n / 100;
  std::vector<std::uint16_t> sorted = luma.samples;
  auto lo_it = sorted.begin() + static_cast<std::ptrdiff_t>(k - 1);
  auto hi_it = sorted.begin() + static_cast<std::ptrdiff_t>(n - k - 1);
  std::nth_element(sorted.begin(), hi_it, sorted.end());
  std::nth_element(sorted.begin(), lo_it, hi_it);
  const double l_min = std::max<double>(*lo_it, 1.0);
  const double l_max = std::max<double>(*hi_it, 1.0);
  return std::log2(l_max / l_min);
}

double dr_frame(const PlanarFrame& frame) { return dr_plane(frame.y); }

MetricSeries dr_video(YuvReader& stream) {
  MetricSeries out;
  out.metric_id = "dr";
  while (auto frame = stream.read_frame()) out.per_frame.push_back(dr_frame(*frame));
  if (out.per_frame.empty()) throw Error(ErrorCode::EmptySequence, "dynamic range needs at least one frame");
  out.frame_count = out.per_frame.size();
  out.summary = std::accumulate(out.per_frame.begin(), out.per_frame.end(), 0.0) /
                static_cast<double>(out.per_frame.size());
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, const std::string& where) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, where + ": '" + std::string(field) + "' is not a number");
  }
  return value;
}

std::int64_t parse_index(std::string_view field, const std::string& where) {
  field = trim(field);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value < 0) {
    throw Error(ErrorCode::ParseError, where + ": '" + std::string(field) + "' is not a frame index");
  }
  return value;
}

}  // namespace

MetricSeries ingest_external_scores(const std::filesystem::path& csv_path, const std::string& metric_id) {
  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + csv_path.string());
  MetricSeries out;
  out.metric_id = metric_id;

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, csv_path.string() + ": empty file");
  const auto header = trim(line);
  const std::string where = csv_path.string();

  if (header == "value") {
    std::optional<double> summary;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      if (summary) throw Error(ErrorCode::ParseError, where + ": summary file holds more than one value");
      summary = parse_real(line, where + ":" + std::to_string(line_no));
    }
    if (!summary) throw Error(ErrorCode::ParseError, where + ": missing summary value");
    out.summary = *summary;
    out.frame_count = 0;
    return out;
  }
  if (header != "frame,value") {
    throw Error(ErrorCode::ParseError, where + ": expected header 'frame,value' or 'value', got '" +
                                           std::string(header) + "'");
  }

  std::optional<std::int64_t> last_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    const std::string loc = where + ":" + std::to_string(line_no);
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::ParseError, loc + ": expected two fields");
    }
    const auto index = parse_index(row.substr(0, comma), loc);
    const auto value = parse_real(row.substr(comma + 1), loc);
    if (last_index && index <= *last_index) {
      throw Error(ErrorCode::NonMonotonicFrameIndex,
                  loc + ": frame " + std::to_string(index) + " after frame " + std::to_string(*last_index));
    }
    last_index = index;
    out.per_frame.push_back(value);
  }
  if (out.per_frame.empty()) throw Error(ErrorCode::ParseError, where + ": no frame rows");
  out.frame_count = out.per_frame.size();
  out.summary = std::accumulate(out.per_frame.begin(), out.per_frame.end(), 0.0) /
                static_cast<double>(out.per_frame.size());
  return out;
}

}  // namespace hdrbench::metrics
