#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrbench/bdrate.hpp"
#include "hdrbench/codec.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/orchestrator.hpp"

namespace hdrbench::report {

inline constexpr int kSchemaVersion = 1;

// One (job, metric) quality observation at its measured bitrate.
struct RdSample {
  std::string codec_id;
  std::string sequence_id;
  std::string mode;  // mode_label
  std::optional<std::int64_t> target_kbps;
  double actual_kbps = 0.0;
  std::string metric_id;
  double quality = 0.0;  // pooled (capped) summary
};

struct AggregateRow {
  std::string codec_id;
  std::string mode;
  std::optional<std::int64_t> target_kbps;
  std::string metric_id;
  std::size_t n = 0;
  double mean = 0.0;
  double ci95_half_width = 0.0;
  double mean_actual_kbps = 0.0;
  std::vector<std::string> sequence_ids;
  std::vector<double> values;
};

// Two-sided 95% Student-t critical value, t(0.975, df).
double t_critical_95(int df);
// t(0.975, n-1) * s / sqrt(n) with s the sample standard deviation.
// Throws InsufficientSamples for n < 2.
double ci95_half_width(std::span<const double> values);

// Groups by (codec, mode, metric); rows sorted by codec order, target rate,
// mode label, metric. Throws InsufficientSamples if any group has n < 2.
std::vector<AggregateRow> aggregate_rd(std::span<const RdSample> samples);

struct TraceRow {
  std::size_t frame = 0;  // 0-based
  double value = 0.0;     // may be +inf
  std::optional<bool> is_iframe_boundary;  // unset without a fixed GOP
};

std::vector<TraceRow> frame_trace(const metrics::MetricSeries& series, std::optional<int> gop);
// Per-index mean across series (infinite values capped); index i averages the
// series long enough to have it.
std::vector<double> mean_trace(std::span<const metrics::MetricSeries> series, double cap);

// An ordered codec comparison, reported with negative = `first` better.
struct CodecPair {
  Codec first;
  Codec second;
  std::string column() const;  // e.g. "av1_vs_vp9"
};

// AV1 vs VP9, AV1 vs X264, AV1 vs X265, X264 vs VP9, X265 vs VP9, X265 vs X264,
// restricted to pairs whose codecs are both in `codecs`.
std::vector<CodecPair> comparison_pairs(std::span<const std::string> codecs);

struct BdMatrix {
  std::string metric_id;
  std::vector<CodecPair> pairs;
  std::vector<std::string> sequences;
  // values[s][p] = bd_quality(second, first) for sequence s, pair p.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bd::BdResult>> details;
  std::vector<double> average;  // arithmetic mean per column, finite cells only
  std::vector<std::string> warnings;  // cells left as nan (no overlap, degenerate curve)
};

// Curves of one metric across sequences and codecs. Throws MissingCurve
// naming the first (sequence, codec) hole.
BdMatrix bd_matrix(std::span<const bd::RdCurve> curves, const std::string& metric_id,
                   std::span<const CodecPair> pairs);

struct BitrateDiffRow {
  std::string codec_id;
  std::string sequence_id;
  std::int64_t target_kbps = 0;
  std::optional<double> actual_kbps;
  std::optional<double> diff_kbps;
  std::string status;  // ok | failed | skipped
};

struct BitrateDiffTable {
  std::vector<BitrateDiffRow> rows;
  std::map<std::string, double> codec_mean;  // over ok rows
};

// CBR results only; CRF results are ignored.
BitrateDiffTable bitrate_diff_table(std::span<const EncodeResult> results);

// File writers. Every file starts with a "# hdrbench:<schema> v1" line.
void write_rd_points(const std::filesystem::path& path, std::span<const RdSample> samples);
void write_rd_aggregate(const std::filesystem::path& path, std::span<const AggregateRow> rows);
void write_frame_trace(const std::filesystem::path& path, std::span<const std::string> sequence_ids,
                       std::span<const metrics::MetricSeries> series, std::optional<int> gop, double cap);
void write_bd_matrix(const std::filesystem::path& path, const BdMatrix& matrix);
void write_bitrate_diff(const std::filesystem::path& path, const BitrateDiffTable& table);

struct ComplexityRow {
  std::string sequence_id;
  std::size_t frames = 0;
  std::optional<double> si;
  std::optional<double> ti;  // absent for single-frame clips
  std::optional<double> dr;
};

// siti.csv: sequence_id,frames,si,ti. dr.csv: sequence_id,frames,dr.
void write_siti(const std::filesystem::path& path, std::span<const ComplexityRow> rows);
void write_dr(const std::filesystem::path& path, std::span<const ComplexityRow> rows);

// Column layouts, for validation by consumers and tests.
const std::vector<std::string>& rd_points_header();
const std::vector<std::string>& rd_aggregate_header();
const std::vector<std::string>& frame_trace_header();
const std::vector<std::string>& bitrate_diff_header();
std::vector<std::string> bd_matrix_header(std::span<const CodecPair> pairs);

// Validates any report CSV in `dir` against its schema. Returns the number of
// files checked; throws ParseError on the first violation.
std::size_t validate_report_dir(const std::filesystem::path& dir);

struct ReportInputs {
  std::vector<EncodeResult> results;  // ledger records
  std::filesystem::path metric_dir;
  std::vector<std::string> codecs;  // configured order, canonical ids
  double psnr_cap_db = metrics::kDefaultPsnrCapDb;
  std::string peak = "nominal";
};

struct ReportOutcome {
  std::vector<std::string> files;
  std::vector<std::string> problems;  // e.g. MissingCurve, too few sequences
};

// RD samples for every ok job with stored metrics; sorted deterministically.
std::vector<RdSample> collect_rd_samples(const ReportInputs& inputs);
// CBR curves per (sequence, codec, metric) from samples.
std::vector<bd::RdCurve> build_curves(std::span<const RdSample> samples, const std::string& metric_id);

// Only the BD matrices (the `bdrate` subcommand).
ReportOutcome write_bd_reports(const ReportInputs& inputs, const std::filesystem::path& out_dir);
// Every report artifact plus summary.json. CSV output is a pure function of
// the inputs; the only time-dependent field is summary.json metadata.
ReportOutcome write_full_report(const ReportInputs& inputs, const std::filesystem::path& out_dir);

}  // namespace hdrbench::report
