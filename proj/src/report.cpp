#include "hdrbench/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "hdrbench/csv.hpp"
#include "hdrbench/error.hpp"
#include "hdrbench/metric_store.hpp"

namespace hdrbench::report {

namespace fs = std::filesystem;
using metrics::MetricSeries;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int codec_rank(const std::string& id) {
  try {
    return static_cast<int>(parse_codec(id));
  } catch (const Error&) {
    return 100;
  }
}

// CBR sorts before CRF; within each by numeric rate/value.
std::tuple<int, std::int64_t, std::string> mode_key(const std::string& mode, std::optional<std::int64_t> target) {
  if (target) return {0, *target, mode};
  std::int64_t value = 0;
  if (mode.rfind("crf", 0) == 0) {
    try {
      value = std::stoll(mode.substr(3));
    } catch (const std::exception&) {
    }
  }
  return {1, value, mode};
}

std::string int_field(std::optional<std::int64_t> v) { return v ? std::to_string(*v) : std::string(); }

class CsvFile {
 public:
  CsvFile(const fs::path& path, std::string_view schema, std::string_view note, const std::vector<std::string>& header)
      : path_(path), tmp_(path.string() + ".tmp") {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCode::IoError, "cannot write " + tmp_.string());
    out_ << csv::schema_line(schema, kSchemaVersion, note) << '\n' << csv::join(header) << '\n';
  }

  void row(const std::vector<std::string>& fields) { out_ << csv::join(fields) << '\n'; }

  void commit() {
    out_.close();
    if (!out_) throw Error(ErrorCode::IoError, "write failed: " + tmp_.string());
    fs::rename(tmp_, path_);
  }

 private:
  fs::path path_;
  fs::path tmp_;
  std::ofstream out_;
};

struct GroupKey {
  int codec_rank;
  std::tuple<int, std::int64_t, std::string> mode;
  std::string metric_id;
  auto operator<=>(const GroupKey&) const = default;
};

std::map<GroupKey, std::vector<const RdSample*>> group_samples(std::span<const RdSample> samples) {
  std::map<GroupKey, std::vector<const RdSample*>> groups;
  for (const auto& s : samples) {
    groups[{codec_rank(s.codec_id), mode_key(s.mode, s.target_kbps), s.metric_id}].push_back(&s);
  }
  return groups;
}

AggregateRow make_row(const std::vector<const RdSample*>& group) {
  AggregateRow row;
  const RdSample& first = *group.front();
  row.codec_id = first.codec_id;
  row.mode = first.mode;
  row.target_kbps = first.target_kbps;
  row.metric_id = first.metric_id;
  row.n = group.size();
  std::vector<double> rates;
  for (const auto* s : group) {
    row.sequence_ids.push_back(s->sequence_id);
    row.values.push_back(s->quality);
    rates.push_back(s->actual_kbps);
  }
  row.mean = bd::mean(row.values);
  row.ci95_half_width = ci95_half_width(row.values);
  row.mean_actual_kbps = bd::mean(rates);
  return row;
}

bool is_cbr_mode(const std::string& mode) { return mode.rfind("cbr", 0) == 0; }

}  // namespace

double t_critical_95(int df) {
  if (df < 1) throw Error(ErrorCode::InsufficientSamples, "t quantile needs df >= 1");
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

double ci95_half_width(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientSamples, "confidence interval needs at least 2 values, got " + std::to_string(n));
  }
  const double m = bd::mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  return t_critical_95(static_cast<int>(n - 1)) * s / std::sqrt(static_cast<double>(n));
}

std::vector<AggregateRow> aggregate_rd(std::span<const RdSample> samples) {
  std::vector<AggregateRow> rows;
  for (const auto& [key, group] : group_samples(samples)) {
    if (group.size() < 2) {
      const RdSample& s = *group.front();
      throw Error(ErrorCode::InsufficientSamples,
                  s.codec_id + " " + s.mode + " " + s.metric_id + " has a single sequence");
    }
    rows.push_back(make_row(group));
  }
  return rows;
}

std::vector<TraceRow> frame_trace(const MetricSeries& series, std::optional<int> gop) {
  std::vector<TraceRow> rows;
  rows.reserve(series.per_frame.size());
  for (std::size_t i = 0; i < series.per_frame.size(); ++i) {
    TraceRow r;
    r.frame = i;
    r.value = series.per_frame[i];
    if (gop && *gop > 0) r.is_iframe_boundary = i % static_cast<std::size_t>(*gop) == 0;
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> mean_trace(std::span<const MetricSeries> series, double cap) {
  std::size_t length = 0;
  for (const auto& s : series) length = std::max(length, s.per_frame.size());
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<double> column;
    for (const auto& s : series) {
      if (i < s.per_frame.size()) column.push_back(s.per_frame[i]);
    }
    out[i] = metrics::mean_capped(column, cap);
  }
  return out;
}

std::string CodecPair::column() const {
  return std::string(codec_id(first)) + "_vs_" + std::string(codec_id(second));
}

std::vector<CodecPair> comparison_pairs(std::span<const std::string> codecs) {
  static const CodecPair kPairs[] = {
      {Codec::kAv1, Codec::kVp9},  {Codec::kAv1, Codec::kH264}, {Codec::kAv1, Codec::kH265},
      {Codec::kH264, Codec::kVp9}, {Codec::kH265, Codec::kVp9}, {Codec::kH265, Codec::kH264},
  };
  std::set<Codec> have;
  for (const auto& c : codecs) have.insert(parse_codec(c));
  std::vector<CodecPair> out;
  for (const auto& p : kPairs) {
    if (have.count(p.first) && have.count(p.second)) out.push_back(p);
  }
  return out;
}

BdMatrix bd_matrix(std::span<const bd::RdCurve> curves, const std::string& metric_id,
                   std::span<const CodecPair> pairs) {
  BdMatrix m;
  m.metric_id = metric_id;
  m.pairs.assign(pairs.begin(), pairs.end());
  std::map<std::pair<std::string, Codec>, const bd::RdCurve*> index;
  std::set<std::string> sequences;
  for (const auto& c : curves) {
    if (c.metric_id != metric_id) continue;
    index[{c.sequence_id, parse_codec(c.codec_id)}] = &c;
    sequences.insert(c.sequence_id);
  }
  m.sequences.assign(sequences.begin(), sequences.end());

  for (const auto& seq : m.sequences) {
    for (const auto& p : m.pairs) {
      for (Codec c : {p.first, p.second}) {
        if (!index.count({seq, c})) {
          throw Error(ErrorCode::MissingCurve,
                      seq + " has no " + std::string(codec_id(c)) + " curve for " + metric_id);
        }
      }
    }
  }

  for (const auto& seq : m.sequences) {
    std::vector<double> row;
    std::vector<bd::BdResult> details;
    for (const auto& p : m.pairs) {
      // Reported as "first vs second": negative when `first` is better.
      const auto& a = *index.at({seq, p.second});
      const auto& b = *index.at({seq, p.first});
      try {
        auto r = bd::bd_quality(a, b);
        row.push_back(r.bd_quality_db.value_or(kNaN));
        details.push_back(std::move(r));
      } catch (const Error& e) {
        row.push_back(kNaN);
        bd::BdResult r;
        r.codec_a = a.codec_id;
        r.codec_b = b.codec_id;
        r.sequence_id = seq;
        r.metric_id = metric_id;
        details.push_back(std::move(r));
        m.warnings.push_back(seq + " " + p.column() + ": " + e.what());
      }
    }
    m.values.push_back(std::move(row));
    m.details.push_back(std::move(details));
  }

  m.average.assign(m.pairs.size(), kNaN);
  for (std::size_t j = 0; j < m.pairs.size(); ++j) {
    std::vector<double> column;
    for (const auto& row : m.values) {
      if (std::isfinite(row[j])) column.push_back(row[j]);
    }
    if (!column.empty()) m.average[j] = bd::mean(column);
  }
  return m;
}

BitrateDiffTable bitrate_diff_table(std::span<const EncodeResult> results) {
  BitrateDiffTable t;
  for (const auto& r : results) {
    if (!r.job.is_cbr()) continue;
    BitrateDiffRow row;
    row.codec_id = std::string(codec_id(r.job.codec));
    row.sequence_id = r.job.sequence_id;
    row.target_kbps = *r.job.target_kbps();
    row.status = std::string(to_string(r.status));
    if (r.status == JobStatus::kOk && r.actual_bitrate_kbps) {
      row.actual_kbps = r.actual_bitrate_kbps;
      row.diff_kbps = r.bitrate_diff_kbps ? *r.bitrate_diff_kbps
                                          : *r.actual_bitrate_kbps - static_cast<double>(row.target_kbps);
    }
    t.rows.push_back(std::move(row));
  }
  std::sort(t.rows.begin(), t.rows.end(), [](const BitrateDiffRow& a, const BitrateDiffRow& b) {
    return std::tuple(codec_rank(a.codec_id), a.sequence_id, a.target_kbps) <
           std::tuple(codec_rank(b.codec_id), b.sequence_id, b.target_kbps);
  });
  std::map<std::string, std::vector<double>> by_codec;
  for (const auto& row : t.rows) {
    if (row.diff_kbps) by_codec[row.codec_id].push_back(*row.diff_kbps);
  }
  for (const auto& [codec, diffs] : by_codec) t.codec_mean[codec] = bd::mean(diffs);
  return t;
}

const std::vector<std::string>& rd_points_header() {
  static const std::vector<std::string> h = {"codec_id", "sequence_id", "mode", "target_kbps",
                                             "actual_kbps", "metric_id", "quality"};
  return h;
}

const std::vector<std::string>& rd_aggregate_header() {
  static const std::vector<std::string> h = {"codec_id", "mode", "target_kbps", "metric_id", "n",
                                             "mean", "ci95_half_width", "mean_actual_kbps", "ci_method"};
  return h;
}

const std::vector<std::string>& frame_trace_header() {
  static const std::vector<std::string> h = {"sequence_id", "frame", "value", "is_iframe"};
  return h;
}

const std::vector<std::string>& bitrate_diff_header() {
  static const std::vector<std::string> h = {"codec_id", "sequence_id", "target_kbps", "actual_kbps", "diff_kbps",
                                             "status"};
  return h;
}

std::vector<std::string> bd_matrix_header(std::span<const CodecPair> pairs) {
  std::vector<std::string> h = {"sequence_id"};
  for (const auto& p : pairs) h.push_back(p.column());
  return h;
}

namespace {

const std::vector<std::string>& siti_header() {
  static const std::vector<std::string> h = {"sequence_id", "frames", "si", "ti"};
  return h;
}

const std::vector<std::string>& dr_header() {
  static const std::vector<std::string> h = {"sequence_id", "frames", "dr"};
  return h;
}

}  // namespace

void write_rd_points(const fs::path& path, std::span<const RdSample> samples) {
  CsvFile f(path, "rd_points", "quality is the pooled per-job value; infinite PSNR capped", rd_points_header());
  for (const auto& s : samples) {
    f.row({s.codec_id, s.sequence_id, s.mode, int_field(s.target_kbps), csv::number(s.actual_kbps), s.metric_id,
           csv::number(s.quality)});
  }
  f.commit();
}

void write_rd_aggregate(const fs::path& path, std::span<const AggregateRow> rows) {
  CsvFile f(path, "rd_aggregate", "95% CI half-width from Student-t with df = n - 1", rd_aggregate_header());
  for (const auto& r : rows) {
    f.row({r.codec_id, r.mode, int_field(r.target_kbps), r.metric_id, std::to_string(r.n), csv::number(r.mean),
           csv::number(r.ci95_half_width), csv::number(r.mean_actual_kbps), "student_t"});
  }
  f.commit();
}

void write_frame_trace(const fs::path& path, std::span<const std::string> sequence_ids,
                       std::span<const MetricSeries> series, std::optional<int> gop, double cap) {
  if (sequence_ids.size() != series.size()) {
    throw Error(ErrorCode::DimensionMismatch, "frame trace needs one sequence id per series");
  }
  CsvFile f(path, "frame_trace",
            "frame is 0-based; is_iframe empty without a fixed GOP; MEAN rows average across sequences with inf capped",
            frame_trace_header());
  auto flag = [](const std::optional<bool>& b) { return b ? std::string(*b ? "1" : "0") : std::string(); };
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (const auto& r : frame_trace(series[k], gop)) {
      f.row({sequence_ids[k], std::to_string(r.frame), csv::number(r.value), flag(r.is_iframe_boundary)});
    }
  }
  const auto mean = mean_trace(series, cap);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    std::optional<bool> boundary;
    if (gop && *gop > 0) boundary = i % static_cast<std::size_t>(*gop) == 0;
    f.row({"MEAN", std::to_string(i), csv::number(mean[i]), flag(boundary)});
  }
  f.commit();
}

void write_bd_matrix(const fs::path& path, const BdMatrix& matrix) {
  CsvFile f(path, "bd_matrix",
            "BD-" + matrix.metric_id + " for 'a_vs_b' columns; negative means a is better; last row is the column mean",
            bd_matrix_header(matrix.pairs));
  for (std::size_t s = 0; s < matrix.sequences.size(); ++s) {
    std::vector<std::string> row = {matrix.sequences[s]};
    for (double v : matrix.values[s]) row.push_back(csv::number(v));
    f.row(row);
  }
  std::vector<std::string> avg = {"Average"};
  for (double v : matrix.average) avg.push_back(csv::number(v));
  f.row(avg);
  f.commit();
}

void write_bitrate_diff(const fs::path& path, const BitrateDiffTable& table) {
  CsvFile f(path, "bitrate_diff", "diff_kbps = actual - target; empty for jobs that did not complete",
            bitrate_diff_header());
  for (const auto& r : table.rows) {
    f.row({r.codec_id, r.sequence_id, std::to_string(r.target_kbps), csv::number(r.actual_kbps),
           csv::number(r.diff_kbps), r.status});
  }
  f.commit();
}

void write_siti(const fs::path& path, std::span<const ComplexityRow> rows) {
  CsvFile f(path, "siti", "max-pooled over frames; ti empty for single-frame clips", siti_header());
  for (const auto& r : rows) f.row({r.sequence_id, std::to_string(r.frames), csv::number(r.si), csv::number(r.ti)});
  f.commit();
}

void write_dr(const fs::path& path, std::span<const ComplexityRow> rows) {
  CsvFile f(path, "dr", "log2 stops, mean over frames", dr_header());
  for (const auto& r : rows) f.row({r.sequence_id, std::to_string(r.frames), csv::number(r.dr)});
  f.commit();
}

std::size_t validate_report_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const auto t = csv::read(file);
    auto fail = [&](const std::string& what) { throw Error(ErrorCode::ParseError, file.string() + ": " + what); };
    try {
      if (t.schema == "rd_points") {
        csv::validate(t, "rd_points", kSchemaVersion, rd_points_header(), {"target_kbps", "actual_kbps", "quality"});
      } else if (t.schema == "rd_aggregate") {
        csv::validate(t, "rd_aggregate", kSchemaVersion, rd_aggregate_header(),
                      {"target_kbps", "n", "mean", "ci95_half_width", "mean_actual_kbps"});
      } else if (t.schema == "frame_trace") {
        csv::validate(t, "frame_trace", kSchemaVersion, frame_trace_header(), {"frame", "value"});
        for (const auto& row : t.rows) {
          if (!row[3].empty() && row[3] != "0" && row[3] != "1") fail("is_iframe must be empty, 0 or 1");
        }
      } else if (t.schema == "bd_matrix") {
        if (t.header.empty() || t.header[0] != "sequence_id") fail("first column must be sequence_id");
        std::vector<CodecPair> pairs;
        for (std::size_t i = 1; i < t.header.size(); ++i) {
          const auto& col = t.header[i];
          const auto sep = col.find("_vs_");
          if (sep == std::string::npos) fail("bad column " + col);
          pairs.push_back({parse_codec(col.substr(0, sep)), parse_codec(col.substr(sep + 4))});
        }
        std::vector<std::string> numeric(t.header.begin() + 1, t.header.end());
        csv::validate(t, "bd_matrix", kSchemaVersion, bd_matrix_header(pairs), numeric);
        if (t.rows.empty() || t.rows.back()[0] != "Average") fail("missing Average row");
      } else if (t.schema == "bitrate_diff") {
        csv::validate(t, "bitrate_diff", kSchemaVersion, bitrate_diff_header(),
                      {"target_kbps", "actual_kbps", "diff_kbps"});
      } else if (t.schema == "siti") {
        csv::validate(t, "siti", kSchemaVersion, siti_header(), {"frames", "si", "ti"});
      } else if (t.schema == "dr") {
        csv::validate(t, "dr", kSchemaVersion, dr_header(), {"frames", "dr"});
      } else {
        fail("unknown schema " + t.schema);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError || std::string(e.what()).find(file.string()) == std::string::npos) {
        throw Error(ErrorCode::ParseError, file.string() + ": " + e.what());
      }
      throw;
    }
  }
  return files.size();
}

std::vector<RdSample> collect_rd_samples(const ReportInputs& inputs) {
  MetricStore store(inputs.metric_dir);
  std::vector<RdSample> out;
  for (const auto& r : inputs.results) {
    if (r.status != JobStatus::kOk || !r.actual_bitrate_kbps || !store.has(r.job.job_id)) continue;
    for (const auto& s : store.read(r.job.job_id)) {
      if (!std::isfinite(s.summary)) continue;
      RdSample sample;
      sample.codec_id = std::string(codec_id(r.job.codec));
      sample.sequence_id = r.job.sequence_id;
      sample.mode = mode_label(r.job.mode);
      sample.target_kbps = r.job.target_kbps();
      sample.actual_kbps = *r.actual_bitrate_kbps;
      sample.metric_id = s.metric_id;
      sample.quality = s.summary;
      out.push_back(std::move(sample));
    }
  }
  std::sort(out.begin(), out.end(), [](const RdSample& a, const RdSample& b) {
    return std::tuple(codec_rank(a.codec_id), a.sequence_id, mode_key(a.mode, a.target_kbps), a.metric_id) <
           std::tuple(codec_rank(b.codec_id), b.sequence_id, mode_key(b.mode, b.target_kbps), b.metric_id);
  });
  return out;
}

std::vector<bd::RdCurve> build_curves(std::span<const RdSample> samples, const std::string& metric_id) {
  std::map<std::pair<std::string, int>, bd::RdCurve> curves;
  for (const auto& s : samples) {
    if (s.metric_id != metric_id || !is_cbr_mode(s.mode)) continue;
    auto& c = curves[{s.sequence_id, codec_rank(s.codec_id)}];
    c.codec_id = s.codec_id;
    c.sequence_id = s.sequence_id;
    c.metric_id = metric_id;
    c.points.push_back({s.actual_kbps, s.quality});
  }
  std::vector<bd::RdCurve> out;
  for (auto& [key, c] : curves) {
    std::sort(c.points.begin(), c.points.end(),
              [](const bd::RdPoint& a, const bd::RdPoint& b) { return a.bitrate_kbps < b.bitrate_kbps; });
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::vector<std::string> report_codecs(const ReportInputs& inputs) {
  if (!inputs.codecs.empty()) return inputs.codecs;
  std::set<int> ranks;
  for (const auto& r : inputs.results) ranks.insert(static_cast<int>(r.job.codec));
  std::vector<std::string> out;
  for (int r : ranks) out.emplace_back(codec_id(static_cast<Codec>(r)));
  return out;
}

const std::vector<std::string> kBdMetrics = {"psnr_y", "hdrvqm"};

struct BdStage {
  std::vector<BdMatrix> matrices;
};

BdStage run_bd(const ReportInputs& inputs, std::span<const RdSample> samples, const fs::path& out_dir,
               ReportOutcome& outcome) {
  BdStage stage;
  const auto codecs = report_codecs(inputs);
  const auto pairs = comparison_pairs(codecs);
  if (pairs.empty()) {
    outcome.problems.push_back("bd_matrix: fewer than two comparable codecs");
    return stage;
  }
  for (const auto& metric : kBdMetrics) {
    const auto curves = build_curves(samples, metric);
    if (curves.empty()) continue;
    try {
      auto m = bd_matrix(curves, metric, pairs);
      const fs::path file = out_dir / ("bd_matrix_" + metric + ".csv");
      write_bd_matrix(file, m);
      outcome.files.push_back(file.filename().string());
      for (const auto& w : m.warnings) outcome.problems.push_back("bd_matrix_" + metric + ": " + w);
      stage.matrices.push_back(std::move(m));
    } catch (const Error& e) {
      outcome.problems.push_back("bd_matrix_" + metric + ": " + e.what());
    }
  }
  return stage;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

ReportOutcome write_bd_reports(const ReportInputs& inputs, const fs::path& out_dir) {
  ReportOutcome outcome;
  fs::create_directories(out_dir);
  const auto samples = collect_rd_samples(inputs);
  run_bd(inputs, samples, out_dir, outcome);
  return outcome;
}

ReportOutcome write_full_report(const ReportInputs& inputs, const fs::path& out_dir) {
  ReportOutcome outcome;
  fs::create_directories(out_dir);
  const auto samples = collect_rd_samples(inputs);

  write_rd_points(out_dir / "rd_points.csv", samples);
  outcome.files.push_back("rd_points.csv");

  std::vector<AggregateRow> rows;
  for (const auto& [key, group] : group_samples(samples)) {
    if (group.size() < 2) {
      const RdSample& s = *group.front();
      outcome.problems.push_back("rd_aggregate: " + s.codec_id + " " + s.mode + " " + s.metric_id +
                                 " omitted (InsufficientSamples: n = 1)");
      continue;
    }
    rows.push_back(make_row(group));
  }
  write_rd_aggregate(out_dir / "rd_aggregate.csv", rows);
  outcome.files.push_back("rd_aggregate.csv");

  // Per-frame luma traces, one file per (codec, mode).
  MetricStore store(inputs.metric_dir);
  struct TraceGroup {
    std::vector<std::string> ids;
    std::vector<MetricSeries> series;
    std::optional<int> gop;
  };
  std::map<std::tuple<int, std::tuple<int, std::int64_t, std::string>>, std::pair<std::string, TraceGroup>> traces;
  std::vector<const EncodeResult*> ordered;
  for (const auto& r : inputs.results) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const EncodeResult* a, const EncodeResult* b) {
    return a->job.sequence_id < b->job.sequence_id;
  });
  for (const auto* r : ordered) {
    if (r->status != JobStatus::kOk || !store.has(r->job.job_id)) continue;
    for (auto& s : store.read(r->job.job_id)) {
      if (s.metric_id != "psnr_y" || s.per_frame.empty()) continue;
      const std::string label = mode_label(r->job.mode);
      auto& [name, g] = traces[{static_cast<int>(r->job.codec), mode_key(label, r->job.target_kbps())}];
      name = "frame_trace_" + std::string(codec_id(r->job.codec)) + "_" + label + ".csv";
      g.ids.push_back(r->job.sequence_id);
      g.series.push_back(std::move(s));
      g.gop = r->job.gop;
    }
  }
  for (const auto& [key, entry] : traces) {
    const auto& [name, g] = entry;
    write_frame_trace(out_dir / name, g.ids, g.series, g.gop, inputs.psnr_cap_db);
    outcome.files.push_back(name);
  }

  const auto diff = bitrate_diff_table(inputs.results);
  write_bitrate_diff(out_dir / "bitrate_diff.csv", diff);
  outcome.files.push_back("bitrate_diff.csv");

  const auto bd_stage = run_bd(inputs, samples, out_dir, outcome);

  nlohmann::json summary;
  summary["metadata"] = {
      {"generated_at", utc_timestamp()},
      {"schema_version", kSchemaVersion},
      {"ci_method", "student_t"},
      {"ci_level", 0.95},
      {"psnr_peak", inputs.peak},
      {"psnr_cap_db", inputs.psnr_cap_db},
      {"frame_index_base", 0},
      {"sign_conventions",
       {{"bd_matrix", "column a_vs_b holds BD-quality of b relative to a; negative means a is better"},
        {"bitrate_diff", "actual minus target, kbps"}}},
  };
  std::map<std::string, int> counts = {{"ok", 0}, {"failed", 0}, {"skipped", 0}};
  for (const auto& r : inputs.results) ++counts[std::string(to_string(r.status))];
  summary["jobs"] = counts;

  nlohmann::json bd_avg = nlohmann::json::object();
  nlohmann::json low = nlohmann::json::array();
  for (const auto& m : bd_stage.matrices) {
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t j = 0; j < m.pairs.size(); ++j) cols[m.pairs[j].column()] = number_or_null(m.average[j]);
    bd_avg[m.metric_id] = cols;
    for (std::size_t s = 0; s < m.sequences.size(); ++s) {
      for (std::size_t j = 0; j < m.pairs.size(); ++j) {
        const auto& d = m.details[s][j];
        if (d.low_overlap || !d.bd_quality_db) {
          low.push_back({{"metric_id", m.metric_id},
                         {"sequence_id", m.sequences[s]},
                         {"pair", m.pairs[j].column()},
                         {"overlap_fraction", d.overlap_fraction}});
        }
      }
    }
  }
  summary["bd_average"] = bd_avg;
  summary["bd_low_overlap"] = low;
  nlohmann::json means = nlohmann::json::object();
  for (const auto& [codec, mean] : diff.codec_mean) means[codec] = mean;
  summary["bitrate_diff_mean_kbps"] = means;
  summary["problems"] = outcome.problems;

  {
    const fs::path path = out_dir / "summary.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << summary.dump(2) << '\n';
  }
  outcome.files.push_back("summary.json");
  return outcome;
}

}  // namespace hdrbench::report
