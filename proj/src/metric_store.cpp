#include "hdrbench/metric_store.hpp"

#include <fstream>
#include <limits>

#include "hdrbench/csv.hpp"
#include "hdrbench/error.hpp"

namespace hdrbench {

namespace fs = std::filesystem;
using metrics::MetricSeries;

MetricStore::MetricStore(fs::path dir) : dir_(std::move(dir)) {}

fs::path MetricStore::path_for(const std::string& job_id) const { return dir_ / (job_id + ".csv"); }

bool MetricStore::has(const std::string& job_id) const { return fs::exists(path_for(job_id)); }

void MetricStore::write(const std::string& job_id, const std::vector<MetricSeries>& series) const {
  fs::create_directories(dir_);
  const fs::path final_path = path_for(job_id);
  const fs::path tmp = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << csv::schema_line("job_metrics", kSchemaVersion, "frame is 0-based; 'summary' rows hold the pooled value")
        << '\n';
    out << "metric_id,frame,value\n";
    for (const auto& s : series) {
      for (std::size_t i = 0; i < s.per_frame.size(); ++i) {
        out << csv::join({s.metric_id, std::to_string(i), csv::number(s.per_frame[i])}) << '\n';
      }
      out << csv::join({s.metric_id, "summary", csv::number(s.summary)}) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
  }
  fs::rename(tmp, final_path);
}

std::vector<MetricSeries> MetricStore::read(const std::string& job_id) const {
  const auto table = csv::read(path_for(job_id));
  csv::validate(table, "job_metrics", kSchemaVersion, {"metric_id", "frame", "value"}, {"value"});
  std::vector<MetricSeries> out;
  for (const auto& row : table.rows) {
    const auto& id = row[0];
    if (out.empty() || out.back().metric_id != id) {
      out.push_back({});
      out.back().metric_id = id;
    }
    auto& s = out.back();
    const double value = csv::parse_number(row[2]).value_or(std::numeric_limits<double>::quiet_NaN());
    if (row[1] == "summary") {
      s.summary = value;
    } else {
      s.per_frame.push_back(value);
    }
  }
  for (auto& s : out) {
    s.frame_count = s.metric_id == "ti" ? s.per_frame.size() + 1 : s.per_frame.size();
  }
  return out;
}

void MetricStore::attach(const std::string& job_id, const MetricSeries& series) const {
  std::vector<MetricSeries> all;
  if (has(job_id)) all = read(job_id);
  bool replaced = false;
  for (auto& s : all) {
    if (s.metric_id == series.metric_id) {
      s = series;
      replaced = true;
    }
  }
  if (!replaced) all.push_back(series);
  write(job_id, all);
}

JobMetricsOutcome compute_job_metrics(const EncodeResult& result, const RunConfig& config, const MetricStore& store) {
  JobMetricsOutcome outcome;
  outcome.job_id = result.job.job_id;
  if (result.status != JobStatus::kOk) {
    outcome.error = "job did not complete: " + std::string(to_string(result.status));
    return outcome;
  }
  const EncodeJob& job = result.job;
  fs::path decoded = result.decoded_yuv_path.empty() ? decoded_path_for(job) : fs::path(result.decoded_yuv_path);
  bool decoded_here = false;
  try {
    if (!fs::exists(decoded)) {
      EncodeResult copy = result;
      decoded = decode_to_yuv(copy, runner_options(config));
      decoded_here = true;
    }
    ReadOptions ropts;
    ropts.strict_range = config.strict_range;
    auto ref = open_sequence(job.input_yuv, job.spec, ropts);
    VideoSpec dist_spec = job.spec;
    dist_spec.frame_count.reset();
    auto dist = open_sequence(decoded, dist_spec, ropts);
    const auto peak = metrics::PeakConvention::parse(config.peak, job.spec.bit_depth);
    auto psnr = metrics::psnr_video_planes(ref, dist, peak, config.psnr_cap_db);

    std::vector<MetricSeries> series = {psnr.y, psnr.u, psnr.v};
    if (store.has(job.job_id)) {
      // keep imported series such as hdrvqm
      for (auto& s : store.read(job.job_id)) {
        if (s.metric_id != "psnr_y" && s.metric_id != "psnr_u" && s.metric_id != "psnr_v") series.push_back(s);
      }
    }
    store.write(job.job_id, series);
    outcome.ok = true;
    outcome.psnr_y = psnr.y.summary;
  } catch (const Error& e) {
    outcome.error = e.what();
  }
  if (!config.keep_yuv && (outcome.ok || decoded_here)) {
    std::error_code ec;
    fs::remove(decoded, ec);
  }
  return outcome;
}

std::vector<std::string> import_external_scores(const fs::path& dir, const std::string& metric_id,
                                                const std::vector<EncodeResult>& results, const MetricStore& store) {
  std::vector<std::string> attached;
  for (const auto& r : results) {
    const fs::path file = dir / (r.job.job_id + ".csv");
    if (!fs::exists(file)) continue;
    auto series = metrics::ingest_external_scores(file, metric_id);
    store.attach(r.job.job_id, series);
    attached.push_back(r.job.job_id);
  }
  return attached;
}

}  // namespace hdrbench
