#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdrbench/config.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/orchestrator.hpp"

namespace hdrbench {

// One CSV per job under <out_dir>/metrics: columns metric_id,frame,value.
// Per-frame rows carry 0-based indices; each metric ends with a row whose
// frame field is "summary" holding the pooled value.
class MetricStore {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit MetricStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& job_id) const;
  bool has(const std::string& job_id) const;

  void write(const std::string& job_id, const std::vector<metrics::MetricSeries>& series) const;
  // Replaces or adds one series, keeping the others.
  void attach(const std::string& job_id, const metrics::MetricSeries& series) const;
  std::vector<metrics::MetricSeries> read(const std::string& job_id) const;

 private:
  std::filesystem::path dir_;
};

struct JobMetricsOutcome {
  std::string job_id;
  bool ok = false;
  std::string error;
  std::optional<double> psnr_y;
};

// Computes PSNR (Y/U/V) for one completed job, re-decoding the bitstream if
// the decoded YUV is gone, then deletes the decoded YUV unless keep_yuv.
JobMetricsOutcome compute_job_metrics(const EncodeResult& result, const RunConfig& config, const MetricStore& store);

// Imports <dir>/<job_id>.csv external scores (frame,value) as metric_id for
// every listed job that has a file. Returns the job ids that were attached.
std::vector<std::string> import_external_scores(const std::filesystem::path& dir, const std::string& metric_id,
                                                const std::vector<EncodeResult>& results, const MetricStore& store);

}  // namespace hdrbench
