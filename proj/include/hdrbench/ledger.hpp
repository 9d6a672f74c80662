#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrbench/orchestrator.hpp"

namespace hdrbench {

nlohmann::json to_json(const EncodeJob& job);
EncodeJob job_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EncodeResult& result);
EncodeResult result_from_json(const nlohmann::json& j);

// Append-only JSON-lines record of EncodeResults. A torn final line from an
// interrupted run is ignored on load and fenced off before the next append.
class RunLedger {
 public:
  explicit RunLedger(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  // Latest record per job id, in order of first appearance.
  std::vector<EncodeResult> records() const;
  bool is_completed(const std::string& job_id) const;
  std::size_t completed_count() const;

  void append(const EncodeResult& result);

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::vector<std::string> order_;
  std::map<std::string, EncodeResult> latest_;
  std::ofstream out_;
};

// Reads a ledger file without opening it for append.
std::vector<EncodeResult> load_ledger(const std::filesystem::path& path);

}  // namespace hdrbench
