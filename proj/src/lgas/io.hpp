#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgas/config.hpp"

namespace lgas {

std::string fmt_double(double v);  // fixed %.12g rendering

// CSV file with a '#'-prefixed header block (config echo + seeds) so every
// output is self-describing.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const RunConfig& config,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  ~CsvWriter();

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

// JSON-lines file; the first line is a header record with the full config.
class JsonlWriter {
 public:
  JsonlWriter(const std::string& path, const RunConfig& config);
  void record(const nlohmann::json& j);

 private:
  std::ofstream out_;
};

void write_manifest(const std::string& out_dir, const RunConfig& config,
                    const std::vector<std::string>& files, double wall_ms);

nlohmann::json replica_json(const RunConfig& cfg, const ReplicaRecord& rec);

}  // namespace lgas
