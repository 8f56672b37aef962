#include "lgas/io.hpp"

#include <cstdio>
#include <filesystem>

#include "lgas/errors.hpp"

namespace lgas {

namespace {
constexpr const char* kVersion = "lorentz-lab 1.0.0";

nlohmann::json time_or_null(double t) {
  if (std::isinf(t)) return nullptr;
  return t;
}
}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const RunConfig& config,
                     const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  require(out_.good(), Error::Code::kIo, "cannot open " + path);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config.hash()));
  out_ << "# " << kVersion << "\n";
  out_ << "# config_hash = " << hash << "\n";
  for (const auto& [k, v] : config.to_kv()) out_ << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(cells.size() == n_cols_, Error::Code::kInvalidArgument,
          "csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

CsvWriter::~CsvWriter() { out_.flush(); }

JsonlWriter::JsonlWriter(const std::string& path, const RunConfig& config)
    : out_(path) {
  require(out_.good(), Error::Code::kIo, "cannot open " + path);
  nlohmann::json header;
  header["type"] = "header";
  header["version"] = kVersion;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config.hash()));
  header["config_hash"] = hash;
  header["config"] = config.to_kv();
  out_ << header.dump() << "\n";
}

void JsonlWriter::record(const nlohmann::json& j) { out_ << j.dump() << "\n"; }

void write_manifest(const std::string& out_dir, const RunConfig& config,
                    const std::vector<std::string>& files, double wall_ms) {
  nlohmann::json m;
  m["manifest_version"] = 1;
  m["version"] = kVersion;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config.hash()));
  m["config_hash"] = hash;
  m["config"] = config.to_kv();
  m["seed"] = config.env.seed;
  m["files"] = files;
  m["wall_time_ms"] = wall_ms;
  std::ofstream out(std::filesystem::path(out_dir) / "manifest.json");
  require(out.good(), Error::Code::kIo, "cannot write manifest");
  out << m.dump(2) << "\n";
}

nlohmann::json replica_json(const RunConfig& cfg, const ReplicaRecord& rec) {
  nlohmann::json j;
  j["type"] = "replica";
  j["seed"] = rec.env_seed;
  j["eps"] = cfg.eps;
  j["T"] = cfg.T;
  j["N"] = cfg.N;
  j["beta"] = cfg.beta;
  j["w"] = std::isinf(rec.w) ? nlohmann::json(nullptr) : nlohmann::json(rec.w);
  j["sigma1"] = time_or_null(rec.times.sigma1);
  j["sigma2"] = time_or_null(rec.times.sigma2);
  j["sigma3"] = time_or_null(rec.times.sigma3);
  j["sigma4"] = time_or_null(rec.times.sigma4);
  j["sigma"] = time_or_null(rec.times.sigma);
  j["lorentz_events"] = rec.lorentz_events;
  j["flight_events"] = rec.flight_events;
  j["clock_events"] = rec.clocks;
  j["shadowed_events"] = rec.shadowed;
  j["mismatch"] = rec.mismatch;
  return j;
}

}  // namespace lgas
