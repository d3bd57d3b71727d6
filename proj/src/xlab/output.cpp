#include "urlab/xlab/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace urlab::xlab {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error(path.string() + ": expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  return rows;
}

double to_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": malformed number '" + s + "'");
  }
}

constexpr const char* kTickHeader = "t_ns,seq,command,q,qd,qdd_target,torque_target,current";
constexpr const char* kArrivalHeader = "t_ns";

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory for " + path.string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string format_run_csv(const std::vector<harness::BatchStats>& batches) {
  std::string s = std::string(kRunCsvHeader) + "\n";
  for (const auto& b : batches) {
    s += std::to_string(b.batch) + "," + std::to_string(b.steps) + "," + format_number(b.mean_return) + "," +
         format_number(b.std_return) + "," + format_number(b.mean_final_distance) + "\n";
  }
  return s;
}

void write_run_csv(const std::vector<harness::BatchStats>& batches, const std::filesystem::path& path) {
  write_text(path, format_run_csv(batches));
}

std::vector<harness::BatchStats> read_run_csv(const std::filesystem::path& path) {
  std::vector<harness::BatchStats> out;
  for (const auto& row : read_rows(path, kRunCsvHeader)) {
    if (row.size() != 5) throw std::runtime_error(path.string() + ": expected 5 columns");
    harness::BatchStats b;
    b.batch = static_cast<int>(to_double(row[0], path));
    b.steps = static_cast<std::int64_t>(to_double(row[1], path));
    b.mean_return = to_double(row[2], path);
    b.std_return = to_double(row[3], path);
    b.mean_final_distance = to_double(row[4], path);
    out.push_back(b);
  }
  return out;
}

std::string format_metadata(const ExperimentConfig& cfg, const harness::RunResult& r) {
  nlohmann::ordered_json j;
  j["version"] = kCodeVersion;
  j["seed"] = cfg.seed;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(cfg));
  const auto& a = r.audit;
  j["summary"] = {
      {"batches", r.batches.size()},
      {"experience_steps", r.experience_steps},
      {"experience_seconds", r.experience_seconds},
      {"simulated_seconds", r.simulated_seconds},
      {"actuator_sends", a.actuator_sends},
      {"sends_per_action_min", a.min_sends_per_action},
      {"sends_per_action_max", a.max_sends_per_action},
      {"stale_actions", a.stale_actions},
      {"safety_overrides", a.safety_overrides},
      {"reset_faults", a.reset_faults},
      {"max_box_excursion_m", a.max_box_excursion},
      {"max_joint_excursion_rad", a.max_joint_excursion},
      {"dropped_commands", a.controller.dropped},
      {"expired_ticks", a.controller.expired_ticks},
      {"preempted_ticks", a.controller.preempted_ticks},
      {"updates_accepted", a.updates_accepted},
      {"updates_rejected", a.updates_rejected},
      {"max_kl", a.max_kl},
  };
  return j.dump(2) + "\n";
}

void write_metadata(const ExperimentConfig& cfg, const harness::RunResult& result, const std::filesystem::path& path) {
  write_text(path, format_metadata(cfg, result));
}

ExperimentConfig read_metadata_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (!j.contains("config")) throw std::runtime_error(path.string() + ": no config section");
  return config_from_json(j["config"].dump());
}

void write_tick_log(const std::vector<harness::TickRecord>& ticks, const std::filesystem::path& path) {
  std::string s = std::string(kTickHeader) + "\n";
  for (const auto& t : ticks) {
    s += std::to_string(t.time.nanos()) + "," + std::to_string(t.seq) + "," + format_number(t.command) + "," +
         format_number(t.q) + "," + format_number(t.qd) + "," + format_number(t.qdd_target) + "," +
         format_number(t.torque_target) + "," + format_number(t.current) + "\n";
  }
  write_text(path, s);
}

std::vector<harness::TickRecord> read_tick_log(const std::filesystem::path& path) {
  std::vector<harness::TickRecord> out;
  for (const auto& row : read_rows(path, kTickHeader)) {
    if (row.size() != 8) throw std::runtime_error(path.string() + ": expected 8 columns");
    harness::TickRecord t;
    t.time = timebase::Instant(std::stoll(row[0]));
    t.seq = static_cast<std::uint32_t>(std::stoul(row[1]));
    t.command = to_double(row[2], path);
    t.q = to_double(row[3], path);
    t.qd = to_double(row[4], path);
    t.qdd_target = to_double(row[5], path);
    t.torque_target = to_double(row[6], path);
    t.current = to_double(row[7], path);
    out.push_back(t);
  }
  return out;
}

void write_arrival_log(const std::vector<timebase::Instant>& arrivals, const std::filesystem::path& path) {
  std::string s = std::string(kArrivalHeader) + "\n";
  for (const auto& t : arrivals) s += std::to_string(t.nanos()) + "\n";
  write_text(path, s);
}

std::vector<timebase::Instant> read_arrival_log(const std::filesystem::path& path) {
  std::vector<timebase::Instant> out;
  for (const auto& row : read_rows(path, kArrivalHeader)) {
    if (row.size() != 1) throw std::runtime_error(path.string() + ": expected 1 column");
    out.emplace_back(std::stoll(row[0]));
  }
  return out;
}

}  // namespace urlab::xlab
