#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "urlab/harness/rig.hpp"
#include "urlab/xlab/config.hpp"

namespace urlab::xlab {

inline constexpr const char* kCodeVersion = "urlab 1.0.0";
inline constexpr const char* kRunCsvHeader = "batch,steps,mean_return,std_return,mean_final_distance";

/// Numbers at 9 significant digits.
std::string format_number(double v);

/// Header plus one LF-terminated row per batch.
std::string format_run_csv(const std::vector<harness::BatchStats>& batches);
void write_run_csv(const std::vector<harness::BatchStats>& batches, const std::filesystem::path& path);
std::vector<harness::BatchStats> read_run_csv(const std::filesystem::path& path);

/// JSON sidecar: code version, seed, the full config and a run summary.
/// Contains nothing time- or host-dependent.
std::string format_metadata(const ExperimentConfig& cfg, const harness::RunResult& result);
void write_metadata(const ExperimentConfig& cfg, const harness::RunResult& result, const std::filesystem::path& path);
ExperimentConfig read_metadata_config(const std::filesystem::path& path);

/// Per-tick controller log: t_ns,seq,command,q,qd,qdd_target,torque_target,current
void write_tick_log(const std::vector<harness::TickRecord>& ticks, const std::filesystem::path& path);
std::vector<harness::TickRecord> read_tick_log(const std::filesystem::path& path);

/// Status-packet arrival log: one t_ns per line after a header.
void write_arrival_log(const std::vector<timebase::Instant>& arrivals, const std::filesystem::path& path);
std::vector<timebase::Instant> read_arrival_log(const std::filesystem::path& path);

/// Throws std::runtime_error mentioning the path when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace urlab::xlab
