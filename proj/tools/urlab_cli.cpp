#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "urlab/linksim/interarrival.hpp"
#include "urlab/xlab/config.hpp"
#include "urlab/xlab/output.hpp"
#include "urlab/xlab/runner.hpp"
#include "urlab/xlab/xcorr.hpp"

namespace {

using namespace urlab;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void run_one(xlab::ExperimentConfig cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  cfg.seed = seed;
  const auto run = xlab::run_experiment(cfg);
  const auto paths = xlab::write_outputs(cfg, run, dir);
  const auto& r = run.result;
  std::printf("seed %llu: %zu batches, %lld steps", static_cast<unsigned long long>(seed), r.batches.size(),
              static_cast<long long>(r.experience_steps));
  if (!r.batches.empty()) {
    std::printf(", last mean return %s, last final distance %s", xlab::format_number(r.batches.back().mean_return).c_str(),
                xlab::format_number(r.batches.back().mean_final_distance).c_str());
  }
  std::printf("\n  %s\n  %s\n", paths.csv.string().c_str(), paths.metadata.string().c_str());
}

std::vector<double> column(const std::vector<harness::TickRecord>& ticks, const std::string& name) {
  std::vector<double> v;
  v.reserve(ticks.size());
  for (const auto& t : ticks) {
    if (name == "command") v.push_back(t.command);
    else if (name == "q") v.push_back(t.q);
    else if (name == "qd") v.push_back(t.qd);
    else if (name == "qdd" || name == "qdd_target") v.push_back(t.qdd_target);
    else if (name == "torque" || name == "torque_target") v.push_back(t.torque_target);
    else if (name == "current") v.push_back(t.current);
    else throw CLI::ValidationError("--signals", "unknown signal '" + name + "'");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated UR5 Reacher laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path, seeds_text, out_dir;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "TOML experiment config")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Master seed (overrides the config)");
  auto* seeds_opt = run->add_option("--seeds", seeds_text, "Seed sweep, e.g. 0..4 or 0,2,3");
  seed_opt->excludes(seeds_opt);
  run->add_option("--out", out_dir, "Output directory (default: config output_dir, $URLAB_OUT_DIR, ./results)");

  auto* analyze = app.add_subcommand("analyze", "Analyze run logs");
  analyze->require_subcommand(1);
  auto* xcorr = analyze->add_subcommand("xcorr", "Cross-correlate the command with motor signals");
  std::string log_path, signals = "qdd,torque,current";
  int max_lag = 10;
  xcorr->add_option("--log", log_path, "Tick log CSV")->required()->check(CLI::ExistingFile);
  xcorr->add_option("--signals", signals, "Comma-separated signals")->capture_default_str();
  xcorr->add_option("--max-lag", max_lag, "Largest lag in packets")->capture_default_str()->check(CLI::NonNegativeNumber);
  auto* inter = analyze->add_subcommand("interarrival", "Summarize packet inter-arrival times");
  inter->add_option("--log", log_path, "Arrival log CSV")->required()->check(CLI::ExistingFile);

  auto* replay = app.add_subcommand("replay", "Re-execute a run from its metadata sidecar");
  std::string metadata_path;
  replay->add_option("--metadata", metadata_path, "Metadata JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", out_dir, "Output directory (default: beside the metadata under replay/)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      xlab::ExperimentConfig cfg = xlab::load_config(config_path);
      const auto dir = xlab::resolve_output_dir(out_dir, cfg);
      std::vector<std::uint64_t> seeds{cfg.seed};
      if (*seed_opt) seeds = {seed};
      if (*seeds_opt) seeds = xlab::parse_seed_list(seeds_text);
      for (auto s : seeds) run_one(cfg, s, dir);
    } else if (xcorr->parsed()) {
      const auto ticks = xlab::read_tick_log(log_path);
      const auto command = column(ticks, "command");
      std::stringstream list(signals);
      std::string name;
      while (std::getline(list, name, ',')) {
        const auto c = xlab::cross_correlation(command, column(ticks, name), max_lag);
        std::printf("%s:", name.c_str());
        for (std::size_t i = 0; i < c.lags.size(); ++i) {
          if (c.lags[i] < 0) continue;
          std::printf(" %d=%s", c.lags[i], c.values[i] ? xlab::format_number(*c.values[i]).c_str() : "undefined");
        }
        const auto best = c.argmax();
        std::printf("\n  peak lag: %s packets\n", best ? std::to_string(*best).c_str() : "undefined");
      }
    } else if (inter->parsed()) {
      const auto arrivals = xlab::read_arrival_log(log_path);
      const auto s = linksim::interarrival_stats(arrivals);
      std::printf("count %zu\nmin %s ms\np5 %s ms\np25 %s ms\np50 %s ms\np75 %s ms\np95 %s ms\nmax %s ms\n", s.count,
                  xlab::format_number(s.min).c_str(), xlab::format_number(s.p5).c_str(),
                  xlab::format_number(s.p25).c_str(), xlab::format_number(s.p50).c_str(),
                  xlab::format_number(s.p75).c_str(), xlab::format_number(s.p95).c_str(),
                  xlab::format_number(s.max).c_str());
    } else if (replay->parsed()) {
      const std::filesystem::path meta(metadata_path);
      const auto cfg = xlab::read_metadata_config(meta);
      const std::filesystem::path dir = out_dir.empty() ? meta.parent_path() / "replay" : std::filesystem::path(out_dir);
      run_one(cfg, cfg.seed, dir);
      const auto original = meta.parent_path() / (cfg.name + "_seed" + std::to_string(cfg.seed) + ".csv");
      const auto rerun = dir / original.filename();
      if (std::filesystem::exists(original)) {
        const bool same = slurp(original) == slurp(rerun);
        std::printf("replay %s the original CSV\n", same ? "reproduces" : "DIFFERS FROM");
        return same ? 0 : 3;
      }
    }
  } catch (const xlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
