// SPDX-License-Identifier: Apache-2.0
// Command-line front end: train-experts, run-maze, run-nsp, sweep-power, record-llm.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "moe/core/errors.hpp"
#include "moe/experts/model_io.hpp"
#include "moe/gating/llm_gate.hpp"
#include "moe/harness/harness.hpp"
#include "moe/llm/http_backend.hpp"

namespace {

using namespace moe;
using wireless::format_sig12;

enum Exit { kOk = 0, kConfig = 2, kMissing = 3, kRuntime = 4 };

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string gate;
  std::string backend_url;
  std::string transcript;
};

harness::ExperimentConfig resolve(const GlobalFlags& f) {
  harness::ExperimentConfig cfg = f.config.empty() ? harness::default_config() : harness::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (!f.gate.empty()) {
    try {
      cfg.gate = gating::gate_kind_from_string(f.gate);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (!f.backend_url.empty()) cfg.llm.backend_url = f.backend_url;
  if (!f.transcript.empty()) cfg.llm.transcript = f.transcript;
  cfg.validate();
  return cfg;
}

void train(const harness::ExperimentConfig& cfg) {
  const harness::TrainManifest m = harness::train_all(cfg);
  for (const auto& e : m.models) std::cout << e.kind << ' ' << e.id << " -> " << (cfg.models() / e.file).string() << '\n';
}

void run_maze(const harness::ExperimentConfig& cfg) {
  const harness::MazeReport r = harness::run_maze_missions(cfg);
  for (const auto& a : r.aggregates) {
    std::cout << a.gate << ' ' << maze::to_string(a.mission) << " success " << format_sig12(a.success_rate.mean)
              << " (sd " << format_sig12(a.success_rate.stddev) << ")\n";
  }
  std::cout << "report " << (cfg.output_dir / "maze_report.json").string() << '\n';
}

void run_nsp(const harness::ExperimentConfig& cfg) {
  const harness::NspReport r = harness::run_nsp_utility(cfg);
  std::cout << "selected";
  for (const auto& e : r.experts) std::cout << ' ' << e.id << " (argmax " << format_sig12(e.power) << " W)";
  std::cout << "\npower " << format_sig12(r.outcome.power) << " W, target " << wireless::to_string(r.target)
            << ", oracle " << format_sig12(r.oracle.power) << " W, regret " << format_sig12(r.regret) << '\n';
}

void sweep(const harness::ExperimentConfig& cfg) {
  const harness::DenseSweep s = harness::sweep_power(cfg);
  std::cout << s.power.size() << " points -> " << (cfg.output_dir / "sweep_power.csv").string() << '\n';
}

// Runs the LLM gate live once per scenario step and keeps every exchange.
void record(const harness::ExperimentConfig& cfg, const std::string& out) {
  if (out.empty()) throw ConfigError("record-llm needs --transcript <file> to write");
  if (cfg.llm.backend_url.empty()) throw ConfigError("record-llm needs --backend-url");
  llm::HttpBackendOptions options = llm::HttpBackendOptions::from_env(cfg.llm.backend_url);
  options.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.llm.timeout_seconds * 1000.0));
  options.max_retries = cfg.llm.max_retries;
  llm::HttpChatBackend live(options);
  llm::RecordingBackend recorder(live, cfg.llm.model);
  gating::LlmGateOptions gate_options;
  gate_options.model = cfg.llm.model;
  try {
    if (cfg.scenario == harness::Scenario::NspUtility) {
      gating::LlmGate gate(recorder, gate_options);
      const gating::ExpertRegistry registry = harness::load_power_registry(cfg);
      gating::decide(gate, {cfg.nsp.requirement, cfg.nsp.context()}, registry, experts::kPowerStateKey);
    } else {
      const gating::ExpertRegistry registry = harness::load_maze_registry(cfg);
      for (maze::Mission m : maze::kAllMissions) {
        gating::LlmGate gate(recorder, gate_options);
        const maze::MazeState start = maze::reset(cfg.maze.layout);
        gating::decide(gate, {cfg.maze.requirements.at(m), cfg.maze.layout}, registry,
                       maze::state_key(start, cfg.maze.layout));
      }
    }
  } catch (...) {
    recorder.mark_partial();
    recorder.transcript().save(out);
    std::cerr << "partial transcript written to " << out << '\n';
    throw;
  }
  const llm::Transcript t = recorder.transcript();
  t.save(out);
  std::cout << t.entries.size() << " exchanges -> " << out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixture-of-experts network optimization simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--config", flags.config, "Experiment config (JSON)");
  app.add_option("--seed", flags.seed, "Base training seed");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--gate", flags.gate, "Gate kind")->check(CLI::IsMember({"scripted", "llm", "trained"}));
  app.add_option("--backend-url", flags.backend_url, "Chat-completions endpoint");
  app.add_option("--transcript", flags.transcript, "Replay transcript (record-llm: file to write)");

  auto* train_cmd = app.add_subcommand("train-experts", "Train every expert (and gates with --gate trained)");
  auto* maze_cmd = app.add_subcommand("run-maze", "Evaluate the gate on the three maze missions");
  auto* nsp_cmd = app.add_subcommand("run-nsp", "Decide a transmit power for the configured requirement");
  auto* sweep_cmd = app.add_subcommand("sweep-power", "Dense sweep of OP, DR, TP and utilities");
  auto* record_cmd = app.add_subcommand("record-llm", "Record a live LLM transcript for later replay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string started = harness::utc_now();
  std::string command;
  try {
    if (*record_cmd) {
      // The transcript flag names the output here, not a replay source.
      GlobalFlags live = flags;
      live.transcript.clear();
      record(resolve(live), flags.transcript);
      return kOk;
    }
    const harness::ExperimentConfig cfg = resolve(flags);
    if (*train_cmd) {
      command = "train-experts";
      train(cfg);
    } else if (*maze_cmd) {
      command = "run-maze";
      run_maze(cfg);
    } else if (*nsp_cmd) {
      command = "run-nsp";
      run_nsp(cfg);
    } else if (*sweep_cmd) {
      command = "sweep-power";
      sweep(cfg);
    }
    harness::write_run_times(cfg, command, started, harness::utc_now());
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const harness::MissingArtifactError& e) {
    std::cerr << "missing artifact: " << e.what() << '\n';
    return kMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
