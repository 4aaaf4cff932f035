// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment orchestration: training, evaluation and CSV/JSON exports.
// Every file written here is a pure function of (config, models, transcript);
// wall-clock times go to a separate run_times.json.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "moe/gating/gate.hpp"
#include "moe/gating/trained_gate.hpp"
#include "moe/harness/config.hpp"
#include "moe/llm/client.hpp"

namespace moe::harness {

// A model file the run needs is absent and training was not allowed.
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Provenance {
  std::string config_hash;
  std::string code_version;
};

Provenance provenance(const ExperimentConfig& cfg);

/// Creates the directory and proves a file can be written there.
void ensure_writable(const std::filesystem::path& dir);

// --- training ----------------------------------------------------------------

struct ManifestEntry {
  std::string id;
  std::string file;  // relative to the model directory
  std::string kind;  // "expert" or "gate"
  std::string tag;   // objective or mission
  std::uint64_t seed = 0;
  std::string sha256;
};

struct TrainManifest {
  std::vector<ManifestEntry> models;
  bool complete = false;
  nlohmann::json to_json() const;
};

inline constexpr std::string_view kManifestFile = "manifest.json";

std::uint64_t expert_seed(const ExperimentConfig& cfg, Objective objective);
std::uint64_t gate_seed(const ExperimentConfig& cfg, maze::Mission mission);
std::string gate_file_name(maze::Mission mission);

/// Trains the three maze experts, the configured power experts and, with
/// the trained gate, one gate per mission. Writes <id>.json files and the
/// manifest; a failure leaves a manifest flagged incomplete and rethrows.
TrainManifest train_all(const ExperimentConfig& cfg);

/// Registry from model files; trains first when allowed, else MissingArtifactError.
gating::ExpertRegistry load_maze_registry(const ExperimentConfig& cfg);
gating::ExpertRegistry load_power_registry(const ExperimentConfig& cfg);
gating::TrainedGate load_mission_gate(const ExperimentConfig& cfg, maze::Mission mission);

// --- maze missions -------------------------------------------------------------

struct MazeSeedRow {
  std::string gate;  // gate kind, or "single:<expert id>" for the baseline
  maze::Mission mission = maze::Mission::GoalTrap;
  std::uint64_t seed = 0;
  int episodes = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double mean_reward = 0.0;
  int gate_errors = 0;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

Summary summarize(const std::vector<double>& values);

struct MazeAggregate {
  std::string gate;
  maze::Mission mission = maze::Mission::GoalTrap;
  Summary success_rate;
  Summary mean_steps;
  Summary mean_reward;
};

struct CurveRow {
  maze::Mission mission = maze::Mission::GoalTrap;
  gating::LearningCurvePoint point;
};

struct MazeReport {
  Provenance provenance;
  std::vector<MazeSeedRow> rows;
  std::vector<MazeAggregate> aggregates;
  std::vector<CurveRow> learning_curve;  // trained gate only

  /// Aggregates recomputed from rows, in row order of first appearance.
  static std::vector<MazeAggregate> aggregate(const std::vector<MazeSeedRow>& rows);
  nlohmann::json to_json() const;
};

/// Builds the gate for one mission; called once per (mission, seed) task.
using GateFactory = std::function<std::unique_ptr<gating::Gate>(maze::Mission)>;

/// Evaluates one gate on one mission for one seed. Gate and LLM errors
/// fail the affected episodes and are counted; missing experts propagate.
MazeSeedRow evaluate_maze_gate(gating::Gate& gate, std::string label, const gating::ExpertRegistry& registry,
                               const ExperimentConfig& cfg, maze::Mission mission, std::uint64_t seed);

/// All missions over the seed list for the configured gate plus the
/// single-expert baseline. Writes maze_results.csv, maze_summary.csv,
/// learning_curve.csv (trained gate) and maze_report.json.
MazeReport run_maze_missions(const ExperimentConfig& cfg, llm::ChatBackend* backend = nullptr);

// --- NSP utility ---------------------------------------------------------------

struct ExpertChoice {
  std::string id;
  Objective objective = Objective::MinimizeOp;
  double power = 0.0;  // the expert's own argmax
};

struct NspReport {
  Provenance provenance;
  std::string requirement;
  gating::GateDecision decision;
  gating::NspOutcome outcome;
  wireless::QosMetric target = wireless::QosMetric::Throughput;
  std::vector<ExpertChoice> experts;
  wireless::PowerOptimum oracle;
  double regret = 0.0;  // oracle utility minus decided utility, on the target metric
  nlohmann::json to_json() const;
};

/// Steps 1 to 4 for the configured requirement, the grid sweep (nsp_sweep.csv),
/// the brute-force oracle on the target metric and the regret (nsp_report.json).
NspReport run_nsp_utility(const ExperimentConfig& cfg, llm::ChatBackend* backend = nullptr);

// --- dense sweep ---------------------------------------------------------------

inline constexpr std::string_view kDenseSweepHeader = "P_watts,OP,DR,TP,U_OP-complement,U_DR,U_TP";

struct DenseSweep {
  std::vector<double> power;
  std::vector<double> outage;
  std::vector<double> data_rate;
  std::vector<double> throughput;
  std::array<std::vector<double>, 3> utility;  // indexed by QosMetric
};

/// nsp.sweep_points powers from the smallest grid power to P_th.
DenseSweep compute_sweep(const ExperimentConfig& cfg);
void write_dense_sweep_csv(std::ostream& out, const DenseSweep& sweep);

/// Writes sweep_power.csv.
DenseSweep sweep_power(const ExperimentConfig& cfg);

// --- gates -------------------------------------------------------------------

/// Backend for the LLM gate: replay when a transcript is configured, else live.
std::unique_ptr<llm::ChatBackend> make_backend(const ExperimentConfig& cfg);

/// Wall-clock record kept apart from the reproducible outputs.
void write_run_times(const ExperimentConfig& cfg, std::string_view command, const std::string& started,
                     const std::string& finished);
std::string utc_now();

}  // namespace moe::harness
