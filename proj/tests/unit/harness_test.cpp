// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "moe/core/errors.hpp"
#include "moe/core/hash.hpp"
#include "moe/harness/harness.hpp"

using namespace moe;
using namespace moe::harness;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("moe-harness-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig cfg = default_config();
  cfg.output_dir = fresh_dir(name);
  cfg.eval_seeds = {0, 1};
  cfg.maze.eval_episodes = 40;
  return cfg;
}

std::size_t count_json_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".json" ? 1 : 0;
  return n;
}

}  // namespace

// --- config --------------------------------------------------------------------

TEST(Config, DefaultsValidate) {
  const ExperimentConfig cfg = default_config();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.maze.requirements.size(), 3u);
  EXPECT_EQ(cfg.models(), fs::path("out") / "models");
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"seeed": 1})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"maze": {"layout": {"exit": [0, 0]}}})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"gate": "oracle"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"seed": "seven"})")), ConfigError);
}

TEST(Config, ReadsNestedSettings) {
  const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(R"({
    "scenario": "nsp-utility", "gate": "llm", "seed": 7,
    "maze": {"layout": {"traps": [[0, 1]], "max_steps": 30}, "eval_episodes": 3},
    "nsp": {"channel": {"outage_threshold_db": 20}, "experts": ["minimize-OP"]},
    "llm": {"transcript": "t.json"}})"));
  EXPECT_EQ(cfg.scenario, Scenario::NspUtility);
  EXPECT_EQ(cfg.gate, gating::GateKind::Llm);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.maze.layout.traps, (std::vector<maze::Cell>{{0, 1}}));
  EXPECT_EQ(cfg.maze.layout.max_steps, 30);
  EXPECT_DOUBLE_EQ(cfg.nsp.channel.outage_threshold, 100.0);
  EXPECT_EQ(cfg.nsp.experts, (std::vector<Objective>{Objective::MinimizeOp}));
  EXPECT_EQ(cfg.llm.transcript, fs::path("t.json"));
}

TEST(Config, InvalidValuesAreRejected) {
  ExperimentConfig cfg = default_config();
  cfg.eval_seeds.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"maze": {"layout": {"goal": [5, 5]}}})")), ConfigError);
}

TEST(Config, HashFollowsSemanticFieldsOnly) {
  ExperimentConfig a = default_config();
  ExperimentConfig b = a;
  b.output_dir = "elsewhere";
  b.llm.backend_url = "http://localhost:1";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.nsp.market.cost_coeff = 0.004;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
}

// --- training ------------------------------------------------------------------

TEST(Training, WritesEveryModelAndManifest) {
  ExperimentConfig cfg = small_config("train");
  const TrainManifest m = train_all(cfg);
  EXPECT_TRUE(m.complete);
  EXPECT_EQ(m.models.size(), 5u);
  EXPECT_EQ(count_json_files(cfg.models()), 6u);  // five models plus the manifest
  const auto doc = nlohmann::json::parse(slurp(cfg.models() / kManifestFile));
  EXPECT_TRUE(doc["complete"].get<bool>());
  for (const ManifestEntry& e : m.models) EXPECT_EQ(sha256_hex(slurp(cfg.models() / e.file)), e.sha256);
}

TEST(Training, TrainedGateAddsMissionGates) {
  ExperimentConfig cfg = small_config("train-gates");
  cfg.gate = gating::GateKind::Trained;
  cfg.maze.gate_training.episodes = 500;
  EXPECT_EQ(train_all(cfg).models.size(), 8u);
  for (maze::Mission m : maze::kAllMissions) EXPECT_TRUE(fs::exists(cfg.models() / gate_file_name(m)));
}

TEST(Training, SameConfigSameBytes) {
  ExperimentConfig a = small_config("det-a");
  ExperimentConfig b = small_config("det-b");
  train_all(a);
  train_all(b);
  for (const auto& e : fs::directory_iterator(a.models())) {
    EXPECT_EQ(slurp(e.path()), slurp(b.models() / e.path().filename())) << e.path();
  }
}

TEST(Training, SeedsDependOnObjectiveAndMission) {
  const ExperimentConfig cfg = default_config();
  EXPECT_NE(expert_seed(cfg, Objective::GoToGoal), expert_seed(cfg, Objective::AvoidTrap));
  EXPECT_NE(gate_seed(cfg, maze::Mission::GoalTrap), gate_seed(cfg, maze::Mission::GoalPrize));
  EXPECT_NE(gate_seed(cfg, maze::Mission::GoalTrap), expert_seed(cfg, Objective::GoToGoal));
}

TEST(Training, UnwritableDirectoryFailsBeforeTraining) {
  const fs::path blocker = fresh_dir("blocker");
  std::ofstream(blocker) << "a file, not a directory";
  ExperimentConfig cfg = default_config();
  cfg.output_dir = blocker / "out";
  EXPECT_THROW(train_all(cfg), OutputError);
  fs::remove(blocker);
}

TEST(Training, MissingModelsWithoutTrainingAllowed) {
  ExperimentConfig cfg = small_config("missing");
  cfg.train_first = false;
  EXPECT_THROW(load_maze_registry(cfg), MissingArtifactError);
  EXPECT_THROW(load_power_registry(cfg), MissingArtifactError);
  EXPECT_FALSE(fs::exists(cfg.models() / "maze-goto-goal.json"));
  cfg.train_first = true;
  EXPECT_EQ(load_maze_registry(cfg).all().size(), 3u);
}

// --- maze missions -------------------------------------------------------------

TEST(MazeMissions, ZeroEpisodesGivesEmptyRows) {
  ExperimentConfig cfg = small_config("zero");
  cfg.maze.eval_episodes = 0;
  const MazeReport r = run_maze_missions(cfg);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(slurp(cfg.output_dir / "maze_results.csv"),
            "gate,mission,seed,episodes,success_rate,mean_steps,mean_reward,gate_errors\n");
}

TEST(MazeMissions, AggregatesAreRecomputableFromRows) {
  ExperimentConfig cfg = small_config("aggregate");
  const MazeReport r = run_maze_missions(cfg);
  EXPECT_EQ(r.rows.size(), 2u * 3u * 2u);  // gate and baseline, missions, seeds
  const auto again = MazeReport::aggregate(r.rows);
  ASSERT_EQ(again.size(), r.aggregates.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].success_rate.mean, r.aggregates[i].success_rate.mean);
    EXPECT_EQ(again[i].mean_reward.stddev, r.aggregates[i].mean_reward.stddev);
  }
  for (const MazeSeedRow& row : r.rows) {
    EXPECT_GE(row.success_rate, 0.0);
    EXPECT_LE(row.success_rate, 1.0);
    EXPECT_EQ(row.gate_errors, 0);
  }
  EXPECT_TRUE(fs::exists(cfg.output_dir / "maze_summary.csv"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "maze_report.json"));
  EXPECT_FALSE(fs::exists(cfg.output_dir / "learning_curve.csv"));
}

TEST(MazeMissions, RerunIsBitIdentical) {
  ExperimentConfig cfg = small_config("rerun");
  run_maze_missions(cfg);
  const std::string first = slurp(cfg.output_dir / "maze_results.csv");
  run_maze_missions(cfg);
  EXPECT_EQ(slurp(cfg.output_dir / "maze_results.csv"), first);
}

TEST(MazeMissions, SummaryUsesPopulationDeviation) {
  const Summary s = summarize({1.0, 3.0});
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.stddev, 1.0);
  EXPECT_EQ(summarize({}).mean, 0.0);
}

TEST(MazeMissions, LlmGateReplaysFixture) {
  ExperimentConfig cfg = small_config("llm-replay");
  cfg.gate = gating::GateKind::Llm;
  cfg.llm.transcript = fs::path(MOE_TEST_DATA) / "llm_transcript.json";
  const auto backend = make_backend(cfg);
  const MazeReport r = run_maze_missions(cfg, backend.get());
  for (const MazeSeedRow& row : r.rows) EXPECT_EQ(row.gate_errors, 0) << row.gate;
}

TEST(MazeMissions, MissingTranscriptIsReported) {
  ExperimentConfig cfg = small_config("no-transcript");
  cfg.gate = gating::GateKind::Llm;
  cfg.llm.transcript = cfg.output_dir / "absent.json";
  EXPECT_THROW(make_backend(cfg), MissingArtifactError);
}

// --- NSP utility ---------------------------------------------------------------

TEST(NspUtility, GamingDecisionLiesBetweenExperts) {
  ExperimentConfig cfg = small_config("nsp-gaming");
  cfg.scenario = Scenario::NspUtility;
  const NspReport r = run_nsp_utility(cfg);
  ASSERT_EQ(r.experts.size(), 2u);
  const double lo = std::min(r.experts[0].power, r.experts[1].power);
  const double hi = std::max(r.experts[0].power, r.experts[1].power);
  EXPECT_GE(r.outcome.power, lo);
  EXPECT_LE(r.outcome.power, hi);
  EXPECT_EQ(r.target, wireless::QosMetric::Throughput);
  EXPECT_GE(r.regret, 0.0);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "nsp_sweep.csv"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "nsp_report.json"));
}

TEST(NspUtility, CallRequirementUsesOutageExpertOnly) {
  ExperimentConfig cfg = small_config("nsp-call");
  cfg.scenario = Scenario::NspUtility;
  cfg.nsp.requirement = "I am making a call and need to ensure continuity";
  const NspReport r = run_nsp_utility(cfg);
  EXPECT_EQ(r.decision.selected, (std::vector<std::string>{"power-op"}));
  EXPECT_EQ(r.target, wireless::QosMetric::OpComplement);
  EXPECT_EQ(r.outcome.power, r.oracle.power);
  EXPECT_EQ(r.regret, 0.0);
}

TEST(NspUtility, UncoveredRequirementPropagates) {
  ExperimentConfig cfg = small_config("nsp-bep");
  cfg.scenario = Scenario::NspUtility;
  cfg.nsp.requirement = "I am downloading medical images, accuracy is critical";
  EXPECT_THROW(run_nsp_utility(cfg), gating::NoExpertAvailable);
}

TEST(NspUtility, TrainedGateIsMazeOnly) {
  ExperimentConfig cfg = small_config("nsp-trained");
  cfg.scenario = Scenario::NspUtility;
  cfg.gate = gating::GateKind::Trained;
  EXPECT_THROW(run_nsp_utility(cfg), ConfigError);
}

TEST(NspUtility, LlmGateReplaysFixture) {
  ExperimentConfig cfg = small_config("nsp-llm");
  cfg.scenario = Scenario::NspUtility;
  cfg.gate = gating::GateKind::Llm;
  cfg.llm.transcript = fs::path(MOE_TEST_DATA) / "llm_transcript.json";
  const auto backend = make_backend(cfg);
  const NspReport r = run_nsp_utility(cfg, backend.get());
  EXPECT_EQ(r.decision.selected, (std::vector<std::string>{"power-op", "power-dr"}));
}

// --- sweeps --------------------------------------------------------------------

TEST(Sweep, CsvIsBitExactAcrossRuns) {
  ExperimentConfig a = small_config("sweep-a");
  ExperimentConfig b = small_config("sweep-b");
  sweep_power(a);
  sweep_power(b);
  const std::string text = slurp(a.output_dir / "sweep_power.csv");
  EXPECT_EQ(text, slurp(b.output_dir / "sweep_power.csv"));
  EXPECT_EQ(text.substr(0, text.find('\n')), kDenseSweepHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 201);
}

TEST(Sweep, MetricsAreMonotoneInPower) {
  const DenseSweep s = compute_sweep(default_config());
  ASSERT_EQ(s.power.size(), 200u);
  EXPECT_EQ(s.power.front(), 5.0);
  EXPECT_EQ(s.power.back(), 50.0);
  for (std::size_t i = 1; i < s.power.size(); ++i) {
    EXPECT_LE(s.outage[i], s.outage[i - 1]);
    EXPECT_GE(s.data_rate[i], s.data_rate[i - 1]);
    EXPECT_GE(s.throughput[i], s.throughput[i - 1]);
  }
}
