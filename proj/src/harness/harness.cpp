// SPDX-License-Identifier: Apache-2.0
#include "moe/harness/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <sstream>

#include "moe/core/errors.hpp"
#include "moe/core/hash.hpp"
#include "moe/core/random.hpp"
#include "moe/experts/model_io.hpp"
#include "moe/experts/training.hpp"
#include "moe/gating/llm_gate.hpp"
#include "moe/gating/scripted_gate.hpp"
#include "moe/llm/http_backend.hpp"

namespace moe::harness {

using nlohmann::json;
using wireless::format_sig12;
namespace fs = std::filesystem;

namespace {

constexpr std::array<Objective, 3> kMazeObjectives{Objective::GoToGoal, Objective::CollectPrize,
                                                   Objective::AvoidTrap};

std::size_t mission_index(maze::Mission m) {
  return static_cast<std::size_t>(std::find(maze::kAllMissions.begin(), maze::kAllMissions.end(), m) -
                                  maze::kAllMissions.begin());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << content;
  if (!out) throw OutputError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

// Single-expert gate for baselines: the expert's own argmax.
class SingleExpertGate final : public gating::Gate {
 public:
  SingleExpertGate(std::string id, Objective objective) : id_(std::move(id)), objective_(objective) {}
  gating::GateKind kind() const override { return gating::GateKind::Scripted; }
  gating::FormulatedObjective formulate_objective(const gating::UserRequirement&) override {
    return {{objective_}, "fixed baseline"};
  }
  std::vector<std::string> select_experts(const gating::FormulatedObjective&, const gating::ExpertRegistry&) override {
    return {id_};
  }
  gating::GateDecision combine_inferences(const std::vector<std::string>& selected,
                                          const gating::FormulatedObjective& obj,
                                          const gating::ExpertRegistry& registry, std::string_view state_key,
                                          const gating::GateContext&) override {
    return gating::fuse_decision(obj, selected, {1.0}, registry, state_key);
  }

 private:
  std::string id_;
  Objective objective_;
};

fs::path model_path(const ExperimentConfig& cfg, const std::string& id) { return cfg.models() / (id + ".json"); }

std::vector<Objective> power_objectives(const ExperimentConfig& cfg) { return cfg.nsp.experts; }

bool all_present(const std::vector<fs::path>& files) {
  return std::all_of(files.begin(), files.end(), [](const fs::path& p) { return fs::exists(p); });
}

void require_files(const ExperimentConfig& cfg, const std::vector<fs::path>& files) {
  if (all_present(files)) return;
  if (!cfg.train_first) {
    for (const fs::path& p : files) {
      if (!fs::exists(p)) throw MissingArtifactError("missing model file " + p.string() + " (run train-experts)");
    }
  }
  train_all(cfg);
}

std::vector<fs::path> maze_files(const ExperimentConfig& cfg) {
  std::vector<fs::path> out;
  for (Objective o : kMazeObjectives) out.push_back(model_path(cfg, experts::default_expert_id(o)));
  return out;
}

}  // namespace

Provenance provenance(const ExperimentConfig& cfg) { return {config_hash(cfg), MOE_VERSION}; }

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write-probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out || !(out << "ok")) throw OutputError("directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_run_times(const ExperimentConfig& cfg, std::string_view command, const std::string& started,
                     const std::string& finished) {
  ensure_writable(cfg.output_dir);
  write_json(cfg.output_dir / "run_times.json",
             {{"command", std::string(command)}, {"started", started}, {"finished", finished}});
}

// --- training ----------------------------------------------------------------

json TrainManifest::to_json() const {
  json list = json::array();
  for (const ManifestEntry& e : models) {
    list.push_back(
        {{"id", e.id}, {"file", e.file}, {"kind", e.kind}, {"tag", e.tag}, {"seed", e.seed}, {"sha256", e.sha256}});
  }
  return {{"complete", complete}, {"models", std::move(list)}};
}

std::uint64_t expert_seed(const ExperimentConfig& cfg, Objective objective) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(objective));
}

std::uint64_t gate_seed(const ExperimentConfig& cfg, maze::Mission mission) {
  return derive_seed(cfg.seed, 100 + mission_index(mission));
}

std::string gate_file_name(maze::Mission mission) {
  static constexpr std::array<std::string_view, 3> kNames{"gate-goal-trap", "gate-goal-prize", "gate-goal-prize-trap"};
  return std::string(kNames[mission_index(mission)]) + ".json";
}

TrainManifest train_all(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.models();
  ensure_writable(dir);

  TrainManifest manifest;
  auto record = [&](std::string id, std::string file, std::string kind, std::string tag, std::uint64_t seed) {
    manifest.models.push_back({std::move(id), file, std::move(kind), std::move(tag), seed, sha256_hex(read_file(dir / file))});
  };
  auto flush = [&] { write_json(dir / kManifestFile, manifest.to_json()); };

  try {
    // Experts are independent; each trains on its own stream.
    std::vector<std::future<experts::ExpertModel>> jobs;
    std::vector<Objective> order;
    for (Objective o : kMazeObjectives) {
      order.push_back(o);
      jobs.push_back(std::async(std::launch::async, [&cfg, o] {
        return experts::train_maze_expert(o, cfg.maze.layout, cfg.maze.expert_training, expert_seed(cfg, o));
      }));
    }
    const wireless::WirelessContext ctx = cfg.nsp.context();
    for (Objective o : power_objectives(cfg)) {
      order.push_back(o);
      jobs.push_back(std::async(std::launch::async, [&cfg, ctx, o] {
        return experts::train_power_expert(o, ctx, cfg.nsp.bandit, expert_seed(cfg, o));
      }));
    }
    std::vector<experts::ExpertPtr> maze_models;
    std::exception_ptr failure;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        experts::ExpertModel model = jobs[i].get();
        const std::string file = model.id() + ".json";
        experts::save_model(model, dir / file);
        record(model.id(), file, "expert", std::string(to_string(order[i])), expert_seed(cfg, order[i]));
        if (model.domain() == experts::Domain::Maze) {
          maze_models.push_back(std::make_shared<const experts::ExpertModel>(std::move(model)));
        }
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    if (cfg.gate == gating::GateKind::Trained) {
      const gating::ExpertRegistry registry(maze_models);
      std::vector<std::future<gating::TrainedGate>> gates;
      for (maze::Mission m : maze::kAllMissions) {
        gates.push_back(std::async(std::launch::async, [&cfg, &registry, m] {
          return gating::train_gate(registry, cfg.maze.layout, m, cfg.maze.gate_training, gate_seed(cfg, m));
        }));
      }
      for (std::size_t i = 0; i < gates.size(); ++i) {
        const maze::Mission m = maze::kAllMissions[i];
        const gating::TrainedGate gate = gates[i].get();
        const std::string file = gate_file_name(m);
        gating::save_trained_gate(gate, dir / file);
        record(file.substr(0, file.size() - 5), file, "gate", std::string(maze::to_string(m)), gate_seed(cfg, m));
      }
    }
  } catch (...) {
    manifest.complete = false;
    try {
      flush();
    } catch (...) {
    }
    throw;
  }
  manifest.complete = true;
  flush();
  return manifest;
}

gating::ExpertRegistry load_maze_registry(const ExperimentConfig& cfg) {
  const std::vector<fs::path> files = maze_files(cfg);
  require_files(cfg, files);
  gating::ExpertRegistry registry;
  for (const fs::path& p : files) registry.add(std::make_shared<const experts::ExpertModel>(experts::load_model(p)));
  return registry;
}

gating::ExpertRegistry load_power_registry(const ExperimentConfig& cfg) {
  std::vector<fs::path> files;
  for (Objective o : power_objectives(cfg)) files.push_back(model_path(cfg, experts::default_expert_id(o)));
  require_files(cfg, files);
  gating::ExpertRegistry registry;
  for (const fs::path& p : files) registry.add(std::make_shared<const experts::ExpertModel>(experts::load_model(p)));
  return registry;
}

gating::TrainedGate load_mission_gate(const ExperimentConfig& cfg, maze::Mission mission) {
  const fs::path path = cfg.models() / gate_file_name(mission);
  std::vector<fs::path> files = maze_files(cfg);
  files.push_back(path);
  require_files(cfg, files);
  return gating::load_trained_gate(path);
}

// --- maze missions -------------------------------------------------------------

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

std::vector<MazeAggregate> MazeReport::aggregate(const std::vector<MazeSeedRow>& rows) {
  std::vector<MazeAggregate> out;
  std::vector<std::pair<std::string, maze::Mission>> keys;
  for (const MazeSeedRow& r : rows) {
    const auto key = std::make_pair(r.gate, r.mission);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [gate, mission] : keys) {
    std::vector<double> success, steps, reward;
    for (const MazeSeedRow& r : rows) {
      if (r.gate != gate || r.mission != mission) continue;
      success.push_back(r.success_rate);
      steps.push_back(r.mean_steps);
      reward.push_back(r.mean_reward);
    }
    out.push_back({gate, mission, summarize(success), summarize(steps), summarize(reward)});
  }
  return out;
}

json MazeReport::to_json() const {
  json rows_json = json::array();
  for (const MazeSeedRow& r : rows) {
    rows_json.push_back({{"gate", r.gate},
                         {"mission", std::string(maze::to_string(r.mission))},
                         {"seed", r.seed},
                         {"episodes", r.episodes},
                         {"success_rate", r.success_rate},
                         {"mean_steps", r.mean_steps},
                         {"mean_reward", r.mean_reward},
                         {"gate_errors", r.gate_errors}});
  }
  json agg = json::array();
  for (const MazeAggregate& a : aggregates) {
    agg.push_back({{"gate", a.gate},
                   {"mission", std::string(maze::to_string(a.mission))},
                   {"success_rate", {{"mean", a.success_rate.mean}, {"stddev", a.success_rate.stddev}}},
                   {"mean_steps", {{"mean", a.mean_steps.mean}, {"stddev", a.mean_steps.stddev}}},
                   {"mean_reward", {{"mean", a.mean_reward.mean}, {"stddev", a.mean_reward.stddev}}}});
  }
  json curve = json::array();
  for (const CurveRow& c : learning_curve) {
    curve.push_back({{"mission", std::string(maze::to_string(c.mission))},
                     {"episode", c.point.episode},
                     {"success_rate", c.point.success_rate},
                     {"mean_reward", c.point.mean_reward}});
  }
  return {{"provenance", {{"config_hash", provenance.config_hash}, {"code_version", provenance.code_version}}},
          {"rows", std::move(rows_json)},
          {"aggregates", std::move(agg)},
          {"learning_curve", std::move(curve)}};
}

MazeSeedRow evaluate_maze_gate(gating::Gate& gate, std::string label, const gating::ExpertRegistry& registry,
                               const ExperimentConfig& cfg, maze::Mission mission, std::uint64_t seed) {
  MazeSeedRow row;
  row.gate = std::move(label);
  row.mission = mission;
  row.seed = seed;
  row.episodes = cfg.maze.eval_episodes;
  if (row.episodes == 0) return row;

  const maze::MazeConfig& layout = cfg.maze.layout;
  const gating::UserRequirement req{cfg.maze.requirements.at(mission), layout};
  gating::FormulatedObjective obj;
  std::vector<std::string> selected;
  try {
    obj = gate.formulate_objective(req);
    selected = gate.select_experts(obj, registry);
  } catch (const gating::GateError&) {
    row.gate_errors = row.episodes;
    return row;
  } catch (const gating::UnrecognizedRequirement&) {
    row.gate_errors = row.episodes;
    return row;
  } catch (const llm::LlmError&) {
    row.gate_errors = row.episodes;
    return row;
  }

  const std::uint64_t stream = derive_seed(seed, mission_index(mission));
  const double eps = cfg.maze.eval_epsilon;
  int successes = 0;
  int completed = 0;
  double steps = 0.0;
  double reward = 0.0;
  for (int e = 0; e < row.episodes; ++e) {
    auto policy = [&](const maze::MazeState& s, Rng& rng) {
      const double slip = uniform01(rng);
      const std::size_t random_move = uniform_index(rng, maze::kNumActions);
      if (slip < eps) return maze::kActions[random_move];
      const gating::GateDecision d =
          gate.combine_inferences(selected, obj, registry, maze::state_key(s, layout), req.context);
      return maze::kActions[d.action];
    };
    try {
      const maze::EpisodeRecord rec = maze::run_episode(policy, layout, mission, derive_seed(stream, e));
      successes += rec.success ? 1 : 0;
      steps += rec.steps;
      reward += rec.total_reward;
      ++completed;
    } catch (const gating::GateError&) {
      ++row.gate_errors;
    } catch (const llm::LlmError&) {
      ++row.gate_errors;
    }
  }
  row.success_rate = static_cast<double>(successes) / row.episodes;
  if (completed > 0) {
    row.mean_steps = steps / completed;
    row.mean_reward = reward / completed;
  }
  return row;
}

MazeReport run_maze_missions(const ExperimentConfig& cfg, llm::ChatBackend* backend) {
  cfg.validate();
  ensure_writable(cfg.output_dir);
  MazeReport report;
  report.provenance = provenance(cfg);

  const gating::ExpertRegistry registry = load_maze_registry(cfg);
  std::unique_ptr<llm::ChatBackend> owned;
  if (cfg.gate == gating::GateKind::Llm && !backend) {
    owned = make_backend(cfg);
    backend = owned.get();
  }
  std::map<maze::Mission, gating::TrainedGate> trained;
  if (cfg.gate == gating::GateKind::Trained) {
    for (maze::Mission m : maze::kAllMissions) trained.emplace(m, load_mission_gate(cfg, m));
    for (const auto& [m, g] : trained) {
      for (const auto& p : g.learning_curve()) report.learning_curve.push_back({m, p});
    }
  }
  const GateFactory make_gate = [&](maze::Mission m) -> std::unique_ptr<gating::Gate> {
    switch (cfg.gate) {
      case gating::GateKind::Scripted: return std::make_unique<gating::ScriptedGate>();
      case gating::GateKind::Llm: {
        gating::LlmGateOptions options;
        options.model = cfg.llm.model;
        return std::make_unique<gating::LlmGate>(*backend, options);
      }
      case gating::GateKind::Trained: return std::make_unique<gating::TrainedGate>(trained.at(m));
    }
    throw std::logic_error("unknown gate kind");
  };
  const std::string baseline_id = experts::default_expert_id(cfg.maze.baseline_objective);
  const std::string label(gating::to_string(cfg.gate));
  const bool parallel = cfg.gate != gating::GateKind::Llm;

  if (cfg.maze.eval_episodes > 0) {
    for (maze::Mission m : maze::kAllMissions) {
      std::vector<std::future<MazeSeedRow>> gate_rows;
      std::vector<std::future<MazeSeedRow>> base_rows;
      const auto policy = parallel ? std::launch::async : std::launch::deferred;
      for (std::uint64_t seed : cfg.eval_seeds) {
        gate_rows.push_back(std::async(policy, [&, m, seed] {
          auto gate = make_gate(m);
          return evaluate_maze_gate(*gate, label, registry, cfg, m, seed);
        }));
      }
      for (std::uint64_t seed : cfg.eval_seeds) {
        base_rows.push_back(std::async(std::launch::async, [&, m, seed] {
          SingleExpertGate gate(baseline_id, cfg.maze.baseline_objective);
          return evaluate_maze_gate(gate, "single:" + baseline_id, registry, cfg, m, seed);
        }));
      }
      for (auto& f : gate_rows) report.rows.push_back(f.get());
      for (auto& f : base_rows) report.rows.push_back(f.get());
    }
  }
  report.aggregates = MazeReport::aggregate(report.rows);

  std::ostringstream results, summary, curve;
  results << "gate,mission,seed,episodes,success_rate,mean_steps,mean_reward,gate_errors\n";
  for (const MazeSeedRow& r : report.rows) {
    results << r.gate << ',' << maze::to_string(r.mission) << ',' << r.seed << ',' << r.episodes << ','
            << format_sig12(r.success_rate) << ',' << format_sig12(r.mean_steps) << ',' << format_sig12(r.mean_reward)
            << ',' << r.gate_errors << '\n';
  }
  summary << "gate,mission,success_mean,success_std,steps_mean,steps_std,reward_mean,reward_std\n";
  for (const MazeAggregate& a : report.aggregates) {
    summary << a.gate << ',' << maze::to_string(a.mission) << ',' << format_sig12(a.success_rate.mean) << ','
            << format_sig12(a.success_rate.stddev) << ',' << format_sig12(a.mean_steps.mean) << ','
            << format_sig12(a.mean_steps.stddev) << ',' << format_sig12(a.mean_reward.mean) << ','
            << format_sig12(a.mean_reward.stddev) << '\n';
  }
  write_file(cfg.output_dir / "maze_results.csv", results.str());
  write_file(cfg.output_dir / "maze_summary.csv", summary.str());
  if (cfg.gate == gating::GateKind::Trained) {
    curve << "mission,episode,success_rate,mean_reward\n";
    for (const CurveRow& c : report.learning_curve) {
      curve << maze::to_string(c.mission) << ',' << c.point.episode << ',' << format_sig12(c.point.success_rate) << ','
            << format_sig12(c.point.mean_reward) << '\n';
    }
    write_file(cfg.output_dir / "learning_curve.csv", curve.str());
  }
  write_json(cfg.output_dir / "maze_report.json", report.to_json());
  return report;
}

// --- NSP utility ---------------------------------------------------------------

json NspReport::to_json() const {
  json experts_json = json::array();
  for (const ExpertChoice& e : experts) {
    experts_json.push_back({{"id", e.id}, {"objective", std::string(moe::to_string(e.objective))}, {"power", e.power}});
  }
  json objectives = json::array();
  for (Objective o : decision.objectives.tags) objectives.push_back(std::string(moe::to_string(o)));
  json utility = json::object();
  for (wireless::QosMetric m : wireless::kAllMetrics) {
    utility[std::string(wireless::to_string(m))] = outcome.utility[static_cast<std::size_t>(m)];
  }
  return {{"provenance", {{"config_hash", provenance.config_hash}, {"code_version", provenance.code_version}}},
          {"requirement", requirement},
          {"objectives", std::move(objectives)},
          {"selected", decision.selected},
          {"weights", decision.weights},
          {"fused_scores", decision.fused_scores},
          {"trace", decision.trace},
          {"experts", std::move(experts_json)},
          {"decision",
           {{"power", outcome.power},
            {"outage_probability", outcome.outage},
            {"data_rate", outcome.data_rate},
            {"throughput", outcome.throughput},
            {"utility", std::move(utility)}}},
          {"target_metric", std::string(wireless::to_string(target))},
          {"oracle", {{"power", oracle.power}, {"utility", oracle.utility}}},
          {"regret", regret}};
}

NspReport run_nsp_utility(const ExperimentConfig& cfg, llm::ChatBackend* backend) {
  cfg.validate();
  if (cfg.gate == gating::GateKind::Trained) throw ConfigError("the trained gate only drives maze missions");
  ensure_writable(cfg.output_dir);
  const gating::ExpertRegistry registry = load_power_registry(cfg);
  const wireless::WirelessContext ctx = cfg.nsp.context();

  std::unique_ptr<llm::ChatBackend> owned;
  std::unique_ptr<gating::Gate> gate;
  if (cfg.gate == gating::GateKind::Llm) {
    if (!backend) {
      owned = make_backend(cfg);
      backend = owned.get();
    }
    gating::LlmGateOptions options;
    options.model = cfg.llm.model;
    gate = std::make_unique<gating::LlmGate>(*backend, options);
  } else {
    gate = std::make_unique<gating::ScriptedGate>();
  }

  NspReport report;
  report.provenance = provenance(cfg);
  report.requirement = cfg.nsp.requirement;
  report.decision = gating::decide(*gate, {cfg.nsp.requirement, ctx}, registry, experts::kPowerStateKey);
  report.outcome = gating::execute_decision(report.decision, ctx);
  report.target = gating::target_metric(report.decision.objectives);
  report.oracle = wireless::brute_force_optimal_power(ctx, report.target);
  report.regret = report.oracle.utility - report.outcome.utility[static_cast<std::size_t>(report.target)];
  for (const std::string& id : report.decision.selected) {
    const experts::ExpertModel& e = registry.get(id);
    const experts::ActionScores s = experts::score_actions(e, experts::kPowerStateKey);
    report.experts.push_back({id, e.objective(), ctx.market.power_grid[s.argmax]});
  }

  std::vector<wireless::UtilityPoint> rows;
  for (double p : ctx.market.power_grid) {
    for (wireless::QosMetric m : wireless::kAllMetrics) rows.push_back(wireless::nsp_utility(ctx, m, p));
  }
  std::ostringstream sweep;
  wireless::write_sweep_csv(sweep, rows);
  write_file(cfg.output_dir / "nsp_sweep.csv", sweep.str());
  write_json(cfg.output_dir / "nsp_report.json", report.to_json());
  return report;
}

// --- dense sweep ---------------------------------------------------------------

DenseSweep compute_sweep(const ExperimentConfig& cfg) {
  const wireless::WirelessContext ctx = cfg.nsp.context();
  ctx.validate();
  const auto& grid = ctx.market.power_grid;
  DenseSweep s;
  s.power = wireless::linspace(*std::min_element(grid.begin(), grid.end()), ctx.market.power_threshold,
                               static_cast<std::size_t>(cfg.nsp.sweep_points));
  for (double p : s.power) {
    s.outage.push_back(wireless::outage_probability(ctx.channel, p));
    s.data_rate.push_back(wireless::data_rate(ctx.channel, p));
    s.throughput.push_back((1.0 - s.outage.back()) * s.data_rate.back());
    for (wireless::QosMetric m : wireless::kAllMetrics) {
      s.utility[static_cast<std::size_t>(m)].push_back(wireless::evaluate_utility(ctx, m, p).utility);
    }
  }
  return s;
}

void write_dense_sweep_csv(std::ostream& out, const DenseSweep& s) {
  out << kDenseSweepHeader << '\n';
  for (std::size_t i = 0; i < s.power.size(); ++i) {
    out << format_sig12(s.power[i]) << ',' << format_sig12(s.outage[i]) << ',' << format_sig12(s.data_rate[i]) << ','
        << format_sig12(s.throughput[i]);
    for (const auto& u : s.utility) out << ',' << format_sig12(u[i]);
    out << '\n';
  }
}

DenseSweep sweep_power(const ExperimentConfig& cfg) {
  cfg.validate();
  ensure_writable(cfg.output_dir);
  DenseSweep s = compute_sweep(cfg);
  std::ostringstream csv;
  write_dense_sweep_csv(csv, s);
  write_file(cfg.output_dir / "sweep_power.csv", csv.str());
  return s;
}

// --- gates -------------------------------------------------------------------

std::unique_ptr<llm::ChatBackend> make_backend(const ExperimentConfig& cfg) {
  if (!cfg.llm.transcript.empty()) {
    if (!fs::exists(cfg.llm.transcript)) {
      throw MissingArtifactError("transcript " + cfg.llm.transcript.string() + " does not exist");
    }
    return std::make_unique<llm::ReplayBackend>(llm::ReplayBackend::from_file(cfg.llm.transcript));
  }
  if (cfg.llm.backend_url.empty()) throw ConfigError("the llm gate needs llm.backend_url or llm.transcript");
  llm::HttpBackendOptions options = llm::HttpBackendOptions::from_env(cfg.llm.backend_url);
  options.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.llm.timeout_seconds * 1000.0));
  options.max_retries = cfg.llm.max_retries;
  return std::make_unique<llm::HttpChatBackend>(std::move(options));
}

}  // namespace moe::harness
