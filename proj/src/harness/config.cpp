// SPDX-License-Identifier: Apache-2.0
#include "moe/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "moe/core/errors.hpp"
#include "moe/core/hash.hpp"

namespace moe::harness {

using nlohmann::json;

std::string_view to_string(Scenario s) {
  return s == Scenario::MazeMissions ? "maze-missions" : "nsp-utility";
}

Scenario scenario_from_string(std::string_view name) {
  if (name == "maze-missions") return Scenario::MazeMissions;
  if (name == "nsp-utility") return Scenario::NspUtility;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::map<maze::Mission, std::string> default_requirements() {
  return {{maze::Mission::GoalTrap, "I want to arrive the goal in the safest way"},
          {maze::Mission::GoalPrize, "Explore the maze to obtain the prize, then arrive at the goal"},
          {maze::Mission::GoalPrizeTrap, "Obtain the prize and arrive at the goal safely without touching a trap"}};
}

wireless::WirelessContext NspSettings::context() const {
  wireless::WirelessContext ctx;
  ctx.channel = channel;
  ctx.market = market;
  return ctx;
}

namespace {

// Reads the keys of one JSON object and rejects any it was not asked about.
class Section {
 public:
  Section(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    if (it == doc_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + " has the wrong type");
    }
  }

  template <class Fn>
  void section(const char* key, Fn&& fn) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    if (it == doc_.end()) return;
    Section inner(*it, path(key));
    fn(inner);
    inner.finish();
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& item : doc_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + where_ + "." + item.key());
    }
  }

 private:
  const json& doc_;
  std::string where_;
  std::set<std::string> seen_;
};

maze::Cell read_cell(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError(where + " must be a [row, col] pair of integers");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

std::vector<maze::Cell> read_cells(const json* v, const std::string& where, std::vector<maze::Cell> fallback) {
  if (!v) return fallback;
  if (!v->is_array()) throw ConfigError(where + " must be a list of [row, col] pairs");
  std::vector<maze::Cell> out;
  for (const json& c : *v) out.push_back(read_cell(c, where));
  return out;
}

json cell_json(maze::Cell c) { return json::array({c.row, c.col}); }

json cells_json(const std::vector<maze::Cell>& cells) {
  json out = json::array();
  for (maze::Cell c : cells) out.push_back(cell_json(c));
  return out;
}

void read_layout(Section& s, maze::MazeConfig& m) {
  if (const json* v = s.raw("start")) m.start = read_cell(*v, s.path("start"));
  if (const json* v = s.raw("goal")) m.goal = read_cell(*v, s.path("goal"));
  m.prizes = read_cells(s.raw("prizes"), s.path("prizes"), m.prizes);
  m.traps = read_cells(s.raw("traps"), s.path("traps"), m.traps);
  m.walls = read_cells(s.raw("walls"), s.path("walls"), m.walls);
  s.section("rewards", [&](Section& r) {
    r.read("step", m.rewards.step);
    r.read("goal", m.rewards.goal);
    r.read("prize", m.rewards.prize);
    r.read("trap", m.rewards.trap);
  });
  s.read("max_steps", m.max_steps);
  s.read("trap_terminates", m.trap_terminates);
}

Objective read_objective(const std::string& name, const std::string& where) {
  try {
    return objective_from_string(name);
  } catch (const std::invalid_argument&) {
    throw ConfigError(where + ": unknown objective '" + name + "'");
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  cfg.maze.requirements = default_requirements();
  Section top(doc, "config");

  if (const json* v = top.raw("scenario")) {
    if (!v->is_string()) throw ConfigError("config.scenario must be a string");
    cfg.scenario = scenario_from_string(v->get<std::string>());
  }
  if (const json* v = top.raw("gate")) {
    if (!v->is_string()) throw ConfigError("config.gate must be a string");
    try {
      cfg.gate = gating::gate_kind_from_string(v->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  top.read("seed", cfg.seed);
  top.read("eval_seeds", cfg.eval_seeds);
  top.read("train_first", cfg.train_first);
  if (const json* v = top.raw("output_dir")) {
    if (!v->is_string()) throw ConfigError("config.output_dir must be a string");
    cfg.output_dir = v->get<std::string>();
  }
  if (const json* v = top.raw("model_dir")) {
    if (!v->is_string()) throw ConfigError("config.model_dir must be a string");
    cfg.model_dir = v->get<std::string>();
  }

  top.section("maze", [&](Section& s) {
    s.section("layout", [&](Section& l) { read_layout(l, cfg.maze.layout); });
    s.section("expert_training", [&](Section& t) {
      auto& p = cfg.maze.expert_training;
      t.read("episodes", p.episodes);
      t.read("learning_rate", p.learning_rate);
      t.read("discount", p.discount);
      t.read("epsilon_start", p.epsilon_start);
      t.read("epsilon_end", p.epsilon_end);
      t.read("epsilon_decay_fraction", p.epsilon_decay_fraction);
      t.read("exploring_starts", p.exploring_starts);
      t.read("residual_threshold", p.residual_threshold);
    });
    s.section("gate_training", [&](Section& t) {
      auto& p = cfg.maze.gate_training;
      t.read("episodes", p.episodes);
      t.read("learning_rate", p.learning_rate);
      t.read("discount", p.discount);
      t.read("epsilon_start", p.epsilon_start);
      t.read("epsilon_end", p.epsilon_end);
      t.read("epsilon_decay_fraction", p.epsilon_decay_fraction);
      t.read("checkpoint_every", p.checkpoint_every);
      t.read("residual_threshold", p.residual_threshold);
    });
    s.read("eval_episodes", cfg.maze.eval_episodes);
    s.read("eval_epsilon", cfg.maze.eval_epsilon);
    if (const json* v = s.raw("requirements")) {
      if (!v->is_object()) throw ConfigError("config.maze.requirements must map mission names to text");
      for (const auto& [name, value] : v->items()) {
        maze::Mission m;
        try {
          m = maze::mission_from_string(name);
        } catch (const std::invalid_argument&) {
          throw ConfigError("config.maze.requirements: unknown mission '" + name + "'");
        }
        if (!value.is_string()) throw ConfigError("config.maze.requirements." + name + " must be a string");
        cfg.maze.requirements[m] = value.get<std::string>();
      }
    }
    if (const json* v = s.raw("baseline_objective")) {
      if (!v->is_string()) throw ConfigError("config.maze.baseline_objective must be a string");
      cfg.maze.baseline_objective = read_objective(v->get<std::string>(), "config.maze.baseline_objective");
    }
  });

  top.section("nsp", [&](Section& s) {
    s.section("channel", [&](Section& c) {
      auto& ch = cfg.nsp.channel;
      c.read("num_antennas", ch.num_antennas);
      c.read("fading_scale", ch.fading_scale);
      c.read("distance", ch.distance);
      c.read("path_loss_exponent", ch.path_loss_exponent);
      c.read("noise_power", ch.noise_power);
      c.read("bandwidth", ch.bandwidth);
      if (const json* v = c.raw("outage_threshold_db")) {
        if (!v->is_number()) throw ConfigError("config.nsp.channel.outage_threshold_db must be a number");
        ch.outage_threshold = wireless::db_to_linear(v->get<double>());
      }
    });
    s.section("market", [&](Section& m) {
      auto& mk = cfg.nsp.market;
      m.read("payment_coeff", mk.payment_coeff);
      m.read("cost_coeff", mk.cost_coeff);
      m.read("power_grid", mk.power_grid);
      m.read("power_threshold", mk.power_threshold);
      m.section("bounds", [&](Section& b) {
        for (wireless::QosMetric metric : wireless::kAllMetrics) {
          const std::string name(wireless::to_string(metric));
          std::array<double, 2> range{};
          if (const json* v = b.raw(name.c_str())) {
            try {
              range = v->get<std::array<double, 2>>();
            } catch (const json::exception&) {
              throw ConfigError("config.nsp.market.bounds." + name + " must be [min, max]");
            }
            mk.bounds_for(metric) = {range[0], range[1]};
            cfg.nsp.explicit_bounds[static_cast<std::size_t>(metric)] = true;
          }
        }
      });
    });
    s.read("requirement", cfg.nsp.requirement);
    s.section("bandit", [&](Section& b) {
      auto& p = cfg.nsp.bandit;
      b.read("pulls", p.pulls);
      b.read("epsilon_start", p.epsilon_start);
      b.read("epsilon_end", p.epsilon_end);
      b.read("epsilon_decay_fraction", p.epsilon_decay_fraction);
      b.read("residual_threshold", p.residual_threshold);
    });
    if (const json* v = s.raw("experts")) {
      if (!v->is_array()) throw ConfigError("config.nsp.experts must be a list of objective names");
      cfg.nsp.experts.clear();
      for (const json& o : *v) {
        if (!o.is_string()) throw ConfigError("config.nsp.experts must be a list of objective names");
        cfg.nsp.experts.push_back(read_objective(o.get<std::string>(), "config.nsp.experts"));
      }
    }
    s.read("sweep_points", cfg.nsp.sweep_points);
  });

  top.section("llm", [&](Section& s) {
    s.read("backend_url", cfg.llm.backend_url);
    if (const json* v = s.raw("transcript")) {
      if (!v->is_string()) throw ConfigError("config.llm.transcript must be a string");
      cfg.llm.transcript = v->get<std::string>();
    }
    s.read("model", cfg.llm.model);
    s.read("timeout_seconds", cfg.llm.timeout_seconds);
    s.read("max_retries", cfg.llm.max_retries);
  });
  top.finish();

  try {
    cfg.nsp.channel.validate();
    cfg.nsp.market = wireless::with_default_bounds(cfg.nsp.channel, cfg.nsp.market, cfg.nsp.explicit_bounds);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.nsp: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig default_config() { return config_from_json(json::object()); }

void ExperimentConfig::validate() const {
  if (eval_seeds.empty()) throw ConfigError("eval_seeds must not be empty");
  try {
    maze.layout.validate();
    nsp.channel.validate();
    nsp.market.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (maze.eval_episodes < 0) throw ConfigError("maze.eval_episodes must be nonnegative");
  if (!(maze.eval_epsilon >= 0.0 && maze.eval_epsilon <= 1.0)) throw ConfigError("maze.eval_epsilon must be in [0, 1]");
  if (maze.expert_training.episodes < 0 || maze.gate_training.episodes < 0) {
    throw ConfigError("training episode budgets must be nonnegative");
  }
  if (maze.gate_training.checkpoint_every <= 0) throw ConfigError("maze.gate_training.checkpoint_every must be positive");
  if (!is_maze_objective(maze.baseline_objective)) throw ConfigError("maze.baseline_objective must be a maze objective");
  for (const auto& [mission, text] : maze.requirements) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ConfigError("requirement text for " + std::string(maze::to_string(mission)) + " is empty");
    }
  }
  if (nsp.requirement.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("nsp.requirement is empty");
  if (nsp.experts.empty()) throw ConfigError("nsp.experts must not be empty");
  for (Objective o : nsp.experts) {
    if (is_maze_objective(o)) throw ConfigError("nsp.experts lists a maze objective");
  }
  if (nsp.bandit.pulls <= 0) throw ConfigError("nsp.bandit.pulls must be positive");
  if (nsp.sweep_points < 2) throw ConfigError("nsp.sweep_points must be at least 2");
  if (!(llm.timeout_seconds > 0.0)) throw ConfigError("llm.timeout_seconds must be positive");
  if (llm.max_retries < 0) throw ConfigError("llm.max_retries must be nonnegative");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

json semantic_json(const ExperimentConfig& cfg) {
  const auto& m = cfg.maze;
  const auto& l = m.layout;
  json requirements = json::object();
  for (const auto& [mission, text] : m.requirements) requirements[std::string(maze::to_string(mission))] = text;
  json bounds = json::object();
  for (wireless::QosMetric metric : wireless::kAllMetrics) {
    const auto& b = cfg.nsp.market.bounds_for(metric);
    bounds[std::string(wireless::to_string(metric))] = {b.min, b.max};
  }
  json nsp_experts = json::array();
  for (Objective o : cfg.nsp.experts) nsp_experts.push_back(std::string(to_string(o)));
  const auto& et = m.expert_training;
  const auto& gt = m.gate_training;
  const auto& ch = cfg.nsp.channel;
  const auto& mk = cfg.nsp.market;
  const auto& bd = cfg.nsp.bandit;
  return {
      {"scenario", std::string(to_string(cfg.scenario))},
      {"gate", std::string(gating::to_string(cfg.gate))},
      {"seed", cfg.seed},
      {"eval_seeds", cfg.eval_seeds},
      {"train_first", cfg.train_first},
      {"maze",
       {{"layout",
         {{"start", cell_json(l.start)},
          {"goal", cell_json(l.goal)},
          {"prizes", cells_json(l.prizes)},
          {"traps", cells_json(l.traps)},
          {"walls", cells_json(l.walls)},
          {"rewards",
           {{"step", l.rewards.step}, {"goal", l.rewards.goal}, {"prize", l.rewards.prize}, {"trap", l.rewards.trap}}},
          {"max_steps", l.max_steps},
          {"trap_terminates", l.trap_terminates}}},
        {"expert_training",
         {{"episodes", et.episodes},
          {"learning_rate", et.learning_rate},
          {"discount", et.discount},
          {"epsilon_start", et.epsilon_start},
          {"epsilon_end", et.epsilon_end},
          {"epsilon_decay_fraction", et.epsilon_decay_fraction},
          {"exploring_starts", et.exploring_starts},
          {"residual_threshold", et.residual_threshold}}},
        {"gate_training",
         {{"episodes", gt.episodes},
          {"learning_rate", gt.learning_rate},
          {"discount", gt.discount},
          {"epsilon_start", gt.epsilon_start},
          {"epsilon_end", gt.epsilon_end},
          {"epsilon_decay_fraction", gt.epsilon_decay_fraction},
          {"checkpoint_every", gt.checkpoint_every},
          {"residual_threshold", gt.residual_threshold}}},
        {"eval_episodes", m.eval_episodes},
        {"eval_epsilon", m.eval_epsilon},
        {"requirements", std::move(requirements)},
        {"baseline_objective", std::string(to_string(m.baseline_objective))}}},
      {"nsp",
       {{"channel",
         {{"num_antennas", ch.num_antennas},
          {"fading_scale", ch.fading_scale},
          {"distance", ch.distance},
          {"path_loss_exponent", ch.path_loss_exponent},
          {"noise_power", ch.noise_power},
          {"bandwidth", ch.bandwidth},
          {"outage_threshold_linear", ch.outage_threshold}}},
        {"market",
         {{"payment_coeff", mk.payment_coeff},
          {"cost_coeff", mk.cost_coeff},
          {"power_grid", mk.power_grid},
          {"power_threshold", mk.power_threshold},
          {"bounds", std::move(bounds)}}},
        {"requirement", cfg.nsp.requirement},
        {"bandit",
         {{"pulls", bd.pulls},
          {"epsilon_start", bd.epsilon_start},
          {"epsilon_end", bd.epsilon_end},
          {"epsilon_decay_fraction", bd.epsilon_decay_fraction},
          {"residual_threshold", bd.residual_threshold}}},
        {"experts", std::move(nsp_experts)},
        {"sweep_points", cfg.nsp.sweep_points}}},
      {"llm",
       {{"model", cfg.llm.model}, {"timeout_seconds", cfg.llm.timeout_seconds}, {"max_retries", cfg.llm.max_retries}}},
  };
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(semantic_json(cfg).dump()); }

}  // namespace moe::harness
