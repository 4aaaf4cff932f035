// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moe/experts/objective.hpp"

namespace moe::experts {

enum class Domain { Maze, Power };

std::string_view to_string(Domain d);
Domain domain_from_string(std::string_view name);

// Power experts have a single state.
inline constexpr std::string_view kPowerStateKey = "*";

class DomainMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TrainingMeta {
  int episodes = 0;
  double learning_rate = 0.0;           // ignored when the schedule is "1/n"
  std::string learning_rate_schedule;   // "constant" or "1/n"
  double discount = 0.0;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.8;
  std::uint64_t seed = 0;
  double final_residual = 0.0;
  bool converged = false;

  bool operator==(const TrainingMeta&) const = default;
};

using QTable = std::map<std::string, std::vector<double>, std::less<>>;

/// A trained tabular policy. Immutable once constructed; the constructor
/// checks that every row has one finite value per action.
class ExpertModel {
 public:
  ExpertModel(std::string id, Domain domain, Objective objective, std::vector<std::string> actions, QTable q,
              TrainingMeta meta);

  const std::string& id() const { return id_; }
  Domain domain() const { return domain_; }
  Objective objective() const { return objective_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const QTable& q() const { return q_; }
  const TrainingMeta& meta() const { return meta_; }

  // nullptr for keys never visited during training.
  const std::vector<double>* row(std::string_view state_key) const;

  bool operator==(const ExpertModel&) const = default;

 private:
  std::string id_;
  Domain domain_;
  Objective objective_;
  std::vector<std::string> actions_;
  QTable q_;
  TrainingMeta meta_;
};

using ExpertPtr = std::shared_ptr<const ExpertModel>;

struct ActionScores {
  std::vector<double> scores;  // min-max normalized to [0, 1]
  std::vector<double> raw;
  std::size_t argmax = 0;
  bool degenerate = false;  // all raw values equal
  bool unseen = false;      // maze key absent from the table
};

/// Min-max normalization; all-equal input maps to 0.5 everywhere.
ActionScores normalize_scores(std::span<const double> raw);

/// Normalized scores for one state. Unseen maze keys score uniformly; a key
/// of the wrong shape for the model's domain throws DomainMismatchError.
ActionScores score_actions(const ExpertModel& model, std::string_view state_key);

/// Lowest index among the maxima.
std::size_t argmax_lowest(std::span<const double> values);

}  // namespace moe::experts
