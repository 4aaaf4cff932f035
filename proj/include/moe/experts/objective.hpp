// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string_view>

namespace moe {

// Objective vocabulary shared by experts and gates.
enum class Objective {
  GoToGoal,
  CollectPrize,
  AvoidTrap,
  MinimizeOp,
  MaximizeDr,
  MaximizeTp,
  MinimizeBep,
};

inline constexpr std::array<Objective, 7> kAllObjectives{
    Objective::GoToGoal,   Objective::CollectPrize, Objective::AvoidTrap,  Objective::MinimizeOp,
    Objective::MaximizeDr, Objective::MaximizeTp,   Objective::MinimizeBep};

std::string_view to_string(Objective o);

// Throws std::invalid_argument for names outside the vocabulary.
Objective objective_from_string(std::string_view name);

bool is_maze_objective(Objective o);

}  // namespace moe
