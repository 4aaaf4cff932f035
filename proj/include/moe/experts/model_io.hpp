// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>

#include "moe/experts/expert.hpp"
#include "json.hpp"

namespace moe::experts {

inline constexpr int kModelFormatVersion = 1;

class ModelFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionMismatchError : public ModelFileError {
 public:
  using ModelFileError::ModelFileError;
};

class CorruptFileError : public ModelFileError {
 public:
  using ModelFileError::ModelFileError;
};

class MissingFieldError : public ModelFileError {
 public:
  using ModelFileError::ModelFileError;
};

nlohmann::json to_json(const ExpertModel& model);
ExpertModel model_from_json(const nlohmann::json& doc);

void save_model(const ExpertModel& model, const std::filesystem::path& path);
ExpertModel load_model(const std::filesystem::path& path);

}  // namespace moe::experts
