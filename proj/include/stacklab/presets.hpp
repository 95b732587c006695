#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stacklab/sim.hpp"

namespace stacklab {

struct ExpectationCheck {
  std::string name;
  double observed;
  double expected;
  double tolerance;  // |observed - expected| <= tolerance, or a bound when relation is ">=" / "<="
  std::string relation;
  std::string basis;
  bool passed;
};

struct PresetRun {
  std::string label;
  SimConfig config;
};

struct LabeledBatch {
  std::string label;
  SimConfig config;
  BatchResult result;
};

struct PresetOutcome {
  std::string name;
  std::vector<LabeledBatch> batches;
  std::vector<ExpectationCheck> checks;
  nlohmann::json extra;  // preset-specific report values

  bool passed() const;
  const LabeledBatch& batch(const std::string& label) const;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  std::vector<PresetRun> runs;
  std::function<void(PresetOutcome&)> evaluate;
};

struct PresetOptions {
  std::optional<std::int64_t> horizon;
  std::optional<std::vector<std::uint64_t>> seeds;
  bool noiseless = false;
  bool theorem_schedule = false;  // EXP3 alpha = eta = T^(-1/3) instead of the fixed values
  int threads = 1;
};

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
ExperimentPreset make_preset(const std::string& name);
PresetOutcome run_preset(const ExperimentPreset& preset, const PresetOptions& options);

// Mean over seeds of a final-checkpoint quantity.
double mean_final(const BatchResult& batch, const std::function<double(const RunMetrics&)>& get);

nlohmann::json outcome_to_json(const PresetOutcome& outcome);

}  // namespace stacklab
