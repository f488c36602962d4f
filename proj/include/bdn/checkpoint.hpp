#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "bdn/data.hpp"
#include "bdn/gibbs.hpp"
#include "bdn/model.hpp"

namespace bdn {

// Everything needed to reproduce, resume, or predict from a training run, as
// a single JSON document. Doubles are serialized as base-10 numbers that
// parse back bit-exactly. Wall-clock telemetry deliberately stays out so
// checkpoints from identical seeds are byte-identical.
struct Checkpoint {
  static constexpr int kVersion = 1;

  NetworkShape shape;
  PriorConfig prior;
  GibbsConfig gibbs;
  std::optional<StandardizationRecord> standardization;
  std::vector<ModelParams> draws;      // retained chain, layer-major inside
  std::vector<double> log_joint;       // one per retained draw
  SamplerState state;                  // resume point
};

nlohmann::json to_json(const NetworkShape& shape);
nlohmann::json to_json(const PriorConfig& prior);
nlohmann::json to_json(const GibbsConfig& config);
nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const LatentState& latents);
nlohmann::json to_json(const StandardizationRecord& record);

NetworkShape shape_from_json(const nlohmann::json& j);
PriorConfig prior_from_json(const nlohmann::json& j);
GibbsConfig gibbs_from_json(const nlohmann::json& j);
ModelParams params_from_json(const nlohmann::json& j);
LatentState latents_from_json(const nlohmann::json& j);
StandardizationRecord standardization_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Companion metadata written next to generated CSVs: how the data was made,
// so evaluation can recover the exact ground-truth quantile function.
struct DatasetManifest {
  std::string kind;      // synthetic regime name, or "csv" for external data
  int n = 0;
  std::uint64_t seed = 0;
  std::string csv_path;  // relative to the manifest's directory
};

void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

}  // namespace bdn
