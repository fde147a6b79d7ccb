#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "ilab/stability.hpp"
#include "ilab/system.hpp"

namespace ilab {

// Fully specified simulation input.
struct Scenario {
  ImpulsiveSystem system;
  Forcing forcing;
  Eigen::VectorXd x0;
};

// Config schema (see README for the full reference):
//   dimension, horizon, schedule{kind: uniform|explicit}, A{kind: constant|
//   piecewise|sampled}, B{kind: constant|list}, f{kind: zero|constant|
//   piecewise|sampled}, alphas{kind: zero|constant|list|signs}, x0.
// horizon_override replaces the stated horizon before schedules and
// per-impulse lists are resolved; explicit instants beyond it are dropped.
// All structural problems surface as std::invalid_argument.
Scenario parse_scenario(const nlohmann::json& config,
                        std::optional<double> horizon_override = std::nullopt);
Scenario load_scenario(const std::filesystem::path& file,
                       std::optional<double> horizon_override = std::nullopt);

// {"kind", "N", "nu", "provenance", "inputs"}; inputs is caller-supplied
// context carried along verbatim.
nlohmann::json certificate_to_json(const StabilityCertificate& certificate,
                                   nlohmann::json inputs = nlohmann::json::object());
// Requires N >= 1 and nu > 0; unknown provenance strings are rejected and
// inputs are ignored.
StabilityCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace ilab
