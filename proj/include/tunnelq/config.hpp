#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tunnelq/negf.hpp"
#include "tunnelq/qencode.hpp"
#include "tunnelq/tbmodel.hpp"
#include "tunnelq/tracedata.hpp"

namespace tunnelq {

// All files use 1-based site numbers; conversion to zero-based happens here.

/// Name accepted wherever a model file path is expected.
inline constexpr const char *kBuiltinAdenine = "builtin:adenine";

ModelConfig model_config_from_json(const nlohmann::json &j);
nlohmann::json model_config_to_json(const ModelConfig &config);

/// Reads a model file, or returns the built-in adenine model for kBuiltinAdenine.
TightBindingModel load_model(const std::string &path_or_builtin);

/// A single junction, or a weighted configuration superposition of two.
struct JunctionConfig {
    std::string label;
    std::vector<JunctionSpec> components; // one, or two for a superposition
    std::optional<double> theta_deg;      // set for superpositions

    bool is_superposition() const { return components.size() == 2; }
    const TightBindingModel &model() const { return components.front().model; }
};

struct LeadOverrides {
    std::optional<double> onsite;
    std::optional<double> hopping;
    std::optional<double> eta;
};

JunctionConfig junction_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir,
                                  const LeadOverrides &overrides = {});
JunctionConfig load_junction(const std::filesystem::path &path, const LeadOverrides &overrides = {});

struct NamedDistribution {
    std::string label;
    ThetaDistribution distribution;
};

NamedDistribution distribution_from_json(const nlohmann::json &j);
nlohmann::json distribution_to_json(const NamedDistribution &d);
NamedDistribution load_distribution(const std::filesystem::path &path);

SynthSpec synth_spec_from_json(const nlohmann::json &j);
SynthSpec load_synth_spec(const std::filesystem::path &path);

/// Parses a JSON file, mapping I/O and syntax failures to ConfigError.
nlohmann::json read_json_file(const std::filesystem::path &path);

/// Every file a junction config pulls in, for manifests.
std::vector<std::filesystem::path> junction_inputs(const std::filesystem::path &path);

} // namespace tunnelq
