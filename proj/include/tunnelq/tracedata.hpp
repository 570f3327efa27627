#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tunnelq/qencode.hpp"

namespace tunnelq {

inline constexpr double kDefaultSampleRateHz = 10'000.0;

struct TraceSample {
    double time_s = 0.0;
    double conductance_ns = 0.0;
};

/// Baseline-corrected conductance time series in nS.
struct ConductanceTrace {
    std::vector<TraceSample> samples;
    double sample_rate_hz = kDefaultSampleRateHz;

    void validate() const;
};

/// CSV with header `time_s,conductance_ns`. Errors carry the 1-based line number.
ConductanceTrace read_trace(std::istream &in);
ConductanceTrace load_trace(const std::filesystem::path &path);
void write_trace(std::ostream &out, const ConductanceTrace &trace);
void save_trace(const std::filesystem::path &path, const ConductanceTrace &trace);

struct LevelThresholds {
    double low_max = 0.01;  // nS, samples <= low_max are Low
    double high_min = 0.1;  // nS, samples >= high_min are High

    void validate() const;
};

Level classify_sample(double conductance_ns, const LevelThresholds &thresholds);

struct LevelSummary {
    std::vector<Level> labels;
    std::array<double, 3> probabilities{};   // indexed by Level
    std::array<std::size_t, 3> counts{};
    std::optional<double> g_high;            // median of High samples
    std::optional<double> g_low;             // median of Low samples
    std::optional<double> g_intermediate;

    double probability(Level level) const { return probabilities[static_cast<std::size_t>(level)]; }
    bool missing(Level level) const { return counts[static_cast<std::size_t>(level)] == 0; }
};

LevelSummary classify_levels(const ConductanceTrace &trace, const LevelThresholds &thresholds = {});

/**
 * True when every level is populated and, within each level, the median
 * absolute deviation of log10(g) is at most `max_log10_mad` decades.
 * Scattered traces fail this and are identified in expectation mode.
 */
bool has_level_structure(const ConductanceTrace &trace, const LevelSummary &summary,
                         double max_log10_mad = 0.1);

/// Per-sample encoding of a trace onto theta angles.
struct EncodedTrace {
    LevelSummary summary;
    double g_high = 0.0;           // level medians, or max/min when a level is missing
    double g_low = 0.0;
    bool level_structure = false;  // see has_level_structure
    std::vector<EncodedSample> samples;
};

/// Classifies, then maps each sample to theta with theta_from_conductance.
/// Samples carry their level label; callers drop it for expectation mode.
EncodedTrace encode_trace(const ConductanceTrace &trace, const LevelThresholds &thresholds = {});

/// Level probabilities and means are ordered High, Intermediate, Low.
struct SynthSpec {
    std::array<double, 3> probabilities{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    std::array<double, 3> means_ns{0.132, 0.066, 0.001};
    double dwell_s = 0.1;
    double noise_sigma = 0.1;
    double duration_s = 1.0;
    std::uint64_t seed = 1;
    double sample_rate_hz = kDefaultSampleRateHz;

    void validate() const;
};

/**
 * Three-level telegraph trace: segments with exponentially distributed
 * dwell (mean dwell_s) and an iid level drawn from `probabilities`; each
 * sample is the level mean times exp(noise_sigma * N(0,1)).
 */
ConductanceTrace synth_trace(const SynthSpec &spec);

} // namespace tunnelq
