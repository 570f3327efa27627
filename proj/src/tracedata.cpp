#include "tunnelq/tracedata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "tunnelq/error.hpp"
#include "tunnelq/format.hpp"

namespace tunnelq {

namespace {

constexpr std::string_view kTraceHeader = "time_s,conductance_ns";
constexpr double kLogFloorNs = 1e-12;

double median(std::vector<double> v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

} // namespace

void ConductanceTrace::validate() const {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw Error(ErrorKind::InvalidSpec, "sample rate must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto &s = samples[i];
        if (!std::isfinite(s.time_s) || !std::isfinite(s.conductance_ns))
            throw Error(ErrorKind::ParseError, "non-finite value in sample " + std::to_string(i));
        if (s.conductance_ns < 0.0)
            throw Error(ErrorKind::NegativeConductance, "sample " + std::to_string(i));
        if (i > 0 && !(s.time_s > samples[i - 1].time_s))
            throw Error(ErrorKind::NonMonotoneTime, "sample " + std::to_string(i));
    }
}

ConductanceTrace read_trace(std::istream &in) {
    ConductanceTrace trace;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw Error(ErrorKind::ParseError, line_ref(1) + ": missing header");
    ++lineno;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kTraceHeader)
        throw Error(ErrorKind::ParseError, line_ref(1) + ": expected header '" + std::string(kTraceHeader) + "'");

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw Error(ErrorKind::ParseError, line_ref(lineno) + ": expected two fields");
        TraceSample s;
        if (!parse_number(std::string_view(line).substr(0, comma), s.time_s) ||
            !parse_number(std::string_view(line).substr(comma + 1), s.conductance_ns) || !std::isfinite(s.time_s) ||
            !std::isfinite(s.conductance_ns))
            throw Error(ErrorKind::ParseError, line_ref(lineno) + ": not a number");
        if (s.conductance_ns < 0.0)
            throw Error(ErrorKind::NegativeConductance, line_ref(lineno) + ": " + format_number(s.conductance_ns) + " nS");
        if (!trace.samples.empty() && !(s.time_s > trace.samples.back().time_s))
            throw Error(ErrorKind::NonMonotoneTime, line_ref(lineno) + ": time does not increase");
        trace.samples.push_back(s);
    }
    if (trace.samples.size() >= 2) {
        const double span = trace.samples.back().time_s - trace.samples.front().time_s;
        trace.sample_rate_hz = static_cast<double>(trace.samples.size() - 1) / span;
    }
    return trace;
}

ConductanceTrace load_trace(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open trace " + path.string());
    return read_trace(in);
}

void write_trace(std::ostream &out, const ConductanceTrace &trace) {
    out << kTraceHeader << '\n';
    for (const auto &s : trace.samples)
        out << format_number(s.time_s) << ',' << format_number(s.conductance_ns) << '\n';
}

void save_trace(const std::filesystem::path &path, const ConductanceTrace &trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::IoError, "cannot write trace " + path.string());
    write_trace(out, trace);
    if (!out)
        throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void LevelThresholds::validate() const {
    if (!(low_max > 0.0) || !(high_min > low_max) || !std::isfinite(high_min))
        throw Error(ErrorKind::InvalidSpec, "thresholds need 0 < low_max < high_min");
}

Level classify_sample(double conductance_ns, const LevelThresholds &thresholds) {
    if (conductance_ns <= thresholds.low_max)
        return Level::Low;
    if (conductance_ns < thresholds.high_min)
        return Level::Intermediate;
    return Level::High;
}

LevelSummary classify_levels(const ConductanceTrace &trace, const LevelThresholds &thresholds) {
    thresholds.validate();
    if (trace.samples.empty())
        throw Error(ErrorKind::EmptyTrace, "trace has no samples");

    LevelSummary summary;
    summary.labels.reserve(trace.samples.size());
    std::array<std::vector<double>, 3> by_level;
    for (const auto &s : trace.samples) {
        const Level level = classify_sample(s.conductance_ns, thresholds);
        summary.labels.push_back(level);
        by_level[static_cast<std::size_t>(level)].push_back(s.conductance_ns);
    }
    const auto n = static_cast<double>(trace.samples.size());
    for (std::size_t k = 0; k < 3; ++k) {
        summary.counts[k] = by_level[k].size();
        summary.probabilities[k] = static_cast<double>(by_level[k].size()) / n;
    }
    if (!by_level[0].empty())
        summary.g_high = median(by_level[0]);
    if (!by_level[1].empty())
        summary.g_intermediate = median(by_level[1]);
    if (!by_level[2].empty())
        summary.g_low = median(by_level[2]);
    return summary;
}

bool has_level_structure(const ConductanceTrace &trace, const LevelSummary &summary, double max_log10_mad) {
    if (summary.labels.size() != trace.samples.size())
        throw Error(ErrorKind::InvalidSpec, "summary does not belong to this trace");
    std::array<std::vector<double>, 3> logs;
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        logs[static_cast<std::size_t>(summary.labels[i])].push_back(
            std::log10(std::max(trace.samples[i].conductance_ns, kLogFloorNs)));
    for (auto &values : logs) {
        if (values.empty())
            return false;
        const double m = median(values);
        for (auto &v : values)
            v = std::abs(v - m);
        if (median(values) > max_log10_mad)
            return false;
    }
    return true;
}

EncodedTrace encode_trace(const ConductanceTrace &trace, const LevelThresholds &thresholds) {
    EncodedTrace enc;
    enc.summary = classify_levels(trace, thresholds);
    const auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end(),
                                              [](const auto &a, const auto &b) { return a.conductance_ns < b.conductance_ns; });
    enc.g_high = enc.summary.g_high.value_or(hi->conductance_ns);
    enc.g_low = enc.summary.g_low.value_or(lo->conductance_ns);
    enc.level_structure = has_level_structure(trace, enc.summary);
    enc.samples.reserve(trace.samples.size());
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        enc.samples.push_back({theta_from_conductance(trace.samples[i].conductance_ns, enc.g_high, enc.g_low),
                               enc.summary.labels[i]});
    return enc;
}

void SynthSpec::validate() const {
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(ErrorKind::InvalidSpec, "level probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidSpec, "level probabilities sum to " + format_number(total));
    for (double m : means_ns)
        if (!(m > 0.0) || !std::isfinite(m))
            throw Error(ErrorKind::InvalidSpec, "level means must be positive");
    if (!(dwell_s > 0.0) || !std::isfinite(dwell_s))
        throw Error(ErrorKind::InvalidSpec, "dwell_s must be positive");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw Error(ErrorKind::InvalidSpec, "noise_sigma must be nonnegative");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw Error(ErrorKind::InvalidSpec, "duration_s must be positive");
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw Error(ErrorKind::InvalidSpec, "sample_rate_hz must be positive");
}

ConductanceTrace synth_trace(const SynthSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    if (n == 0)
        throw Error(ErrorKind::InvalidSpec, "duration shorter than one sample");

    std::mt19937_64 rng(spec.seed);
    std::discrete_distribution<int> pick_level(spec.probabilities.begin(), spec.probabilities.end());
    std::exponential_distribution<double> dwell(1.0 / spec.dwell_s);
    std::normal_distribution<double> noise(0.0, 1.0);

    ConductanceTrace trace;
    trace.sample_rate_hz = spec.sample_rate_hz;
    trace.samples.resize(n);
    std::size_t i = 0;
    while (i < n) {
        const auto level = static_cast<std::size_t>(pick_level(rng));
        const auto len = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(dwell(rng) * spec.sample_rate_hz)));
        const std::size_t end = std::min(n, i + len);
        for (; i < end; ++i) {
            const double factor = spec.noise_sigma > 0.0 ? std::exp(spec.noise_sigma * noise(rng)) : 1.0;
            trace.samples[i] = {static_cast<double>(i) / spec.sample_rate_hz, spec.means_ns[level] * factor};
        }
    }
    return trace;
}

} // namespace tunnelq
