#include "tunnelq/qencode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tunnelq/angles.hpp"
#include "tunnelq/error.hpp"

namespace tunnelq {

namespace {

using cplx = std::complex<double>;

constexpr double kNormTol = 1e-12;
constexpr double kThetaMatchTol = 1e-9;
constexpr double kBinEdgeSlack = 1e-9;

int bit_shift(int qubit) {
    if (qubit < 1 || qubit > 3)
        throw Error(ErrorKind::IndexOutOfRange, "qubit must be 1, 2 or 3");
    return 3 - qubit;
}

void require_angle(double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
        throw Error(ErrorKind::AngleOutOfRange, "theta must lie in [0, 90] degrees, got " + std::to_string(theta_deg));
}

double sorted_mean(std::vector<double> values) {
    // Summing in sorted order makes the mean independent of input order.
    std::sort(values.begin(), values.end());
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

} // namespace

std::string level_name(Level level) {
    switch (level) {
    case Level::High: return "High";
    case Level::Intermediate: return "Intermediate";
    case Level::Low: return "Low";
    }
    return "Unknown";
}

QState QState::basis(int q1, int q2, int q3) {
    Amplitudes amp{};
    amp[static_cast<std::size_t>((q1 & 1) * 4 + (q2 & 1) * 2 + (q3 & 1))] = 1.0;
    return QState(amp, Unchecked{});
}

QState::QState(const Amplitudes &amplitudes) : amp_(amplitudes) {
    const double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= kNormTol))
        throw Error(ErrorKind::UnnormalizedState, "squared norm is " + std::to_string(n2));
}

std::complex<double> QState::amplitude(int q1, int q2, int q3) const {
    return amp_[static_cast<std::size_t>((q1 & 1) * 4 + (q2 & 1) * 2 + (q3 & 1))];
}

double QState::probability(int q1, int q2, int q3) const { return std::norm(amplitude(q1, q2, q3)); }

double QState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amp_)
        s += std::norm(a);
    return s;
}

Gate1 rotation_gate(double theta_deg) {
    const double c = cos_deg(theta_deg);
    const double s = sin_deg(theta_deg);
    return {c, -s, s, c};
}

Gate1 not_gate() { return {0.0, 1.0, 1.0, 0.0}; }

QState apply_single(const QState &state, int qubit, const Gate1 &gate) {
    const std::size_t mask = std::size_t{1} << bit_shift(qubit);
    QState::Amplitudes out = state.amp_;
    for (std::size_t i = 0; i < QState::kDim; ++i) {
        if (i & mask)
            continue;
        const cplx a0 = state.amp_[i];
        const cplx a1 = state.amp_[i | mask];
        out[i] = gate[0] * a0 + gate[1] * a1;
        out[i | mask] = gate[2] * a0 + gate[3] * a1;
    }
    return QState(out, QState::Unchecked{});
}

QState apply_cnot(const QState &state, int control, int target) {
    if (control == target)
        throw Error(ErrorKind::IndexOutOfRange, "CNOT control and target must differ");
    const std::size_t cmask = std::size_t{1} << bit_shift(control);
    const std::size_t tmask = std::size_t{1} << bit_shift(target);
    QState::Amplitudes out = state.amp_;
    for (std::size_t i = 0; i < QState::kDim; ++i)
        if (i & cmask)
            out[i] = state.amp_[i ^ tmask];
    return QState(out, QState::Unchecked{});
}

std::array<std::complex<double>, 64> embed_single(int qubit, const Gate1 &gate) {
    std::array<cplx, 64> m{};
    for (std::size_t col = 0; col < QState::kDim; ++col) {
        const auto e = QState::basis(static_cast<int>(col >> 2), static_cast<int>(col >> 1), static_cast<int>(col));
        const auto out = apply_single(e, qubit, gate);
        for (std::size_t row = 0; row < QState::kDim; ++row)
            m[row * 8 + col] = out.amplitudes()[row];
    }
    return m;
}

std::array<std::complex<double>, 64> embed_cnot(int control, int target) {
    std::array<cplx, 64> m{};
    for (std::size_t col = 0; col < QState::kDim; ++col) {
        const auto e = QState::basis(static_cast<int>(col >> 2), static_cast<int>(col >> 1), static_cast<int>(col));
        const auto out = apply_cnot(e, control, target);
        for (std::size_t row = 0; row < QState::kDim; ++row)
            m[row * 8 + col] = out.amplitudes()[row];
    }
    return m;
}

QState apply(const QState &state, const GateOp &op) {
    switch (op.kind) {
    case GateOp::Kind::Rotation: return apply_single(state, op.qubit, rotation_gate(op.theta_deg));
    case GateOp::Kind::Not: return apply_single(state, op.qubit, not_gate());
    case GateOp::Kind::Cnot: return apply_cnot(state, op.qubit, op.target);
    }
    return state;
}

std::vector<GateOp> EncodingCircuit::gates() const {
    return {
        {GateOp::Kind::Rotation, 2, 0, theta_deg},
        {GateOp::Kind::Cnot, 2, 3, 0.0},
        {GateOp::Kind::Not, 2, 0, 0.0},
    };
}

std::vector<GateOp> EncodingCircuit::inverse_gates() const {
    auto ops = gates();
    std::reverse(ops.begin(), ops.end());
    for (auto &op : ops)
        if (op.kind == GateOp::Kind::Rotation)
            op.theta_deg = -op.theta_deg;
    return ops;
}

std::array<std::complex<double>, 64> EncodingCircuit::matrix() const {
    std::array<cplx, 64> m{};
    for (std::size_t col = 0; col < QState::kDim; ++col) {
        auto s = QState::basis(static_cast<int>(col >> 2), static_cast<int>(col >> 1), static_cast<int>(col));
        for (const auto &op : gates())
            s = apply(s, op);
        for (std::size_t row = 0; row < QState::kDim; ++row)
            m[row * 8 + col] = s.amplitudes()[row];
    }
    return m;
}

double theta_from_conductance(double g, double g_high, double g_low) {
    if (!std::isfinite(g_high) || !std::isfinite(g_low) || !(g_high > g_low) || g_low < 0.0)
        throw Error(ErrorKind::DegenerateRange, "need g_high > g_low >= 0");
    if (std::isnan(g))
        throw Error(ErrorKind::InvalidSpec, "conductance is NaN");
    const double clamped = std::clamp(g, g_low, g_high);
    const double r = (clamped - g_low) / (g_high - g_low);
    if (r == 1.0)
        return 0.0;
    if (r == 0.5)
        return 45.0;
    if (r == 0.0)
        return 90.0;
    return rad_to_deg(std::acos(std::sqrt(r)));
}

QState forward_encode(double theta_deg) {
    require_angle(theta_deg);
    auto s = QState::basis(1, 0, 0);
    for (const auto &op : EncodingCircuit{theta_deg}.gates())
        s = apply(s, op);
    return s;
}

QState backflow(const QState &state, double theta_ref_deg) {
    require_angle(theta_ref_deg);
    const double n2 = state.norm_squared();
    if (!(std::abs(n2 - 1.0) <= kNormTol))
        throw Error(ErrorKind::UnnormalizedState, "squared norm is " + std::to_string(n2));
    auto s = state;
    for (const auto &op : EncodingCircuit{theta_ref_deg}.inverse_gates())
        s = apply(s, op);
    return s;
}

double return_probability(const QState &state, double theta_ref_deg) {
    return std::min(1.0, backflow(state, theta_ref_deg).probability(1, 0, 0));
}

void ThetaDistribution::validate() const {
    if (theta_deg.empty())
        throw Error(ErrorKind::EmptyInput, "distribution has no entries");
    if (theta_deg.size() != probability.size())
        throw Error(ErrorKind::InvalidDistribution, "theta and probability lists differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < theta_deg.size(); ++i) {
        require_angle(theta_deg[i]);
        if (!(probability[i] >= 0.0) || !std::isfinite(probability[i]))
            throw Error(ErrorKind::InvalidDistribution, "probabilities must be nonnegative");
        total += probability[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidDistribution, "probabilities sum to " + std::to_string(total));
}

double ThetaDistribution::probability_at(double theta, double tol) const {
    double p = 0.0;
    for (std::size_t i = 0; i < theta_deg.size(); ++i)
        if (std::abs(theta_deg[i] - theta) <= tol)
            p += probability[i];
    return p;
}

bool ThetaDistribution::has_three_level_structure() const {
    bool seen[3] = {false, false, false};
    for (std::size_t i = 0; i < theta_deg.size(); ++i) {
        if (probability[i] <= 0.0)
            continue;
        bool matched = false;
        for (int k = 0; k < 3; ++k) {
            if (std::abs(theta_deg[i] - 45.0 * k) <= kThetaMatchTol) {
                seen[k] = true;
                matched = true;
            }
        }
        if (!matched)
            return false;
    }
    return seen[0] && seen[1] && seen[2];
}

ThetaDistribution theta_distribution(std::span<const double> thetas_deg, double bin_width_deg) {
    if (thetas_deg.empty())
        throw Error(ErrorKind::EmptyInput, "no theta values");
    if (!(bin_width_deg > 0.0) || !std::isfinite(bin_width_deg))
        throw Error(ErrorKind::InvalidSpec, "bin width must be positive");
    std::vector<std::size_t> counts;
    for (double t : thetas_deg) {
        require_angle(t);
        const auto bin = static_cast<std::size_t>(std::floor(t / bin_width_deg + kBinEdgeSlack));
        if (bin >= counts.size())
            counts.resize(bin + 1, 0);
        ++counts[bin];
    }
    ThetaDistribution d;
    const auto n = static_cast<double>(thetas_deg.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0)
            continue;
        d.theta_deg.push_back(static_cast<double>(k) * bin_width_deg);
        d.probability.push_back(static_cast<double>(counts[k]) / n);
    }
    return d;
}

double reference_theta(Level level) noexcept {
    switch (level) {
    case Level::High: return 0.0;
    case Level::Intermediate: return 45.0;
    case Level::Low: return 90.0;
    }
    return 0.0;
}

IdentificationReport identify(std::span<const EncodedSample> samples, const ThetaDistribution &reference,
                              const std::string &reference_label) {
    if (samples.empty())
        throw Error(ErrorKind::EmptySamples, "no samples to identify");
    reference.validate();

    IdentificationReport report;
    report.reference_label = reference_label;
    report.level_paired = reference.has_three_level_structure() &&
                          std::all_of(samples.begin(), samples.end(), [](const auto &s) { return s.level.has_value(); });

    report.overlaps.reserve(samples.size());
    for (const auto &s : samples) {
        const auto state = forward_encode(s.theta_deg);
        if (report.level_paired) {
            report.overlaps.push_back(return_probability(state, reference_theta(*s.level)));
        } else {
            double p = 0.0;
            for (std::size_t k = 0; k < reference.theta_deg.size(); ++k)
                p += reference.probability[k] * return_probability(state, reference.theta_deg[k]);
            report.overlaps.push_back(std::min(1.0, p));
        }
    }
    report.match_probability = sorted_mean(report.overlaps);

    if (report.level_paired) {
        for (Level level : {Level::High, Level::Intermediate, Level::Low}) {
            LevelStats st;
            st.level = level;
            st.reference_theta_deg = reference_theta(level);
            st.reference_probability = reference.probability_at(st.reference_theta_deg, kThetaMatchTol);
            std::vector<double> thetas, overlaps;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (*samples[i].level != level)
                    continue;
                thetas.push_back(samples[i].theta_deg);
                overlaps.push_back(report.overlaps[i]);
            }
            st.count = thetas.size();
            st.probability = static_cast<double>(st.count) / static_cast<double>(samples.size());
            if (st.count > 0) {
                st.mean_theta_deg = sorted_mean(thetas);
                st.mean_overlap = sorted_mean(overlaps);
            }
            report.levels.push_back(st);
        }
    }
    return report;
}

IdentificationReport identify(std::span<const QState> states, const ThetaDistribution &reference,
                              const std::string &reference_label) {
    if (states.empty())
        throw Error(ErrorKind::EmptySamples, "no states to identify");
    reference.validate();
    IdentificationReport report;
    report.reference_label = reference_label;
    report.overlaps.reserve(states.size());
    for (const auto &state : states) {
        double p = 0.0;
        for (std::size_t k = 0; k < reference.theta_deg.size(); ++k)
            p += reference.probability[k] * return_probability(state, reference.theta_deg[k]);
        report.overlaps.push_back(std::min(1.0, p));
    }
    report.match_probability = sorted_mean(report.overlaps);
    return report;
}

} // namespace tunnelq
