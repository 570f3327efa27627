#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tunnelq {

/// Conductance level of a trace sample; also the encoding branch it maps to.
enum class Level { High, Intermediate, Low };

std::string level_name(Level level);

/**
 * Three-qubit state. Amplitude index is q1*4 + q2*2 + q3, qubit 1 leftmost
 * in the ket. Qubit 1 is the In contact, 2 is Out1, 3 is Out2.
 */
class QState {
public:
    static constexpr std::size_t kDim = 8;
    using Amplitudes = std::array<std::complex<double>, kDim>;

    /// Basis state from three bits, e.g. basis(1, 0, 0) is |100>.
    static QState basis(int q1, int q2, int q3);

    /// Throws UnnormalizedState if the norm is off by more than 1e-12.
    explicit QState(const Amplitudes &amplitudes);

    const Amplitudes &amplitudes() const noexcept { return amp_; }
    std::complex<double> amplitude(int q1, int q2, int q3) const;
    double probability(int q1, int q2, int q3) const;
    double norm_squared() const noexcept;

private:
    struct Unchecked {};
    QState(const Amplitudes &amplitudes, Unchecked) : amp_(amplitudes) {}

    Amplitudes amp_{};

    friend QState apply_single(const QState &, int, const std::array<std::complex<double>, 4> &);
    friend QState apply_cnot(const QState &, int, int);
};

using Gate1 = std::array<std::complex<double>, 4>; // row-major 2x2

/// Real rotation |0> -> cos|0> + sin|1>, |1> -> -sin|0> + cos|1>.
Gate1 rotation_gate(double theta_deg);
Gate1 not_gate();

/// Apply a one-qubit gate to qubit 1, 2 or 3.
QState apply_single(const QState &state, int qubit, const Gate1 &gate);
QState apply_cnot(const QState &state, int control, int target);

/// Full 8x8 matrix of a one-qubit gate or CNOT, row-major.
std::array<std::complex<double>, 64> embed_single(int qubit, const Gate1 &gate);
std::array<std::complex<double>, 64> embed_cnot(int control, int target);

struct GateOp {
    enum class Kind { Rotation, Cnot, Not };
    Kind kind = Kind::Not;
    int qubit = 1;  // rotation / NOT target, CNOT control
    int target = 0; // CNOT only
    double theta_deg = 0.0;
};

QState apply(const QState &state, const GateOp &op);

/// The fixed unitary + CNOT encoding sequence for one angle.
struct EncodingCircuit {
    double theta_deg = 0.0;

    /// Rotation(theta) on q2, CNOT q2 -> q3, NOT on q2.
    std::vector<GateOp> gates() const;
    /// Reversed sequence with the rotation angle negated.
    std::vector<GateOp> inverse_gates() const;
    std::array<std::complex<double>, 64> matrix() const;
};

/// theta such that cos^2(theta) g_high + sin^2(theta) g_low = g (g clamped).
double theta_from_conductance(double g, double g_high, double g_low);

/// |100> -> R(theta) on q2 -> CNOT(2->3) -> X on q2 = cos|110> + sin|101>.
QState forward_encode(double theta_deg);

/// Inverse of the encoding circuit run with -theta_ref.
QState backflow(const QState &state, double theta_ref_deg);

/// P(|100>) after back-flow, clamped to [0, 1].
double return_probability(const QState &state, double theta_ref_deg);

struct ThetaDistribution {
    std::vector<double> theta_deg;
    std::vector<double> probability;

    void validate() const;
    /// Support is exactly {0, 45, 90} degrees (each with positive weight).
    bool has_three_level_structure() const;
    double probability_at(double theta_deg, double tol = 1e-9) const;
};

/// Normalized histogram in bins [k w, (k+1) w); theta = 90 gets its own bin.
/// Bins are labelled by their lower edge.
ThetaDistribution theta_distribution(std::span<const double> thetas_deg, double bin_width_deg = 1.0);

struct EncodedSample {
    double theta_deg = 0.0;
    std::optional<Level> level;
};

struct LevelStats {
    Level level = Level::High;
    std::size_t count = 0;
    double probability = 0.0;
    double mean_theta_deg = 0.0;
    double mean_overlap = 0.0;
    double reference_theta_deg = 0.0;
    double reference_probability = 0.0;
};

struct IdentificationReport {
    double match_probability = 0.0;
    std::vector<double> overlaps;
    std::string reference_label;
    bool level_paired = false;
    std::vector<LevelStats> levels; // only when level_paired
};

/// Reference angle a level pairs with: High 0, Intermediate 45, Low 90.
double reference_theta(Level level) noexcept;

/**
 * Back-flow identification. When every sample carries a level and the
 * reference has the three-level structure, each sample is run against its
 * level's reference angle; otherwise each overlap is the expectation over
 * the reference distribution. match_probability is the mean overlap.
 */
IdentificationReport identify(std::span<const EncodedSample> samples, const ThetaDistribution &reference,
                              const std::string &reference_label = "reference");

/// Expectation-mode identification of already-encoded states.
IdentificationReport identify(std::span<const QState> states, const ThetaDistribution &reference,
                              const std::string &reference_label = "reference");

} // namespace tunnelq
