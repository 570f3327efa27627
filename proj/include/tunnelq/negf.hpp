#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tunnelq/tbmodel.hpp"

namespace tunnelq {

using cplx = std::complex<double>;

/// 2e^2/h in nanosiemens (exact SI values of e and h).
inline constexpr double kConductanceQuantumNs = 2.0 * 1.602176634e-19 * 1.602176634e-19 / 6.62607015e-34 * 1e9;

struct Attachment {
    std::size_t site = 0;  // zero-based molecular site
    double coupling = 0.0; // t_CN
};

/// Semi-infinite 1D chain electrode. Two attachments couple the same lead
/// apex to two molecular sites.
struct Lead {
    double onsite = 0.0;
    double hopping = 1.0;
    std::vector<Attachment> attachments;

    void validate(std::size_t n_sites) const;
};

struct JunctionSpec {
    TightBindingModel model;
    Lead left;
    Lead right;
    std::string label;
    double eta = 1e-9;

    void validate() const;
};

struct TransmissionSpectrum {
    std::vector<double> energies;
    std::vector<double> values;
    std::string junction_label;
};

/**
 * Retarded surface Green's function of a semi-infinite 1D chain with
 * on-site `lead.onsite` and hopping `lead.hopping`, at real energy E.
 *
 * Inside the band (|E - onsite| <= 2|t|) this is the propagating branch
 * with Im g <= 0; outside it is the real branch with |g| <= 1/|t|.
 */
cplx surface_green(const Lead &lead, double energy);

/// W g W^T on the molecular sites: entry (j,k) = w_j w_k g(E).
Eigen::MatrixXcd self_energy(const Lead &lead, double energy, std::size_t n_sites);

/// Broadening i(Sigma - Sigma^dagger).
Eigen::MatrixXcd broadening(const Eigen::MatrixXcd &sigma);

/// ((E + i eta) I - H - Sigma_L - Sigma_R)^-1 by dense LU with a residual check.
Eigen::MatrixXcd molecule_green(const Eigen::MatrixXd &hamiltonian, const Eigen::MatrixXcd &sigma_left,
                                const Eigen::MatrixXcd &sigma_right, double energy, double eta);

/// Tr[Gamma_L G Gamma_R G^dagger].
double transmission(const JunctionSpec &junction, double energy);
/// Same without the junction-level checks; leads may share contact sites.
double transmission(const Eigen::MatrixXd &hamiltonian, const Lead &left, const Lead &right, double energy,
                    double eta);

/// `threads` > 1 splits the grid across worker threads; output is identical.
TransmissionSpectrum spectrum(const JunctionSpec &junction, std::span<const double> grid, unsigned threads = 1);

/// n uniformly spaced points in [lo, hi]; n == 1 yields {lo}.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// 2001 points over [E_min - 1, E_max + 1] of the molecular spectrum.
std::vector<double> default_grid(const OrbitalSet &orbitals);

/// g0 * T(E_F), nanosiemens.
double conductance(const JunctionSpec &junction, double fermi_energy);

enum class SuperpositionMode { Average, CoherentNote };

struct SuperpositionResult {
    TransmissionSpectrum spectrum;
    // Per-point bound sqrt(a_i b_i) on the dropped interference term;
    // filled only in CoherentNote mode.
    std::vector<double> cross_term_bound;
};

/// Equal-weight configuration superposition, (a_i + b_i) / 2.
SuperpositionResult config_superposition(const TransmissionSpectrum &a, const TransmissionSpectrum &b,
                                         SuperpositionMode mode = SuperpositionMode::Average);

/// cos^2(theta) a_i + sin^2(theta) b_i with theta in degrees, [0, 90].
TransmissionSpectrum weighted_superposition(const TransmissionSpectrum &a, const TransmissionSpectrum &b,
                                            double theta_deg);

/// Scalar mixing rule used by weighted_superposition.
double mix_weighted(double a, double b, double theta_deg);

} // namespace tunnelq
