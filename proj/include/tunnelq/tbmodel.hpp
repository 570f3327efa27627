#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tunnelq {

/// Element symbol plus the 1-based serial number used in atom-index drawings.
struct SiteLabel {
    std::string element;
    int serial = 0;

    bool operator==(const SiteLabel &) const = default;
};

/// A single Hamiltonian entry, zero-based. The mirrored entry is implied.
struct HamiltonianEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Structured description of a model before validation.
struct ModelConfig {
    std::size_t n_sites = 0;
    std::vector<HamiltonianEntry> entries;
    std::vector<SiteLabel> labels;
    int n_pi_electrons = 0;
    double energy_scale_ev = 1.0;
};

/**
 * Pi-orbital tight-binding Hamiltonian. Energies are in units of the
 * C(2p)-N(2p) transfer energy (t_CN); energy_scale_ev converts to eV.
 *
 * Instances are validated on construction and immutable afterwards.
 */
class TightBindingModel {
public:
    TightBindingModel(Eigen::MatrixXd hamiltonian, std::vector<SiteLabel> labels,
                      int n_pi_electrons, double energy_scale_ev);

    std::size_t n_sites() const noexcept { return static_cast<std::size_t>(h_.rows()); }
    const Eigen::MatrixXd &hamiltonian() const noexcept { return h_; }
    const std::vector<SiteLabel> &labels() const noexcept { return labels_; }
    int n_pi_electrons() const noexcept { return n_pi_electrons_; }
    double energy_scale_ev() const noexcept { return energy_scale_ev_; }

    /// Same model with sites reordered: new site k is old site order[k].
    TightBindingModel permuted(const std::vector<std::size_t> &order) const;

private:
    Eigen::MatrixXd h_;
    std::vector<SiteLabel> labels_;
    int n_pi_electrons_;
    double energy_scale_ev_;
};

/// The 10-site adenine pi Hamiltonian, 12 pi electrons, 4.07 eV per t_CN.
TightBindingModel build_adenine();

TightBindingModel build_from_config(const ModelConfig &config);

/// Lower-triangle entry list (including zero diagonal) that rebuilds `model`.
ModelConfig to_config(const TightBindingModel &model);

struct OrbitalSet {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // column j is orbital j
    std::size_t homo_index = 0;
    std::size_t lumo_index = 0;   // == n_sites when every orbital is occupied

    bool has_lumo() const noexcept { return lumo_index < static_cast<std::size_t>(eigenvalues.size()); }
    double homo_energy() const { return eigenvalues(static_cast<Eigen::Index>(homo_index)); }
    double lumo_energy() const { return eigenvalues(static_cast<Eigen::Index>(lumo_index)); }
    double homo_lumo_gap() const { return lumo_energy() - homo_energy(); }
    double midgap() const { return 0.5 * (homo_energy() + lumo_energy()); }
};

OrbitalSet diagonalize(const TightBindingModel &model);

inline constexpr double kCoefficientTolerance = 1e-6;

enum class Interference { Constructive, Destructive, Indeterminate };

std::string_view to_string(Interference kind) noexcept;

struct PathwayClass {
    Interference kind = Interference::Indeterminate;
    double homo_in = 0.0;
    double homo_out = 0.0;
    double lumo_in = 0.0;
    double lumo_out = 0.0;
};

/**
 * Tunneling orbital rule: the in/out pair is constructive when the product
 * of HOMO coefficients at the two contact sites differs in sign from the
 * product of LUMO coefficients, destructive when the signs agree.
 * Sites are zero-based.
 */
PathwayClass classify_pathway(const OrbitalSet &orbitals, std::size_t in_site, std::size_t out_site,
                              double tol = kCoefficientTolerance);

} // namespace tunnelq
