#include "tunnelq/negf.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "tunnelq/angles.hpp"
#include "tunnelq/error.hpp"

namespace tunnelq {

namespace {

constexpr double kImagResidueTol = 1e-10;
constexpr double kGridMatchTol = 1e-12;

void require_same_grid(const TransmissionSpectrum &a, const TransmissionSpectrum &b) {
    if (a.energies.size() != b.energies.size() || a.values.size() != b.values.size() ||
        a.energies.size() != a.values.size())
        throw Error(ErrorKind::GridMismatch, "spectra have different lengths");
    for (std::size_t i = 0; i < a.energies.size(); ++i) {
        const double scale = std::max(1.0, std::abs(a.energies[i]));
        if (std::abs(a.energies[i] - b.energies[i]) > kGridMatchTol * scale)
            throw Error(ErrorKind::GridMismatch, "energy grids differ at point " + std::to_string(i));
    }
}

void validate_grid(std::span<const double> grid) {
    if (grid.empty())
        throw Error(ErrorKind::EmptyGrid, "energy grid has no points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            throw Error(ErrorKind::InvalidGrid, "non-finite energy at point " + std::to_string(i));
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw Error(ErrorKind::InvalidGrid, "energy grid must be strictly ascending");
    }
}

} // namespace

void Lead::validate(std::size_t n_sites) const {
    if (!std::isfinite(onsite) || !std::isfinite(hopping))
        throw Error(ErrorKind::InvalidLead, "lead parameters must be finite");
    if (hopping == 0.0)
        throw Error(ErrorKind::InvalidLead, "lead hopping must be nonzero");
    std::set<std::size_t> sites;
    for (const auto &att : attachments) {
        if (att.site >= n_sites)
            throw Error(ErrorKind::IndexOutOfRange, "attachment site " + std::to_string(att.site + 1) +
                                                        " outside a " + std::to_string(n_sites) + "-site model");
        if (!std::isfinite(att.coupling))
            throw Error(ErrorKind::InvalidLead, "attachment coupling must be finite");
        if (!sites.insert(att.site).second)
            throw Error(ErrorKind::InvalidLead, "site " + std::to_string(att.site + 1) + " attached twice");
    }
}

void JunctionSpec::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw Error(ErrorKind::ConfigError, "eta must be a small positive number");
    const auto n = model.n_sites();
    left.validate(n);
    right.validate(n);
    for (const auto &l : left.attachments)
        for (const auto &r : right.attachments)
            if (l.site == r.site)
                throw Error(ErrorKind::InvalidLead,
                            "site " + std::to_string(l.site + 1) + " attached to both leads");
}

cplx surface_green(const Lead &lead, double energy) {
    const double t = lead.hopping;
    const double t2 = t * t;
    const double delta = energy - lead.onsite;
    const double disc = 4.0 * t2 - delta * delta;
    if (disc >= 0.0)
        return {delta / (2.0 * t2), -std::sqrt(disc) / (2.0 * t2)};
    // Decaying root written without cancellation: g = 2 / (delta + sgn(delta) sqrt(delta^2 - 4t^2)).
    const double root = std::sqrt(-disc);
    return {2.0 / (delta + std::copysign(root, delta)), 0.0};
}

Eigen::MatrixXcd self_energy(const Lead &lead, double energy, std::size_t n_sites) {
    lead.validate(n_sites);
    const auto n = static_cast<Eigen::Index>(n_sites);
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(n, n);
    if (lead.attachments.empty())
        return sigma;
    const cplx g = surface_green(lead, energy);
    for (const auto &a : lead.attachments)
        for (const auto &b : lead.attachments)
            sigma(static_cast<Eigen::Index>(a.site), static_cast<Eigen::Index>(b.site)) = a.coupling * b.coupling * g;
    return sigma;
}

Eigen::MatrixXcd broadening(const Eigen::MatrixXcd &sigma) {
    return cplx(0.0, 1.0) * (sigma - sigma.adjoint());
}

Eigen::MatrixXcd molecule_green(const Eigen::MatrixXd &hamiltonian, const Eigen::MatrixXcd &sigma_left,
                                const Eigen::MatrixXcd &sigma_right, double energy, double eta) {
    const auto n = hamiltonian.rows();
    if (hamiltonian.cols() != n || sigma_left.rows() != n || sigma_left.cols() != n || sigma_right.rows() != n ||
        sigma_right.cols() != n)
        throw Error(ErrorKind::IndexOutOfRange, "self-energy shape does not match the Hamiltonian");

    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a =
        cplx(energy, eta) * identity - hamiltonian.cast<cplx>() - sigma_left - sigma_right;

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    if (!lu.isInvertible())
        throw Error(ErrorKind::SingularMatrix, "(E + i eta) I - H - Sigma is singular at E = " + std::to_string(energy));
    Eigen::MatrixXcd g = lu.inverse();

    const double residual = (a * g - identity).norm();
    const double tol = std::max(1e-8, 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                                          a.norm() * g.norm());
    if (!std::isfinite(residual) || residual > tol)
        throw Error(ErrorKind::SingularMatrix,
                    "inversion residual " + std::to_string(residual) + " at E = " + std::to_string(energy));
    return g;
}

double transmission(const Eigen::MatrixXd &hamiltonian, const Lead &left, const Lead &right, double energy,
                    double eta) {
    const auto n = static_cast<std::size_t>(hamiltonian.rows());
    const Eigen::MatrixXcd sigma_l = self_energy(left, energy, n);
    const Eigen::MatrixXcd sigma_r = self_energy(right, energy, n);
    const Eigen::MatrixXcd g = molecule_green(hamiltonian, sigma_l, sigma_r, energy, eta);
    const cplx t = (broadening(sigma_l) * g * broadening(sigma_r) * g.adjoint()).trace();
    if (!std::isfinite(t.real()) || std::abs(t.imag()) > kImagResidueTol * std::max(std::abs(t.real()), std::numeric_limits<double>::min()))
        throw Error(ErrorKind::NumericalFailure, "transmission has imaginary residue " + std::to_string(t.imag()));
    return t.real();
}

double transmission(const JunctionSpec &junction, double energy) {
    junction.validate();
    return transmission(junction.model.hamiltonian(), junction.left, junction.right, energy, junction.eta);
}

TransmissionSpectrum spectrum(const JunctionSpec &junction, std::span<const double> grid, unsigned threads) {
    validate_grid(grid);
    junction.validate();

    TransmissionSpectrum out;
    out.energies.assign(grid.begin(), grid.end());
    out.values.assign(grid.size(), 0.0);
    out.junction_label = junction.label;

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, grid.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            out.values[i] = transmission(junction, grid[i]);
        return out;
    }

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < grid.size(); i += workers)
                        out.values[i] = transmission(junction, grid[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n == 0)
        throw Error(ErrorKind::EmptyGrid, "grid needs at least one point");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorKind::InvalidGrid, "grid bounds must be finite");
    if (n == 1)
        return {lo};
    if (!(hi > lo))
        throw Error(ErrorKind::InvalidGrid, "grid maximum must exceed its minimum");
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        grid[k] = lo + step * static_cast<double>(k);
    grid.back() = hi;
    return grid;
}

std::vector<double> default_grid(const OrbitalSet &orbitals) {
    return uniform_grid(orbitals.eigenvalues.minCoeff() - 1.0, orbitals.eigenvalues.maxCoeff() + 1.0, 2001);
}

double conductance(const JunctionSpec &junction, double fermi_energy) {
    return kConductanceQuantumNs * transmission(junction, fermi_energy);
}

SuperpositionResult config_superposition(const TransmissionSpectrum &a, const TransmissionSpectrum &b,
                                         SuperpositionMode mode) {
    require_same_grid(a, b);
    SuperpositionResult out;
    out.spectrum.energies = a.energies;
    out.spectrum.junction_label = a.junction_label + " + " + b.junction_label;
    out.spectrum.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.spectrum.values[i] = (a.values[i] + b.values[i]) / 2.0;
    if (mode == SuperpositionMode::CoherentNote) {
        // |2 sqrt(a b) cos(phase)| / 2 at most
        out.cross_term_bound.resize(a.values.size());
        for (std::size_t i = 0; i < a.values.size(); ++i)
            out.cross_term_bound[i] = std::sqrt(std::max(0.0, a.values[i]) * std::max(0.0, b.values[i]));
    }
    return out;
}

double mix_weighted(double a, double b, double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
        throw Error(ErrorKind::AngleOutOfRange, "theta must lie in [0, 90] degrees");
    // cos^2 and sin^2 via the double angle: exact 1/0, 1/2, 0/1 at 0, 45, 90.
    const double c2 = cos_deg(2.0 * theta_deg);
    const double wa = (1.0 + c2) / 2.0;
    const double wb = (1.0 - c2) / 2.0;
    return wa * a + wb * b;
}

TransmissionSpectrum weighted_superposition(const TransmissionSpectrum &a, const TransmissionSpectrum &b,
                                            double theta_deg) {
    require_same_grid(a, b);
    mix_weighted(0.0, 0.0, theta_deg);
    TransmissionSpectrum out;
    out.energies = a.energies;
    out.junction_label = a.junction_label + " + " + b.junction_label;
    out.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = mix_weighted(a.values[i], b.values[i], theta_deg);
    return out;
}

} // namespace tunnelq
