#include "tunnelq/tbmodel.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "tunnelq/error.hpp"

namespace tunnelq {

namespace {

constexpr double kFrontierDegeneracyTol = 1e-10;
constexpr double kSignTol = 1e-12;

std::string site_name(std::size_t zero_based) { return "site " + std::to_string(zero_based + 1); }

} // namespace

TightBindingModel::TightBindingModel(Eigen::MatrixXd hamiltonian, std::vector<SiteLabel> labels,
                                     int n_pi_electrons, double energy_scale_ev)
    : h_(std::move(hamiltonian)), labels_(std::move(labels)), n_pi_electrons_(n_pi_electrons),
      energy_scale_ev_(energy_scale_ev) {
    const auto n = h_.rows();
    if (n == 0 || h_.cols() != n)
        throw Error(ErrorKind::ConfigError, "Hamiltonian must be a non-empty square matrix");
    if (!h_.allFinite())
        throw Error(ErrorKind::ConfigError, "Hamiltonian has non-finite entries");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (h_(i, j) != h_(j, i))
                throw Error(ErrorKind::AsymmetricMatrix,
                            "h(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") != h(" +
                                std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
    if (n_pi_electrons_ <= 0)
        throw Error(ErrorKind::ConfigError, "n_pi_electrons must be positive");
    if (n_pi_electrons_ % 2 != 0)
        throw Error(ErrorKind::OddElectronCount, std::to_string(n_pi_electrons_) + " pi electrons");
    if (n_pi_electrons_ > 2 * n)
        throw Error(ErrorKind::ConfigError, "more pi electrons than 2 * n_sites");
    if (!(energy_scale_ev_ > 0.0) || !std::isfinite(energy_scale_ev_))
        throw Error(ErrorKind::ConfigError, "energy_scale_eV must be positive");

    if (labels_.empty()) {
        for (Eigen::Index i = 0; i < n; ++i)
            labels_.push_back({"X", static_cast<int>(i + 1)});
    } else if (static_cast<Eigen::Index>(labels_.size()) != n) {
        throw Error(ErrorKind::ConfigError, "expected " + std::to_string(n) + " site labels, got " +
                                                std::to_string(labels_.size()));
    }
}

TightBindingModel TightBindingModel::permuted(const std::vector<std::size_t> &order) const {
    const auto n = n_sites();
    if (order.size() != n)
        throw Error(ErrorKind::IndexOutOfRange, "permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (auto k : order) {
        if (k >= n || seen[k])
            throw Error(ErrorKind::IndexOutOfRange, "not a permutation");
        seen[k] = true;
    }
    Eigen::MatrixXd p(n, n);
    std::vector<SiteLabel> labels(n);
    for (std::size_t a = 0; a < n; ++a) {
        labels[a] = labels_[order[a]];
        for (std::size_t b = 0; b < n; ++b)
            p(a, b) = h_(order[a], order[b]);
    }
    return TightBindingModel(std::move(p), std::move(labels), n_pi_electrons_, energy_scale_ev_);
}

TightBindingModel build_adenine() {
    constexpr double a = 0.1, ap = -0.1, b = -1.0, c = -0.2, d = -0.3, e = -0.4, f = -1.1, g = -0.6,
                     h = -0.9;
    // Lower triangle, row i holds columns 1..i (serial numbering).
    const std::vector<std::vector<double>> rows = {
        {0},
        {b, g},
        {f, g, ap},
        {d, c, h, 0},
        {c, b, a, b, a},
        {0, a, 0, a, b, ap},
        {0, 0, 0, 0, c, b, ap},
        {0, 0, 0, a, 0, a, b, ap},
        {0, 0, a, b, c, 0, c, b, a},
        {0, 0, 0, a, 0, 0, 0, a, b, e},
    };
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(10, 10);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(i, j) = rows[i][j];
            m(j, i) = rows[i][j];
        }
    // Site 1 is C in the total-energy table but N in the contact discussion.
    std::vector<SiteLabel> labels = {{"C", 1}, {"N", 2}, {"N", 3}, {"C", 4}, {"C", 5},
                                     {"N", 6}, {"C", 7}, {"N", 8}, {"C", 9}, {"N", 10}};
    return TightBindingModel(std::move(m), std::move(labels), 12, 4.07);
}

TightBindingModel build_from_config(const ModelConfig &config) {
    const auto n = config.n_sites;
    if (n == 0)
        throw Error(ErrorKind::ConfigError, "n_sites must be positive");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::map<std::pair<std::size_t, std::size_t>, double> given;
    for (const auto &entry : config.entries) {
        if (entry.row >= n || entry.col >= n)
            throw Error(ErrorKind::IndexOutOfRange,
                        "entry (" + std::to_string(entry.row + 1) + "," + std::to_string(entry.col + 1) +
                            ") outside a " + std::to_string(n) + "-site model");
        if (!std::isfinite(entry.value))
            throw Error(ErrorKind::ConfigError, "non-finite entry value");
        const auto key = std::make_pair(entry.row, entry.col);
        if (auto it = given.find(key); it != given.end()) {
            if (it->second != entry.value)
                throw Error(ErrorKind::DuplicateEntry, "conflicting values for entry (" +
                                                           std::to_string(entry.row + 1) + "," +
                                                           std::to_string(entry.col + 1) + ")");
            continue;
        }
        const auto mirror = std::make_pair(entry.col, entry.row);
        if (auto it = given.find(mirror); it != given.end() && it->second != entry.value)
            throw Error(ErrorKind::AsymmetricMatrix, "h(" + std::to_string(entry.row + 1) + "," +
                                                         std::to_string(entry.col + 1) +
                                                         ") differs from its mirror");
        given.emplace(key, entry.value);
        m(entry.row, entry.col) = entry.value;
        m(entry.col, entry.row) = entry.value;
    }
    return TightBindingModel(std::move(m), config.labels, config.n_pi_electrons, config.energy_scale_ev);
}

ModelConfig to_config(const TightBindingModel &model) {
    ModelConfig config;
    config.n_sites = model.n_sites();
    config.labels = model.labels();
    config.n_pi_electrons = model.n_pi_electrons();
    config.energy_scale_ev = model.energy_scale_ev();
    const auto &h = model.hamiltonian();
    for (std::size_t i = 0; i < config.n_sites; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (h(i, j) != 0.0 || i == j)
                config.entries.push_back({i, j, h(i, j)});
    return config;
}

OrbitalSet diagonalize(const TightBindingModel &model) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.hamiltonian());
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::DiagonalizationFailure, "eigensolver did not converge");

    OrbitalSet out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        auto col = out.eigenvectors.col(j);
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > kSignTol) {
                if (col(i) < 0.0)
                    col = -col;
                break;
            }
        }
    }

    out.homo_index = static_cast<std::size_t>(model.n_pi_electrons() / 2) - 1;
    out.lumo_index = out.homo_index + 1;
    if (out.has_lumo()) {
        const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
        if (out.homo_lumo_gap() < kFrontierDegeneracyTol * scale)
            throw Error(ErrorKind::DegenerateFrontier,
                        "HOMO and LUMO are degenerate at E = " + std::to_string(out.homo_energy()));
    }
    return out;
}

std::string_view to_string(Interference kind) noexcept {
    switch (kind) {
    case Interference::Constructive: return "Constructive";
    case Interference::Destructive: return "Destructive";
    case Interference::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

PathwayClass classify_pathway(const OrbitalSet &orbitals, std::size_t in_site, std::size_t out_site,
                              double tol) {
    const auto n = static_cast<std::size_t>(orbitals.eigenvectors.rows());
    if (in_site >= n)
        throw Error(ErrorKind::IndexOutOfRange, site_name(in_site) + " outside a " + std::to_string(n) + "-site model");
    if (out_site >= n)
        throw Error(ErrorKind::IndexOutOfRange, site_name(out_site) + " outside a " + std::to_string(n) + "-site model");
    if (in_site == out_site)
        throw Error(ErrorKind::SameSite, "in and out contacts are both " + site_name(in_site));
    if (!orbitals.has_lumo())
        throw Error(ErrorKind::MissingFrontier, "model has no unoccupied orbital");

    const auto &v = orbitals.eigenvectors;
    const auto homo = static_cast<Eigen::Index>(orbitals.homo_index);
    const auto lumo = static_cast<Eigen::Index>(orbitals.lumo_index);
    const auto in = static_cast<Eigen::Index>(in_site);
    const auto out = static_cast<Eigen::Index>(out_site);

    PathwayClass pc;
    pc.homo_in = v(in, homo);
    pc.homo_out = v(out, homo);
    pc.lumo_in = v(in, lumo);
    pc.lumo_out = v(out, lumo);

    for (double coeff : {pc.homo_in, pc.homo_out, pc.lumo_in, pc.lumo_out})
        if (std::abs(coeff) < tol)
            return pc;

    const bool homo_positive = pc.homo_in * pc.homo_out > 0.0;
    const bool lumo_positive = pc.lumo_in * pc.lumo_out > 0.0;
    pc.kind = homo_positive != lumo_positive ? Interference::Constructive : Interference::Destructive;
    return pc;
}

} // namespace tunnelq
