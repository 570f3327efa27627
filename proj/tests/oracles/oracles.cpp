#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace oracle {

EigenPairs jacobi_eigen(RealMatrix a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    RealMatrix v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        v[i][i] = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a[p][q] * a[p][q];
        if (std::sqrt(off) < tol)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i][i] < a[j][j]; });
    EigenPairs out;
    out.vectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        out.values.push_back(a[order[j]][order[j]]);
        for (std::size_t i = 0; i < n; ++i)
            out.vectors[i][j] = v[i][order[j]];
    }
    return out;
}

cplx dyson_fixed_point(double onsite, double hopping, double energy, double eta, int max_iter, double tol) {
    const cplx z(energy, eta);
    cplx g = 0.0;
    for (int i = 0; i < max_iter; ++i) {
        const cplx next = 1.0 / (z - onsite - hopping * hopping * g);
        if (std::abs(next - g) < tol * std::max(1.0, std::abs(next)))
            return next;
        g = next;
    }
    return g;
}

cplx dyson_decimation(double onsite, double hopping, double energy, double eta) {
    const cplx z(energy, eta);
    cplx alpha = hopping, beta = hopping;
    cplx eps_s = onsite, eps_b = onsite;
    for (int k = 0; k < 300; ++k) {
        const cplx g = 1.0 / (z - eps_b);
        const cplx agb = alpha * g * beta;
        eps_s += agb;
        eps_b += agb + beta * g * alpha;
        alpha = alpha * g * alpha;
        beta = beta * g * beta;
        if (std::abs(alpha) + std::abs(beta) < 1e-300)
            break;
    }
    return 1.0 / (z - eps_s);
}

Mat8 kron3(const std::array<std::array<cplx, 2>, 2> &a, const std::array<std::array<cplx, 2>, 2> &b,
           const std::array<std::array<cplx, 2>, 2> &c) {
    Mat8 m{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int i3 = 0; i3 < 2; ++i3)
                for (int j1 = 0; j1 < 2; ++j1)
                    for (int j2 = 0; j2 < 2; ++j2)
                        for (int j3 = 0; j3 < 2; ++j3)
                            m[i1 * 4 + i2 * 2 + i3][j1 * 4 + j2 * 2 + j3] = a[i1][j1] * b[i2][j2] * c[i3][j3];
    return m;
}

Mat8 matmul(const Mat8 &a, const Mat8 &b) {
    Mat8 m{};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k)
                m[i][j] += a[i][k] * b[k][j];
    return m;
}

Vec8 apply(const Mat8 &m, const Vec8 &v) {
    Vec8 out{};
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 8; ++k)
            out[i] += m[i][k] * v[k];
    return out;
}

namespace {

using M2 = std::array<std::array<cplx, 2>, 2>;

const M2 kI = {{{1.0, 0.0}, {0.0, 1.0}}};
const M2 kX = {{{0.0, 1.0}, {1.0, 0.0}}};
const M2 kP0 = {{{1.0, 0.0}, {0.0, 0.0}}};
const M2 kP1 = {{{0.0, 0.0}, {0.0, 1.0}}};

M2 rot(double deg) {
    const double r = deg * std::numbers::pi / 180.0;
    return {{{std::cos(r), -std::sin(r)}, {std::sin(r), std::cos(r)}}};
}

Mat8 cnot_2_3() {
    Mat8 a = kron3(kI, kP0, kI);
    const Mat8 b = kron3(kI, kP1, kX);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            a[i][j] += b[i][j];
    return a;
}

} // namespace

Mat8 encoding_matrix(double theta_deg) {
    // rightmost acts first: R on q2, CNOT 2->3, X on q2
    return matmul(kron3(kI, kX, kI), matmul(cnot_2_3(), kron3(kI, rot(theta_deg), kI)));
}

double return_probability(double theta_deg, double theta_ref_deg) {
    Vec8 v{};
    v[4] = 1.0;
    const Vec8 encoded = oracle::apply(encoding_matrix(theta_deg), v);
    // inverse circuit with -theta_ref: X, CNOT, R(-theta_ref)
    const Mat8 inv = matmul(kron3(kI, rot(-theta_ref_deg), kI), matmul(cnot_2_3(), kron3(kI, kX, kI)));
    const Vec8 back = oracle::apply(inv, encoded);
    return std::norm(back[4]);
}

double expectation_match(const std::vector<double> &thetas, const std::vector<double> &ref_thetas,
                         const std::vector<double> &ref_probs) {
    double total = 0.0;
    for (double t : thetas) {
        double p = 0.0;
        for (std::size_t k = 0; k < ref_thetas.size(); ++k)
            p += ref_probs[k] * return_probability(t, ref_thetas[k]);
        total += p;
    }
    return total / static_cast<double>(thetas.size());
}

} // namespace oracle
