#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles/oracles.hpp"
#include "tunnelq/error.hpp"
#include "tunnelq/qencode.hpp"

using namespace tunnelq;

namespace {

ErrorKind kind_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected tunnelq::Error");
    return ErrorKind::IoError;
}

double max_diff(const QState &s, const QState::Amplitudes &expected) {
    double d = 0.0;
    for (std::size_t i = 0; i < QState::kDim; ++i)
        d = std::max(d, std::abs(s.amplitudes()[i] - expected[i]));
    return d;
}

double unitarity_error(const std::array<std::complex<double>, 64> &m) {
    double worst = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            std::complex<double> acc = 0.0;
            for (int k = 0; k < 8; ++k)
                acc += std::conj(m[k * 8 + i]) * m[k * 8 + j];
            worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

ThetaDistribution three_level() { return {{0.0, 45.0, 90.0}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}; }

} // namespace

TEST_CASE("basis and normalization") {
    const auto s = QState::basis(1, 0, 0);
    CHECK(s.amplitudes()[4] == std::complex<double>(1.0));
    CHECK(s.probability(1, 0, 0) == 1.0);
    QState::Amplitudes bad{};
    bad[0] = 1.0;
    bad[1] = 1e-5;
    CHECK(kind_of([&] { QState q(bad); }) == ErrorKind::UnnormalizedState);
}

TEST_CASE("forward encoding of the three named states") {
    const double r = 1.0 / std::sqrt(2.0);
    QState::Amplitudes e0{}, e45{}, e90{};
    e0[6] = 1.0;
    e45[6] = r;
    e45[5] = r;
    e90[5] = 1.0;
    CHECK(max_diff(forward_encode(0.0), e0) <= 1e-12);
    CHECK(max_diff(forward_encode(45.0), e45) <= 1e-12);
    CHECK(max_diff(forward_encode(90.0), e90) <= 1e-12);
    CHECK(kind_of([] { forward_encode(90.01); }) == ErrorKind::AngleOutOfRange);
    CHECK(kind_of([] { forward_encode(-0.01); }) == ErrorKind::AngleOutOfRange);
}

TEST_CASE("forward encoding matches the explicit matrix product") {
    for (int k = 0; k <= 90; k += 5) {
        const double th = k;
        const auto m = oracle::encoding_matrix(th);
        oracle::Vec8 in{};
        in[4] = 1.0;
        const auto out = oracle::apply(m, in);
        const auto s = forward_encode(th);
        double d = 0.0;
        for (std::size_t i = 0; i < 8; ++i)
            d = std::max(d, std::abs(s.amplitudes()[i] - out[i]));
        CHECK(d <= 1e-12);
        for (const auto &a : s.amplitudes()) {
            CHECK(a.imag() == 0.0);
            CHECK(a.real() >= 0.0);
        }
    }
}

TEST_CASE("back-flow spot values") {
    CHECK(return_probability(forward_encode(45.0), 45.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(return_probability(forward_encode(45.0), 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(return_probability(forward_encode(0.0), 90.0)) <= 1e-12);
    CHECK(return_probability(forward_encode(45.0), 0.0) == doctest::Approx(oracle::return_probability(45.0, 0.0)));
}

TEST_CASE("back-flow inverts forward encoding at every degree") {
    for (int k = 0; k <= 90; ++k) {
        const auto back = backflow(forward_encode(k), k);
        CHECK(std::abs(back.amplitude(1, 0, 0) - 1.0) <= 1e-12);
        CHECK(std::abs(1.0 - back.probability(1, 0, 0)) <= 1e-12);
    }
}

TEST_CASE("overlap is cos^2 of the angle difference") {
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double th = 10.0 * i, ref = 10.0 * j;
            const double p = return_probability(forward_encode(th), ref);
            const double c = std::cos((th - ref) * std::numbers::pi / 180.0);
            CHECK(std::abs(p - c * c) <= 1e-12);
            CHECK(std::abs(p - oracle::return_probability(th, ref)) <= 1e-12);
        }
}

TEST_CASE("gates are unitary") {
    for (double th : {0.0, 17.0, 45.0, 73.5, 90.0}) {
        CHECK(unitarity_error(EncodingCircuit{th}.matrix()) <= 1e-12);
        for (int q = 1; q <= 3; ++q)
            CHECK(unitarity_error(embed_single(q, rotation_gate(th))) <= 1e-12);
    }
    for (int q = 1; q <= 3; ++q)
        CHECK(unitarity_error(embed_single(q, not_gate())) <= 1e-12);
    for (auto [c, t] : {std::pair{1, 2}, {2, 3}, {3, 1}, {2, 1}})
        CHECK(unitarity_error(embed_cnot(c, t)) <= 1e-12);
}

TEST_CASE("norm is preserved through arbitrary gate sequences") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, 2), qubit(1, 3);
    std::uniform_real_distribution<double> angle(0.0, 360.0);
    auto s = QState::basis(1, 0, 0);
    for (int step = 0; step < 200; ++step) {
        GateOp op;
        op.kind = static_cast<GateOp::Kind>(pick(rng));
        op.qubit = qubit(rng);
        op.target = op.qubit % 3 + 1;
        op.theta_deg = angle(rng);
        s = apply(s, op);
        CHECK(std::abs(s.norm_squared() - 1.0) <= 1e-12);
    }
}

TEST_CASE("conductance to angle") {
    CHECK(theta_from_conductance(0.132, 0.132, 0.001) == 0.0);
    CHECK(theta_from_conductance((0.132 + 0.001) / 2.0, 0.132, 0.001) == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(theta_from_conductance(0.001, 0.132, 0.001) == 90.0);
    CHECK(theta_from_conductance(5.0, 0.132, 0.001) == 0.0);
    CHECK(theta_from_conductance(0.0, 0.132, 0.001) == 90.0);
    CHECK(theta_from_conductance(0.25, 1.0, 0.0) == doctest::Approx(60.0).epsilon(1e-12));
    for (int k = 0; k <= 100; ++k) {
        const double g = 0.001 + 0.131 * k / 100.0;
        const double th = theta_from_conductance(g, 0.132, 0.001);
        const double c = std::cos(th * std::numbers::pi / 180.0);
        CHECK(c * c * 0.132 + (1 - c * c) * 0.001 == doctest::Approx(g).epsilon(1e-12));
    }
    CHECK(kind_of([] { theta_from_conductance(0.1, 0.1, 0.1); }) == ErrorKind::DegenerateRange);
    CHECK(kind_of([] { theta_from_conductance(0.1, 0.01, 0.1); }) == ErrorKind::DegenerateRange);
}

TEST_CASE("angle histograms") {
    SUBCASE("delta") {
        const std::vector<double> t(7, 45.0);
        const auto d = theta_distribution(t);
        REQUIRE(d.theta_deg.size() == 1);
        CHECK(d.theta_deg[0] == 45.0);
        CHECK(d.probability[0] == 1.0);
    }
    SUBCASE("equal thirds") {
        const std::vector<double> t{0.0, 45.0, 90.0, 90.0, 45.0, 0.0};
        const auto d = theta_distribution(t);
        CHECK(d.theta_deg == std::vector<double>{0.0, 45.0, 90.0});
        for (double p : d.probability)
            CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(d.has_three_level_structure());
    }
    SUBCASE("binning") {
        const std::vector<double> t{10.0, 10.4};
        const auto d = theta_distribution(t);
        CHECK(d.theta_deg == std::vector<double>{10.0});
        CHECK(d.probability == std::vector<double>{1.0});
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { theta_distribution(std::vector<double>{}); }) == ErrorKind::EmptyInput);
        CHECK(kind_of([] { ThetaDistribution{{0.0}, {0.9}}.validate(); }) == ErrorKind::InvalidDistribution);
        CHECK(kind_of([] { ThetaDistribution{{0.0, 1.0}, {1.2, -0.2}}.validate(); }) == ErrorKind::InvalidDistribution);
    }
}

TEST_CASE("identification of the three-level scenario") {
    std::vector<EncodedSample> samples;
    const double g_high = 0.132, g_low = 0.001;
    for (int i = 0; i < 300; ++i) {
        const Level level = static_cast<Level>(i % 3);
        const double g = level == Level::High ? g_high : level == Level::Low ? g_low : (g_high + g_low) / 2.0;
        samples.push_back({theta_from_conductance(g, g_high, g_low), level});
    }
    const auto report = identify(samples, three_level(), "A");
    CHECK(report.level_paired);
    CHECK(report.match_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.reference_label == "A");
    REQUIRE(report.levels.size() == 3);
    for (const auto &st : report.levels) {
        CHECK(st.count == 100);
        CHECK(st.mean_overlap == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("self-identification") {
    SUBCASE("level-labelled angles against their own histogram") {
        std::vector<EncodedSample> s{{0.0, Level::High}, {45.0, Level::Intermediate}, {90.0, Level::Low},
                                     {0.0, Level::High}};
        std::vector<double> t;
        for (const auto &x : s)
            t.push_back(x.theta_deg);
        CHECK(identify(s, theta_distribution(t)).match_probability == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single angle") {
        std::vector<EncodedSample> s(5, EncodedSample{30.0, std::nullopt});
        const std::vector<double> t(5, 30.0);
        CHECK(identify(s, theta_distribution(t)).match_probability == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("scattered angles against the three-level reference") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 90.0);
    std::vector<EncodedSample> samples;
    std::vector<double> thetas;
    for (int i = 0; i < 500; ++i) {
        double th = u(rng);
        if (th == 0.0)
            th = 1e-3;
        thetas.push_back(th);
        samples.push_back({th, std::nullopt});
    }
    const auto ref = three_level();
    const auto report = identify(samples, ref);
    CHECK_FALSE(report.level_paired);
    const double expected = oracle::expectation_match(thetas, ref.theta_deg, ref.probability);
    CHECK(report.match_probability == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.match_probability < 1.0);

    double mean = 0.0;
    for (double o : report.overlaps)
        mean += o;
    CHECK(report.match_probability == doctest::Approx(mean / 500.0).epsilon(1e-12));

    std::shuffle(samples.begin(), samples.end(), rng);
    CHECK(identify(samples, ref).match_probability == report.match_probability);

    std::vector<QState> states;
    for (double th : thetas)
        states.push_back(forward_encode(th));
    CHECK(identify(states, ref).match_probability == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("identification errors") {
    CHECK(kind_of([] { identify(std::vector<EncodedSample>{}, three_level()); }) == ErrorKind::EmptySamples);
    CHECK(kind_of([] { identify(std::vector<QState>{}, three_level()); }) == ErrorKind::EmptySamples);
    const std::vector<EncodedSample> one{{10.0, std::nullopt}};
    CHECK(kind_of([&] { identify(one, ThetaDistribution{{0.0}, {0.5}}); }) == ErrorKind::InvalidDistribution);
}
