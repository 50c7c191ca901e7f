#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ctdetect/norms.hpp"
#include "test_support.hpp"

using namespace ctd;

TEST_CASE("sum_top clamps and accumulates") {
    SingularSpectrum s;
    s.values = {3.0, 2.0, 1.0};
    CHECK(s.sum_top(1) == 3.0);
    CHECK(s.sum_top(2) == 5.0);
    CHECK(s.sum_top(3) == 6.0);
    CHECK(s.sum_top(7) == 6.0);
    CHECK(s.sum() == 6.0);
    CHECK_THROWS_AS(s.sum_top(0), std::invalid_argument);
}

TEST_CASE("singular values of hand matrices") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = -4.0;
    const auto s = singular_values(m);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(s.values[1] == doctest::Approx(3.0).epsilon(1e-12));

    // rank one: the only singular value is |u||v|
    Eigen::VectorXd u(3), v(4);
    u << 1, -2, 2;
    v << 0.5, 0.5, 0.5, 0.5;
    const auto r = singular_values(u * v.transpose());
    CHECK(r.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.values[1] < 1e-12);
}

TEST_CASE("gram-eigenvalue route agrees with the svd") {
    for (std::uint64_t seed : {5, 6, 7}) {
        const Eigen::MatrixXd m = support::random_real_matrix(5, 8, seed);
        const auto s = singular_values(m);
        const auto g = support::spectrum_by_gram(m);
        REQUIRE(s.values.size() == g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(s.values[i] == doctest::Approx(g[i]).epsilon(1e-9));
    }
}

TEST_CASE("reference spectra of the three-qubit cut matrices") {
    // ghz, rows party 1: two orthogonal rows of norm sqrt(2), one zero row
    const CorrelationTensor g = full_correlation_tensor(ghz_state(2, 3).to_density());
    const auto sg = singular_values(matricize(g, {{1}}));
    CHECK(sg.values[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sg.values[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sg.values[2] < 1e-12);
    CHECK(trace_norm(matricize(g, {{1}})) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));

    // w: rows hit disjoint column sets, so the spectrum is the row norms
    const CorrelationTensor w = full_correlation_tensor(w_state(2).to_density());
    const auto sw = singular_values(matricize(w, {{1}}));
    CHECK(sw.values[0] == doctest::Approx(std::sqrt(17.0) / 3.0).epsilon(1e-10));
    CHECK(sw.values[1] == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));
    CHECK(sw.values[2] == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));
    CHECK(trace_norm(matricize(w, {{1}})) ==
          doctest::Approx((std::sqrt(17.0) + 4.0 * std::sqrt(2.0)) / 3.0).epsilon(1e-10));
}

TEST_CASE("ky fan norms are monotone in k and cap at the trace norm") {
    const Eigen::MatrixXd m = support::random_real_matrix(4, 6, 11);
    double prev = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const double kf = ky_fan_norm(m, k);
        CHECK(kf >= prev - 1e-14);
        CHECK(kf <= ky_fan_norm(m, 1) * k + 1e-12);
        prev = kf;
    }
    CHECK(ky_fan_norm(m, 4) == doctest::Approx(trace_norm(m)).epsilon(1e-12));
    CHECK(ky_fan_norm(m, 9) == doctest::Approx(trace_norm(m)).epsilon(1e-12)); // clamped
    CHECK_THROWS_AS(ky_fan_norm(m, 0), std::invalid_argument);
    CHECK_THROWS_AS(ky_fan_norm(m, -2), std::invalid_argument);
}

TEST_CASE("spectra are invariant under orthogonal transforms") {
    const Eigen::MatrixXd m = support::random_real_matrix(5, 5, 13);
    const Eigen::MatrixXd q1 = support::random_orthogonal(5, 17);
    const Eigen::MatrixXd q2 = support::random_orthogonal(5, 19);
    const auto s0 = singular_values(m);
    const auto s1 = singular_values(q1 * m * q2.transpose());
    for (std::size_t i = 0; i < s0.values.size(); ++i)
        CHECK(s0.values[i] == doctest::Approx(s1.values[i]).epsilon(1e-10));
    CHECK(trace_norm(m.transpose()) == doctest::Approx(trace_norm(m)).epsilon(1e-12));
}

TEST_CASE("singular values of a kronecker product are pairwise products") {
    const Eigen::MatrixXd a = support::random_real_matrix(2, 3, 23);
    const Eigen::MatrixXd b = support::random_real_matrix(3, 2, 29);
    const auto sk = singular_values(support::kron_real(a, b));
    const auto sa = singular_values(a);
    const auto sb = singular_values(b);
    std::vector<double> prod;
    for (double x : sa.values)
        for (double y : sb.values) prod.push_back(x * y);
    std::sort(prod.begin(), prod.end(), std::greater<double>());
    prod.resize(sk.values.size(), 0.0); // kron has extra zero singular values
    for (std::size_t i = 0; i < sk.values.size(); ++i)
        CHECK(std::abs(sk.values[i] - prod[i]) < 1e-9);
    CHECK(trace_norm(support::kron_real(a, b)) ==
          doctest::Approx(trace_norm(a) * trace_norm(b)).epsilon(1e-9));
}

TEST_CASE("partial matrix validation") {
    PartialMatrix pm;
    pm.rows = 2;
    pm.cols = 2;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument); // no entries
    pm.entries = {{0, 0, 1.0}, {1, 2, 0.5}};
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument); // col out of range
    pm.entries = {{0, 0, 1.0}, {0, 0, 0.5}};
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument); // duplicate
    pm.entries = {{0, 0, 1.0}, {1, 1, 0.5}};
    CHECK_NOTHROW(pm.validate());
    pm.rows = 0;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
}

TEST_CASE("lower bound equals the trace norm when every entry is known") {
    const Eigen::MatrixXd m = support::random_real_matrix(4, 5, 31);
    PartialMatrix pm;
    pm.rows = 4;
    pm.cols = 5;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 5; ++c) pm.entries.push_back({r, c, m(r, c)});
    CHECK(trace_norm_lower_bound(pm) == doctest::Approx(trace_norm(m)).epsilon(1e-10));
}

TEST_CASE("lower bound from a handful of ghz cut entries clears sqrt(3)") {
    // seven entries of the 3x9 first-party cut matrix of the three-qubit ghz
    // tensor: enough to certify more than the one-versus-rest product bound
    PartialMatrix pm;
    pm.rows = 3;
    pm.cols = 9;
    pm.entries = {
        {0, 0, 1.0},  // XXX
        {1, 1, -1.0}, // YXY
        {2, 2, 0.0},  // ZXZ
        {0, 4, -1.0}, // XYY
        {1, 3, -1.0}, // YYX
        {1, 4, 0.0},  // YYY
        {2, 8, 0.0},  // ZZZ
    };
    const double bound = trace_norm_lower_bound(pm);
    CHECK(bound >= std::sqrt(3.0) + 0.1);

    // stays below the true trace norm of the completed matrix
    const CorrelationTensor g = full_correlation_tensor(ghz_state(2, 3).to_density());
    CHECK(bound <= trace_norm(matricize(g, {{1}})) + 1e-12);
}

TEST_CASE("lower bound never exceeds the true trace norm") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::MatrixXd m = support::random_real_matrix(4, 4, 100 + trial);
        PartialMatrix pm;
        pm.rows = 4;
        pm.cols = 4;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (coin(rng) < 0.45) pm.entries.push_back({r, c, m(r, c)});
        if (pm.entries.empty()) pm.entries.push_back({0, 0, m(0, 0)});
        CHECK(trace_norm_lower_bound(pm) <= trace_norm(m) + 1e-9);
    }
}

TEST_CASE("lower bound degenerate cases") {
    PartialMatrix one;
    one.rows = 3;
    one.cols = 3;
    one.entries = {{1, 2, -0.7}};
    CHECK(trace_norm_lower_bound(one) == doctest::Approx(0.7).epsilon(1e-12));

    // known entries confined to one column: frobenius is the exact answer
    PartialMatrix col;
    col.rows = 3;
    col.cols = 2;
    col.entries = {{0, 1, 3.0}, {1, 1, 4.0}};
    CHECK(trace_norm_lower_bound(col) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("standard norm matches the frobenius norm of any matricization") {
    const CorrelationTensor t = support::random_tensor({1, 2, 3}, {3, 8, 3}, 41);
    CHECK(standard_norm(t) ==
          doctest::Approx(frobenius_norm(matricize(t, {{2}}))).epsilon(1e-12));
    CHECK(standard_norm(t) == t.values.norm());
}
