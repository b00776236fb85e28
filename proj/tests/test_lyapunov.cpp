#include "skewspec/errors.hpp"
#include "skewspec/lyapunov.hpp"
#include "skewspec/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace skewspec;

namespace {

// |E| > 2: constant zero potential has L(E) = log|E/2 + sqrt(E^2/4 - 1)|
double constant_lyapunov(double E) {
    double h = std::fabs(E) / 2.0;
    return std::log(h + std::sqrt(h * h - 1.0));
}

} // namespace

TEST_CASE("single step with v = E is the symplectic rotation") {
    TransferState st;
    auto next = transfer_step(st, 0.7, 0.7);
    CHECK(next.matrix[0][0] == 0.0);
    CHECK(next.matrix[0][1] == -1.0);
    CHECK(next.matrix[1][0] == 1.0);
    CHECK(next.matrix[1][1] == 0.0);
    CHECK(next.log_scale == 0.0);
    CHECK(next.determinant() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("twenty steps match the direct unrenormalized product") {
    PotentialSpec h;
    h.family = Family::Harper;
    h.phase = {0.3, 0.0};
    auto v = potential_window(h, 0, 20);
    const double E = 0.37;
    double p00 = 1, p01 = 0, p10 = 0, p11 = 1;
    for (double vi : v) {
        double a = vi - E;
        double q00 = a * p00 - p10, q01 = a * p01 - p11;
        p10 = p00;
        p11 = p01;
        p00 = q00;
        p01 = q01;
    }
    TransferState st;
    for (double vi : v) st = transfer_step(st, vi, E);
    double scale = std::exp(st.log_scale);
    CHECK(st.matrix[0][0] * scale == doctest::Approx(p00).epsilon(1e-12));
    CHECK(st.matrix[0][1] * scale == doctest::Approx(p01).epsilon(1e-10));
    CHECK(st.matrix[1][0] * scale == doctest::Approx(p10).epsilon(1e-12));
    CHECK(st.matrix[1][1] * scale == doctest::Approx(p11).epsilon(1e-10));
}

TEST_CASE("determinant drift stays within 1e-9 over a million steps") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    TransferState st;
    auto v = potential_window(s, 0, 1000000);
    const double cap = std::ldexp(1.0, 50);
    double max_frob = 0.0;
    for (double vi : v) {
        st = transfer_step(st, vi, 0.5);
        max_frob = std::max(max_frob, st.frobenius());
    }
    CHECK(max_frob <= cap * 8.0);
    CHECK(std::fabs(st.determinant() - 1.0) <= 1e-9);
}

TEST_CASE("renormalization cap does not affect the exponent") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    double a = finite_lyapunov(s, 0.7, 50000, 50);
    double b = finite_lyapunov(s, 0.7, 50000, 20);
    CHECK(std::fabs(a - b) <= 1e-10);
}

TEST_CASE("free propagation at the band center has no exponential growth") {
    PotentialSpec c0;
    c0.family = Family::Constant;
    c0.c = 0.0;
    CHECK(std::fabs(finite_lyapunov(c0, 0.0, 1000)) <= 0.01);
}

TEST_CASE("constant matrix spectral radius at E = 3") {
    PotentialSpec c0;
    c0.family = Family::Constant;
    c0.c = 0.0;
    // log((3 + sqrt 5) / 2)
    CHECK(std::fabs(finite_lyapunov(c0, 3.0, 100000) - 0.9624236501192068949955178) <= 0.01);
}

TEST_CASE("constant curve matches the closed form outside the band") {
    PotentialSpec c0;
    c0.family = Family::Constant;
    c0.c = 0.0;
    std::vector<double> grid = {-4.0, -3.0, 3.0, 4.0};
    auto curve = lyapunov_curve(c0, grid, 50000, 16, 9);
    CHECK(curve.num_phases == 1); // no phase orbit to average over
    for (size_t i = 0; i < grid.size(); ++i) {
        CAPTURE(grid[i]);
        CHECK(std::fabs(curve.values[i] - constant_lyapunov(grid[i])) <= 1e-3);
    }
}

TEST_CASE("skew-shift curve is symmetric under E -> -E") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(-3.5 + i * 7.0 / 8.0);
    auto curve = lyapunov_curve(s, grid, 20000, 8, 4);
    for (size_t i = 0; i < grid.size(); ++i) {
        size_t m = grid.size() - 1 - i;
        CHECK(std::fabs(curve.values[i] - curve.values[m]) <= 0.05);
    }
}

TEST_CASE("curves are bit-reproducible for a fixed seed") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    std::vector<double> grid = {-1.0, 0.0, 1.0};
    auto a = lyapunov_curve(s, grid, 5000, 6, 123);
    auto b = lyapunov_curve(s, grid, 5000, 6, 123);
    CHECK(a.values == b.values);
    auto c = lyapunov_curve(s, grid, 5000, 6, 124);
    bool any_differ = false;
    for (size_t i = 0; i < grid.size(); ++i) any_differ = any_differ || a.values[i] != c.values[i];
    CHECK(any_differ);
    CHECK(a.num_phases == 6);
    CHECK(a.energies == grid);
}

TEST_CASE("harper with doubled coupling floors at log 2") {
    PotentialSpec h;
    h.family = Family::Harper;
    h.lambda = 2.0;
    std::vector<double> grid = {-2.7, -1.0, 0.0, 1.0, 2.7};
    auto curve = lyapunov_curve(h, grid, 20000, 4, 7);
    const double log2 = 0.6931471805599453;
    for (double v : curve.values) CHECK(v >= log2 - 0.02);
}

TEST_CASE("transfer pipeline validates input") {
    PotentialSpec c0;
    c0.family = Family::Constant;
    CHECK_THROWS_AS(finite_lyapunov(c0, std::nan(""), 100), ConfigError);
    CHECK_THROWS_AS(finite_lyapunov(c0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(finite_lyapunov(c0, 1.0, 100, 2), ConfigError);
    CHECK_THROWS_AS(finite_lyapunov(c0, 1.0, 100, 900), ConfigError);
    TransferState st;
    CHECK_THROWS_AS(transfer_step(st, std::nan(""), 0.0), ConfigError);
    CHECK_THROWS_AS(lyapunov_curve(c0, {}, 100, 4, 1), ConfigError);
    CHECK_THROWS_AS(lyapunov_curve(c0, {0.0}, 100, 0, 1), ConfigError);
}
