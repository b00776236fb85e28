#include "skewspec/bounds.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/gaps.hpp"
#include "skewspec/potentials.hpp"
#include "skewspec/tridiag.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace skewspec;

TEST_CASE("t grid and phase grid constructors") {
    auto t = uniform_t_grid(2.0, 5);
    REQUIRE(t.size() == 5);
    CHECK(t.front() == -2.0);
    CHECK(t.back() == 2.0);
    CHECK(t[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_t_grid(0.0, 5), ConfigError);
    CHECK_THROWS_AS(uniform_t_grid(1.0, 1), ConfigError);

    auto g = product_phase_grid(3, 2);
    REQUIRE(g.size() == 6);
    CHECK(g[0].x == 0.0);
    CHECK(g[1].x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(g[1].y == 0.0);
    CHECK(g[3].y == 0.5);
    CHECK_THROWS_AS(product_phase_grid(0, 2), ConfigError);
}

TEST_CASE("three-site constant profile: cones carry the boundary weight") {
    PotentialSpec c0;
    c0.family = Family::Constant;
    c0.c = 0.0;
    std::vector<PhasePoint> ph = {{0.0, 0.0}};
    auto t = uniform_t_grid(3.0, 601);
    auto prof = distance_profile(c0, 3, ph, t);
    REQUIRE(prof.d_values.size() == 601);
    // eigenvalues -sqrt2, 0, sqrt2; middle eigenvector weight sqrt2, edge 1
    CHECK(prof.d_values[300] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(prof.d_values[600] == doctest::Approx(3.0 - std::sqrt(2.0) + 1.0).epsilon(1e-9));
    CHECK(prof.d_values[0] == doctest::Approx(3.0 - std::sqrt(2.0) + 1.0).epsilon(1e-9));
    for (const auto& w : prof.per_t_witness) {
        CHECK(w.j >= 1);
        CHECK(w.j <= 3);
    }
}

TEST_CASE("profiles are 1-Lipschitz on the grid") {
    PotentialSpec h;
    h.family = Family::Harper;
    auto phases = product_phase_grid(16, 1);
    auto t = uniform_t_grid(3.0, 2048);
    auto prof = distance_profile(h, 40, phases, t);
    for (size_t i = 1; i < prof.d_values.size(); ++i) {
        double step = prof.t_grid[i] - prof.t_grid[i - 1];
        CHECK(std::fabs(prof.d_values[i] - prof.d_values[i - 1]) <= step + 1e-12);
    }
}

TEST_CASE("profile minimum can only drop when phases are added") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto t = uniform_t_grid(3.5, 513);
    auto small = product_phase_grid(4, 4);
    auto big = product_phase_grid(8, 8); // contains the 4x4 grid
    auto p1 = distance_profile(s, 30, small, t);
    auto p2 = distance_profile(s, 30, big, t);
    for (size_t i = 0; i < t.size(); ++i) CHECK(p2.d_values[i] <= p1.d_values[i] + 1e-12);
}

TEST_CASE("skew profile is symmetric under t -> -t with a flip-closed pool") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    ProfilePoolParams pool;
    pool.base = 6;
    pool.sweep_points = 8;
    auto phases = default_profile_phases(s, 24, {0.3, 0.6}, pool);
    auto t = uniform_t_grid(3.2, 257);
    auto prof = distance_profile(s, 24, phases, t);
    for (size_t i = 0; i < t.size(); ++i) {
        size_t m = t.size() - 1 - i;
        CHECK(std::fabs(prof.d_values[i] - prof.d_values[m]) <= 1e-9);
    }
}

TEST_CASE("default phase pool structure") {
    PotentialSpec h;
    h.family = Family::Harper;
    ProfilePoolParams pool;
    pool.base = 4;
    pool.sweep_points = 10;
    auto ph = default_profile_phases(h, 20, {0.37, 0.0}, pool);
    for (const auto& p : ph) CHECK(p.y == 0.0); // harper carries no y dependence
    bool has_zero = false, has_half = false, has_argmax = false, has_flip = false;
    for (const auto& p : ph) {
        if (p.x == 0.0) has_zero = true;
        if (p.x == 0.5) has_half = true;
        if (p.x == doctest::Approx(0.37).epsilon(1e-15)) has_argmax = true;
        if (p.x == doctest::Approx(0.87).epsilon(1e-15)) has_flip = true;
    }
    CHECK(has_zero);
    CHECK(has_half);
    CHECK(has_argmax);
    CHECK(has_flip);
    for (size_t i = 1; i < ph.size(); ++i)
        CHECK((ph[i - 1].x < ph[i].x || (ph[i - 1].x == ph[i].x && ph[i - 1].y < ph[i].y)));

    PotentialSpec s;
    s.family = Family::SkewShift;
    auto ps = default_profile_phases(s, 20, {0.2, 0.8}, pool);
    bool any_y = false;
    for (const auto& p : ps) any_y = any_y || p.y > 0.0;
    CHECK(any_y);
}

TEST_CASE("zero profile collapses the gap bound to the grid step") {
    DistanceProfile prof;
    prof.t_grid = uniform_t_grid(1.0, 11);
    prof.d_values.assign(11, 0.0);
    prof.per_t_witness.assign(11, {});
    prof.N = 10;
    prof.enclosure_radius = 1.0;
    auto gb = gap_upper_bound(prof);
    CHECK(gb.gamma_upper == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(gb.rigor_slack == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(gb.t_star == -1.0);

    prof.enclosure_radius = 1.5; // grid no longer covers the enclosure
    CHECK_THROWS_AS(gap_upper_bound(prof), ConfigError);
}

TEST_CASE("gap bound equals twice the padded profile maximum") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto t = uniform_t_grid(3.4, 1025);
    auto prof = distance_profile(s, 30, product_phase_grid(8, 8), t);
    prof.enclosure_radius = 3.4;
    auto gb = gap_upper_bound(prof);
    double mx = 0.0, arg = t.front();
    for (size_t i = 0; i < prof.d_values.size(); ++i)
        if (prof.d_values[i] > mx) { mx = prof.d_values[i]; arg = t[i]; }
    double step = t[1] - t[0];
    CHECK(gb.gamma_upper == doctest::Approx(2.0 * (mx + step / 2.0)).epsilon(1e-12));
    CHECK(gb.t_star == arg);
    CHECK(gb.t_grid_step == doctest::Approx(step).epsilon(1e-9));
}

TEST_CASE("certify far outside the spectrum via the enclosure fast path") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto cert = certify_gap(s, 100, 10.0, 11.0, {{0.0, 0.0}});
    CHECK(cert.margin > 5.0);
    CHECK(cert.phase_slack == 0.0);
    CHECK(cert.torus_rigorous);
}

TEST_CASE("certify fails inside the spectrum") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto cert = certify_gap(s, 100, -0.05, 0.05, {{0.0, 0.0}}, 65);
    CHECK(cert.margin <= 0.0);
    CHECK(!cert.torus_rigorous);
}

TEST_CASE("certify a true gap of the constant operator") {
    PotentialSpec c;
    c.family = Family::Constant;
    c.c = 0.0;
    // line spectrum is [-2, 2]; (2.5, 2.7) clears the Gershgorin fast path
    auto cert = certify_gap(c, 50, 2.5, 2.7, {{0.0, 0.0}}, 33);
    CHECK(cert.margin > 0.0);
    CHECK(cert.phase_slack == 0.0);
    CHECK(cert.torus_rigorous);
}

TEST_CASE("phase slack: product grids extend to the torus, ad-hoc sets do not") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    const int64_t N = 40;
    auto lip = phase_lipschitz_bounds(s, N);

    // (3.9, 3.95) sits inside the Gershgorin enclosure [-4, 4] but above the
    // spectrum, so the main sampling path runs
    auto cert = certify_gap(s, N, 3.9, 3.95, product_phase_grid(8, 8), 17);
    double expected = lip.first / 16.0 + lip.second / 16.0;
    CHECK(cert.margin > 0.0);
    CHECK(cert.phase_slack == doctest::Approx(expected).epsilon(1e-12));
    CHECK(!cert.torus_rigorous); // the y Lipschitz constant dwarfs any margin

    std::vector<PhasePoint> adhoc = {{0.0, 0.0}, {0.31, 0.77}, {0.5, 0.21}};
    auto cert2 = certify_gap(s, N, 3.9, 3.95, adhoc, 17);
    CHECK(cert2.margin > 0.0);
    CHECK(std::isinf(cert2.phase_slack));
    CHECK(!cert2.torus_rigorous);
}

TEST_CASE("certify threshold scales as sqrt(2/N)") {
    PotentialSpec c;
    c.family = Family::Constant;
    c.c = 0.0;
    // margin = distance - sqrt(2/N) - substep/2; here the interval is a
    // single point at t = 3, distance 1 from the spectrum edge, checked
    // against two window sizes
    auto c50 = certify_gap(c, 50, 2.9, 3.1, {{0.0, 0.0}}, 21);
    auto c200 = certify_gap(c, 200, 2.9, 3.1, {{0.0, 0.0}}, 21);
    CHECK(c200.margin > c50.margin);
}

TEST_CASE("profile input validation") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    std::vector<double> bad_t = {0.0, 1.0, 0.5};
    CHECK_THROWS_AS(distance_profile(s, 10, {{0.0, 0.0}}, bad_t), ConfigError);
    CHECK_THROWS_AS(distance_profile(s, 10, {}, uniform_t_grid(1.0, 3)), ConfigError);
    CHECK_THROWS_AS(certify_gap(s, 10, 1.0, 0.5, {{0.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(certify_gap(s, 10, 0.5, 1.0, {}), ConfigError);
}
