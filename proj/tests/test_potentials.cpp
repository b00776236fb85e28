#include "skewspec/dd.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>

using namespace skewspec;

// Reference values below were computed with 60-digit arithmetic and frozen.

TEST_CASE("golden frequency is reduced mod 1 from either convention") {
    CHECK(Frequency::golden().value() == doctest::Approx(0.6180339887498949).epsilon(1e-16));
    CHECK(Frequency((1.0 + std::sqrt(5.0)) / 2.0).value() ==
          doctest::Approx(Frequency::golden().value()).epsilon(1e-15));
    CHECK(Frequency(2.618033988749895).value() == doctest::Approx(0.618033988749895).epsilon(1e-15));
    CHECK(Frequency(-0.3819660112501051).value() ==
          doctest::Approx(0.6180339887498949).epsilon(1e-15));
}

TEST_CASE("harper values at small and huge indices") {
    PotentialSpec h;
    h.family = Family::Harper;
    auto w = potential_window(h, 0, 3);
    CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(-1.474737756156639341933479).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(0.174851449433919439273128).epsilon(1e-14));

    h.phase.x = 0.25;
    CHECK(potential_value(h, 12345678901LL) ==
          doctest::Approx(-0.1312099941133350242650931).epsilon(1e-12));
}

TEST_CASE("skew shift values across six orders of magnitude in n") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto w = potential_window(s, 0, 1000);
    CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(-1.474737756156639341933479).epsilon(1e-13));
    CHECK(w[10] == doctest::Approx(0.6585110456501497126811538).epsilon(1e-13));
    CHECK(w[100] == doctest::Approx(-1.070459670692654674402958).epsilon(1e-13));
    CHECK(w[500] == doctest::Approx(-1.999687721840382124181138).epsilon(1e-13));
    CHECK(w[999] == doctest::Approx(-1.940842013687313662074824).epsilon(1e-13));

    CHECK(potential_value(s, 999999) ==
          doctest::Approx(-1.950628997307959923024237).epsilon(1e-12));
    s.phase = {0.3, 0.7};
    CHECK(potential_value(s, 999999) ==
          doctest::Approx(1.318502114055389888394186).epsilon(1e-12));
}

TEST_CASE("skew shift phase orbit frac(n^2 omega) at large n") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto th = phase_window(s, 1000, 1);
    CHECK(th[0] == doctest::Approx(0.9887498949025257388711907).epsilon(1e-13));
    th = phase_window(s, 999999, 1);
    CHECK(th[0] == doctest::Approx(0.5354367246837146154803122).epsilon(1e-12));
    th = phase_window(s, 2147483651LL, 1);
    CHECK(th[0] == doctest::Approx(0.05399748810452287273164984).epsilon(1e-9));
}

TEST_CASE("power beta values need multiprecision reduction of n^beta") {
    PotentialSpec p;
    p.family = Family::PowerBeta;
    p.beta = 1.5;
    CHECK(potential_value(p, 1) == doctest::Approx(1.080604611736279434801873).epsilon(1e-13));
    CHECK(potential_value(p, 10) == doctest::Approx(1.957365393119784556553067).epsilon(1e-13));
    CHECK(potential_value(p, 1000) == doctest::Approx(1.759890530893044009516811).epsilon(1e-12));
    CHECK(potential_value(p, 999999) ==
          doctest::Approx(-1.270392383847217289710047).epsilon(1e-11));
}

TEST_CASE("doubling map orbit hits 0 once doubling exhausts the mantissa") {
    PotentialSpec d;
    d.family = Family::DoublingMap;
    auto th = phase_window(d, 10, 1);
    CHECK(th[0] == doctest::Approx(0.433402239946190093178302).epsilon(1e-12));
    CHECK(potential_value(d, 10) == doctest::Approx(-1.827442939745514210701451).epsilon(1e-12));
    CHECK(phase_window(d, 60, 1)[0] == 0.0);
    CHECK_THROWS_AS(potential_value(d, -1), ConfigError);
}

TEST_CASE("cat map orbit forward and backward") {
    PotentialSpec c;
    c.family = Family::CatMap;
    c.phase = {0.3, 0.7};
    CHECK(phase_window(c, 5, 1)[0] == doctest::Approx(0.1999999999999965694108539).epsilon(1e-13));
    CHECK(potential_value(c, 5) == doctest::Approx(0.6180339887499358483029657).epsilon(1e-12));
    CHECK(phase_window(c, -3, 1)[0] ==
          doctest::Approx(0.9000000000000002997602166).epsilon(1e-13));
    CHECK(potential_value(c, -3) == doctest::Approx(1.618033988749897062331665).epsilon(1e-12));
}

TEST_CASE("window generation matches per-site evaluation up to n = 1e6") {
    for (Family f : {Family::Harper, Family::SkewShift, Family::SkewShiftOrder,
                     Family::PowerBeta, Family::CatMap}) {
        PotentialSpec s;
        s.family = f;
        s.order = 3;
        s.beta = 1.5;
        s.phase = {0.137, 0.629};
        const int64_t N = 1000000;
        auto w = potential_window(s, 0, N);
        double worst = 0.0;
        for (int64_t n : {int64_t(0), int64_t(1), int64_t(17), int64_t(999), int64_t(65536),
                          int64_t(400000), N - 1})
            worst = std::max(worst, std::fabs(w[static_cast<size_t>(n)] - potential_value(s, n)));
        CAPTURE(family_name(f));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("window generation away from the origin") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    s.phase = {0.45, 0.11};
    auto w = potential_window(s, -500, 1000);
    double worst = 0.0;
    for (int64_t i = 0; i < 1000; i += 37)
        worst = std::max(worst,
                         std::fabs(w[static_cast<size_t>(i)] - potential_value(s, i - 500)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("shift identity: shifted_spec relabels the orbit exactly") {
    PotentialSpec s;
    s.family = Family::SkewShift;
    auto sh = shifted_spec(s, 1);
    CHECK(sh.phase.x == doctest::Approx(0.6180339887498949025257389).epsilon(1e-15));
    CHECK(sh.phase.y == doctest::Approx(0.2360679774997898050514777).epsilon(1e-13));

    for (Family f : {Family::Harper, Family::SkewShift, Family::DoublingMap, Family::CatMap,
                     Family::Constant}) {
        PotentialSpec base;
        base.family = f;
        base.phase = {0.21, 0.58};
        for (int64_t a : {int64_t(1), int64_t(7), int64_t(40)}) {
            auto moved = shifted_spec(base, a);
            for (int64_t n : {int64_t(0), int64_t(3), int64_t(9)}) {
                CAPTURE(family_name(f));
                CAPTURE(a);
                CHECK(potential_value(moved, n) ==
                      doctest::Approx(potential_value(base, n + a)).epsilon(1e-9));
            }
        }
    }
    CHECK_THROWS_AS(shifted_spec(PotentialSpec{.family = Family::PowerBeta}, 1), ConfigError);
    CHECK_THROWS_AS(shifted_spec(PotentialSpec{.family = Family::IIDRandom}, 1), ConfigError);
    PotentialSpec k4;
    k4.family = Family::SkewShiftOrder;
    k4.order = 4;
    CHECK_THROWS_AS(shifted_spec(k4, 1), ConfigError);
}

TEST_CASE("all families stay within the sup bound") {
    for (Family f : {Family::Harper, Family::SkewShift, Family::SkewShiftOrder,
                     Family::PowerBeta, Family::DoublingMap, Family::CatMap, Family::Constant,
                     Family::IIDRandom}) {
        PotentialSpec s;
        s.family = f;
        s.lambda = 1.7;
        s.beta = 2.5;
        s.c = -0.9;
        s.lo = -1.0;
        s.hi = 0.5;
        s.phase = {0.3, 0.9};
        double cap = potential_sup_bound(s) + 1e-12;
        for (int64_t n = 0; n < 40; ++n) {
            CAPTURE(family_name(f));
            CHECK(std::fabs(potential_value(s, n)) <= cap);
        }
    }
}

TEST_CASE("iid potential is a pure counter hash: order independent, seed keyed") {
    PotentialSpec r;
    r.family = Family::IIDRandom;
    r.seed = 42;
    double v9 = potential_value(r, 9);
    potential_value(r, 1000);
    CHECK(potential_value(r, 9) == v9);
    auto w = potential_window(r, 0, 32);
    CHECK(w[9] == v9);
    PotentialSpec r2 = r;
    r2.seed = 43;
    CHECK(potential_value(r2, 9) != v9);
}

TEST_CASE("spec validation rejects out-of-contract parameters") {
    PotentialSpec s;
    s.family = Family::PowerBeta;
    s.beta = 2.0;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);
    s.beta = 0.5;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = PotentialSpec{};
    s.family = Family::SkewShiftOrder;
    s.order = 1;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = PotentialSpec{};
    s.family = Family::CatMap;
    s.cat = {2, 1, 1, 2};
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = PotentialSpec{};
    s.family = Family::IIDRandom;
    s.lo = -3.0;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);
    s.lo = 1.0;
    s.hi = 0.0;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = PotentialSpec{};
    s.lambda = std::nan("");
    CHECK_THROWS_AS(validate_spec(s), ConfigError);
}

TEST_CASE("family structure predicates") {
    CHECK(has_phase_orbit(Family::Harper));
    CHECK(has_phase_orbit(Family::CatMap));
    CHECK(!has_phase_orbit(Family::Constant));
    CHECK(!has_phase_orbit(Family::PowerBeta));
    CHECK(!has_phase_orbit(Family::IIDRandom));

    CHECK(additive_x_phase(Family::Harper));
    CHECK(additive_x_phase(Family::SkewShift));
    CHECK(additive_x_phase(Family::SkewShiftOrder));
    CHECK(!additive_x_phase(Family::DoublingMap));
    CHECK(!additive_x_phase(Family::CatMap));

    CHECK(sign_flip_family(Family::Harper));
    CHECK(sign_flip_family(Family::SkewShift));
    CHECK(!sign_flip_family(Family::Constant));

    CHECK_THROWS_AS(phase_window(PotentialSpec{.family = Family::Constant}, 0, 4), ConfigError);
}

TEST_CASE("half-period x shift negates orbit potentials pointwise") {
    for (Family f : {Family::Harper, Family::SkewShift, Family::SkewShiftOrder}) {
        PotentialSpec a;
        a.family = f;
        a.phase = {0.19, 0.83};
        PotentialSpec b = a;
        b.phase.x += 0.5;
        for (int64_t n = 0; n < 50; ++n) {
            CAPTURE(family_name(f));
            CHECK(potential_value(b, n) == doctest::Approx(-potential_value(a, n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mod1_mul_u128 agrees with direct reduction where double is exact") {
    double om = 0.001953125; // 2^-9: n * om exact for moderate n
    for (int64_t n : {int64_t(3), int64_t(700), int64_t(511)}) {
        double direct = n * om - std::floor(n * om);
        dd r = mod1_mul(n, om);
        CHECK(dd_frac(r).hi == doctest::Approx(direct).epsilon(1e-15));
    }
}
