#include "skewspec/potentials.hpp"

#include "skewspec/dd.hpp"
#include "skewspec/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <mutex>

namespace skewspec {

namespace {

constexpr double TWO_PI = 6.283185307179586476925287;

double frac1(double v) {
    double f = v - std::floor(v);
    return (f >= 1.0) ? 0.0 : f;
}

double cos2pi(double theta) { return std::cos(TWO_PI * theta); }

// theta for the polynomial families, n^k * omega + n*y + x mod 1, with the
// n^k * omega part done in split integer arithmetic so no precision is lost
// even for large |n|.
dd poly_theta_dd(int64_t n, int k, double omega, double x, double y) {
    bool negative = false;
    unsigned __int128 p = 1;
    unsigned __int128 un = (n < 0) ? static_cast<unsigned __int128>(-(n + 1)) + 1
                                   : static_cast<unsigned __int128>(n);
    for (int i = 0; i < k; ++i) {
        if (un != 0 && p > (~static_cast<unsigned __int128>(0)) / un)
            throw NumericalError("potential index overflow: |n|^k exceeds 128 bits");
        p *= un;
    }
    if (n < 0 && (k % 2 == 1)) negative = true;

    dd t = mod1_mul_u128(p, omega);
    if (negative) t = dd_frac(dd{1.0 - t.hi, -t.lo});
    t = dd_frac(dd_add(t, mod1_mul(n, y)));
    t = dd_frac(dd_add(t, x));
    return t;
}

double poly_theta(int64_t n, int k, double omega, double x, double y) {
    return poly_theta_dd(n, k, omega, x, y).hi;
}

double doubling_theta(double omega, double x, int64_t n) {
    double u = frac1(0.5 * omega + x);
    for (int64_t i = 0; i < n; ++i) {
        u *= 2.0;
        if (u >= 1.0) u -= 1.0;
    }
    return u;
}

void warn_once(const char* msg) {
    static std::once_flag flag;
    std::call_once(flag, [msg] { std::fprintf(stderr, "warning: %s\n", msg); });
}

struct CatState {
    dd u, v;
};

CatState cat_apply(const std::array<long, 4>& A, CatState s) {
    dd u = dd_add(dd_frac(dd_add(two_prod(double(A[0]), s.u.hi), two_prod(double(A[0]), s.u.lo).hi)),
                  dd_frac(dd_add(two_prod(double(A[1]), s.v.hi), two_prod(double(A[1]), s.v.lo).hi)));
    dd v = dd_add(dd_frac(dd_add(two_prod(double(A[2]), s.u.hi), two_prod(double(A[2]), s.u.lo).hi)),
                  dd_frac(dd_add(two_prod(double(A[3]), s.v.hi), two_prod(double(A[3]), s.v.lo).hi)));
    return {dd_frac(u), dd_frac(v)};
}

CatState cat_iterate(const PotentialSpec& spec, int64_t n) {
    CatState s{dd_frac(dd{spec.phase.x, 0.0}), dd_frac(dd{spec.phase.y, 0.0})};
    if (n >= 0) {
        for (int64_t i = 0; i < n; ++i) s = cat_apply(spec.cat, s);
    } else {
        // det 1 integer inverse [d -b; -c a]
        std::array<long, 4> inv = {spec.cat[3], -spec.cat[1], -spec.cat[2], spec.cat[0]};
        for (int64_t i = 0; i < -n; ++i) s = cat_apply(inv, s);
    }
    return s;
}

// 2*lambda*cos(n^beta) through MPFR: n^beta can exceed 1e24 where doubles
// retain no fractional information at all.
double powerbeta_value(const PotentialSpec& spec, int64_t n) {
    if (n < 0) throw ConfigError("PowerBeta potential is one-sided (n >= 0)");
    if (n == 0) return 2.0 * spec.lambda; // 0^beta = 0
    double bits = spec.beta * std::log2(double(n) + 1.0) + 96.0;
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits < 128.0 ? 128.0 : bits);
    mpfr_t t, b, r;
    mpfr_init2(t, prec);
    mpfr_init2(b, prec);
    mpfr_init2(r, prec);
    mpfr_set_si(t, static_cast<long>(n), MPFR_RNDN);
    mpfr_set_d(b, spec.beta, MPFR_RNDN);
    mpfr_pow(t, t, b, MPFR_RNDN);       // n^beta
    mpfr_const_pi(r, MPFR_RNDN);
    mpfr_mul_ui(r, r, 2, MPFR_RNDN);
    mpfr_remainder(t, t, r, MPFR_RNDN); // reduce mod 2*pi
    double arg = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    mpfr_clear(b);
    mpfr_clear(r);
    return 2.0 * spec.lambda * std::cos(arg);
}

} // namespace

Frequency::Frequency(double r) {
    if (!std::isfinite(r)) throw ConfigError("frequency must be finite");
    omega_ = frac1(r);
}

Frequency Frequency::golden() {
    static const Frequency g{(std::sqrt(5.0) - 1.0) / 2.0};
    return g;
}

PhasePoint reduce_mod1(PhasePoint p) { return {frac1(p.x), frac1(p.y)}; }

std::string family_name(Family f) {
    switch (f) {
    case Family::Harper: return "harper";
    case Family::SkewShift: return "skew_shift";
    case Family::SkewShiftOrder: return "skew_shift_order";
    case Family::PowerBeta: return "power_beta";
    case Family::DoublingMap: return "doubling_map";
    case Family::CatMap: return "cat_map";
    case Family::Constant: return "constant";
    case Family::IIDRandom: return "iid_random";
    }
    return "unknown";
}

void validate_spec(const PotentialSpec& spec) {
    if (!std::isfinite(spec.lambda)) throw ConfigError("lambda must be finite");
    switch (spec.family) {
    case Family::SkewShiftOrder:
        if (spec.order < 2) throw ConfigError("skew_shift_order requires k >= 2");
        break;
    case Family::PowerBeta: {
        if (!(spec.beta > 1.0)) throw ConfigError("power_beta requires beta > 1");
        if (spec.beta == std::floor(spec.beta))
            throw ConfigError("power_beta requires non-integer beta");
        break;
    }
    case Family::CatMap: {
        long det = spec.cat[0] * spec.cat[3] - spec.cat[1] * spec.cat[2];
        if (det != 1) throw ConfigError("cat_map matrix must have determinant 1");
        if (std::labs(spec.cat[0] + spec.cat[3]) <= 2)
            warn_once("cat_map matrix has |trace| <= 2 (not hyperbolic)");
        break;
    }
    case Family::IIDRandom:
        if (!(spec.lo <= spec.hi)) throw ConfigError("iid_random requires lo <= hi");
        if (spec.lo < -2.0 || spec.hi > 2.0)
            throw ConfigError("iid_random bounds must lie in [-2, 2]");
        break;
    default:
        break;
    }
}

double potential_value(const PotentialSpec& spec, int64_t n) {
    const double lam2 = 2.0 * spec.lambda;
    const double om = spec.omega.value();
    switch (spec.family) {
    case Family::Harper: {
        dd t = dd_frac(dd_add(mod1_mul(n, om), spec.phase.x));
        return lam2 * cos2pi(t.hi);
    }
    case Family::SkewShift:
        return lam2 * cos2pi(poly_theta(n, 2, om, spec.phase.x, spec.phase.y));
    case Family::SkewShiftOrder:
        return lam2 * cos2pi(poly_theta(n, spec.order, om, spec.phase.x, spec.phase.y));
    case Family::PowerBeta:
        return powerbeta_value(spec, n);
    case Family::DoublingMap:
        if (n < 0) throw ConfigError("DoublingMap potential is one-sided (n >= 0)");
        if (n > 50) warn_once("doubling_map phases past n = 50 have exhausted double precision");
        return lam2 * cos2pi(doubling_theta(om, spec.phase.x, n));
    case Family::CatMap:
        return lam2 * cos2pi(cat_iterate(spec, n).u.hi);
    case Family::Constant:
        return spec.c;
    case Family::IIDRandom: {
        uint64_t ctr = static_cast<uint64_t>(n) * 2654435761u ^ 0x5bf03635u;
        double u = uniform01(spec.seed, ctr);
        return spec.lambda * (spec.lo + (spec.hi - spec.lo) * u);
    }
    }
    throw ConfigError("unknown potential family");
}

double potential_sup_bound(const PotentialSpec& spec) {
    switch (spec.family) {
    case Family::Constant:
        return std::fabs(spec.c);
    case Family::IIDRandom:
        return std::fabs(spec.lambda) * std::max(std::fabs(spec.lo), std::fabs(spec.hi));
    default:
        return 2.0 * std::fabs(spec.lambda);
    }
}

bool has_phase_orbit(Family f) {
    switch (f) {
    case Family::Harper:
    case Family::SkewShift:
    case Family::SkewShiftOrder:
    case Family::DoublingMap:
    case Family::CatMap:
        return true;
    default:
        return false;
    }
}

bool additive_x_phase(Family f) {
    return f == Family::Harper || f == Family::SkewShift || f == Family::SkewShiftOrder;
}

bool sign_flip_family(Family f) { return additive_x_phase(f); }

std::vector<double> phase_window(const PotentialSpec& spec, int64_t n0, int64_t N) {
    if (N < 1) throw ConfigError("phase_window requires N >= 1");
    std::vector<double> out(static_cast<size_t>(N));
    const double om = spec.omega.value();

    switch (spec.family) {
    case Family::Harper: {
        // first-difference recurrence in double-double
        dd theta = dd_frac(dd_add(mod1_mul(n0, om), spec.phase.x));
        for (int64_t i = 0; i < N; ++i) {
            out[i] = theta.hi;
            theta = dd_frac(dd_add(theta, om));
        }
        return out;
    }
    case Family::SkewShift:
    case Family::SkewShiftOrder: {
        // k-th order finite differences of n^k*omega + n*y + x: the k-th
        // difference is the constant k! * omega, so a table of k running
        // accumulators regenerates every phase with O(ulp) error per step.
        const int k = (spec.family == Family::SkewShift) ? 2 : spec.order;
        std::vector<dd> table(static_cast<size_t>(k) + 1);
        std::vector<dd> init(static_cast<size_t>(k) + 1);
        for (int i = 0; i <= k; ++i)
            init[i] = poly_theta_dd(n0 + i, k, om, spec.phase.x, spec.phase.y);
        for (int level = 0; level <= k; ++level) {
            table[level] = init[0];
            for (size_t j = 0; j + 1 < init.size(); ++j)
                init[j] = dd_frac(dd_sub(init[j + 1], init[j]));
            init.pop_back();
        }
        for (int64_t i = 0; i < N; ++i) {
            out[i] = table[0].hi;
            for (int level = 0; level < k; ++level)
                table[level] = dd_frac(dd_add(table[level], table[level + 1]));
        }
        return out;
    }
    case Family::DoublingMap: {
        if (n0 < 0) throw ConfigError("DoublingMap potential is one-sided (n >= 0)");
        if (n0 + N - 1 > 50)
            warn_once("doubling_map phases past n = 50 have exhausted double precision");
        double u = doubling_theta(om, spec.phase.x, n0);
        for (int64_t i = 0; i < N; ++i) {
            out[i] = u;
            u *= 2.0;
            if (u >= 1.0) u -= 1.0;
        }
        return out;
    }
    case Family::CatMap: {
        CatState s = cat_iterate(spec, n0);
        for (int64_t i = 0; i < N; ++i) {
            out[i] = s.u.hi;
            s = cat_apply(spec.cat, s);
        }
        return out;
    }
    default:
        throw ConfigError(family_name(spec.family) + " has no phase orbit");
    }
}

std::vector<double> potential_window(const PotentialSpec& spec, int64_t n0, int64_t N) {
    if (N < 1) throw ConfigError("potential_window requires N >= 1");
    if (has_phase_orbit(spec.family)) {
        std::vector<double> out = phase_window(spec, n0, N);
        const double lam2 = 2.0 * spec.lambda;
        for (double& v : out) v = lam2 * cos2pi(v);
        return out;
    }
    std::vector<double> out(static_cast<size_t>(N));
    for (int64_t i = 0; i < N; ++i) out[i] = potential_value(spec, n0 + i);
    return out;
}

PotentialSpec shifted_spec(const PotentialSpec& spec, int64_t a) {
    PotentialSpec s = spec;
    if (a == 0) return s;
    const double om = spec.omega.value();
    switch (spec.family) {
    case Family::Harper: {
        dd x = dd_frac(dd_add(mod1_mul(a, om), spec.phase.x));
        s.phase.x = x.hi;
        return s;
    }
    case Family::SkewShift:
    case Family::SkewShiftOrder: {
        if (spec.family == Family::SkewShiftOrder && spec.order != 2)
            throw ConfigError("skew_shift_order with k >= 3 has no (x, y) shift representation");
        // (n+a)^2 w + (n+a) y + x = n^2 w + n (y + 2aw) + (x + ay + a^2 w)
        dd x = dd_add(mod1_mul_u128(static_cast<unsigned __int128>(a < 0 ? -a : a) *
                                        static_cast<unsigned __int128>(a < 0 ? -a : a),
                                    om),
                      spec.phase.x);
        x = dd_frac(dd_add(x, mod1_mul(a, spec.phase.y)));
        dd y = dd_frac(dd_add(mod1_mul(2 * a, om), spec.phase.y));
        s.phase = {x.hi, y.hi};
        return s;
    }
    case Family::DoublingMap: {
        if (a < 0) throw ConfigError("doubling_map shift requires a >= 0 (map not invertible)");
        s.phase.x = frac1(doubling_theta(om, spec.phase.x, a) - 0.5 * om);
        return s;
    }
    case Family::CatMap: {
        CatState st = cat_iterate(spec, a);
        s.phase = {st.u.hi, st.v.hi};
        return s;
    }
    case Family::Constant:
        return s;
    case Family::PowerBeta:
    case Family::IIDRandom:
        throw ConfigError(family_name(spec.family) + " has no shift structure");
    }
    throw ConfigError("unknown potential family");
}

} // namespace skewspec
