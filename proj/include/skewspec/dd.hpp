#ifndef SKEWSPEC_DD_HPP
#define SKEWSPEC_DD_HPP

#include <cmath>
#include <cstdint>

namespace skewspec {

// Minimal double-double arithmetic. Used for the incremental phase
// recurrences, where plain doubles would accumulate O(N^2 * ulp) error in the
// second differences of n^2*omega over windows up to N = 1e6.
struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline dd dd_add(dd a, double b) {
    dd s = two_sum(a.hi, b);
    return quick_two_sum(s.hi, s.lo + a.lo);
}

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd{-b.hi, -b.lo}); }

inline dd dd_mul(double a, double b) { return two_prod(a, b); }

inline dd dd_mul(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

// Reduce into [0, 1). Safe for |a| up to ~2^52.
inline dd dd_frac(dd a) {
    double f = a.hi - std::floor(a.hi);
    dd r = quick_two_sum(f, a.lo);
    if (r.hi >= 1.0) r = dd_add(r, -1.0);
    if (r.hi < 0.0) r = dd_add(r, 1.0);
    if (r.hi >= 1.0) r.hi = 0.0; // rounding landed exactly on 1
    return r;
}

// frac(m * w) for integer |m| < 2^53, accurate to ~1 ulp of the exact
// product of the double w with the exact integer m.
inline dd mod1_mul(int64_t m, double w) {
    dd p = two_prod(static_cast<double>(m), w);
    return dd_frac(p);
}

// frac(m * w) for unsigned 128-bit m (needed for n^k with k >= 3).
// Splits m into 32-bit limbs; frac(2^{32i} * w) is precomputed by exact
// doubling mod 1 in double-double.
inline dd mod1_mul_u128(unsigned __int128 m, double w) {
    dd pow_frac = {w, 0.0}; // frac(2^{32*0} * w) seed, reduced below
    pow_frac = dd_frac(pow_frac);
    dd acc = {0.0, 0.0};
    while (m != 0) {
        uint32_t limb = static_cast<uint32_t>(m & 0xffffffffu);
        if (limb != 0) {
            dd t0 = two_prod(static_cast<double>(limb), pow_frac.hi);
            dd t1 = two_prod(static_cast<double>(limb), pow_frac.lo);
            dd term = dd_add(dd_frac(t0), dd_frac(t1));
            acc = dd_frac(dd_add(acc, term));
        }
        m >>= 32;
        if (m != 0) {
            for (int i = 0; i < 32; ++i) {
                pow_frac = dd_add(pow_frac, pow_frac);
                if (pow_frac.hi >= 1.0) pow_frac = dd_add(pow_frac, -1.0);
            }
        }
    }
    return acc;
}

// Deterministic counter-based generator: a SplitMix64 finalizer over the
// (seed, counter) pair. Pure function of its arguments.
inline uint64_t hash_counter(uint64_t seed, uint64_t counter) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (counter + 1ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline double uniform01(uint64_t seed, uint64_t counter) {
    return static_cast<double>(hash_counter(seed, counter) >> 11) * 0x1.0p-53;
}

} // namespace skewspec

#endif
