#ifndef SKEWSPEC_POTENTIALS_HPP
#define SKEWSPEC_POTENTIALS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace skewspec {

// Frequency reduced to its canonical representative in [0, 1).
// Constructing from r and r + k (integer k) yields the same value, so the
// golden mean can be entered as (1+sqrt5)/2 or (sqrt5-1)/2 interchangeably.
class Frequency {
public:
    Frequency() : omega_(0.0) {}
    explicit Frequency(double r);
    static Frequency golden();
    double value() const { return omega_; }
    bool operator==(const Frequency&) const = default;

private:
    double omega_;
};

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const PhasePoint&) const = default;
};

PhasePoint reduce_mod1(PhasePoint p);

enum class Family {
    Harper,         // 2*lambda*cos(2*pi*(n*omega + x))
    SkewShift,      // 2*lambda*cos(2*pi*(n^2*omega + n*y + x))
    SkewShiftOrder, // 2*lambda*cos(2*pi*(n^k*omega + n*y + x)), k >= 2
    PowerBeta,      // 2*lambda*cos(n^beta), beta > 1 and not an integer
    DoublingMap,    // 2*lambda*cos(2*pi*theta_n), theta_0 = frac(omega/2 + x), theta_{n+1} = frac(2*theta_n)
    CatMap,         // 2*lambda*cos(2*pi*(first coordinate of A^n (x,y)))
    Constant,       // V_n = c
    IIDRandom,      // lambda * Uniform[lo, hi], counter-based, keyed by (seed, n)
};

std::string family_name(Family f);

struct PotentialSpec {
    Family family = Family::SkewShift;
    double lambda = 1.0;
    Frequency omega = Frequency::golden();
    PhasePoint phase;

    int order = 2;                        // SkewShiftOrder
    double beta = 1.5;                    // PowerBeta
    double c = 0.0;                       // Constant
    std::array<long, 4> cat = {2, 1, 1, 1}; // CatMap row-major [a b; c d]
    uint64_t seed = 0;                    // IIDRandom
    double lo = -2.0, hi = 2.0;           // IIDRandom bounds, within [-2, 2]

    bool operator==(const PotentialSpec&) const = default;
};

// Validates the family-specific parameters; throws ConfigError on violation.
// Emits a one-time warning to stderr for non-hyperbolic cat maps (|trace| <= 2).
void validate_spec(const PotentialSpec& spec);

// V_n for a single site. Pure function; thread-safe.
// PowerBeta and DoublingMap are one-sided (n >= 0).
double potential_value(const PotentialSpec& spec, int64_t n);

// V_{n0}, ..., V_{n0+N-1} generated incrementally. Matches per-element direct
// evaluation to well below 1e-10 for N up to 1e6.
std::vector<double> potential_window(const PotentialSpec& spec, int64_t n0, int64_t N);

// Spec whose potential is the original shifted by a sites:
//   potential_value(shifted_spec(s, a), n) == potential_value(s, n + a).
// Throws ConfigError for families without shift structure (PowerBeta,
// IIDRandom, and SkewShiftOrder with k >= 3 whose phase pair cannot encode
// the lower-degree terms produced by the shift).
PotentialSpec shifted_spec(const PotentialSpec& spec, int64_t a);

// True for families of the form V_n = 2*lambda*cos(2*pi*theta_n) with theta_n
// an orbit on the circle or torus.
bool has_phase_orbit(Family f);

// True when theta_n(x, y) = theta_n(0, y) + x mod 1, i.e. the x phase enters
// additively and a window evaluated at x = 0 can be rotated to any x.
bool additive_x_phase(Family f);

// True when the x -> x + 1/2 shift negates the potential pointwise, which
// conjugates H to -H through the alternating-sign unitary.
bool sign_flip_family(Family f);

// frac(theta_{n0}), ..., frac(theta_{n0+N-1}) for phase-orbit families.
// Throws ConfigError for the others.
std::vector<double> phase_window(const PotentialSpec& spec, int64_t n0, int64_t N);

// Uniform bound on |V_n| over all n (and all phases): 2|lambda| for the
// cosine families, |c| for Constant, |lambda| max(|lo|, |hi|) for IIDRandom.
double potential_sup_bound(const PotentialSpec& spec);

} // namespace skewspec

#endif
