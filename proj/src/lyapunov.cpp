#include "skewspec/lyapunov.hpp"

#include "skewspec/errors.hpp"
#include "skewspec/threads.hpp"

#include <algorithm>
#include <cmath>

namespace skewspec {

namespace {

constexpr double WINDOW_CAP = 16777216.0; // 2^24
constexpr int64_t WINDOW_MAX_STEPS = 64;

// determinant of the window product; exact up to double-double rounding
dd window_det(const std::array<std::array<dd, 2>, 2>& w) {
    dd ad = dd_add(dd_mul(w[0][0], w[1][1].hi), dd{w[0][0].hi * w[1][1].lo, 0.0});
    dd bc = dd_add(dd_mul(w[0][1], w[1][0].hi), dd{w[0][1].hi * w[1][0].lo, 0.0});
    return dd_add(ad, dd{-bc.hi, -bc.lo});
}

void fold_window(TransferState& s) {
    dd det = window_det(s.window);
    dd z = dd_add(det, -1.0);
    s.log_det = dd_add(s.log_det, std::log1p(z.hi + z.lo));
    s.window = {{{dd{1.0, 0.0}, dd{0.0, 0.0}}, {dd{0.0, 0.0}, dd{1.0, 0.0}}}};
    s.window_steps = 0;
}

inline void step_core(TransferState& s, double a, double cap) {
    double m00 = s.matrix[0][0], m01 = s.matrix[0][1];
    double m10 = s.matrix[1][0], m11 = s.matrix[1][1];
    double n00 = std::fma(a, m00, -m10);
    double n01 = std::fma(a, m01, -m11);
    s.matrix[0][0] = n00;
    s.matrix[0][1] = n01;
    s.matrix[1][0] = m00;
    s.matrix[1][1] = m01;

    double frob2 = n00 * n00 + n01 * n01 + m00 * m00 + m01 * m01;
    if (frob2 > cap * cap) {
        double nrm = std::sqrt(frob2);
        double inv = 1.0 / nrm;
        for (auto& row : s.matrix)
            for (double& v : row) v *= inv;
        s.log_scale += std::log(nrm);
    }

    dd w00 = dd_add(dd_mul(s.window[0][0], a), dd{-s.window[1][0].hi, -s.window[1][0].lo});
    dd w01 = dd_add(dd_mul(s.window[0][1], a), dd{-s.window[1][1].hi, -s.window[1][1].lo});
    s.window[1][0] = s.window[0][0];
    s.window[1][1] = s.window[0][1];
    s.window[0][0] = w00;
    s.window[0][1] = w01;
    ++s.window_steps;
    if (s.window_steps >= WINDOW_MAX_STEPS || std::fabs(w00.hi) > WINDOW_CAP ||
        std::fabs(w01.hi) > WINDOW_CAP)
        fold_window(s);
}

} // namespace

double TransferState::determinant() const {
    dd z = dd_add(window_det(window), -1.0);
    return std::exp(log_det.hi + log_det.lo + std::log1p(z.hi + z.lo));
}

double TransferState::frobenius() const {
    double s = 0.0;
    for (const auto& row : matrix)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

TransferState transfer_step(const TransferState& state, double v, double E) {
    if (!std::isfinite(v) || !std::isfinite(E))
        throw ConfigError("transfer_step requires finite potential and energy");
    TransferState out = state;
    step_core(out, v - E, 1125899906842624.0); // 2^50
    return out;
}

double finite_lyapunov(const PotentialSpec& spec, double E, int64_t N, int cap_exponent) {
    if (N < 1) throw ConfigError("finite_lyapunov requires N >= 1");
    if (!std::isfinite(E)) throw ConfigError("finite_lyapunov requires finite E");
    if (cap_exponent < 4 || cap_exponent > 500)
        throw ConfigError("finite_lyapunov cap exponent out of range");
    validate_spec(spec);
    const double cap = std::ldexp(1.0, cap_exponent);

    TransferState s;
    const int64_t block = 1 << 16;
    for (int64_t n0 = 0; n0 < N; n0 += block) {
        const int64_t len = std::min(block, N - n0);
        std::vector<double> v = potential_window(spec, n0, len);
        for (int64_t i = 0; i < len; ++i) step_core(s, v[static_cast<size_t>(i)] - E, cap);
    }
    return (s.log_scale + std::log(s.frobenius())) / static_cast<double>(N);
}

LyapunovCurve lyapunov_curve(const PotentialSpec& spec, const std::vector<double>& E_grid,
                             int64_t N, int64_t num_phases, uint64_t seed) {
    if (num_phases < 1) throw ConfigError("lyapunov_curve requires num_phases >= 1");
    if (E_grid.empty()) throw ConfigError("lyapunov_curve requires a nonempty energy grid");
    validate_spec(spec);

    const int64_t phases = has_phase_orbit(spec.family) ? num_phases : 1;
    std::vector<PhasePoint> pts(static_cast<size_t>(phases));
    pts[0] = spec.phase;
    for (int64_t p = 1; p < phases; ++p)
        pts[static_cast<size_t>(p)] = {uniform01(seed, static_cast<uint64_t>(2 * p)),
                                       uniform01(seed, static_cast<uint64_t>(2 * p + 1))};

    const int64_t nE = static_cast<int64_t>(E_grid.size());
    std::vector<double> slots(static_cast<size_t>(nE * phases));
    parallel_for(nE * phases, [&](int64_t idx) {
        const int64_t e = idx / phases, p = idx % phases;
        PotentialSpec at = spec;
        at.phase = pts[static_cast<size_t>(p)];
        slots[static_cast<size_t>(idx)] =
            finite_lyapunov(at, E_grid[static_cast<size_t>(e)], N);
    });

    LyapunovCurve out;
    out.energies = E_grid;
    out.N = N;
    out.num_phases = phases;
    out.seed = seed;
    out.values.resize(static_cast<size_t>(nE));
    for (int64_t e = 0; e < nE; ++e) {
        double sum = 0.0;
        for (int64_t p = 0; p < phases; ++p)
            sum += slots[static_cast<size_t>(e * phases + p)];
        out.values[static_cast<size_t>(e)] = sum / static_cast<double>(phases);
    }
    return out;
}

} // namespace skewspec
