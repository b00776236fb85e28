#include "skewspec/bounds.hpp"

#include "skewspec/errors.hpp"
#include "skewspec/threads.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace skewspec {

namespace {

constexpr double TWO_PI = 6.283185307179586476925287;

double frac1(double v) {
    double f = v - std::floor(v);
    return (f >= 1.0) ? 0.0 : f;
}

} // namespace

std::pair<double, double> phase_lipschitz_bounds(const PotentialSpec& spec, int64_t N) {
    const double base = 2.0 * TWO_PI * std::fabs(spec.lambda); // 4 pi |lambda|
    switch (spec.family) {
    case Family::Harper:
        return {base, 0.0};
    case Family::SkewShift:
    case Family::SkewShiftOrder:
        return {base, base * static_cast<double>(N - 1)};
    case Family::DoublingMap:
        // theta_n = frac(2^n (omega/2 + x)): derivative doubles each site
        return {base * std::ldexp(1.0, static_cast<int>(std::min<int64_t>(N - 1, 2000))), 0.0};
    case Family::CatMap: {
        // d(A^n(x,y))_1/dx = (A^n)_11, /dy = (A^n)_12
        double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
        double lx = 1.0, ly = 0.0;
        const double a = static_cast<double>(spec.cat[0]), b = static_cast<double>(spec.cat[1]);
        const double c = static_cast<double>(spec.cat[2]), d = static_cast<double>(spec.cat[3]);
        for (int64_t n = 1; n < N; ++n) {
            double n11 = a * m11 + b * m21, n12 = a * m12 + b * m22;
            double n21 = c * m11 + d * m21, n22 = c * m12 + d * m22;
            m11 = n11;
            m12 = n12;
            m21 = n21;
            m22 = n22;
            lx = std::max(lx, std::fabs(m11));
            ly = std::max(ly, std::fabs(m12));
            if (!std::isfinite(lx) || !std::isfinite(ly)) break;
        }
        return {base * lx, base * ly};
    }
    default:
        return {0.0, 0.0};
    }
}

namespace {

bool uses_y(const PotentialSpec& spec, int64_t N) {
    return phase_lipschitz_bounds(spec, N).second > 0.0;
}

void atomic_max(std::atomic<double>& a, double v) {
    double cur = a.load(std::memory_order_relaxed);
    while (v > cur && !a.compare_exchange_weak(cur, v)) {
    }
}

void atomic_min(std::atomic<double>& a, double v) {
    double cur = a.load(std::memory_order_relaxed);
    while (v < cur && !a.compare_exchange_weak(cur, v)) {
    }
}

// Fills op.diag with the window potential at the given grid phase. The
// additive-x families rotate a per-row phase table; the rest evaluate the
// window directly.
struct RowContext {
    std::vector<double> cn, sn; // 2 lambda cos / sin of the x = 0 row phases
    void prepare(const PotentialSpec& spec, double y, int64_t N) {
        PotentialSpec row = spec;
        row.phase = {0.0, y};
        std::vector<double> theta = phase_window(row, 0, N);
        cn.resize(theta.size());
        sn.resize(theta.size());
        const double lam2 = 2.0 * spec.lambda;
        for (size_t i = 0; i < theta.size(); ++i) {
            cn[i] = lam2 * std::cos(TWO_PI * theta[i]);
            sn[i] = lam2 * std::sin(TWO_PI * theta[i]);
        }
    }
    void rotate(double x, std::vector<double>& diag) const {
        const double cx = std::cos(TWO_PI * x), sx = std::sin(TWO_PI * x);
        for (size_t i = 0; i < cn.size(); ++i) diag[i] = cn[i] * cx - sn[i] * sx;
    }
};

void fill_diag(const PotentialSpec& spec, PhasePoint phase, int64_t N,
               std::vector<double>& diag) {
    PotentialSpec at = spec;
    at.phase = reduce_mod1(phase);
    diag = potential_window(at, 0, N);
}

struct SweepAccum {
    double max_hi = -std::numeric_limits<double>::infinity();
    double max_lo = -std::numeric_limits<double>::infinity();
    double argmax_x = 0.0, argmax_y = 0.0;
    bool have_max = false;
    double min_lo = std::numeric_limits<double>::infinity();
    double argmin_x = 0.0, argmin_y = 0.0;
    bool have_min = false;
};

} // namespace

double eigenpair_distance_bound(const EigenPair& pair) {
    return pair.bracket_width + pair.residual + pair.boundary_weight;
}

double approx_eigenvector_bound(const TridiagonalOperator& op, const std::vector<double>& xi,
                                double E) {
    const int64_t N = op.size();
    if (static_cast<int64_t>(xi.size()) != N)
        throw ConfigError("approx_eigenvector_bound: vector length mismatch");
    if (!std::isfinite(E)) throw ConfigError("approx_eigenvector_bound requires finite E");
    double nrm2 = 0.0;
    for (double v : xi) nrm2 += v * v;
    if (std::fabs(std::sqrt(nrm2) - 1.0) > 1e-12)
        throw ConfigError("approx_eigenvector_bound requires a unit vector");
    double s = 0.0;
    for (int64_t i = 0; i < N; ++i) {
        double r = (op.diag[i] - E) * xi[i];
        if (i > 0) r += xi[i - 1];
        if (i + 1 < N) r += xi[i + 1];
        s += r * r;
    }
    return std::sqrt(s) + std::fabs(xi.front()) + std::fabs(xi.back());
}

double lipschitz_slack(const PotentialSpec& spec, int64_t N, int64_t grid_nx, int64_t grid_ny) {
    if (N < 1 || grid_nx < 1 || grid_ny < 1)
        throw ConfigError("lipschitz_slack requires N >= 1 and grids >= 1");
    auto [lx, ly] = phase_lipschitz_bounds(spec, N);
    double hx = 0.5 / static_cast<double>(grid_nx);
    double hy = 0.5 / static_cast<double>(grid_ny);
    return lx * hx + ly * hy;
}

SpectrumBound sigma_plus_bound(const PotentialSpec& spec, int64_t N, int64_t grid_nx,
                               int64_t grid_ny) {
    if (N < 2) throw ConfigError("sigma_plus_bound requires N >= 2");
    if (grid_nx < 1 || grid_ny < 1) throw ConfigError("sigma_plus_bound requires grids >= 1");
    validate_spec(spec);

    const bool phase_orbit = has_phase_orbit(spec.family);
    const bool fast = additive_x_phase(spec.family);
    const bool flip = sign_flip_family(spec.family);
    const int64_t nx = phase_orbit ? grid_nx : 1;
    const int64_t ny = (phase_orbit && uses_y(spec, N)) ? grid_ny : 1;

    // Pass A establishes the sweep thresholds: the largest lower bracket edge
    // of lambda_max over the grid (and the smallest upper edge of lambda_min
    // when the lower endpoint is swept independently). Pruned phases are
    // exactly those whose whole spectrum lies below/above the running
    // threshold, so the final thresholds equal the true grid extremes no
    // matter how the parallel updates interleave.
    std::atomic<double> best_lo{-std::numeric_limits<double>::infinity()};
    std::atomic<double> best_hi{std::numeric_limits<double>::infinity()};
    const bool sweep_bottom = !flip;

    auto scan_rows = [&](bool pass_b, std::vector<SweepAccum>* rows) {
        parallel_for(ny, [&](int64_t iy) {
            thread_local RowContext row_ctx;
            thread_local TridiagonalOperator op;
            op.diag.resize(static_cast<size_t>(N));
            const double y = static_cast<double>(iy) / static_cast<double>(ny);
            if (fast) row_ctx.prepare(spec, y, N);
            SweepAccum acc;
            for (int64_t ix = 0; ix < nx; ++ix) {
                const double x = static_cast<double>(ix) / static_cast<double>(nx);
                if (fast)
                    row_ctx.rotate(x, op.diag);
                else
                    fill_diag(spec, {x, y}, N, op.diag);

                const double cut_top = best_lo.load(std::memory_order_relaxed);
                bool top_alive = true;
                if (std::isfinite(cut_top))
                    top_alive = sturm_count(op.diag.data(), N, cut_top) < N;
                if (top_alive) {
                    EigenBracket top = eigenvalue_bracket(op, N);
                    if (!pass_b) {
                        atomic_max(best_lo, top.lo);
                    } else {
                        acc.max_lo = std::max(acc.max_lo, top.lo);
                        // ascending ix: the first achiever already has the
                        // smallest x within the row
                        if (!acc.have_max || top.hi > acc.max_hi) {
                            acc.max_hi = top.hi;
                            acc.argmax_x = x;
                            acc.argmax_y = y;
                            acc.have_max = true;
                        }
                    }
                }
                if (sweep_bottom) {
                    const double cut_bot = best_hi.load(std::memory_order_relaxed);
                    bool bot_alive = true;
                    if (std::isfinite(cut_bot))
                        bot_alive = sturm_count(op.diag.data(), N, cut_bot) > 0;
                    if (bot_alive) {
                        EigenBracket bot = eigenvalue_bracket(op, 1);
                        if (!pass_b) {
                            atomic_min(best_hi, bot.hi);
                        } else if (!acc.have_min || bot.lo < acc.min_lo) {
                            acc.min_lo = bot.lo;
                            acc.argmin_x = x;
                            acc.argmin_y = y;
                            acc.have_min = true;
                        }
                    }
                }
            }
            if (rows) (*rows)[static_cast<size_t>(iy)] = acc;
        });
    };

    scan_rows(false, nullptr);

    // Pass B: deterministic survivor scan against the frozen thresholds;
    // serial reduction in row order, ties to the lexicographically smallest
    // (x, y).
    std::vector<SweepAccum> rows(static_cast<size_t>(ny));
    scan_rows(true, &rows);

    SweepAccum total;
    for (const SweepAccum& acc : rows) {
        total.max_lo = std::max(total.max_lo, acc.max_lo);
        if (acc.have_max &&
            (!total.have_max || acc.max_hi > total.max_hi ||
             (acc.max_hi == total.max_hi && (acc.argmax_x < total.argmax_x ||
                                             (acc.argmax_x == total.argmax_x &&
                                              acc.argmax_y < total.argmax_y))))) {
            total.max_hi = acc.max_hi;
            total.argmax_x = acc.argmax_x;
            total.argmax_y = acc.argmax_y;
            total.have_max = true;
        }
        if (acc.have_min &&
            (!total.have_min || acc.min_lo < total.min_lo ||
             (acc.min_lo == total.min_lo && (acc.argmin_x < total.argmin_x ||
                                             (acc.argmin_x == total.argmin_x &&
                                              acc.argmin_y < total.argmin_y))))) {
            total.min_lo = acc.min_lo;
            total.argmin_x = acc.argmin_x;
            total.argmin_y = acc.argmin_y;
            total.have_min = true;
        }
    }
    if (!total.have_max) throw NumericalError("sigma sweep produced no surviving phase");

    SpectrumBound out;
    out.N = N;
    out.grid_nx = nx;
    out.grid_ny = ny;
    out.slack_endpoint = 2.0 / static_cast<double>(N);
    out.slack_lipschitz = lipschitz_slack(spec, N, nx, ny);
    out.slack = out.slack_endpoint + out.slack_lipschitz;
    out.grid_max = total.max_hi;
    out.grid_max_inner = total.max_lo;
    out.argmax_phase = {total.argmax_x, total.argmax_y};
    out.sigma_plus_upper = out.grid_max + out.slack;
    if (flip) {
        out.grid_min = -out.grid_max;
        out.sigma_minus_lower = -out.sigma_plus_upper;
        out.argmin_phase = {frac1(total.argmax_x + 0.5), total.argmax_y};
    } else {
        if (!total.have_min) throw NumericalError("sigma sweep produced no surviving phase");
        out.grid_min = total.min_lo;
        out.sigma_minus_lower = out.grid_min - out.slack;
        out.argmin_phase = {total.argmin_x, total.argmin_y};
    }
    return out;
}

double verify_sign_flip_symmetry(const PotentialSpec& spec, int64_t N) {
    if (!sign_flip_family(spec.family))
        throw ConfigError(family_name(spec.family) +
                          " has no half-period sign-flip symmetry to verify");
    if (N < 1) throw ConfigError("verify_sign_flip_symmetry requires N >= 1");
    TridiagonalOperator a = build_restriction(spec, 0, N);
    PotentialSpec flipped = spec;
    flipped.phase.x = frac1(spec.phase.x + 0.5);
    TridiagonalOperator b = build_restriction(flipped, 0, N);
    std::vector<double> ea = all_eigenvalues(a);
    std::vector<double> eb = all_eigenvalues(b);
    double dev = 0.0;
    for (int64_t j = 0; j < N; ++j)
        dev = std::max(dev, std::fabs(ea[static_cast<size_t>(j)] +
                                      eb[static_cast<size_t>(N - 1 - j)]));
    return dev;
}

} // namespace skewspec
