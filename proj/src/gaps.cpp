#include "skewspec/gaps.hpp"

#include "skewspec/bounds.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/threads.hpp"
#include "skewspec/tridiag.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace skewspec {

namespace {

double frac1(double v) {
    double f = v - std::floor(v);
    return (f >= 1.0) ? 0.0 : f;
}

// One cone |t - center| + weight seeded into the grid cells bracketing the
// center; the min-plus sweep extends it across the grid exactly.
struct Seed {
    int32_t cell;
    int32_t j;
    double value;
};

void push_seed(std::vector<Seed>& seeds, const std::vector<double>& t_grid, double center,
               double weight, int64_t j) {
    const int64_t nt = static_cast<int64_t>(t_grid.size());
    int64_t hi = std::upper_bound(t_grid.begin(), t_grid.end(), center) - t_grid.begin();
    for (int64_t cell : {hi - 1, hi}) {
        if (cell < 0 || cell >= nt) continue;
        seeds.push_back({static_cast<int32_t>(cell), static_cast<int32_t>(j),
                         std::fabs(t_grid[static_cast<size_t>(cell)] - center) + weight});
    }
}

// Half the largest circular gap of a sorted point set on the unit circle.
double covering_radius(const std::vector<double>& pts) {
    if (pts.empty()) return 0.5;
    double largest = pts.front() + 1.0 - pts.back();
    for (size_t i = 1; i < pts.size(); ++i) largest = std::max(largest, pts[i] - pts[i - 1]);
    return 0.5 * largest;
}

// Phase-coverage slack of an arbitrary phase set: exact for complete product
// grids, infinite otherwise (a non-product set has no cheap certified
// covering radius).
double phase_set_slack(const PotentialSpec& spec, int64_t N,
                       const std::vector<PhasePoint>& phase_set) {
    auto [lx, ly] = phase_lipschitz_bounds(spec, N);
    if (lx == 0.0 && ly == 0.0) {
        // phase never enters the potential; any nonempty set covers
        if (spec.family == Family::PowerBeta || spec.family == Family::IIDRandom)
            return std::numeric_limits<double>::infinity(); // windows are not phase translates
        return 0.0;
    }
    std::set<double> xs_set, ys_set;
    std::set<std::pair<double, double>> all;
    for (const PhasePoint& p : phase_set) {
        PhasePoint q = reduce_mod1(p);
        xs_set.insert(q.x);
        ys_set.insert(q.y);
        all.insert({q.x, q.y});
    }
    if (all.size() != xs_set.size() * ys_set.size())
        return std::numeric_limits<double>::infinity();
    for (double x : xs_set)
        for (double y : ys_set)
            if (!all.count({x, y})) return std::numeric_limits<double>::infinity();
    std::vector<double> xs(xs_set.begin(), xs_set.end());
    std::vector<double> ys(ys_set.begin(), ys_set.end());
    return lx * covering_radius(xs) + ly * covering_radius(ys);
}

} // namespace

std::vector<double> uniform_t_grid(double radius, int64_t num_points) {
    if (!(radius > 0.0)) throw ConfigError("uniform_t_grid requires radius > 0");
    if (num_points < 2) throw ConfigError("uniform_t_grid requires at least 2 points");
    std::vector<double> t(static_cast<size_t>(num_points));
    const double step = 2.0 * radius / static_cast<double>(num_points - 1);
    for (int64_t i = 0; i < num_points; ++i)
        t[static_cast<size_t>(i)] = -radius + step * static_cast<double>(i);
    t.back() = radius;
    return t;
}

std::vector<PhasePoint> product_phase_grid(int64_t nx, int64_t ny) {
    if (nx < 1 || ny < 1) throw ConfigError("product_phase_grid requires nx, ny >= 1");
    std::vector<PhasePoint> out;
    out.reserve(static_cast<size_t>(nx * ny));
    for (int64_t iy = 0; iy < ny; ++iy)
        for (int64_t ix = 0; ix < nx; ++ix)
            out.push_back({static_cast<double>(ix) / static_cast<double>(nx),
                           static_cast<double>(iy) / static_cast<double>(ny)});
    return out;
}

std::vector<PhasePoint> default_profile_phases(const PotentialSpec& spec, int64_t N,
                                               PhasePoint argmax, ProfilePoolParams params) {
    if (params.base < 1 || params.sweep_points < 2)
        throw ConfigError("profile pool requires base >= 1 and sweep_points >= 2");
    const bool with_y = phase_lipschitz_bounds(spec, N).second > 0.0;
    argmax = reduce_mod1(argmax);

    std::vector<PhasePoint> pool;
    if (with_y) {
        pool = product_phase_grid(params.base, params.base);
    } else {
        pool = product_phase_grid(params.base * params.base, 1);
        argmax.y = 0.0;
    }
    pool.push_back({0.0, 0.0});
    pool.push_back({0.5, 0.0});
    pool.push_back(argmax);
    pool.push_back({frac1(argmax.x + 0.5), argmax.y});
    const double hw = params.sweep_halfwidth;
    for (int64_t i = 0; i < params.sweep_points; ++i) {
        double x = argmax.x - hw +
                   2.0 * hw * static_cast<double>(i) / static_cast<double>(params.sweep_points - 1);
        pool.push_back({frac1(x), argmax.y});
        pool.push_back({frac1(x + 0.5), argmax.y});
    }
    std::sort(pool.begin(), pool.end(), [](const PhasePoint& a, const PhasePoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pool.erase(std::unique(pool.begin(), pool.end(),
                           [](const PhasePoint& a, const PhasePoint& b) {
                               return a.x == b.x && a.y == b.y;
                           }),
               pool.end());
    return pool;
}

DistanceProfile distance_profile(const PotentialSpec& spec, int64_t N,
                                 const std::vector<PhasePoint>& phase_set,
                                 const std::vector<double>& t_grid) {
    if (N < 2) throw ConfigError("distance_profile requires N >= 2");
    if (phase_set.empty()) throw ConfigError("distance_profile requires a nonempty phase set");
    if (t_grid.empty()) throw ConfigError("distance_profile requires a nonempty t grid");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("t grid must be strictly increasing");
    validate_spec(spec);

    const int64_t nt = static_cast<int64_t>(t_grid.size());
    // keeps every seeded and propagated value an upper bound despite the
    // rounding of the per-cell sweep updates
    const double sweep_drift =
        4.0 * DBL_EPSILON * static_cast<double>(nt) *
        std::max({1.0, std::fabs(t_grid.front()), std::fabs(t_grid.back())});

    std::vector<std::vector<Seed>> per_phase(phase_set.size());
    parallel_for(static_cast<int64_t>(phase_set.size()), [&](int64_t p) {
        PotentialSpec at = spec;
        at.phase = reduce_mod1(phase_set[static_cast<size_t>(p)]);
        TridiagonalOperator op = build_restriction(at, 0, N);
        std::vector<Seed>& seeds = per_phase[static_cast<size_t>(p)];
        for (const EigenPair& pair : all_eigenpairs(op))
            push_seed(seeds, t_grid, pair.value, eigenpair_distance_bound(pair) + sweep_drift,
                      pair.index);
    });

    DistanceProfile out;
    out.t_grid = t_grid;
    out.N = N;
    out.phase_set = phase_set;
    out.d_values.assign(static_cast<size_t>(nt), std::numeric_limits<double>::infinity());
    std::vector<int32_t> wit_phase(static_cast<size_t>(nt), -1);
    std::vector<int32_t> wit_j(static_cast<size_t>(nt), 0);

    // serial merge in phase order: ties keep the earliest phase
    for (size_t p = 0; p < per_phase.size(); ++p) {
        for (const Seed& s : per_phase[p]) {
            size_t c = static_cast<size_t>(s.cell);
            if (s.value < out.d_values[c]) {
                out.d_values[c] = s.value;
                wit_phase[c] = static_cast<int32_t>(p);
                wit_j[c] = s.j;
            }
        }
    }
    for (int64_t i = 1; i < nt; ++i) {
        size_t c = static_cast<size_t>(i);
        double cand = out.d_values[c - 1] + (t_grid[c] - t_grid[c - 1]);
        if (cand < out.d_values[c]) {
            out.d_values[c] = cand;
            wit_phase[c] = wit_phase[c - 1];
            wit_j[c] = wit_j[c - 1];
        }
    }
    for (int64_t i = nt - 2; i >= 0; --i) {
        size_t c = static_cast<size_t>(i);
        double cand = out.d_values[c + 1] + (t_grid[c + 1] - t_grid[c]);
        if (cand < out.d_values[c]) {
            out.d_values[c] = cand;
            wit_phase[c] = wit_phase[c + 1];
            wit_j[c] = wit_j[c + 1];
        }
    }
    for (size_t c = 0; c < out.d_values.size(); ++c) {
        if (!std::isfinite(out.d_values[c]))
            throw NumericalError("distance profile produced no cone for some t");
        ProfileWitness w;
        w.phase = phase_set[static_cast<size_t>(wit_phase[c])];
        w.j = wit_j[c];
        out.per_t_witness.push_back(w);
    }
    return out;
}

GapBound gap_upper_bound(const DistanceProfile& profile) {
    if (profile.t_grid.size() < 2)
        throw ConfigError("gap_upper_bound requires a profile with at least 2 grid points");
    if (!(profile.enclosure_radius > 0.0) ||
        profile.t_grid.front() > -profile.enclosure_radius ||
        profile.t_grid.back() < profile.enclosure_radius)
        throw ConfigError("profile t grid does not cover the certified spectrum enclosure");
    double step = 0.0;
    for (size_t i = 1; i < profile.t_grid.size(); ++i)
        step = std::max(step, profile.t_grid[i] - profile.t_grid[i - 1]);
    double max_d = -std::numeric_limits<double>::infinity();
    size_t arg = 0;
    for (size_t i = 0; i < profile.d_values.size(); ++i) {
        if (profile.d_values[i] > max_d) {
            max_d = profile.d_values[i];
            arg = i;
        }
    }
    GapBound out;
    out.t_grid_step = step;
    out.rigor_slack = 0.5 * step;
    out.gamma_upper = 2.0 * (max_d + out.rigor_slack);
    out.t_star = profile.t_grid[arg];
    return out;
}

GapCertificate certify_gap(const PotentialSpec& spec, int64_t N, double t_lo, double t_hi,
                           const std::vector<PhasePoint>& phase_set, int64_t num_t_samples) {
    if (!(t_hi > t_lo)) throw ConfigError("certify_gap requires t_hi > t_lo");
    if (N < 2) throw ConfigError("certify_gap requires N >= 2");
    if (phase_set.empty()) throw ConfigError("certify_gap requires a nonempty phase set");
    if (num_t_samples < 2) throw ConfigError("certify_gap requires at least 2 t samples");
    validate_spec(spec);

    GapCertificate out;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.N = N;
    const double threshold = std::sqrt(2.0 / static_cast<double>(N));

    // Intervals fully outside the Gershgorin enclosure of every realization
    // certify against the whole line at once.
    const double enclosure = potential_sup_bound(spec) + 2.0;
    double outside = std::max(t_lo - enclosure, -enclosure - t_hi);
    if (outside - threshold > 0.0) {
        out.margin = outside - threshold;
        out.phase_slack = 0.0;
        out.torus_rigorous = true;
        return out;
    }

    const double substep = (t_hi - t_lo) / static_cast<double>(num_t_samples - 1);
    std::vector<double> min_per_phase(phase_set.size());
    parallel_for(static_cast<int64_t>(phase_set.size()), [&](int64_t p) {
        PotentialSpec at = spec;
        at.phase = reduce_mod1(phase_set[static_cast<size_t>(p)]);
        TridiagonalOperator op = build_restriction(at, 0, N);
        std::vector<EigenBracket> brackets = all_eigenvalue_brackets(op);
        std::vector<double> lows(brackets.size());
        for (size_t j = 0; j < brackets.size(); ++j) lows[j] = brackets[j].lo;
        double worst = std::numeric_limits<double>::infinity();
        for (int64_t i = 0; i < num_t_samples; ++i) {
            const double t = (i + 1 == num_t_samples)
                                 ? t_hi
                                 : t_lo + substep * static_cast<double>(i);
            // distance from t to the nearest eigenvalue bracket interval
            size_t k = static_cast<size_t>(
                std::upper_bound(lows.begin(), lows.end(), t) - lows.begin());
            double d = std::numeric_limits<double>::infinity();
            if (k < brackets.size()) d = std::min(d, std::max(0.0, brackets[k].lo - t));
            if (k > 0) d = std::min(d, std::max(0.0, t - brackets[k - 1].hi));
            worst = std::min(worst, d);
        }
        min_per_phase[static_cast<size_t>(p)] = worst;
    });
    double min_dist = std::numeric_limits<double>::infinity();
    for (double v : min_per_phase) min_dist = std::min(min_dist, v);

    out.margin = min_dist - threshold - 0.5 * substep;
    out.phase_slack = phase_set_slack(spec, N, phase_set);
    out.torus_rigorous = out.margin > 0.0 && out.phase_slack < out.margin;
    return out;
}

} // namespace skewspec
