#include "skewspec/runner.hpp"

#include "skewspec/bounds.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/gaps.hpp"
#include "skewspec/lyapunov.hpp"
#include "skewspec/tridiag.hpp"
#include "skewspec/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace skewspec {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunContext {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::vector<std::string> outputs;

    std::ofstream open(const std::string& name) {
        fs::path p = dir / name;
        std::ofstream f(p);
        if (!f) throw ConfigError("cannot open output file: " + p.string());
        outputs.push_back(name);
        return f;
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void row(std::initializer_list<json> cells) { rows.emplace_back(cells); }
};

std::string cell_csv(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return real17(v.get<double>());
    return v.dump();
}

void write_table(RunContext& ctx, const std::string& stem, const Table& t) {
    if (ctx.cfg.format == "json") {
        json out;
        out["columns"] = t.columns;
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(r);
        out["rows"] = std::move(rows);
        auto f = ctx.open(stem + ".json");
        f << out.dump(2) << "\n";
    } else {
        auto f = ctx.open(stem + ".csv");
        for (size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << t.columns[i];
        f << "\n";
        for (const auto& r : t.rows) {
            for (size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << cell_csv(r[i]);
            f << "\n";
        }
    }
}

void write_payload(RunContext& ctx, const std::string& name, json payload) {
    payload["command"] = ctx.cfg.command;
    payload["version"] = SKEWSPEC_VERSION;
    payload["config"] = render_config(ctx.cfg);
    auto f = ctx.open(name);
    f << payload.dump(2) << "\n";
}

json finite_or_tag(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

std::vector<int64_t> region_indices(const std::string& region, int64_t N) {
    std::vector<int64_t> js;
    if (region == "left")
        js = {1, 2};
    else if (region == "right")
        js = {N - 1, N};
    else if (region == "center") {
        int64_t c = (N + 1) / 2;
        js = {c - 1, c, c + 1};
    } else
        throw ConfigError("unknown region '" + region + "' (valid: left, center, right)");
    std::vector<int64_t> out;
    for (int64_t j : js) {
        j = std::clamp<int64_t>(j, 1, N);
        if (out.empty() || out.back() != j) out.push_back(j);
    }
    return out;
}

Table eigenvalue_table(const std::vector<EigenBracket>& brackets) {
    Table t;
    t.columns = {"j", "lambda"};
    for (size_t j = 0; j < brackets.size(); ++j)
        t.row({static_cast<int64_t>(j + 1), brackets[j].mid()});
    return t;
}

void run_eig(RunContext& ctx) {
    for (int64_t N : ctx.cfg.sizes) {
        auto op = build_restriction(ctx.cfg.potential, 0, N);
        auto brackets = all_eigenvalue_brackets(op);
        write_table(ctx, "eigenvalues_N" + std::to_string(N), eigenvalue_table(brackets));

        Table vec;
        vec.columns = {"region", "j", "n", "xi"};
        for (const auto& region : ctx.cfg.regions)
            for (int64_t j : region_indices(region, N)) {
                EigenPair p = eigenpair(op, j);
                for (int64_t n = 0; n < N; ++n)
                    vec.row({region, j, n, p.vector[static_cast<size_t>(n)]});
            }
        write_table(ctx, "eigenvectors_N" + std::to_string(N), vec);
    }
}

void run_spectrum_scan(RunContext& ctx) {
    Table summary;
    summary.columns = {"N", "count", "max_gap_lo", "max_gap_hi", "max_gap_width"};
    for (int64_t N : ctx.cfg.sizes) {
        auto op = build_restriction(ctx.cfg.potential, 0, N);
        auto brackets = all_eigenvalue_brackets(op);
        write_table(ctx, "eigenvalues_N" + std::to_string(N), eigenvalue_table(brackets));

        Table gaps;
        gaps.columns = {"gap_lo", "gap_hi", "width"};
        int64_t count = 0;
        double max_w = 0.0, max_lo = 0.0, max_hi = 0.0;
        for (size_t j = 0; j + 1 < brackets.size(); ++j) {
            double lo = brackets[j].mid(), hi = brackets[j + 1].mid();
            double w = hi - lo;
            if (w > ctx.cfg.gap_threshold) {
                gaps.row({lo, hi, w});
                ++count;
            }
            if (w > max_w) { max_w = w; max_lo = lo; max_hi = hi; }
        }
        write_table(ctx, "gaps_N" + std::to_string(N), gaps);
        summary.row({N, count, max_lo, max_hi, max_w});
    }
    write_table(ctx, "gap_summary", summary);
}

json bound_json(const SpectrumBound& b) {
    json p;
    p["N"] = b.N;
    p["grid_nx"] = b.grid_nx;
    p["grid_ny"] = b.grid_ny;
    p["sigma_plus_upper"] = b.sigma_plus_upper;
    p["sigma_minus_lower"] = b.sigma_minus_lower;
    p["grid_max"] = b.grid_max;
    p["grid_max_inner"] = b.grid_max_inner;
    p["grid_min"] = b.grid_min;
    p["slack"] = b.slack;
    p["slack_endpoint"] = b.slack_endpoint;
    p["slack_lipschitz"] = b.slack_lipschitz;
    p["argmax_phase"] = {{"x", b.argmax_phase.x}, {"y", b.argmax_phase.y}};
    p["argmin_phase"] = {{"x", b.argmin_phase.x}, {"y", b.argmin_phase.y}};
    return p;
}

void run_sigma(RunContext& ctx) {
    for (int64_t N : ctx.cfg.sizes) {
        auto bound = sigma_plus_bound(ctx.cfg.potential, N, ctx.cfg.nx, resolved_ny(ctx.cfg, N));
        write_payload(ctx, "sigma_bound_N" + std::to_string(N) + ".json", bound_json(bound));
    }
}

struct ProfileRun {
    SpectrumBound bound;
    DistanceProfile prof;
};

ProfileRun profile_pipeline(const RunContext& ctx, int64_t N) {
    ProfileRun r;
    r.bound = sigma_plus_bound(ctx.cfg.potential, N, ctx.cfg.nx, resolved_ny(ctx.cfg, N));
    ProfilePoolParams pool{ctx.cfg.pool_base, ctx.cfg.sweep_points, ctx.cfg.sweep_halfwidth};
    auto phases = default_profile_phases(ctx.cfg.potential, N, r.bound.argmax_phase, pool);
    auto t_grid = uniform_t_grid(r.bound.grid_max_inner, ctx.cfg.nt);
    r.prof = distance_profile(ctx.cfg.potential, N, phases, t_grid);
    r.prof.enclosure_radius = r.bound.grid_max_inner;
    return r;
}

void write_profile(RunContext& ctx, int64_t N, const ProfileRun& r) {
    Table t;
    t.columns = {"t", "d", "witness_x", "witness_y", "witness_j"};
    for (size_t i = 0; i < r.prof.t_grid.size(); ++i) {
        const auto& w = r.prof.per_t_witness[i];
        t.row({r.prof.t_grid[i], r.prof.d_values[i], w.phase.x, w.phase.y, w.j});
    }
    write_table(ctx, "profile_N" + std::to_string(N), t);

    double max_d = 0.0, argmax_t = r.prof.t_grid.front();
    for (size_t i = 0; i < r.prof.d_values.size(); ++i)
        if (r.prof.d_values[i] > max_d) { max_d = r.prof.d_values[i]; argmax_t = r.prof.t_grid[i]; }
    json p = bound_json(r.bound);
    p["num_t"] = static_cast<int64_t>(r.prof.t_grid.size());
    p["num_profile_phases"] = static_cast<int64_t>(r.prof.phase_set.size());
    p["enclosure_radius"] = r.prof.enclosure_radius;
    p["max_d"] = max_d;
    p["argmax_t"] = argmax_t;
    write_payload(ctx, "profile_N" + std::to_string(N) + ".json", p);
}

double max_empirical_gap(const std::vector<EigenBracket>& brackets, double* lo, double* hi) {
    double max_w = 0.0;
    *lo = *hi = 0.0;
    for (size_t j = 0; j + 1 < brackets.size(); ++j) {
        double w = brackets[j + 1].mid() - brackets[j].mid();
        if (w > max_w) { max_w = w; *lo = brackets[j].mid(); *hi = brackets[j + 1].mid(); }
    }
    return max_w;
}

void run_gap_profile(RunContext& ctx) {
    for (int64_t N : ctx.cfg.sizes) {
        auto r = profile_pipeline(ctx, N);
        write_profile(ctx, N, r);
    }
}

void run_gap_bound(RunContext& ctx) {
    for (int64_t N : ctx.cfg.sizes) {
        auto r = profile_pipeline(ctx, N);
        write_profile(ctx, N, r);
        auto gb = gap_upper_bound(r.prof);

        auto op = build_restriction(ctx.cfg.potential, 0, N);
        auto brackets = all_eigenvalue_brackets(op);
        double eg_lo, eg_hi;
        double eg = max_empirical_gap(brackets, &eg_lo, &eg_hi);

        json p;
        p["N"] = N;
        p["gamma_upper"] = gb.gamma_upper;
        p["t_star"] = gb.t_star;
        p["t_grid_step"] = gb.t_grid_step;
        p["rigor_slack"] = gb.rigor_slack;
        p["enclosure_radius"] = r.prof.enclosure_radius;
        // the profile grid stops at the certified inner estimate of sigma_+;
        // extending to the outer bound can only raise d by the slack ramp
        p["endpoint_ramp"] = 2.0 * (r.bound.sigma_plus_upper - r.bound.grid_max_inner);
        p["gamma_upper_full_range"] =
            std::max(gb.gamma_upper, 2.0 * (r.bound.sigma_plus_upper - r.bound.grid_max_inner));
        p["max_empirical_gap"] = eg;
        p["max_empirical_gap_lo"] = eg_lo;
        p["max_empirical_gap_hi"] = eg_hi;
        write_payload(ctx, "gap_bound_N" + std::to_string(N) + ".json", p);
    }
}

void run_certify_gap(RunContext& ctx) {
    auto phases = product_phase_grid(ctx.cfg.cert_nx, ctx.cfg.cert_ny);
    for (int64_t N : ctx.cfg.sizes) {
        auto cert =
            certify_gap(ctx.cfg.potential, N, ctx.cfg.t_lo, ctx.cfg.t_hi, phases, ctx.cfg.cert_nt);
        json p;
        p["N"] = N;
        p["t_lo"] = cert.t_lo;
        p["t_hi"] = cert.t_hi;
        p["margin"] = cert.margin;
        p["phase_slack"] = finite_or_tag(cert.phase_slack);
        p["torus_rigorous"] = cert.torus_rigorous;
        p["threshold"] = std::sqrt(2.0 / static_cast<double>(N));
        p["num_phases"] = static_cast<int64_t>(phases.size());
        p["num_t_samples"] = ctx.cfg.cert_nt;
        write_payload(ctx, "certificate_N" + std::to_string(N) + ".json", p);
    }
}

void run_lyap(RunContext& ctx) {
    std::vector<double> grid(static_cast<size_t>(ctx.cfg.nE));
    for (int64_t i = 0; i < ctx.cfg.nE; ++i)
        grid[static_cast<size_t>(i)] =
            ctx.cfg.nE == 1 ? ctx.cfg.e_lo
                            : ctx.cfg.e_lo + (ctx.cfg.e_hi - ctx.cfg.e_lo) *
                                                 static_cast<double>(i) /
                                                 static_cast<double>(ctx.cfg.nE - 1);
    for (int64_t N : ctx.cfg.sizes) {
        auto curve = lyapunov_curve(ctx.cfg.potential, grid, N, ctx.cfg.num_phases, ctx.cfg.run_seed);
        Table t;
        t.columns = {"E", "L"};
        for (size_t i = 0; i < curve.energies.size(); ++i)
            t.row({curve.energies[i], curve.values[i]});
        write_table(ctx, "lyapunov_N" + std::to_string(N), t);

        double min_L = curve.values.front(), argmin_E = curve.energies.front();
        for (size_t i = 0; i < curve.values.size(); ++i)
            if (curve.values[i] < min_L) { min_L = curve.values[i]; argmin_E = curve.energies[i]; }
        json p;
        p["N"] = N;
        p["nE"] = ctx.cfg.nE;
        p["num_phases"] = curve.num_phases;
        p["seed"] = curve.seed;
        p["e_lo"] = ctx.cfg.e_lo;
        p["e_hi"] = ctx.cfg.e_hi;
        p["min_L"] = min_L;
        p["argmin_E"] = argmin_E;
        write_payload(ctx, "lyapunov_N" + std::to_string(N) + ".json", p);
    }
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

void run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    auto t0 = std::chrono::steady_clock::now();

    RunContext ctx{config, fs::path(config.out_dir), {}};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + ctx.dir.string() + ": " +
                          ec.message());

    if (config.command == "eig")
        run_eig(ctx);
    else if (config.command == "spectrum-scan")
        run_spectrum_scan(ctx);
    else if (config.command == "sigma")
        run_sigma(ctx);
    else if (config.command == "gap-profile")
        run_gap_profile(ctx);
    else if (config.command == "gap-bound")
        run_gap_bound(ctx);
    else if (config.command == "certify-gap")
        run_certify_gap(ctx);
    else if (config.command == "lyap")
        run_lyap(ctx);
    else
        throw ConfigError("unknown command '" + config.command + "'");

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta;
    meta["command"] = config.command;
    meta["version"] = SKEWSPEC_VERSION;
    meta["wall_seconds"] = wall;
    meta["timestamp"] = utc_timestamp();
    meta["outputs"] = ctx.outputs;
    std::ofstream f(ctx.dir / "run_meta.json");
    if (!f) throw ConfigError("cannot open output file: " + (ctx.dir / "run_meta.json").string());
    f << meta.dump(2) << "\n";
}

} // namespace skewspec
