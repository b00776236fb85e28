#include "skewspec/config.hpp"

#include "skewspec/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace skewspec {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

double parse_real(const std::string& section, const std::string& key, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    double r = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("[" + section + "] " + key + ": not a real number: '" + v + "'");
    return r;
}

int64_t parse_int(const std::string& section, const std::string& key, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    long long r = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("[" + section + "] " + key + ": not an integer: '" + v + "'");
    return static_cast<int64_t>(r);
}

uint64_t parse_u64(const std::string& section, const std::string& key, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    unsigned long long r = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || v[0] == '-')
        throw ConfigError("[" + section + "] " + key + ": not a nonnegative integer: '" + v + "'");
    return static_cast<uint64_t>(r);
}

Family parse_family(const std::string& v) {
    for (Family f : {Family::Harper, Family::SkewShift, Family::SkewShiftOrder,
                     Family::PowerBeta, Family::DoublingMap, Family::CatMap, Family::Constant,
                     Family::IIDRandom})
        if (family_name(f) == v) return f;
    throw ConfigError("[potential] family: unknown '" + v +
                      "' (valid: harper, skew_shift, skew_shift_order, power_beta, "
                      "doubling_map, cat_map, constant, iid_random)");
}

void set_key(ExperimentConfig& c, const std::string& section, const std::string& key,
             const std::string& value) {
    if (section == "run") {
        if (key == "command") { c.command = value; return; }
        if (key == "sizes") {
            c.sizes.clear();
            for (const auto& item : split_list(value))
                c.sizes.push_back(parse_int(section, key, item));
            return;
        }
        if (key == "seed") { c.run_seed = parse_u64(section, key, value); return; }
        if (key == "out") { c.out_dir = value; return; }
        if (key == "format") { c.format = value; return; }
        if (key == "regions") { c.regions = split_list(value); return; }
        if (key == "gap_threshold") { c.gap_threshold = parse_real(section, key, value); return; }
    } else if (section == "potential") {
        PotentialSpec& p = c.potential;
        if (key == "family") { p.family = parse_family(value); return; }
        if (key == "lambda") { p.lambda = parse_real(section, key, value); return; }
        if (key == "omega") {
            p.omega = value == "golden" ? Frequency::golden()
                                        : Frequency(parse_real(section, key, value));
            return;
        }
        if (key == "x") { p.phase.x = parse_real(section, key, value); return; }
        if (key == "y") { p.phase.y = parse_real(section, key, value); return; }
        if (key == "order") { p.order = static_cast<int>(parse_int(section, key, value)); return; }
        if (key == "beta") { p.beta = parse_real(section, key, value); return; }
        if (key == "c") { p.c = parse_real(section, key, value); return; }
        if (key == "cat") {
            auto items = split_list(value);
            if (items.size() != 4)
                throw ConfigError("[potential] cat: expected 4 comma-separated integers");
            for (int i = 0; i < 4; ++i) p.cat[i] = parse_int(section, key, items[i]);
            return;
        }
        if (key == "seed") { p.seed = parse_u64(section, key, value); return; }
        if (key == "lo") { p.lo = parse_real(section, key, value); return; }
        if (key == "hi") { p.hi = parse_real(section, key, value); return; }
    } else if (section == "grid") {
        if (key == "nx") { c.nx = parse_int(section, key, value); return; }
        if (key == "ny") { c.ny = parse_int(section, key, value); return; }
        if (key == "nt") { c.nt = parse_int(section, key, value); return; }
        if (key == "nE") { c.nE = parse_int(section, key, value); return; }
    } else if (section == "lyap") {
        if (key == "e_lo") { c.e_lo = parse_real(section, key, value); return; }
        if (key == "e_hi") { c.e_hi = parse_real(section, key, value); return; }
        if (key == "num_phases") { c.num_phases = parse_int(section, key, value); return; }
    } else if (section == "certify") {
        if (key == "t_lo") { c.t_lo = parse_real(section, key, value); return; }
        if (key == "t_hi") { c.t_hi = parse_real(section, key, value); return; }
        if (key == "nx") { c.cert_nx = parse_int(section, key, value); return; }
        if (key == "ny") { c.cert_ny = parse_int(section, key, value); return; }
        if (key == "nt") { c.cert_nt = parse_int(section, key, value); return; }
    } else if (section == "profile") {
        if (key == "base") { c.pool_base = parse_int(section, key, value); return; }
        if (key == "sweep_points") { c.sweep_points = parse_int(section, key, value); return; }
        if (key == "sweep_halfwidth") {
            c.sweep_halfwidth = parse_real(section, key, value);
            return;
        }
    } else {
        throw ConfigError("unknown config section [" + section + "]");
    }
    throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
}

std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "potential" && section != "grid" &&
                section != "lyap" && section != "certify" && section != "profile")
                throw ConfigError("unknown config section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        set_key(c, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
    std::string lhs = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    size_t dot = lhs.find('.');
    if (dot == std::string::npos)
        throw ConfigError("--set key must be section.key, got '" + lhs + "'");
    set_key(config, lhs.substr(0, dot), lhs.substr(dot + 1), value);
}

void validate_config(const ExperimentConfig& config) {
    static const std::vector<std::string> commands = {
        "eig", "spectrum-scan", "sigma", "gap-profile", "gap-bound", "certify-gap", "lyap"};
    if (std::find(commands.begin(), commands.end(), config.command) == commands.end())
        throw ConfigError("unknown command '" + config.command +
                          "' (valid: eig, spectrum-scan, sigma, gap-profile, gap-bound, "
                          "certify-gap, lyap)");
    if (config.format != "csv" && config.format != "json")
        throw ConfigError("format must be csv or json, got '" + config.format + "'");
    if (config.sizes.empty()) throw ConfigError("sizes must be nonempty");
    for (int64_t n : config.sizes)
        if (n < 1) throw ConfigError("sizes entries must be >= 1");
    if (config.out_dir.empty()) throw ConfigError("output directory must be nonempty");
    for (const auto& r : config.regions)
        if (r != "left" && r != "center" && r != "right")
            throw ConfigError("unknown region '" + r + "' (valid: left, center, right)");
    if (config.regions.empty()) throw ConfigError("regions must be nonempty");
    if (config.gap_threshold <= 0.0) throw ConfigError("gap_threshold must be positive");
    if (config.nx < 1 || config.ny < 0 || config.nt < 2 || config.nE < 1)
        throw ConfigError("grid sizes require nx >= 1, ny >= 0, nt >= 2, nE >= 1");
    if (!(config.e_lo < config.e_hi)) throw ConfigError("lyap grid requires e_lo < e_hi");
    if (config.num_phases < 1) throw ConfigError("num_phases must be >= 1");
    if (config.cert_nx < 1 || config.cert_ny < 1 || config.cert_nt < 1)
        throw ConfigError("certify grid sizes must be >= 1");
    if (config.pool_base < 1) throw ConfigError("profile base must be >= 1");
    if (config.sweep_points < 0) throw ConfigError("profile sweep_points must be >= 0");
    if (config.sweep_halfwidth <= 0.0) throw ConfigError("profile sweep_halfwidth must be positive");
    if (config.command == "certify-gap" && !(config.t_lo < config.t_hi))
        throw ConfigError("certify-gap requires t_lo < t_hi");
    validate_spec(config.potential);
}

std::string render_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[run]\n";
    out << "command = " << c.command << "\n";
    out << "sizes = ";
    for (size_t i = 0; i < c.sizes.size(); ++i) out << (i ? "," : "") << c.sizes[i];
    out << "\n";
    out << "seed = " << c.run_seed << "\n";
    out << "out = " << c.out_dir << "\n";
    out << "format = " << c.format << "\n";
    out << "regions = ";
    for (size_t i = 0; i < c.regions.size(); ++i) out << (i ? "," : "") << c.regions[i];
    out << "\n";
    out << "gap_threshold = " << real17(c.gap_threshold) << "\n";
    out << "\n[potential]\n";
    const PotentialSpec& p = c.potential;
    out << "family = " << family_name(p.family) << "\n";
    out << "lambda = " << real17(p.lambda) << "\n";
    out << "omega = " << real17(p.omega.value()) << "\n";
    out << "x = " << real17(p.phase.x) << "\n";
    out << "y = " << real17(p.phase.y) << "\n";
    out << "order = " << p.order << "\n";
    out << "beta = " << real17(p.beta) << "\n";
    out << "c = " << real17(p.c) << "\n";
    out << "cat = " << p.cat[0] << "," << p.cat[1] << "," << p.cat[2] << "," << p.cat[3] << "\n";
    out << "seed = " << p.seed << "\n";
    out << "lo = " << real17(p.lo) << "\n";
    out << "hi = " << real17(p.hi) << "\n";
    out << "\n[grid]\n";
    out << "nx = " << c.nx << "\n";
    out << "ny = " << c.ny << "\n";
    out << "nt = " << c.nt << "\n";
    out << "nE = " << c.nE << "\n";
    out << "\n[lyap]\n";
    out << "e_lo = " << real17(c.e_lo) << "\n";
    out << "e_hi = " << real17(c.e_hi) << "\n";
    out << "num_phases = " << c.num_phases << "\n";
    out << "\n[certify]\n";
    out << "t_lo = " << real17(c.t_lo) << "\n";
    out << "t_hi = " << real17(c.t_hi) << "\n";
    out << "nx = " << c.cert_nx << "\n";
    out << "ny = " << c.cert_ny << "\n";
    out << "nt = " << c.cert_nt << "\n";
    out << "\n[profile]\n";
    out << "base = " << c.pool_base << "\n";
    out << "sweep_points = " << c.sweep_points << "\n";
    out << "sweep_halfwidth = " << real17(c.sweep_halfwidth) << "\n";
    return out.str();
}

int64_t resolved_ny(const ExperimentConfig& config, int64_t N) {
    if (config.ny > 0) return config.ny;
    return std::min<int64_t>(N * config.nx, 65536);
}

} // namespace skewspec
