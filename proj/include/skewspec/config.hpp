#ifndef SKEWSPEC_CONFIG_HPP
#define SKEWSPEC_CONFIG_HPP

#include "skewspec/potentials.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace skewspec {

// Full description of one experiment run. Parsed from an INI-style config
// file plus command-line overrides; render_config writes every field back out
// so the echo embedded in each output re-parses to an identical config.
struct ExperimentConfig {
    std::string command; // eig | spectrum-scan | sigma | gap-profile | gap-bound | certify-gap | lyap

    PotentialSpec potential;

    std::vector<int64_t> sizes = {200};
    uint64_t run_seed = 1;
    std::string out_dir = "out";
    std::string format = "csv";
    std::vector<std::string> regions = {"left", "center", "right"};
    double gap_threshold = 0.05;

    // phase/energy grids
    int64_t nx = 512;
    int64_t ny = 0; // 0 selects min(N * nx, 65536) per size, balancing the
                    // x and y Lipschitz slack terms
    int64_t nt = 65537;
    int64_t nE = 129;

    // lyap
    double e_lo = -4.0, e_hi = 4.0;
    int64_t num_phases = 32;

    // certify-gap
    double t_lo = 0.0, t_hi = 0.0;
    int64_t cert_nx = 1, cert_ny = 1, cert_nt = 129;

    // distance-profile phase pool
    int64_t pool_base = 48;
    int64_t sweep_points = 1024;
    double sweep_halfwidth = 0.12;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses INI text: [section] headers, key = value lines, comment lines
// starting with '#' or ';'. Unknown sections or keys throw ConfigError.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Applies one "section.key=value" override through the same dispatch as the
// file parser.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Cross-field checks: known command and format, nonempty sizes, positive
// grids, valid region names, family parameter validation, and per-command
// requirements (certify-gap needs t_lo < t_hi).
void validate_config(const ExperimentConfig& config);

// Serializes every field (defaults included) in a fixed order with reals at
// 17 significant digits, so parse_config_text(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

// The y grid actually swept for window length N.
int64_t resolved_ny(const ExperimentConfig& config, int64_t N);

} // namespace skewspec

#endif
