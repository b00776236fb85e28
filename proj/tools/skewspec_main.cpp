#include "skewspec/config.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"skewspec: certified spectra, gap bounds, and Lyapunov exponents for "
                 "one-dimensional ergodic Schrodinger operators"};

    std::string command, config_path, out_dir;
    std::vector<std::string> overrides;
    app.add_option("command", command,
                   "eig | spectrum-scan | sigma | gap-profile | gap-bound | certify-gap | lyap")
        ->required();
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--set", overrides, "section.key=value override (repeatable)");
    app.add_option("--out", out_dir, "output directory (overrides [run] out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        skewspec::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = skewspec::parse_config_file(config_path);
        cfg.command = command;
        for (const auto& s : overrides) skewspec::apply_override(cfg, s);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        skewspec::run_experiment(cfg);
        return 0;
    } catch (const skewspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const skewspec::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
