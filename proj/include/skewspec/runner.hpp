#ifndef SKEWSPEC_RUNNER_HPP
#define SKEWSPEC_RUNNER_HPP

#include "skewspec/config.hpp"

namespace skewspec {

// Executes config.command and writes all outputs under config.out_dir
// (created if missing). Every payload embeds the config echo and library
// version; wall time and timestamp go to run_meta.json only, so payloads are
// byte-identical across runs of the same config.
void run_experiment(const ExperimentConfig& config);

} // namespace skewspec

#endif
