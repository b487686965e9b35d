#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "horolab/config.hpp"

namespace horolab {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Artifact {
    std::string filename;  // relative to the output directory
    std::string content;
};

struct ExperimentResult {
    std::vector<Check> checks;
    std::vector<Artifact> artifacts;

    bool all_pass() const;
};

// One function per subcommand. Pure apart from reading cfg.eigendata; files
// are written by run().
ExperimentResult experiment_verify_core(const ExperimentConfig& cfg);
ExperimentResult experiment_plancherel(const ExperimentConfig& cfg);
ExperimentResult experiment_quantize_check(const ExperimentConfig& cfg);
ExperimentResult experiment_mixing(const ExperimentConfig& cfg);
ExperimentResult experiment_trace_decay(const ExperimentConfig& cfg);
ExperimentResult experiment_summability(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// args excludes the program name. Exit code 0 when every check passes, 1 when
// a check fails, 2 on usage, configuration or I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace horolab
