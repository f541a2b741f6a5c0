#pragma once

#include <string>
#include <vector>

#include "wkam/model.hpp"
#include "wkam/scheme.hpp"

namespace wkam {

// Flat INI-style experiment description. Unknown sections or keys are errors.
struct ExperimentConfig {
    std::string name = "experiment";
    HamiltonianModel model;
    DiscreteScheme scheme;
    std::vector<double> lambdas{0.4, 0.2, 0.1, 0.05, 0.025};

    double solver_tol = 1e-9;
    double route_agreement_tol = 1e-6;
    double conv_eps = 0.05;
    double eps_tail = 1e-12;
    std::size_t cycle_cap = 10000;

    std::string output_dir = "out";
    bool oracles = false;

    void validate() const; // throws ConfigError
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

} // namespace wkam
