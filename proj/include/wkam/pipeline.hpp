#pragma once

#include <string>
#include <vector>

#include "wkam/config.hpp"

namespace wkam {

struct StageRecord {
    std::string stage;
    std::string check;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct PipelineResult {
    std::vector<StageRecord> records;
    bool ok() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
};

// Full experiment: assumptions, graph, critical value, barrier and Aubry set,
// Mather measures, discounted solutions, occupation diagnostics, the three
// limit routes, and the convergence table. CSV artifacts and a summary land in
// out_dir; every assertion becomes a StageRecord.
PipelineResult run_pipeline(const ExperimentConfig& config, const std::string& out_dir);

struct RefinementLevel {
    int n = 0;
    double err_c = 0.0;
    double err_h = 0.0;
    double err_u0 = 0.0;
};

struct RefinementReport {
    std::vector<RefinementLevel> levels;
    bool closed_form_reference = false;
    std::string violations; // empty when all error columns are nonincreasing
};

// Reruns the static part of the pipeline (critical value, barrier, limit) at
// N, 2N, ..., 2^{levels-1} N with tau = 1/N, comparing against closed forms
// when available and against the finest level otherwise.
RefinementReport run_refinement(const ExperimentConfig& config, int levels,
                                const std::string& out_dir);

void write_summary(const std::string& path, const std::vector<StageRecord>& records);

} // namespace wkam
