#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "brlab/indices.hpp"
#include "json.hpp"

namespace brlab {

struct ExperimentConfig {
    int n = 2;
    double L = 16.0;
    std::vector<int> grid_n{512};
    Rational delta{1, 5};
    Rational p0{6, 5};
    Rational q0{2};
    Rational p{8, 5};
    Rational q{5, 2};
    int trials = 20;
    std::uint64_t seed = 1;
    std::string eps_policy = "adaptive";  // only adaptive C doubling is implemented
    double C_init = 8.0;
    int recursion_floor = 4;
    int N_decay = 4;
    int M_decay = 2;
    double rho_offset = 0.05;
    std::string test_function = "random_trig";  // random_trig, bump, gaussian, zero
    std::vector<int> decay_scales{-4, -6, -8};
    std::string weight_preset = "suite";        // suite or constant
    int functions = 16;                         // vv: functions per list
    std::filesystem::path output_dir = ".";
};

// Applies one "key = value" setting; unknown keys are errors.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Line-oriented "key = value" text, '#' starts a comment.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});

struct Summary {
    int N = 0;
    std::size_t rows = 0;
    std::size_t degenerate = 0;
    double max = 0.0;
    double p95 = 0.0;
    double median = 0.0;
};

struct Report {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<Summary> summaries;  // one per grid size, ascending N
    double slope = 0.0;              // least-squares slope of max ratio vs log2 N
    std::string regime = "admissible";
    nlohmann::json extra = nlohmann::json::object();  // experiment-specific summary fields
};

// max, p95 (nearest rank) and median of finite values.
Summary summarize(int N, std::vector<double> ratios, std::size_t degenerate);
// Least-squares slope of y against log2 x.
double log2_slope(const std::vector<int>& x, const std::vector<double>& y);

std::string format_double(double v);
std::string report_csv(const Report& r);
std::string report_json(const Report& r, const ExperimentConfig& cfg);
// Writes <name>.csv and <name>.json into cfg.output_dir.
void write_report(const Report& r, const ExperimentConfig& cfg);

Report run_domination(const ExperimentConfig& cfg);
Report run_prop41(const ExperimentConfig& cfg);
Report run_prop42(const ExperimentConfig& cfg);
Report run_decay(const ExperimentConfig& cfg);
Report run_weights(const ExperimentConfig& cfg);
Report run_vector_valued(const ExperimentConfig& cfg);

}  // namespace brlab
