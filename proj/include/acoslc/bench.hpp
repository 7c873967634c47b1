#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acoslc/pipeline.hpp"

namespace acoslc {

struct RunRecord {
    std::string instance;
    std::string algorithm;
    std::uint64_t seed = 0;
    PhaseTimings timings;
    double tour_length = 0.0;
    std::optional<double> optimum;
    std::optional<double> error;  // (solution - optimum) / optimum
    std::optional<double> ratio;  // Time(ACO) / Time(algorithm), same instance and seed
    int num_classes = 0;
    EdgeWeightType convention = EdgeWeightType::Euc2dRounded;
    AcoParams aco_params;  // parameter snapshot
    int m0 = 0;
    double epsilon_cluster = 0.0;
    bool contended = false;  // timed under the parallel mode
    bool failed = false;
    std::string fail_reason;
};

double compute_error(double solution, double optimum);
double compute_ratio(double time_aco, double time_algorithm);

struct SummaryRow {
    std::string instance;
    std::string algorithm;
    int runs = 0;
    std::optional<double> error_min, error_median, error_max;
    std::optional<double> ratio_min, ratio_median, ratio_max;
};

struct BatchResult {
    std::vector<RunRecord> rows;
    std::vector<SummaryRow> summary;
    bool aco_auto_added = false;
};

struct BatchSpec {
    std::vector<std::string> instance_paths;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;  // defaults to 1..5 when empty
    SolveConfig config;
    const OptimaTable* optima = nullptr;
    // Per-instance seed files, keyed by instance name (e.g. "ch130"). Missing
    // entries fall back to the default m0 rule with random centroids.
    std::map<std::string, SeedSet> centroid_seeds;
    // Opt-in: run (instance, algorithm, seed) jobs across threads. Timings are
    // contended and the rows say so; tour lengths are unaffected.
    bool parallel = false;
};

// One row per (instance, algorithm, seed). Plain ACO runs first per instance
// to anchor the Ratio column and is auto-added when absent. Failures produce
// failed rows; the batch continues.
BatchResult run_batch(const BatchSpec& spec, std::ostream* log = nullptr);

void write_csv(const BatchResult& result, std::ostream& out);
void write_summary(const BatchResult& result, std::ostream& out);

// Minimal grouped-bar SVG of median Error and Ratio per instance/algorithm.
void write_plot_svg(const BatchResult& result, std::ostream& out);

}  // namespace acoslc
