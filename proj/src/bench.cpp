#include "acoslc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace acoslc {

namespace {

std::optional<double> median_of(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string fmt(std::optional<double> v, int precision = 6) {
    if (!v) return "";
    std::ostringstream os;
    os << std::setprecision(precision) << std::fixed << *v;
    return os.str();
}

}  // namespace

double compute_error(double solution, double optimum) {
    if (optimum <= 0.0) throw std::invalid_argument("compute_error: optimum must be positive");
    return (solution - optimum) / optimum;
}

double compute_ratio(double time_aco, double time_algorithm) {
    if (time_aco <= 0.0 || time_algorithm <= 0.0)
        throw std::invalid_argument("compute_ratio: timings must be positive");
    return time_aco / time_algorithm;
}

BatchResult run_batch(const BatchSpec& spec, std::ostream* log) {
    BatchResult result;

    std::vector<Algorithm> algorithms = spec.algorithms;
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Aco) == algorithms.end()) {
        algorithms.insert(algorithms.begin(), Algorithm::Aco);
        result.aco_auto_added = true;
        if (log) *log << "note: plain ACO auto-added to anchor the Ratio column\n";
    } else {
        // ACO first so its timings anchor the Ratio column.
        std::stable_partition(algorithms.begin(), algorithms.end(),
                              [](Algorithm a) { return a == Algorithm::Aco; });
    }

    std::vector<std::uint64_t> seeds = spec.seeds;
    if (seeds.empty()) seeds = {1, 2, 3, 4, 5};

    struct Job {
        const Instance* instance = nullptr;
        const SeedSet* centroid_seeds = nullptr;
        std::optional<double> optimum;
        Algorithm algorithm = Algorithm::Aco;
        std::uint64_t seed = 0;
        size_t row_index = 0;
    };

    std::vector<Instance> instances(spec.instance_paths.size());
    std::vector<std::string> load_errors(spec.instance_paths.size());
    std::vector<Job> jobs;

    for (size_t i = 0; i < spec.instance_paths.size(); ++i) {
        const std::string& path = spec.instance_paths[i];
        try {
            instances[i] = load_tsplib_file(path);
            instances[i].edge_weight_type = spec.config.convention;
        } catch (const std::exception& e) {
            load_errors[i] = e.what();
        }

        std::optional<double> optimum;
        const SeedSet* centroid_seeds = nullptr;
        if (load_errors[i].empty()) {
            if (spec.optima) {
                auto it = spec.optima->best_known.find(instances[i].name);
                if (it != spec.optima->best_known.end()) optimum = it->second;
            }
            auto it = spec.centroid_seeds.find(instances[i].name);
            if (it != spec.centroid_seeds.end()) centroid_seeds = &it->second;
        }

        for (Algorithm algorithm : algorithms) {
            for (std::uint64_t seed : seeds) {
                RunRecord row;
                row.instance = load_errors[i].empty() ? instances[i].name : path;
                row.algorithm = to_string(algorithm);
                row.seed = seed;
                row.convention = spec.config.convention;
                row.aco_params = spec.config.aco;
                row.m0 = spec.config.cluster.m0;
                row.epsilon_cluster = spec.config.cluster.epsilon;
                row.contended = spec.parallel;
                if (!load_errors[i].empty()) {
                    row.failed = true;
                    row.fail_reason = load_errors[i];
                }
                const size_t row_index = result.rows.size();
                result.rows.push_back(std::move(row));
                if (load_errors[i].empty())
                    jobs.push_back(Job{&instances[i], centroid_seeds, optimum, algorithm, seed,
                                       row_index});
            }
        }
    }

    auto execute = [&](const Job& job) {
        RunRecord& row = result.rows[job.row_index];
        SolveConfig config = spec.config;
        config.aco.rng_seed = job.seed;
        config.cluster.rng_seed = job.seed;
        try {
            const SolveResult solved =
                solve(*job.instance, job.algorithm, config, job.centroid_seeds);
            row.timings = solved.timings;
            row.tour_length = solved.tour.length;
            row.num_classes = solved.num_classes;
            row.optimum = job.optimum;
            if (job.optimum) row.error = compute_error(solved.tour.length, *job.optimum);
        } catch (const std::exception& e) {
            row.failed = true;
            row.fail_reason = e.what();
        }
    };

    if (spec.parallel) {
        std::atomic<size_t> cursor{0};
        const unsigned workers =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(jobs.size())));
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (size_t next = cursor.fetch_add(1); next < jobs.size();
                     next = cursor.fetch_add(1))
                    execute(jobs[next]);
            });
        }
        for (std::thread& t : pool) t.join();
    } else {
        for (const Job& job : jobs) execute(job);
    }

    // Ratio is anchored on the plain ACO run of the same instance and seed.
    std::map<std::pair<std::string, std::uint64_t>, double> aco_time;
    for (const RunRecord& row : result.rows)
        if (!row.failed && row.algorithm == std::string("ACO"))
            aco_time[{row.instance, row.seed}] = row.timings.total;
    for (RunRecord& row : result.rows) {
        if (row.failed) continue;
        if (row.algorithm == std::string("ACO")) {
            row.ratio = 1.0;
        } else if (auto it = aco_time.find({row.instance, row.seed}); it != aco_time.end()) {
            if (it->second > 0.0 && row.timings.total > 0.0)
                row.ratio = compute_ratio(it->second, row.timings.total);
        }
        if (log) {
            *log << row.instance << " " << row.algorithm << " seed " << row.seed << ": length "
                 << row.tour_length;
            if (row.error) *log << " error " << *row.error;
            if (row.ratio) *log << " ratio " << *row.ratio;
            *log << " (" << row.timings.total << " s)\n";
            if (row.error && *row.error < -1e-9)
                *log << "warning: " << row.instance
                     << " solution beats the table optimum; the optima file looks stale\n";
        }
    }
    if (log) {
        for (const RunRecord& row : result.rows)
            if (row.failed)
                *log << row.instance << " " << row.algorithm << " seed " << row.seed
                     << ": FAILED (" << row.fail_reason << ")\n";
    }

    // Summaries per (instance, algorithm), medians straight from the rows.
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const RunRecord& row : result.rows)
        groups[{row.instance, row.algorithm}].push_back(&row);
    for (const auto& [key, rows] : groups) {
        SummaryRow summary;
        summary.instance = key.first;
        summary.algorithm = key.second;
        summary.runs = static_cast<int>(rows.size());
        std::vector<double> errors, ratios;
        for (const RunRecord* row : rows) {
            if (row->failed) continue;
            if (row->error) errors.push_back(*row->error);
            if (row->ratio) ratios.push_back(*row->ratio);
        }
        if (!errors.empty()) {
            summary.error_min = *std::min_element(errors.begin(), errors.end());
            summary.error_max = *std::max_element(errors.begin(), errors.end());
            summary.error_median = median_of(errors);
        }
        if (!ratios.empty()) {
            summary.ratio_min = *std::min_element(ratios.begin(), ratios.end());
            summary.ratio_max = *std::max_element(ratios.begin(), ratios.end());
            summary.ratio_median = median_of(ratios);
        }
        result.summary.push_back(std::move(summary));
    }
    return result;
}

void write_csv(const BatchResult& result, std::ostream& out) {
    out << "instance,algorithm,seed,length,optimum,error,ratio,total_s,cluster_s,order_s,"
           "local_s,stitch_s,repair_s,num_classes,convention,alpha,beta,rho,q,t_max,"
           "epsilon_aco,m0,epsilon_cluster,timing,status,reason\n";
    for (const RunRecord& row : result.rows) {
        out << row.instance << "," << row.algorithm << "," << row.seed << ","
            << (row.failed ? "" : fmt(row.tour_length, 3)) << "," << fmt(row.optimum, 3) << ","
            << fmt(row.error) << "," << fmt(row.ratio, 3) << "," << fmt(row.timings.total) << ","
            << fmt(row.timings.clustering) << "," << fmt(row.timings.ordering) << ","
            << fmt(row.timings.local_solve) << "," << fmt(row.timings.stitching) << ","
            << fmt(row.timings.repair) << "," << row.num_classes << ","
            << to_string(row.convention) << "," << row.aco_params.alpha << ","
            << row.aco_params.beta << "," << row.aco_params.rho << "," << row.aco_params.q << ","
            << row.aco_params.t_max << "," << row.aco_params.epsilon << "," << row.m0 << ","
            << row.epsilon_cluster << "," << (row.contended ? "contended" : "clean") << ","
            << (row.failed ? "failed" : "ok") << ",";
        // commas inside failure reasons would shift columns
        std::string reason = row.fail_reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        out << reason << "\n";
    }
}

void write_summary(const BatchResult& result, std::ostream& out) {
    if (result.aco_auto_added) out << "# plain ACO auto-added to anchor Ratio\n";
    out << "instance algorithm runs error[min/med/max] ratio[min/med/max]\n";
    for (const SummaryRow& s : result.summary) {
        out << s.instance << " " << s.algorithm << " " << s.runs << " " << fmt(s.error_min, 4)
            << "/" << fmt(s.error_median, 4) << "/" << fmt(s.error_max, 4) << " "
            << fmt(s.ratio_min, 1) << "/" << fmt(s.ratio_median, 1) << "/" << fmt(s.ratio_max, 1)
            << "\n";
    }
}

void write_plot_svg(const BatchResult& result, std::ostream& out) {
    // Two panels of grouped bars: median error (left), median ratio (right).
    std::vector<const SummaryRow*> rows;
    for (const SummaryRow& s : result.summary) rows.push_back(&s);

    const int bar_w = 18, gap = 6, group_gap = 28;
    const int panel_h = 220, margin = 46;
    double max_err = 0.0, max_ratio = 0.0;
    for (const SummaryRow* s : rows) {
        if (s->error_median) max_err = std::max(max_err, *s->error_median);
        if (s->ratio_median) max_ratio = std::max(max_ratio, *s->ratio_median);
    }
    max_err = std::max(max_err, 0.05);
    max_ratio = std::max(max_ratio, 2.0);

    const int per_panel_w = margin + static_cast<int>(rows.size()) * (bar_w + gap) + group_gap;
    const int width = 2 * per_panel_w + margin;
    const int height = panel_h + 2 * margin + 30;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<style>text{font:10px sans-serif;}</style>\n";

    auto draw_panel = [&](int x0, const char* title, bool use_error, double max_v) {
        out << "<text x=\"" << x0 << "\" y=\"" << margin - 12 << "\">" << title << "</text>\n";
        out << "<line x1=\"" << x0 << "\" y1=\"" << margin + panel_h << "\" x2=\""
            << x0 + static_cast<int>(rows.size()) * (bar_w + gap) << "\" y2=\""
            << margin + panel_h << "\" stroke=\"black\"/>\n";
        int x = x0;
        for (const SummaryRow* s : rows) {
            std::optional<double> v = use_error ? s->error_median : s->ratio_median;
            if (v) {
                const int h = static_cast<int>(panel_h * std::min(1.0, *v / max_v));
                out << "<rect x=\"" << x << "\" y=\"" << margin + panel_h - h << "\" width=\""
                    << bar_w << "\" height=\"" << h << "\" fill=\"#4477aa\"/>\n";
                out << "<text x=\"" << x << "\" y=\"" << margin + panel_h - h - 3 << "\">"
                    << fmt(*v, use_error ? 3 : 1) << "</text>\n";
            }
            out << "<text x=\"" << x << "\" y=\"" << margin + panel_h + 12
                << "\" transform=\"rotate(45 " << x << " " << margin + panel_h + 12 << ")\">"
                << s->instance << " " << s->algorithm << "</text>\n";
            x += bar_w + gap;
        }
    };

    draw_panel(margin, "median error", true, max_err);
    draw_panel(per_panel_w + margin, "median ratio (Time(ACO)/Time)", false, max_ratio);
    out << "</svg>\n";
}

}  // namespace acoslc
