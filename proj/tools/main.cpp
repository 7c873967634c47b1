// Benchmark CLI: solve a single instance or run an instance x algorithm x seed
// batch with CSV output. Exit codes: 0 success, 1 run failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acoslc/bench.hpp"
#include "acoslc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace acoslc;

namespace {

struct CommonOptions {
    double alpha = 1.0, beta = 10.0, rho = 0.4, q = 300.0;
    int tmax = 1000;
    double epsilon_aco = 1e-3, epsilon_cluster = 1e-3;
    int m0 = 0;
    std::string distance = "rounded";
    std::string optima_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--alpha", opt.alpha, "pheromone exponent");
    cmd->add_option("--beta", opt.beta, "heuristic exponent");
    cmd->add_option("--rho", opt.rho, "evaporation rate")->check(CLI::Range(1e-9, 0.999999));
    cmd->add_option("--q", opt.q, "pheromone deposit constant");
    cmd->add_option("--tmax", opt.tmax, "ACO iteration cap");
    cmd->add_option("--epsilon-aco", opt.epsilon_aco, "ACO route-length convergence threshold");
    cmd->add_option("--epsilon-cluster", opt.epsilon_cluster,
                    "entropy-convergence threshold for clustering");
    cmd->add_option("--m0", opt.m0, "initial class count (0 = max(2, round(sqrt(N))))");
    cmd->add_option("--distance", opt.distance, "distance convention")
        ->check(CLI::IsMember({"rounded", "exact"}));
    cmd->add_option("--optima", opt.optima_path, "best-known optima CSV");
}

SolveConfig make_config(const CommonOptions& opt) {
    SolveConfig config;
    config.aco.alpha = opt.alpha;
    config.aco.beta = opt.beta;
    config.aco.rho = opt.rho;
    config.aco.q = opt.q;
    config.aco.t_max = opt.tmax;
    config.aco.epsilon = opt.epsilon_aco;
    config.cluster.epsilon = opt.epsilon_cluster;
    config.cluster.m0 = opt.m0;
    config.convention = opt.distance == "exact" ? EdgeWeightType::Euc2dExact
                                                : EdgeWeightType::Euc2dRounded;
    return config;
}

// Instances come as a directory of .tsp files or a comma-separated list.
std::vector<std::string> expand_instances(const std::string& spec) {
    std::vector<std::string> paths;
    if (fs::is_directory(spec)) {
        for (const auto& entry : fs::directory_iterator(spec))
            if (entry.path().extension() == ".tsp") paths.push_back(entry.path().string());
        std::sort(paths.begin(), paths.end());
        return paths;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) paths.push_back(item);
    }
    return paths;
}

// Looks for <stem>.seeds beside the instance, then in seeds_dir.
std::map<std::string, SeedSet> discover_seed_files(const std::vector<std::string>& instances,
                                                   const std::string& seeds_dir) {
    std::map<std::string, SeedSet> out;
    for (const std::string& path : instances) {
        const fs::path p(path);
        std::vector<fs::path> candidates = {fs::path(p).replace_extension(".seeds")};
        if (!seeds_dir.empty()) candidates.push_back(fs::path(seeds_dir) / (p.stem().string() + ".seeds"));
        for (const fs::path& cand : candidates) {
            if (!fs::exists(cand)) continue;
            SeedSet seeds = load_seeds_file(cand.string());
            const std::string key = seeds.instance_name.empty() ? p.stem().string()
                                                                : seeds.instance_name;
            out[key] = std::move(seeds);
            break;
        }
    }
    return out;
}

int run_solve(const CommonOptions& common, const std::string& instance_path,
              const std::string& algorithm_name, std::uint64_t seed,
              const std::string& seeds_file, const std::string& out_csv,
              const std::string& tour_path) {
    auto algorithm = parse_algorithm(algorithm_name);
    if (!algorithm) {
        std::cerr << "unknown algorithm: " << algorithm_name << "\n";
        return 2;
    }

    BatchSpec spec;
    spec.instance_paths = {instance_path};
    spec.algorithms = {*algorithm};
    spec.seeds = {seed};
    spec.config = make_config(common);

    OptimaTable optima;
    if (!common.optima_path.empty()) {
        optima = load_optima_file(common.optima_path);
        for (const std::string& w : optima.warnings) std::cerr << "warning: " << w << "\n";
        spec.optima = &optima;
    }
    if (!seeds_file.empty()) {
        SeedSet seeds = load_seeds_file(seeds_file);
        Instance inst = load_tsplib_file(instance_path);
        const std::string key = seeds.instance_name.empty() ? inst.name : seeds.instance_name;
        spec.centroid_seeds[key] = std::move(seeds);
        if (key != inst.name) spec.centroid_seeds[inst.name] = spec.centroid_seeds[key];
    }

    const BatchResult result = run_batch(spec, &std::cout);
    write_summary(result, std::cout);

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out) {
            std::cerr << "cannot write " << out_csv << "\n";
            return 1;
        }
        write_csv(result, out);
    }
    if (!tour_path.empty()) {
        // Re-solve deterministically to emit the tour file.
        Instance inst = load_tsplib_file(instance_path);
        inst.edge_weight_type = spec.config.convention;
        SolveConfig config = spec.config;
        config.aco.rng_seed = seed;
        config.cluster.rng_seed = seed;
        const SeedSet* centroid_seeds = nullptr;
        if (auto it = spec.centroid_seeds.find(inst.name); it != spec.centroid_seeds.end())
            centroid_seeds = &it->second;
        const SolveResult solved = solve(inst, *algorithm, config, centroid_seeds);
        std::ofstream out(tour_path);
        if (!out) {
            std::cerr << "cannot write " << tour_path << "\n";
            return 1;
        }
        write_tour(solved.tour, inst, out);
    }

    for (const RunRecord& row : result.rows)
        if (row.failed) {
            std::cerr << "run failed: " << row.fail_reason << "\n";
            return 1;
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ACO TSP solver with special local clustering"};
    app.require_subcommand(1);

    CommonOptions solve_common, bench_common;

    auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
    std::string instance_path, algorithm_name = "ACO-SLC-LWCR", seeds_file, out_csv, tour_path;
    std::uint64_t seed = 1;
    solve_cmd->add_option("--instance", instance_path, "TSPLIB .tsp file")->required();
    solve_cmd->add_option("--algorithm", algorithm_name,
                          "ACO | ACO-K-MEANS | ACO-SLC | ACO-SLC-LWCR | ACO-SLC-MIXTURE");
    solve_cmd->add_option("--seed", seed, "run seed");
    solve_cmd->add_option("--seeds-file", seeds_file, "initial centroid file");
    solve_cmd->add_option("--out", out_csv, "write the run record CSV here");
    solve_cmd->add_option("--tour", tour_path, "write the tour (TSPLIB TOUR format) here");
    add_common(solve_cmd, solve_common);

    auto* bench_cmd = app.add_subcommand("bench", "run an instance x algorithm x seed batch");
    std::string instances_spec, algorithms_csv = "ACO,ACO-SLC", seeds_csv = "1,2,3,4,5";
    std::string bench_out, plot_path, seeds_dir;
    bench_cmd->add_option("--instances", instances_spec, ".tsp directory or comma list")
        ->required();
    bench_cmd->add_option("--algorithms", algorithms_csv, "comma list of algorithms");
    bench_cmd->add_option("--seeds", seeds_csv, "comma list of run seeds");
    bench_cmd->add_option("--out", bench_out, "CSV output path")->required();
    bench_cmd->add_option("--plot", plot_path, "SVG summary plot path");
    bench_cmd->add_option("--seeds-dir", seeds_dir, "directory of <instance>.seeds files");
    bool parallel = false;
    bench_cmd->add_flag("--parallel", parallel,
                        "run (instance, seed) jobs across threads; timings become contended");
    add_common(bench_cmd, bench_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) {
            return run_solve(solve_common, instance_path, algorithm_name, seed, seeds_file,
                             out_csv, tour_path);
        }

        BatchSpec spec;
        spec.instance_paths = expand_instances(instances_spec);
        if (spec.instance_paths.empty()) {
            std::cerr << "no instances found in: " << instances_spec << "\n";
            return 2;
        }
        for (const std::string& name : expand_instances(algorithms_csv)) {
            auto algorithm = parse_algorithm(name);
            if (!algorithm) {
                std::cerr << "unknown algorithm: " << name << "\n";
                return 2;
            }
            spec.algorithms.push_back(*algorithm);
        }
        for (const std::string& s : expand_instances(seeds_csv))
            spec.seeds.push_back(std::stoull(s));
        spec.config = make_config(bench_common);
        spec.parallel = parallel;

        OptimaTable optima;
        if (!bench_common.optima_path.empty()) {
            optima = load_optima_file(bench_common.optima_path);
            for (const std::string& w : optima.warnings) std::cerr << "warning: " << w << "\n";
            spec.optima = &optima;
        }
        spec.centroid_seeds = discover_seed_files(spec.instance_paths, seeds_dir);

        const BatchResult result = run_batch(spec, &std::cerr);
        write_summary(result, std::cout);

        std::ofstream out(bench_out);
        if (!out) {
            std::cerr << "cannot write " << bench_out << "\n";
            return 1;
        }
        write_csv(result, out);
        if (!plot_path.empty()) {
            std::ofstream plot(plot_path);
            if (!plot) {
                std::cerr << "cannot write " << plot_path << "\n";
                return 1;
            }
            write_plot_svg(result, plot);
        }

        for (const RunRecord& row : result.rows)
            if (row.failed) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
