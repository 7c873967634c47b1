#include "acoslc/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace acoslc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Point city_point(const City& c) { return {c.x, c.y}; }

double cross_orientation(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool same_point(Point a, Point b) { return a.x == b.x && a.y == b.y; }

DistanceMatrix matrix_for(const std::vector<City>& cities, const std::vector<int>& ids,
                          EdgeWeightType convention) {
    const int n = static_cast<int>(ids.size());
    DistanceMatrix dist(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist.set(i, j, distance(cities[ids[i]], cities[ids[j]], convention));
    return dist;
}

double edge_cost(const std::vector<City>& cities, int a, int b, EdgeWeightType convention) {
    return distance(cities[a], cities[b], convention);
}

double cycle_length(const std::vector<City>& cities, const std::vector<int>& order,
                    EdgeWeightType convention) {
    const size_t n = order.size();
    if (n < 2) return 0.0;
    double len = 0.0;
    for (size_t i = 0; i < n; ++i)
        len += edge_cost(cities, order[i], order[(i + 1) % n], convention);
    return len;
}

// Uncrossing core; a protected edge (per-class repair of a pseudo-edge tour)
// is never removed by a move.
Tour uncross(const std::vector<City>& cities, const Tour& tour, EdgeWeightType convention,
             int pass_cap, bool* cap_hit, std::optional<Edge> protected_edge) {
    std::vector<int> order = tour.order;
    const int n = static_cast<int>(order.size());
    if (cap_hit) *cap_hit = false;
    if (n < 4) return Tour{order, cycle_length(cities, order, convention)};

    auto is_protected = [&](int a, int b) {
        if (!protected_edge) return false;
        return (a == protected_edge->u && b == protected_edge->v) ||
               (a == protected_edge->v && b == protected_edge->u);
    };

    int passes = 0;
    bool changed = true;
    while (changed) {
        if (passes >= pass_cap) {
            if (cap_hit) *cap_hit = true;
            break;
        }
        changed = false;
        ++passes;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;  // wrap-adjacent pair
                const int a1 = order[i], a2 = order[i + 1];
                const int b1 = order[j], b2 = order[(j + 1) % n];
                if (is_protected(a1, a2) || is_protected(b1, b2)) continue;
                if (!segments_intersect(city_point(cities[a1]), city_point(cities[a2]),
                                        city_point(cities[b1]), city_point(cities[b2])))
                    continue;
                // 2-opt move: replace (a1,a2),(b1,b2) with (a1,b1),(a2,b2).
                const double delta =
                    edge_cost(cities, a1, b1, EdgeWeightType::Euc2dExact) +
                    edge_cost(cities, a2, b2, EdgeWeightType::Euc2dExact) -
                    edge_cost(cities, a1, a2, EdgeWeightType::Euc2dExact) -
                    edge_cost(cities, b1, b2, EdgeWeightType::Euc2dExact);
                if (delta >= 0.0) continue;  // degenerate collinear tie, skip
                std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                changed = true;
            }
        }
    }
    const double length = cycle_length(cities, order, convention);
    return Tour{std::move(order), length};
}

std::uint64_t phase_seed(std::uint64_t base, std::uint64_t phase, std::uint64_t index) {
    return mix_seed(base, phase, index);
}

}  // namespace

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Aco: return "ACO";
        case Algorithm::AcoKmeans: return "ACO-K-MEANS";
        case Algorithm::AcoSlc: return "ACO-SLC";
        case Algorithm::AcoSlcLwcr: return "ACO-SLC-LWCR";
        case Algorithm::AcoSlcMixture: return "ACO-SLC-MIXTURE";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    std::string up;
    up.reserve(name.size());
    for (char ch : name)
        up.push_back(ch == '_' ? '-'
                               : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "ACO") return Algorithm::Aco;
    if (up == "ACO-K-MEANS" || up == "ACO-KMEANS") return Algorithm::AcoKmeans;
    if (up == "ACO-SLC") return Algorithm::AcoSlc;
    if (up == "ACO-SLC-LWCR") return Algorithm::AcoSlcLwcr;
    if (up == "ACO-SLC-MIXTURE") return Algorithm::AcoSlcMixture;
    return std::nullopt;
}

double interclass_min_distance(const std::vector<City>& cities, const ClassState& a,
                               const ClassState& b, EdgeWeightType convention) {
    if (a.members.empty() || b.members.empty())
        throw std::invalid_argument("interclass_min_distance: empty class");
    double best = std::numeric_limits<double>::infinity();
    for (int ia : a.members)
        for (int ib : b.members) best = std::min(best, edge_cost(cities, ia, ib, convention));
    return best;
}

CentroidGraph build_centroid_graph(const std::vector<City>& cities,
                                   const std::vector<ClassState>& classes,
                                   EdgeWeightType convention) {
    if (classes.empty()) throw std::invalid_argument("build_centroid_graph: no classes");
    CentroidGraph graph;
    const int n = static_cast<int>(classes.size());
    graph.weights = DistanceMatrix(n);
    graph.centroids.reserve(n);
    for (const ClassState& cls : classes) graph.centroids.push_back(cls.centroid);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            graph.weights.set(i, j, interclass_min_distance(cities, classes[i], classes[j],
                                                            convention));
    return graph;
}

std::vector<int> order_classes(const CentroidGraph& graph, const AcoParams& params,
                               bool windows_enabled) {
    const int n = graph.weights.size();
    if (n < 1) throw std::invalid_argument("order_classes: no classes");
    if (n == 1) return {0};
    if (n == 2) return {0, 1};

    AcoOptions options;
    WindowSets windows;
    if (windows_enabled) {
        windows = build_windows(graph.weights, little_window_size(n));
        options.windows = &windows;
    }
    return run_aco(graph.weights, params, options).order;
}

std::vector<Bridge> select_bridges(const std::vector<City>& cities,
                                   const std::vector<ClassState>& classes,
                                   const std::vector<int>& class_order,
                                   EdgeWeightType convention, bool* reuse_fallback) {
    const int k = static_cast<int>(class_order.size());
    if (reuse_fallback) *reuse_fallback = false;
    std::vector<Bridge> bridges;
    if (k < 2) return bridges;

    std::vector<std::vector<int>> used(classes.size());

    auto free_cities = [&](int cls_idx) {
        const ClassState& cls = classes[cls_idx];
        if (cls.members.size() == 1) return cls.members;  // single city serves both slots
        std::vector<int> out;
        for (int id : cls.members)
            if (std::find(used[cls_idx].begin(), used[cls_idx].end(), id) == used[cls_idx].end())
                out.push_back(id);
        if (out.empty()) {
            if (reuse_fallback) *reuse_fallback = true;
            return cls.members;  // exhausted: permit reuse rather than abort
        }
        return out;
    };

    for (int i = 0; i < k; ++i) {
        const int a_idx = class_order[i];
        const int b_idx = class_order[(i + 1) % k];
        const std::vector<int> a_free = free_cities(a_idx);
        const std::vector<int> b_free = free_cities(b_idx);

        Bridge bridge;
        bridge.from_class = a_idx;
        bridge.to_class = b_idx;
        double best = std::numeric_limits<double>::infinity();
        for (int a : a_free) {       // members are sorted, so the first minimum
            for (int b : b_free) {   // is already the lowest-id tie-break
                const double d = edge_cost(cities, a, b, convention);
                if (d < best) {
                    best = d;
                    bridge.u = a;
                    bridge.v = b;
                }
            }
        }
        used[a_idx].push_back(bridge.u);
        used[b_idx].push_back(bridge.v);
        bridges.push_back(bridge);
    }
    return bridges;
}

Tour solve_class(const std::vector<City>& cities, const ClassState& cls, int border_u,
                 int border_v, const AcoParams& params, EdgeWeightType convention,
                 bool windows_enabled) {
    const int n = static_cast<int>(cls.members.size());
    if (n == 0) throw std::invalid_argument("solve_class: empty class");
    if (border_u == border_v && n > 1)
        throw std::invalid_argument("solve_class: identical border cities in a multi-city class");

    if (n == 1) return Tour{{cls.members.front()}, 0.0};

    auto local_index = [&](int id) {
        auto it = std::find(cls.members.begin(), cls.members.end(), id);
        if (it == cls.members.end())
            throw std::invalid_argument("solve_class: border city outside the class");
        return static_cast<int>(it - cls.members.begin());
    };
    const int lu = local_index(border_u);
    const int lv = local_index(border_v);

    const DistanceMatrix dist = matrix_for(cities, cls.members, convention);
    AcoOptions options;
    options.forced_edge = Edge{lu, lv};
    WindowSets windows;
    if (windows_enabled && n > 3) {
        windows = build_windows(dist, little_window_size(n));
        options.windows = &windows;
    }

    Tour local = run_aco(dist, params, options);
    Tour out;
    out.length = local.length;
    out.order.reserve(local.order.size());
    for (int idx : local.order) out.order.push_back(cls.members[idx]);
    return out;
}

Tour join_routes(const std::vector<City>& cities, const std::vector<ClassState>& classes,
                 const StitchPlan& plan, const std::vector<Tour>& local_tours,
                 EdgeWeightType convention) {
    const int k = static_cast<int>(plan.class_order.size());
    if (k == 0) throw std::invalid_argument("join_routes: empty plan");
    if (local_tours.size() != classes.size())
        throw std::invalid_argument("join_routes: one local tour per class required");

    if (k == 1) {  // single class: the local route already is the full tour
        Tour out = local_tours[plan.class_order.front()];
        out.length = cycle_length(cities, out.order, convention);
        return out;
    }

    Tour out;
    for (int i = 0; i < k; ++i) {
        const int cls_idx = plan.class_order[i];
        const Edge pseudo = plan.pseudo_edges[cls_idx];
        const std::vector<int>& cycle = local_tours[cls_idx].order;
        const int len = static_cast<int>(cycle.size());

        if (len == 1) {
            out.order.push_back(cycle.front());
            continue;
        }

        const int entry = pseudo.u, exit = pseudo.v;
        const int pe = static_cast<int>(std::find(cycle.begin(), cycle.end(), entry) -
                                        cycle.begin());
        const int px = static_cast<int>(std::find(cycle.begin(), cycle.end(), exit) -
                                        cycle.begin());
        if (pe >= len || px >= len)
            throw std::logic_error("join_routes: border city missing from local tour");

        // The local cycle must contain the pseudo-edge; walking away from the
        // exit yields the entry->exit path with the pseudo-edge deleted.
        if ((pe + 1) % len == px) {
            for (int s = 0; s < len; ++s) out.order.push_back(cycle[(pe - s + len) % len]);
        } else if ((px + 1) % len == pe) {
            for (int s = 0; s < len; ++s) out.order.push_back(cycle[(pe + s) % len]);
        } else {
            throw std::logic_error("join_routes: local tour does not contain its pseudo-edge");
        }
    }

    out.length = cycle_length(cities, out.order, convention);
    return out;
}

bool segments_intersect(Point a1, Point a2, Point b1, Point b2) {
    if (same_point(a1, b1) || same_point(a1, b2) || same_point(a2, b1) || same_point(a2, b2))
        return false;  // adjacent tour edges share an endpoint

    const double d1 = cross_orientation(b1, b2, a1);
    const double d2 = cross_orientation(b1, b2, a2);
    const double d3 = cross_orientation(a1, a2, b1);
    const double d4 = cross_orientation(a1, a2, b2);

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;

    if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
        // Collinear: intersecting iff the overlap has positive length.
        const bool use_x = std::abs(a2.x - a1.x) >= std::abs(a2.y - a1.y) ||
                           std::abs(b2.x - b1.x) >= std::abs(b2.y - b1.y);
        auto coord = [&](Point p) { return use_x ? p.x : p.y; };
        const double a_lo = std::min(coord(a1), coord(a2));
        const double a_hi = std::max(coord(a1), coord(a2));
        const double b_lo = std::min(coord(b1), coord(b2));
        const double b_hi = std::max(coord(b1), coord(b2));
        return std::min(a_hi, b_hi) > std::max(a_lo, b_lo);
    }
    return false;
}

Tour remove_cross_edges(const std::vector<City>& cities, const Tour& tour,
                        EdgeWeightType convention, int pass_cap, bool* cap_hit) {
    return uncross(cities, tour, convention, pass_cap, cap_hit, std::nullopt);
}

namespace {

struct PipelineFlags {
    bool windows = false;
    bool global_cross_removal = false;
};

SolveResult run_pipeline(const Instance& instance, std::vector<ClassState> classes,
                         const SolveConfig& config, PipelineFlags flags,
                         SolveResult result /* clustering time already recorded */) {
    const std::vector<City>& cities = instance.cities;
    result.num_classes = static_cast<int>(classes.size());

    // Partition sanity: every city in exactly one class.
    {
        std::vector<char> seen(cities.size(), 0);
        size_t covered = 0;
        for (const ClassState& cls : classes)
            for (int id : cls.members) {
                if (seen[id]) throw std::logic_error("clustering phase: duplicated city in partition");
                seen[id] = 1;
                ++covered;
            }
        if (covered != cities.size())
            throw std::logic_error("clustering phase: partition does not cover the instance");
    }

    auto tagged = [](const char* phase, auto&& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(phase) + " phase: " + e.what());
        }
    };

    AcoParams order_params = config.aco;
    order_params.rng_seed = phase_seed(config.aco.rng_seed, 0xC1A55, 0);

    auto t0 = Clock::now();
    const CentroidGraph graph = tagged("ordering", [&] {
        return build_centroid_graph(cities, classes, config.convention);
    });
    const std::vector<int> class_order =
        tagged("ordering", [&] { return order_classes(graph, order_params, flags.windows); });
    result.timings.ordering = seconds_since(t0);

    StitchPlan plan;
    plan.class_order = class_order;

    t0 = Clock::now();
    plan.bridges = tagged("stitching", [&] {
        return select_bridges(cities, classes, class_order, config.convention,
                              &plan.border_reuse_fallback);
    });
    result.border_reuse_fallback = plan.border_reuse_fallback;

    const int k = static_cast<int>(class_order.size());
    plan.pseudo_edges.assign(classes.size(), Edge{});
    if (k >= 2) {
        for (int i = 0; i < k; ++i) {
            const int cls_idx = class_order[i];
            plan.pseudo_edges[cls_idx].u = plan.bridges[(i - 1 + k) % k].v;  // entry
            plan.pseudo_edges[cls_idx].v = plan.bridges[i].u;                // exit
        }
    }
    result.timings.stitching = seconds_since(t0);

    t0 = Clock::now();
    std::vector<Tour> local_tours(classes.size());
    for (size_t c = 0; c < classes.size(); ++c) {
        AcoParams class_params = config.aco;
        class_params.rng_seed = phase_seed(config.aco.rng_seed, 0x50C1A, c);
        tagged("local-solve", [&] {
            if (k >= 2) {
                local_tours[c] = solve_class(cities, classes[c], plan.pseudo_edges[c].u,
                                             plan.pseudo_edges[c].v, class_params,
                                             config.convention, flags.windows);
                if (config.per_class_cross_removal && classes[c].members.size() > 3) {
                    bool local_cap = false;
                    local_tours[c] = uncross(cities, local_tours[c], config.convention, 10,
                                             &local_cap, plan.pseudo_edges[c]);
                    result.cross_pass_cap_hit = result.cross_pass_cap_hit || local_cap;
                }
            } else {
                // Single class: plain local solve, no pseudo-edge surgery.
                const std::vector<int>& ids = classes[c].members;
                const DistanceMatrix dist = matrix_for(cities, ids, config.convention);
                AcoOptions options;
                WindowSets windows;
                if (flags.windows && dist.size() > 3) {
                    windows = build_windows(dist, little_window_size(dist.size()));
                    options.windows = &windows;
                }
                Tour local = run_aco(dist, class_params, options);
                for (int idx : local.order) local_tours[c].order.push_back(ids[idx]);
                local_tours[c].length = local.length;
            }
            return 0;
        });
    }
    result.timings.local_solve = seconds_since(t0);

    t0 = Clock::now();
    result.tour = tagged("stitching", [&] {
        return join_routes(cities, classes, plan, local_tours, config.convention);
    });
    result.timings.stitching += seconds_since(t0);

    if (flags.global_cross_removal) {
        t0 = Clock::now();
        bool cap = false;
        result.tour = tagged("repair", [&] {
            return remove_cross_edges(cities, result.tour, config.convention, 10, &cap);
        });
        result.cross_pass_cap_hit = result.cross_pass_cap_hit || cap;
        result.timings.repair = seconds_since(t0);
    }
    return result;
}

}  // namespace

SolveResult solve(const Instance& instance, Algorithm algorithm, const SolveConfig& config,
                  const SeedSet* seeds) {
    if (instance.cities.empty()) throw std::invalid_argument("solve: empty instance");
    const auto start = Clock::now();

    const SolveConfig& cfg = config;

    std::vector<int> all_ids(instance.cities.size());
    std::iota(all_ids.begin(), all_ids.end(), 0);

    SolveResult result;

    if (algorithm == Algorithm::Aco) {
        const DistanceMatrix dist = matrix_for(instance.cities, all_ids, cfg.convention);
        auto t0 = Clock::now();
        Tour local = run_aco(dist, cfg.aco);
        result.tour.order.reserve(local.order.size());
        for (int idx : local.order) result.tour.order.push_back(all_ids[idx]);
        result.tour.length = local.length;
        result.timings.local_solve = seconds_since(t0);
        result.num_classes = 1;
        result.timings.total = seconds_since(start);
        return result;
    }

    const int n = instance.size();
    const int m0 = cfg.cluster.m0 > 0 ? cfg.cluster.m0 : default_m0(n);
    std::mt19937_64 cluster_rng(cfg.cluster.rng_seed);

    PipelineFlags flags;
    std::vector<ClassState> classes;
    auto t0 = Clock::now();
    try {
        switch (algorithm) {
            case Algorithm::AcoKmeans:
                classes = kmeans_partition(instance.cities, all_ids, m0, seeds, cluster_rng,
                                           cfg.cluster.sweep_cap);
                break;
            case Algorithm::AcoSlc:
            case Algorithm::AcoSlcLwcr: {
                SlcResult slc_res = slc(instance.cities, all_ids, m0, cfg.cluster.epsilon, seeds,
                                        cluster_rng, cfg.cluster.sweep_cap);
                result.sweep_cap_hit = slc_res.hit_sweep_cap;
                classes = std::move(slc_res.classes);
                flags.windows = algorithm == Algorithm::AcoSlcLwcr;
                flags.global_cross_removal = algorithm == Algorithm::AcoSlcLwcr;
                break;
            }
            case Algorithm::AcoSlcMixture: {
                MixtureResult mix = slc_mixture(instance.cities, all_ids, cfg.cluster, seeds);
                result.sweep_cap_hit = mix.hit_sweep_cap;
                classes = std::move(mix.classes);
                flags.windows = true;
                flags.global_cross_removal = true;
                break;
            }
            default:
                throw std::logic_error("solve: unhandled algorithm");
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("clustering phase: ") + e.what());
    }
    result.timings.clustering = seconds_since(t0);

    result = run_pipeline(instance, std::move(classes), cfg, flags, std::move(result));
    result.timings.total = seconds_since(start);
    return result;
}

void write_tour(const Tour& tour, const Instance& instance, std::ostream& out) {
    out << "NAME: " << instance.name << ".tour\n";
    out << "TYPE: TOUR\n";
    out << "DIMENSION: " << tour.order.size() << "\n";
    out << "COMMENT: length " << tour.length << " convention "
        << to_string(instance.edge_weight_type) << "\n";
    out << "TOUR_SECTION\n";
    for (int id : tour.order) out << (id + 1) << "\n";
    out << "-1\nEOF\n";
}

}  // namespace acoslc
