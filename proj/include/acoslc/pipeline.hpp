#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acoslc/aco.hpp"
#include "acoslc/clustering.hpp"
#include "acoslc/instance.hpp"

namespace acoslc {

enum class Algorithm { Aco, AcoKmeans, AcoSlc, AcoSlcLwcr, AcoSlcMixture };

const char* to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(const std::string& name);

// Class centroids as virtual cities; edge weights are minimum inter-class
// distances.
struct CentroidGraph {
    std::vector<Point> centroids;
    DistanceMatrix weights;
};

// Bridge between two consecutive classes in the stitch order; u belongs to
// from_class, v to to_class (city ids).
struct Bridge {
    int from_class = -1;
    int to_class = -1;
    int u = -1;
    int v = -1;
};

struct StitchPlan {
    std::vector<int> class_order;
    std::vector<Bridge> bridges;      // bridges[i]: class_order[i] -> class_order[i+1 mod]
    std::vector<Edge> pseudo_edges;   // per class index: (entry, exit) border city ids
    bool border_reuse_fallback = false;
};

double interclass_min_distance(const std::vector<City>& cities, const ClassState& a,
                               const ClassState& b, EdgeWeightType convention);

CentroidGraph build_centroid_graph(const std::vector<City>& cities,
                                   const std::vector<ClassState>& classes,
                                   EdgeWeightType convention);

// Virtual TSP over the centroid graph. One or two classes return the trivial
// order.
std::vector<int> order_classes(const CentroidGraph& graph, const AcoParams& params,
                               bool windows_enabled = false);

// Minimum cross-pair edges along the cyclic class order, skipping cities
// already consumed as border cities of the same class (ties to lower ids).
// When a class of size >= 2 runs out of free cities the selection falls back
// to reuse and sets the plan's fallback flag.
std::vector<Bridge> select_bridges(const std::vector<City>& cities,
                                   const std::vector<ClassState>& classes,
                                   const std::vector<int>& class_order,
                                   EdgeWeightType convention, bool* reuse_fallback = nullptr);

// Local route for one class that must contain the pseudo-edge (u, v). The
// returned tour is in city ids.
Tour solve_class(const std::vector<City>& cities, const ClassState& cls, int border_u,
                 int border_v, const AcoParams& params, EdgeWeightType convention,
                 bool windows_enabled);

// Open every local cycle at its pseudo-edge and join the paths with bridge
// edges along the class order.
Tour join_routes(const std::vector<City>& cities, const std::vector<ClassState>& classes,
                 const StitchPlan& plan, const std::vector<Tour>& local_tours,
                 EdgeWeightType convention);

// Proper crossing of open segments; shared endpoints do not count, collinear
// overlap does.
bool segments_intersect(Point a1, Point a2, Point b1, Point b2);

// 2-opt uncrossing sweeps until no crossings remain or pass_cap is reached.
// Decisions use exact geometry; the result length is under `convention`.
Tour remove_cross_edges(const std::vector<City>& cities, const Tour& tour,
                        EdgeWeightType convention, int pass_cap = 10, bool* cap_hit = nullptr);

struct SolveConfig {
    AcoParams aco;
    ClusterConfig cluster;
    EdgeWeightType convention = EdgeWeightType::Euc2dRounded;
    bool per_class_cross_removal = false;  // mixture-only knob, off by default
};

struct PhaseTimings {
    double clustering = 0.0;
    double ordering = 0.0;
    double local_solve = 0.0;
    double stitching = 0.0;
    double repair = 0.0;
    double total = 0.0;
};

struct SolveResult {
    Tour tour;
    PhaseTimings timings;
    int num_classes = 0;
    bool border_reuse_fallback = false;
    bool sweep_cap_hit = false;
    bool cross_pass_cap_hit = false;
};

SolveResult solve(const Instance& instance, Algorithm algorithm, const SolveConfig& config,
                  const SeedSet* seeds = nullptr);

// TSPLIB-style TOUR section (1-based ids) plus a sidecar comment with length
// and distance convention.
void write_tour(const Tour& tour, const Instance& instance, std::ostream& out);

}  // namespace acoslc
