#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "acoslc/instance.hpp"

namespace acoslc {

enum class Shape { Unknown, Spherical, Chain, Isolated };

const char* to_string(Shape shape);

struct ClassState {
    std::vector<int> members;  // city ids, kept sorted
    Point centroid;
    double distortion = 0.0;  // D: mean member distance to centroid
    double deviation = 0.0;   // delta: mean |d(x,c) - D|
    double entropy = 0.0;     // log2 |members|
    bool stable = false;
    Shape shape = Shape::Unknown;
};

struct Partition {
    std::vector<ClassState> active;
    std::vector<ClassState> extracted;  // phi(T), the compact classes
    std::vector<int> residual;          // sigma(T)
    int p = 0;                          // radius-shrink exponent
};

struct ClusterConfig {
    int m0 = 0;                          // 0 -> max(2, round(sqrt(N)))
    double epsilon = 1e-3;               // entropy-convergence stop threshold
    double sector_floor = 0.058;         // spherical marker threshold
    double trace_threshold = 5e-4;       // chain growth cap (normalized coords)
    double chain_neighbor_factor = 2.0;  // chain merge radius, in mean-NN units
    std::uint64_t rng_seed = 1;
    int sweep_cap = 500;                 // assign/update sweeps per subroutine call
};

// One Lloyd sweep over the ids: assign each to the nearest centroid (ties to
// the lowest class index), then recompute centroids as member means. Classes
// left empty keep their previous centroid.
std::vector<ClassState> assign_and_update(const std::vector<City>& cities,
                                          const std::vector<int>& ids,
                                          std::vector<ClassState> classes);

double distortion(const std::vector<City>& cities, const ClassState& cls);
double deviation(const std::vector<City>& cities, const ClassState& cls);

struct CompactSplit {
    std::vector<int> kept;
    std::vector<int> spilled;
};

// Members within radius (D + 3*delta) / 4^p of the centroid.
CompactSplit compact_region(const std::vector<City>& cities, const ClassState& cls, int p);

double entropy_estimate(const ClassState& cls);  // log2 |members|

// Relative entropy change below epsilon. h_prev == 0 is defined as converged
// iff h_next == 0.
bool entropy_converged(double h_prev, double h_next, double epsilon);

struct LocalClusterResult {
    std::vector<ClassState> compact;  // phi(T)
    std::vector<int> residual;        // sigma(T)
    bool hit_sweep_cap = false;
};

// Local clustering with compact-region extraction: iterate Lloyd sweeps, mark
// classes stable on entropy convergence, extract each stable class's compact
// region and retire the class, until none remain.
LocalClusterResult local_cluster_3delta(const std::vector<City>& cities, std::vector<int> ids,
                                        int m, double epsilon, int p,
                                        const std::vector<Point>* seed_centroids,
                                        std::mt19937_64& rng, int sweep_cap = 500);

struct SlcResult {
    std::vector<ClassState> classes;  // CLS; Num == classes.size()
    bool hit_sweep_cap = false;
};

// Outer loop: floor(log2 m0) rounds of local_cluster_3delta over the shrinking
// residual, halving m and incrementing p each round; leftover residual points
// become singleton classes. Seeds override both m0 and the initial centroids.
SlcResult slc(const std::vector<City>& cities, const std::vector<int>& ids, int m0,
              double epsilon, const SeedSet* seeds, std::mt19937_64& rng, int sweep_cap = 500);

// Fractions of members in the 8 half-open 45-degree sectors around the
// centroid (N-S, W-E and the two diagonals). Boundary points go to the
// counterclockwise-next sector; a point on the centroid counts in sector 0.
std::array<double, 8> sector_percentages(const std::vector<City>& cities, const ClassState& cls);

// Min sector fraction >= sector_floor. Classes under 8 members skip the marker
// and are treated as chain candidates.
bool is_spherical(const std::vector<City>& cities, const ClassState& cls, double sector_floor);

struct ChainResult {
    std::vector<ClassState> chains;
    std::vector<int> isolated;
    // Growth-stage classes before neighbor merging; each satisfies the trace
    // cap or is a singleton. Kept for inspection and property tests.
    std::vector<std::vector<int>> pre_merge;
};

// Seed-first growth under a covariance-trace cap on unit-square-normalized
// coordinates, then transitive merging of neighbor classes. Classes that are
// still singletons after merging are isolated points.
ChainResult chain_cluster(const std::vector<City>& cities, const std::vector<int>& ids,
                          double trace_threshold, double neighbor_factor = 2.0);

struct MixtureResult {
    std::vector<ClassState> classes;  // shapes labeled; isolated points are singletons
    bool hit_sweep_cap = false;
};

// SLC, keep the spherical classes, chain-cluster everything else.
MixtureResult slc_mixture(const std::vector<City>& cities, const std::vector<int>& ids,
                          const ClusterConfig& config, const SeedSet* seeds);

// Plain Lloyd iteration to a fixed point (baseline partition, no extraction).
// Empty classes are dropped from the result.
std::vector<ClassState> kmeans_partition(const std::vector<City>& cities,
                                         const std::vector<int>& ids, int k,
                                         const SeedSet* seeds, std::mt19937_64& rng,
                                         int sweep_cap = 500);

int default_m0(int n);

// Debug dump, one line per class: label, shape, centroid, member ids.
void dump_partition(const std::vector<ClassState>& classes, std::ostream& out);

}  // namespace acoslc
