#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace acoslc {

// Symmetric distance table over local indices 0..n-1. Subproblems (city
// subsets, centroid graphs) are mapped onto local indices by the caller.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }

    void set(int i, int j, double v) {
        d_[static_cast<size_t>(i) * n_ + j] = v;
        d_[static_cast<size_t>(j) * n_ + i] = v;
    }

  private:
    int n_ = 0;
    std::vector<double> d_;
};

struct AcoParams {
    double alpha = 1.0;    // pheromone exponent
    double beta = 10.0;    // heuristic exponent
    double rho = 0.4;      // evaporation rate, in (0,1)
    double q = 300.0;      // deposit constant
    int t_max = 1000;      // iteration cap
    double epsilon = 1e-3; // route-length convergence threshold
    int ant_count = 0;     // 0 -> floor(n / 1.5), minimum 1
    std::uint64_t rng_seed = 1;
};

struct Tour {
    std::vector<int> order;  // cyclic permutation
    double length = 0.0;     // includes the closing edge
};

struct Edge {
    int u = -1;
    int v = -1;
};

// Per-city candidate list: the w nearest other cities, ascending by distance.
struct WindowSets {
    std::vector<std::vector<int>> nearest;
};

class PheromoneState {
  public:
    explicit PheromoneState(int n) : n_(n), tau_(static_cast<size_t>(n) * n, 1.0) {}

    int size() const { return n_; }
    double tau(int i, int j) const { return tau_[static_cast<size_t>(i) * n_ + j]; }

    void set_tau(int i, int j, double v) {
        tau_[static_cast<size_t>(i) * n_ + j] = v;
        tau_[static_cast<size_t>(j) * n_ + i] = v;
    }

    int iteration = 0;
    Tour best_tour_so_far;
    double iter_best_length = 0.0;  // L_t

  private:
    int n_ = 0;
    std::vector<double> tau_;
};

// Window size rule by neighbor count n.
int little_window_size(int n);

WindowSets build_windows(const DistanceMatrix& dist, int w);

double tour_length(const std::vector<int>& order, const DistanceMatrix& dist);

// One ant: random start, roulette over tau^alpha * (1/d)^beta. When windows
// are given, candidates are the unvisited window members, widening to all
// unvisited cities when the window is exhausted. A forced edge is treated as
// zero-cost during construction and the returned tour always contains it.
Tour construct_tour(const DistanceMatrix& dist, const PheromoneState& state,
                    const AcoParams& params, const WindowSets* windows,
                    std::optional<Edge> forced_edge, std::mt19937_64& rng);

// Ant-cycle global update: evaporate by (1-rho), each ant deposits q/L on its
// tour edges. Trails are floored at 1e-12.
void deposit_and_evaporate(PheromoneState& state, const std::vector<Tour>& tours,
                           const AcoParams& params);

struct AcoOptions {
    const WindowSets* windows = nullptr;
    std::optional<Edge> forced_edge;
};

struct RunStats {
    int iterations = 0;         // iterations actually executed
    bool converged = false;     // stopped by the length criterion (not t_max)
};

// Full run: stops at the first t with |L_t - L_{t+1}| / L_t <= epsilon, where
// L_t is the iteration-best length, or at t_max. Returns the best tour seen.
Tour run_aco(const DistanceMatrix& dist, const AcoParams& params, const AcoOptions& options = {},
             RunStats* stats = nullptr);

// Derived seed for sub-runs (per ant, per class); splitmix64-style mixing.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace acoslc
