#include "acoslc/aco.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace acoslc {

namespace {

constexpr double kTauFloor = 1e-12;

double heuristic(double d) {
    return 1.0 / std::max(d, std::numeric_limits<double>::epsilon());
}

// tau^alpha * (1/d)^beta for every pair, rebuilt once per iteration so ants
// share the pow() work.
struct ChoiceTable {
    int n = 0;
    std::vector<double> w;

    ChoiceTable(const DistanceMatrix& dist, const PheromoneState& state, const AcoParams& params)
        : n(dist.size()), w(static_cast<size_t>(n) * n, 0.0) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double v = std::pow(state.tau(i, j), params.alpha) *
                                 std::pow(heuristic(dist(i, j)), params.beta);
                w[static_cast<size_t>(i) * n + j] = v;
                w[static_cast<size_t>(j) * n + i] = v;
            }
        }
    }

    double operator()(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
};

Tour construct_with_table(const DistanceMatrix& dist, const ChoiceTable& choice,
                          const WindowSets* windows, std::optional<Edge> forced_edge,
                          std::mt19937_64& rng) {
    const int n = dist.size();
    std::vector<char> visited(n, 0);
    std::vector<int> order;
    order.reserve(n);

    std::uniform_int_distribution<int> start_dist(0, n - 1);
    int current = start_dist(rng);
    visited[current] = 1;
    order.push_back(current);

    std::vector<int> candidates;
    std::vector<double> weights;
    candidates.reserve(n);
    weights.reserve(n);

    while (static_cast<int>(order.size()) < n) {
        // Forced edge has zero construction cost: taking it is the roulette
        // limit of (1/d)^beta as d -> 0, so it wins whenever it is reachable.
        if (forced_edge) {
            int partner = -1;
            if (current == forced_edge->u && !visited[forced_edge->v]) partner = forced_edge->v;
            if (current == forced_edge->v && !visited[forced_edge->u]) partner = forced_edge->u;
            if (partner >= 0) {
                visited[partner] = 1;
                order.push_back(partner);
                current = partner;
                continue;
            }
        }

        candidates.clear();
        if (windows) {
            for (int j : windows->nearest[current])
                if (!visited[j]) candidates.push_back(j);
        }
        if (candidates.empty()) {  // no windows, or window exhausted
            for (int j = 0; j < n; ++j)
                if (!visited[j]) candidates.push_back(j);
        }

        weights.clear();
        double total = 0.0;
        for (int j : candidates) {
            const double w = choice(current, j);
            weights.push_back(w);
            total += w;
        }

        int next = candidates.front();
        if (total > 0.0 && std::isfinite(total)) {
            std::uniform_real_distribution<double> pick_dist(0.0, total);
            double pick = pick_dist(rng);
            for (size_t k = 0; k < candidates.size(); ++k) {
                pick -= weights[k];
                if (pick <= 0.0) {
                    next = candidates[k];
                    break;
                }
            }
        } else {
            // All weights underflowed; fall back to a uniform choice.
            std::uniform_int_distribution<size_t> uni(0, candidates.size() - 1);
            next = candidates[uni(rng)];
        }

        visited[next] = 1;
        order.push_back(next);
        current = next;
    }

    Tour tour;
    tour.order = std::move(order);

    if (forced_edge && forced_edge->u != forced_edge->v) {
        // Safety net: if construction somehow missed the edge, splice it back
        // with one 2-opt move (reverse the span between the two endpoints).
        const int u = forced_edge->u, v = forced_edge->v;
        auto pos = [&](int city) {
            return static_cast<int>(std::find(tour.order.begin(), tour.order.end(), city) -
                                    tour.order.begin());
        };
        const int pu = pos(u), pv = pos(v);
        const bool adjacent = (pu + 1) % n == pv || (pv + 1) % n == pu;
        if (!adjacent) {
            const int lo = std::min(pu, pv), hi = std::max(pu, pv);
            std::reverse(tour.order.begin() + lo + 1, tour.order.begin() + hi + 1);
        }
    }

    tour.length = tour_length(tour.order, dist);
    return tour;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int little_window_size(int n) {
    if (n < 21) return std::min(n - 1, 8);
    if (n < 101) return std::min(n - 1, 9);
    if (n < 144) return std::min(n - 1, 13);
    if (n < 1000) return std::min(n - 1, 19);
    if (n < 4000) return std::min(n - 1, 100);
    return n / 10;
}

WindowSets build_windows(const DistanceMatrix& dist, int w) {
    const int n = dist.size();
    WindowSets sets;
    sets.nearest.resize(n);
    std::vector<int> others;
    others.reserve(n > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) {
        others.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        const int k = std::min<int>(w, static_cast<int>(others.size()));
        std::partial_sort(others.begin(), others.begin() + k, others.end(),
                          [&](int a, int b) {
                              if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
                              return a < b;
                          });
        sets.nearest[i].assign(others.begin(), others.begin() + k);
    }
    return sets;
}

double tour_length(const std::vector<int>& order, const DistanceMatrix& dist) {
    const size_t n = order.size();
    if (n < 2) return 0.0;
    double len = 0.0;
    for (size_t i = 0; i < n; ++i) len += dist(order[i], order[(i + 1) % n]);
    return len;
}

Tour construct_tour(const DistanceMatrix& dist, const PheromoneState& state,
                    const AcoParams& params, const WindowSets* windows,
                    std::optional<Edge> forced_edge, std::mt19937_64& rng) {
    if (dist.size() < 2) throw std::invalid_argument("construct_tour needs at least 2 cities");
    ChoiceTable choice(dist, state, params);
    return construct_with_table(dist, choice, windows, forced_edge, rng);
}

void deposit_and_evaporate(PheromoneState& state, const std::vector<Tour>& tours,
                           const AcoParams& params) {
    if (tours.empty()) throw std::invalid_argument("deposit_and_evaporate: no tours");
    const int n = state.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            state.set_tau(i, j, std::max(kTauFloor, (1.0 - params.rho) * state.tau(i, j)));

    for (const Tour& tour : tours) {
        if (tour.order.size() < 2 || tour.length <= 0.0) continue;
        const double deposit = params.q / tour.length;
        const size_t m = tour.order.size();
        for (size_t k = 0; k < m; ++k) {
            const int a = tour.order[k];
            const int b = tour.order[(k + 1) % m];
            state.set_tau(a, b, state.tau(a, b) + deposit);
        }
    }
}

Tour run_aco(const DistanceMatrix& dist, const AcoParams& params, const AcoOptions& options,
             RunStats* stats) {
    const int n = dist.size();
    if (n == 0) throw std::invalid_argument("run_aco: empty subproblem");
    if (params.alpha < 0 || params.beta < 0 || params.rho <= 0 || params.rho >= 1 ||
        params.q <= 0 || params.t_max < 1 || params.epsilon < 0 || params.epsilon >= 1)
        throw std::invalid_argument("run_aco: parameters violate their ranges");
    if (stats) *stats = RunStats{};

    if (n == 1) return Tour{{0}, 0.0};
    if (n == 2) return Tour{{0, 1}, 2.0 * dist(0, 1)};

    const int ants = params.ant_count > 0
                         ? params.ant_count
                         : std::max(1, static_cast<int>(n / 1.5));

    PheromoneState state(n);
    state.best_tour_so_far.length = std::numeric_limits<double>::infinity();

    double prev_iter_best = -1.0;
    std::vector<Tour> tours(ants);

    for (int t = 1; t <= params.t_max; ++t) {
        state.iteration = t;
        const ChoiceTable choice(dist, state, params);
        double iter_best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < ants; ++k) {
            std::mt19937_64 ant_rng(mix_seed(params.rng_seed, static_cast<std::uint64_t>(t), k));
            tours[k] = construct_with_table(dist, choice, options.windows,
                                            options.forced_edge, ant_rng);
            if (tours[k].length < iter_best) iter_best = tours[k].length;
            if (tours[k].length < state.best_tour_so_far.length) state.best_tour_so_far = tours[k];
        }
        state.iter_best_length = iter_best;
        deposit_and_evaporate(state, tours, params);

        if (stats) stats->iterations = t;
        if (prev_iter_best > 0.0 &&
            std::abs(prev_iter_best - iter_best) / prev_iter_best <= params.epsilon) {
            if (stats) stats->converged = true;
            break;
        }
        prev_iter_best = iter_best;
    }
    return state.best_tour_so_far;
}

}  // namespace acoslc
