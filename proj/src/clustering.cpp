#include "acoslc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace acoslc {

namespace {

Point city_point(const City& c) { return {c.x, c.y}; }

double member_distance(const std::vector<City>& cities, int id, const Point& centroid) {
    return distance(city_point(cities[id]), centroid);
}

Point mean_point(const std::vector<City>& cities, const std::vector<int>& ids) {
    Point m;
    for (int id : ids) {
        m.x += cities[id].x;
        m.y += cities[id].y;
    }
    const double n = static_cast<double>(ids.size());
    m.x /= n;
    m.y /= n;
    return m;
}

// Initial centroids: m distinct cities drawn from the working set.
std::vector<Point> random_centroids(const std::vector<City>& cities, const std::vector<int>& ids,
                                    int m, std::mt19937_64& rng) {
    std::vector<int> pool = ids;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Point> centroids;
    centroids.reserve(m);
    for (int i = 0; i < m; ++i) centroids.push_back(city_point(cities[pool[i]]));
    return centroids;
}

std::vector<ClassState> classes_from_centroids(const std::vector<Point>& centroids) {
    std::vector<ClassState> classes(centroids.size());
    for (size_t i = 0; i < centroids.size(); ++i) classes[i].centroid = centroids[i];
    return classes;
}

double entropy_or_zero(const ClassState& cls) {
    return cls.members.empty() ? 0.0 : std::log2(static_cast<double>(cls.members.size()));
}

void refresh_stats(const std::vector<City>& cities, ClassState& cls) {
    cls.entropy = entropy_or_zero(cls);
    if (cls.members.empty()) {
        cls.distortion = 0.0;
        cls.deviation = 0.0;
        return;
    }
    cls.distortion = distortion(cities, cls);
    cls.deviation = deviation(cities, cls);
}

}  // namespace

const char* to_string(Shape shape) {
    switch (shape) {
        case Shape::Spherical: return "SPHERICAL";
        case Shape::Chain: return "CHAIN";
        case Shape::Isolated: return "ISOLATED";
        default: return "UNKNOWN";
    }
}

std::vector<ClassState> assign_and_update(const std::vector<City>& cities,
                                          const std::vector<int>& ids,
                                          std::vector<ClassState> classes) {
    if (classes.empty()) throw std::invalid_argument("assign_and_update: no classes");
    for (ClassState& cls : classes) cls.members.clear();

    for (int id : ids) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < classes.size(); ++k) {
            const double d = member_distance(cities, id, classes[k].centroid);
            if (d < best_d) {  // ties keep the lowest class index
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        classes[best].members.push_back(id);
    }

    for (ClassState& cls : classes) {
        std::sort(cls.members.begin(), cls.members.end());
        if (!cls.members.empty()) cls.centroid = mean_point(cities, cls.members);
        // empty classes keep their previous centroid
    }
    return classes;
}

double distortion(const std::vector<City>& cities, const ClassState& cls) {
    if (cls.members.empty()) throw std::invalid_argument("distortion: empty class");
    double sum = 0.0;
    for (int id : cls.members) sum += member_distance(cities, id, cls.centroid);
    return sum / static_cast<double>(cls.members.size());
}

double deviation(const std::vector<City>& cities, const ClassState& cls) {
    if (cls.members.empty()) throw std::invalid_argument("deviation: empty class");
    const double d_mean = distortion(cities, cls);
    double sum = 0.0;
    for (int id : cls.members)
        sum += std::abs(member_distance(cities, id, cls.centroid) - d_mean);
    return sum / static_cast<double>(cls.members.size());
}

CompactSplit compact_region(const std::vector<City>& cities, const ClassState& cls, int p) {
    if (p < 0) throw std::invalid_argument("compact_region: p must be >= 0");
    CompactSplit split;
    if (cls.members.empty()) return split;
    const double d_mean = distortion(cities, cls);
    const double delta = deviation(cities, cls);
    const double radius = (d_mean + 3.0 * delta) / std::pow(4.0, p);
    for (int id : cls.members) {
        if (member_distance(cities, id, cls.centroid) <= radius)
            split.kept.push_back(id);
        else
            split.spilled.push_back(id);
    }
    return split;
}

double entropy_estimate(const ClassState& cls) {
    if (cls.members.empty()) throw std::invalid_argument("entropy_estimate: empty class");
    return std::log2(static_cast<double>(cls.members.size()));
}

bool entropy_converged(double h_prev, double h_next, double epsilon) {
    if (h_prev == 0.0) return h_next == 0.0;
    return std::abs(h_prev - h_next) / h_prev < epsilon;
}

LocalClusterResult local_cluster_3delta(const std::vector<City>& cities, std::vector<int> ids,
                                        int m, double epsilon, int p,
                                        const std::vector<Point>* seed_centroids,
                                        std::mt19937_64& rng, int sweep_cap) {
    if (m < 1) throw std::invalid_argument("local_cluster_3delta: m must be >= 1");
    if (static_cast<int>(ids.size()) < m)
        throw std::invalid_argument("local_cluster_3delta: m exceeds training-set size");

    std::vector<Point> centroids;
    if (seed_centroids) {
        if (static_cast<int>(seed_centroids->size()) < m)
            throw std::invalid_argument("local_cluster_3delta: fewer seed centroids than m");
        centroids.assign(seed_centroids->begin(), seed_centroids->begin() + m);
    } else {
        centroids = random_centroids(cities, ids, m, rng);
    }

    Partition part;
    part.p = p;
    part.active = classes_from_centroids(centroids);

    // Initial partition from the seed centroids.
    part.active = assign_and_update(cities, ids, part.active);
    std::vector<double> h_prev(part.active.size());
    for (size_t i = 0; i < part.active.size(); ++i) h_prev[i] = entropy_or_zero(part.active[i]);

    LocalClusterResult result;

    auto extract = [&](ClassState& cls) {
        // An empty class extracts nothing and is simply dropped.
        if (cls.members.empty()) return;
        CompactSplit split = compact_region(cities, cls, part.p);
        for (int id : cls.members) ids.erase(std::find(ids.begin(), ids.end(), id));
        part.residual.insert(part.residual.end(), split.spilled.begin(), split.spilled.end());
        if (!split.kept.empty()) {
            ClassState compact;
            compact.members = std::move(split.kept);
            compact.centroid = mean_point(cities, compact.members);
            refresh_stats(cities, compact);
            compact.stable = true;
            part.extracted.push_back(std::move(compact));
        }
    };

    int sweeps = 0;
    while (!part.active.empty()) {
        if (sweeps >= sweep_cap) {
            // Oscillating data: force-stabilize whatever is left.
            result.hit_sweep_cap = true;
            for (ClassState& cls : part.active) extract(cls);
            part.active.clear();
            break;
        }
        part.active = assign_and_update(cities, ids, part.active);
        ++sweeps;

        std::vector<ClassState> survivors;
        std::vector<double> survivor_h;
        for (size_t i = 0; i < part.active.size(); ++i) {
            const double h_next = entropy_or_zero(part.active[i]);
            part.active[i].entropy = h_next;
            if (entropy_converged(h_prev[i], h_next, epsilon)) {
                part.active[i].stable = true;
                extract(part.active[i]);
            } else {
                survivors.push_back(std::move(part.active[i]));
                survivor_h.push_back(h_next);
            }
        }
        part.active = std::move(survivors);  // re-pack after removals
        h_prev = std::move(survivor_h);
    }

    result.compact = std::move(part.extracted);
    result.residual = std::move(part.residual);
    std::sort(result.residual.begin(), result.residual.end());
    return result;
}

SlcResult slc(const std::vector<City>& cities, const std::vector<int>& ids, int m0,
              double epsilon, const SeedSet* seeds, std::mt19937_64& rng, int sweep_cap) {
    if (seeds) m0 = static_cast<int>(seeds->centroids.size());
    if (m0 < 1) throw std::invalid_argument("slc: m0 must be >= 1");

    SlcResult result;
    std::vector<int> working = ids;
    int m = m0;
    int p = 0;
    const int rounds = static_cast<int>(std::floor(std::log2(static_cast<double>(m0))));

    for (int round = 0; round < rounds && !working.empty(); ++round) {
        const int m_eff = std::min<int>(m, static_cast<int>(working.size()));
        const std::vector<Point>* round_seeds =
            (round == 0 && seeds) ? &seeds->centroids : nullptr;
        LocalClusterResult sub = local_cluster_3delta(cities, working, m_eff, epsilon, p,
                                                      round_seeds, rng, sweep_cap);
        result.hit_sweep_cap = result.hit_sweep_cap || sub.hit_sweep_cap;
        for (ClassState& cls : sub.compact) result.classes.push_back(std::move(cls));
        working = std::move(sub.residual);
        m = m / 2;
        p += 1;
    }

    // Whatever survived every round becomes singleton classes.
    for (int id : working) {
        ClassState single;
        single.members = {id};
        single.centroid = city_point(cities[id]);
        refresh_stats(cities, single);
        single.stable = true;
        result.classes.push_back(std::move(single));
    }
    return result;
}

std::array<double, 8> sector_percentages(const std::vector<City>& cities, const ClassState& cls) {
    if (cls.members.empty()) throw std::invalid_argument("sector_percentages: empty class");
    std::array<int, 8> counts{};
    for (int id : cls.members) {
        const double u = cities[id].x - cls.centroid.x;
        const double v = cities[id].y - cls.centroid.y;
        // Half-open 45-degree sectors; a boundary point belongs to the sector
        // counterclockwise of the boundary ray. Sign comparisons keep the
        // classification exact for exact coordinates.
        int sector;
        if (u == 0.0 && v == 0.0) sector = 0;                  // centroid-coincident
        else if (u > 0.0 && v >= 0.0 && v < u) sector = 0;     // [0, 45)
        else if (v > 0.0 && u > 0.0 && v >= u) sector = 1;     // [45, 90)
        else if (v > 0.0 && u <= 0.0 && -u < v) sector = 2;    // [90, 135)
        else if (v > 0.0 && u < 0.0 && -u >= v) sector = 3;    // [135, 180)
        else if (v <= 0.0 && u < 0.0 && -v < -u) sector = 4;   // [180, 225)
        else if (v < 0.0 && u < 0.0 && -v >= -u) sector = 5;   // [225, 270)
        else if (v < 0.0 && u >= 0.0 && u < -v) sector = 6;    // [270, 315)
        else sector = 7;                                       // [315, 360)
        ++counts[sector];
    }
    std::array<double, 8> fractions{};
    const double n = static_cast<double>(cls.members.size());
    for (int s = 0; s < 8; ++s) fractions[s] = counts[s] / n;
    return fractions;
}

bool is_spherical(const std::vector<City>& cities, const ClassState& cls, double sector_floor) {
    if (static_cast<int>(cls.members.size()) < 8) return false;  // chain candidate
    const auto fractions = sector_percentages(cities, cls);
    return *std::min_element(fractions.begin(), fractions.end()) >= sector_floor;
}

ChainResult chain_cluster(const std::vector<City>& cities, const std::vector<int>& ids,
                          double trace_threshold, double neighbor_factor) {
    if (ids.empty()) throw std::invalid_argument("chain_cluster: empty set");

    // Unify: min-max normalize to the unit square. Degenerate axes collapse to 0.
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (int id : ids) {
        min_x = std::min(min_x, cities[id].x);
        max_x = std::max(max_x, cities[id].x);
        min_y = std::min(min_y, cities[id].y);
        max_y = std::max(max_y, cities[id].y);
    }
    const double span_x = max_x - min_x, span_y = max_y - min_y;
    std::vector<Point> norm(cities.size());
    for (int id : ids) {
        norm[id].x = span_x > 0.0 ? (cities[id].x - min_x) / span_x : 0.0;
        norm[id].y = span_y > 0.0 ? (cities[id].y - min_y) / span_y : 0.0;
    }

    std::vector<int> remaining = ids;
    std::vector<std::vector<int>> grown;

    while (!remaining.empty()) {
        Point centroid{};
        for (int id : remaining) {
            centroid.x += norm[id].x;
            centroid.y += norm[id].y;
        }
        centroid.x /= static_cast<double>(remaining.size());
        centroid.y /= static_cast<double>(remaining.size());

        // Seed: the point farthest from the centroid of what is left.
        size_t seed_pos = 0;
        double seed_d = -1.0;
        for (size_t i = 0; i < remaining.size(); ++i) {
            const double d = distance(norm[remaining[i]], centroid);
            if (d > seed_d) {
                seed_d = d;
                seed_pos = i;
            }
        }
        std::vector<int> cls = {remaining[seed_pos]};
        remaining.erase(remaining.begin() + seed_pos);

        // Running sums for O(1) trace updates.
        double sx = norm[cls[0]].x, sy = norm[cls[0]].y;
        double sxx = sx * sx, syy = sy * sy;

        // Distance from each remaining point to the class (single linkage).
        std::vector<double> to_class(remaining.size());
        for (size_t i = 0; i < remaining.size(); ++i)
            to_class[i] = distance(norm[remaining[i]], norm[cls[0]]);

        while (!remaining.empty()) {
            size_t best = 0;
            for (size_t i = 1; i < remaining.size(); ++i)
                if (to_class[i] < to_class[best]) best = i;

            const Point cand = norm[remaining[best]];
            const double n1 = static_cast<double>(cls.size() + 1);
            const double nsx = sx + cand.x, nsy = sy + cand.y;
            const double nsxx = sxx + cand.x * cand.x, nsyy = syy + cand.y * cand.y;
            const double trace = (nsxx / n1 - (nsx / n1) * (nsx / n1)) +
                                 (nsyy / n1 - (nsy / n1) * (nsy / n1));
            if (trace > trace_threshold) break;

            cls.push_back(remaining[best]);
            sx = nsx;
            sy = nsy;
            sxx = nsxx;
            syy = nsyy;
            remaining.erase(remaining.begin() + best);
            to_class.erase(to_class.begin() + best);
            for (size_t i = 0; i < remaining.size(); ++i)
                to_class[i] = std::min(to_class[i], distance(norm[remaining[i]], cand));
        }
        grown.push_back(std::move(cls));
    }

    // Neighbor merge: classes whose minimum inter-point distance is within
    // neighbor_factor times the mean nearest-neighbor distance of the set.
    double mean_nn = 0.0;
    if (ids.size() > 1) {
        for (int a : ids) {
            double nn = std::numeric_limits<double>::infinity();
            for (int b : ids)
                if (b != a) nn = std::min(nn, distance(norm[a], norm[b]));
            mean_nn += nn;
        }
        mean_nn /= static_cast<double>(ids.size());
    }
    const double merge_radius = neighbor_factor * mean_nn;

    const size_t g = grown.size();
    std::vector<size_t> parent(g);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t a = 0; a < g; ++a) {
        for (size_t b = a + 1; b < g; ++b) {
            double min_d = std::numeric_limits<double>::infinity();
            for (int ia : grown[a])
                for (int ib : grown[b]) min_d = std::min(min_d, distance(norm[ia], norm[ib]));
            if (min_d <= merge_radius) parent[find(a)] = find(b);
        }
    }

    std::vector<std::vector<int>> merged(g);
    for (size_t a = 0; a < g; ++a) {
        auto& bucket = merged[find(a)];
        bucket.insert(bucket.end(), grown[a].begin(), grown[a].end());
    }

    ChainResult result;
    result.pre_merge = grown;
    for (auto& bucket : merged) {
        if (bucket.empty()) continue;
        if (bucket.size() == 1) {
            result.isolated.push_back(bucket.front());
            continue;
        }
        ClassState cls;
        std::sort(bucket.begin(), bucket.end());
        cls.members = std::move(bucket);
        cls.centroid = mean_point(cities, cls.members);
        refresh_stats(cities, cls);
        cls.shape = Shape::Chain;
        result.chains.push_back(std::move(cls));
    }
    std::sort(result.isolated.begin(), result.isolated.end());
    return result;
}

MixtureResult slc_mixture(const std::vector<City>& cities, const std::vector<int>& ids,
                          const ClusterConfig& config, const SeedSet* seeds) {
    if (config.epsilon <= 0 || config.epsilon >= 1 || config.sector_floor <= 0 ||
        config.sector_floor > 0.125 || config.trace_threshold <= 0)
        throw std::invalid_argument("slc_mixture: config violates its ranges");
    std::mt19937_64 rng(config.rng_seed);
    const int m0 = config.m0 > 0 ? config.m0 : default_m0(static_cast<int>(ids.size()));
    SlcResult base = slc(cities, ids, m0, config.epsilon, seeds, rng, config.sweep_cap);

    MixtureResult result;
    result.hit_sweep_cap = base.hit_sweep_cap;
    std::vector<int> residual;
    for (ClassState& cls : base.classes) {
        if (is_spherical(cities, cls, config.sector_floor)) {
            cls.shape = Shape::Spherical;
            result.classes.push_back(std::move(cls));
        } else {
            residual.insert(residual.end(), cls.members.begin(), cls.members.end());
        }
    }

    if (!residual.empty()) {
        std::sort(residual.begin(), residual.end());
        ChainResult chains = chain_cluster(cities, residual, config.trace_threshold,
                                           config.chain_neighbor_factor);
        for (ClassState& cls : chains.chains) result.classes.push_back(std::move(cls));
        for (int id : chains.isolated) {
            ClassState single;
            single.members = {id};
            single.centroid = city_point(cities[id]);
            refresh_stats(cities, single);
            single.shape = Shape::Isolated;
            result.classes.push_back(std::move(single));
        }
    }
    return result;
}

std::vector<ClassState> kmeans_partition(const std::vector<City>& cities,
                                         const std::vector<int>& ids, int k,
                                         const SeedSet* seeds, std::mt19937_64& rng,
                                         int sweep_cap) {
    if (seeds) k = static_cast<int>(seeds->centroids.size());
    k = std::min<int>(k, static_cast<int>(ids.size()));
    if (k < 1) throw std::invalid_argument("kmeans_partition: k must be >= 1");

    std::vector<Point> centroids =
        seeds ? seeds->centroids : random_centroids(cities, ids, k, rng);
    centroids.resize(k);
    std::vector<ClassState> classes = classes_from_centroids(centroids);

    std::vector<std::vector<int>> prev_members;
    for (int sweep = 0; sweep < sweep_cap; ++sweep) {
        classes = assign_and_update(cities, ids, classes);
        std::vector<std::vector<int>> members;
        for (const ClassState& cls : classes) members.push_back(cls.members);
        if (members == prev_members) break;
        prev_members = std::move(members);
    }

    std::vector<ClassState> out;
    for (ClassState& cls : classes) {
        if (cls.members.empty()) continue;
        refresh_stats(cities, cls);
        out.push_back(std::move(cls));
    }
    return out;
}

int default_m0(int n) {
    return std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
}

void dump_partition(const std::vector<ClassState>& classes, std::ostream& out) {
    for (size_t i = 0; i < classes.size(); ++i) {
        const ClassState& cls = classes[i];
        out << "class " << i << " " << to_string(cls.shape) << " centroid "
            << cls.centroid.x << " " << cls.centroid.y << " members";
        for (int id : cls.members) out << " " << id;
        out << "\n";
    }
}

}  // namespace acoslc
