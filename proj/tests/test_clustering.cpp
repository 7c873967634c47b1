#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <doctest.h>

#include "acoslc/clustering.hpp"
#include "oracles.hpp"

using namespace acoslc;

namespace {

std::vector<City> cities_from(const std::vector<Point>& pts) {
    std::vector<City> cities;
    cities.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) cities.push_back({static_cast<int>(i), pts[i].x, pts[i].y});
    return cities;
}

std::vector<int> all_ids(const std::vector<City>& cities) {
    std::vector<int> ids(cities.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

ClassState whole_class(const std::vector<City>& cities) {
    ClassState cls;
    cls.members = all_ids(cities);
    Point mean{};
    for (const City& c : cities) {
        mean.x += c.x;
        mean.y += c.y;
    }
    mean.x /= static_cast<double>(cities.size());
    mean.y /= static_cast<double>(cities.size());
    cls.centroid = mean;
    return cls;
}

// Independent Eq.-style oracle used to cross-check extraction radii.
struct RadiusOracle {
    double mean_dist = 0, mean_abs_dev = 0;
    RadiusOracle(const std::vector<City>& cities, const std::vector<int>& ids, Point c) {
        std::vector<double> d;
        for (int id : ids) d.push_back(std::hypot(cities[id].x - c.x, cities[id].y - c.y));
        mean_dist = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
        for (double v : d) mean_abs_dev += std::abs(v - mean_dist);
        mean_abs_dev /= static_cast<double>(d.size());
    }
    double radius(int p) const { return (mean_dist + 3 * mean_abs_dev) / std::pow(4.0, p); }
};

// Points on a circle; with evenly spaced angles the centroid is the center.
std::vector<City> circle_cities(int n, double radius = 1.0) {
    std::vector<City> cities;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * i / n;
        cities.push_back({i, radius * std::cos(a), radius * std::sin(a)});
    }
    return cities;
}

bool members_cover(const std::vector<ClassState>& classes, const std::vector<int>& residual,
                   const std::vector<int>& universe) {
    std::multiset<int> got(residual.begin(), residual.end());
    for (const ClassState& cls : classes) got.insert(cls.members.begin(), cls.members.end());
    return got == std::multiset<int>(universe.begin(), universe.end());
}

}  // namespace

TEST_CASE("assign_and_update basic behavior") {
    SUBCASE("single class is a fixed point") {
        const auto cities = cities_from({{0, 0}, {0, 1}});
        std::vector<ClassState> classes(1);
        classes[0].centroid = {0, 0.5};
        classes = assign_and_update(cities, all_ids(cities), classes);
        CHECK(classes[0].members == std::vector<int>{0, 1});
        CHECK(classes[0].centroid.x == 0);
        CHECK(classes[0].centroid.y == 0.5);
    }
    SUBCASE("symmetric split lands centroids on the points") {
        const auto cities = cities_from({{-5, 0}, {5, 0}});
        std::vector<ClassState> classes(2);
        classes[0].centroid = {-1, 0};
        classes[1].centroid = {1, 0};
        classes = assign_and_update(cities, all_ids(cities), classes);
        CHECK(classes[0].members == std::vector<int>{0});
        CHECK(classes[1].members == std::vector<int>{1});
        CHECK(classes[0].centroid.x == -5);
        CHECK(classes[1].centroid.x == 5);
    }
    SUBCASE("well-separated gaussians: assignment matches the generator") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> noise(0.0, 0.5);
        std::vector<City> cities;
        std::vector<int> label;
        for (int i = 0; i < 200; ++i) {
            const int comp = i % 2;
            const double mx = comp == 0 ? 0.0 : 20.0;
            cities.push_back({i, mx + noise(rng), noise(rng)});
            label.push_back(comp);
        }
        std::vector<ClassState> classes(2);
        classes[0].centroid = {1, 0};   // near the true means
        classes[1].centroid = {19, 0};
        classes = assign_and_update(cities, all_ids(cities), classes);
        for (int k = 0; k < 2; ++k)
            for (int id : classes[k].members) CHECK(label[id] == k);
    }
    SUBCASE("empty class keeps its previous centroid") {
        const auto cities = cities_from({{0, 0}, {1, 0}});
        std::vector<ClassState> classes(2);
        classes[0].centroid = {0.4, 0};
        classes[1].centroid = {100, 100};  // captures nothing
        classes = assign_and_update(cities, all_ids(cities), classes);
        CHECK(classes[1].members.empty());
        CHECK(classes[1].centroid.x == 100);
    }
}

TEST_CASE("distortion") {
    SUBCASE("singleton is 0") {
        const auto cities = cities_from({{3, 4}});
        ClassState cls = whole_class(cities);
        CHECK(distortion(cities, cls) == 0);
    }
    SUBCASE("symmetric pair") {
        const auto cities = cities_from({{-1, 0}, {1, 0}});
        ClassState cls = whole_class(cities);
        CHECK(distortion(cities, cls) == 1);
    }
    SUBCASE("unit circle has distortion 1") {
        const auto cities = circle_cities(1000);
        ClassState cls = whole_class(cities);
        CHECK(distortion(cities, cls) == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("empty class is an error") {
        const auto cities = cities_from({{0, 0}});
        CHECK_THROWS_AS(distortion(cities, ClassState{}), std::invalid_argument);
    }
}

TEST_CASE("deviation") {
    SUBCASE("equidistant members give 0") {
        const auto cities = circle_cities(8);
        ClassState cls = whole_class(cities);
        CHECK(deviation(cities, cls) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("hand-computed three-point case: D=2/3, delta=4/9") {
        const auto cities = cities_from({{-1, 0}, {1, 0}, {0, 0}});
        ClassState cls = whole_class(cities);
        CHECK(distortion(cities, cls) == doctest::Approx(2.0 / 3.0));
        CHECK(deviation(cities, cls) == doctest::Approx(4.0 / 9.0));
        const RadiusOracle oracle(cities, cls.members, cls.centroid);
        CHECK(deviation(cities, cls) == doctest::Approx(oracle.mean_abs_dev));
    }
    SUBCASE("singleton is 0") {
        const auto cities = cities_from({{7, 7}});
        CHECK(deviation(cities, whole_class(cities)) == 0);
    }
}

TEST_CASE("compact_region") {
    SUBCASE("p=0 keeps everything within D+3delta") {
        const auto cities = circle_cities(100);
        ClassState cls = whole_class(cities);
        const CompactSplit split = compact_region(cities, cls, 0);
        CHECK(split.spilled.empty());
        CHECK(split.kept.size() == 100);
    }
    SUBCASE("unit circle at p=1: radius 1/4 keeps nothing") {
        const auto cities = circle_cities(64);
        ClassState cls = whole_class(cities);
        const CompactSplit split = compact_region(cities, cls, 1);
        CHECK(split.kept.empty());
        CHECK(split.spilled.size() == 64);
    }
    SUBCASE("gaussian-distance cloud keeps more than 99% at p=0") {
        // Distances to the center are normal(1, 0.1); the kept fraction is
        // Phi(3 * sqrt(2/pi)) ~ 0.9917 in the limit.
        std::mt19937_64 rng(1);
        std::normal_distribution<double> radius(1.0, 0.1);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        std::vector<City> cities;
        for (int i = 0; i < 10000; ++i) {
            const double r = radius(rng), a = angle(rng);
            cities.push_back({i, r * std::cos(a), r * std::sin(a)});
        }
        ClassState cls = whole_class(cities);
        const CompactSplit split = compact_region(cities, cls, 0);
        CHECK(static_cast<double>(split.kept.size()) / 10000.0 > 0.99);
    }
    SUBCASE("isotropic 2-D gaussian point cloud keeps about 98.2% at p=0") {
        // The radial distances of a planar gaussian are Rayleigh, not normal,
        // which puts the D+3delta mass at ~0.982; frozen from the summation
        // oracle.
        std::mt19937_64 rng(2);
        std::normal_distribution<double> coord(0.0, 1.0);
        std::vector<City> cities;
        for (int i = 0; i < 10000; ++i) cities.push_back({i, coord(rng), coord(rng)});
        ClassState cls = whole_class(cities);
        const CompactSplit split = compact_region(cities, cls, 0);
        const double kept = static_cast<double>(split.kept.size()) / 10000.0;
        CHECK(kept > 0.975);
        CHECK(kept < 0.99);
    }
    SUBCASE("monotone in p and partition-exact (property)") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 50; ++trial) {
            const auto cities = oracles::random_cities(30, 100 + trial);
            ClassState cls = whole_class(cities);
            std::vector<int> prev_kept = cls.members;
            for (int p = 0; p < 4; ++p) {
                const CompactSplit split = compact_region(cities, cls, p);
                CHECK(split.kept.size() + split.spilled.size() == cls.members.size());
                CHECK(std::includes(prev_kept.begin(), prev_kept.end(), split.kept.begin(),
                                    split.kept.end()));
                prev_kept = split.kept;
            }
        }
    }
}

TEST_CASE("entropy_estimate") {
    ClassState cls;
    cls.members.assign(8, 0);
    CHECK(entropy_estimate(cls) == 3);
    cls.members.assign(1, 0);
    CHECK(entropy_estimate(cls) == 0);
    cls.members.assign(130, 0);
    CHECK(entropy_estimate(cls) == doctest::Approx(7.022).epsilon(1e-3));
    cls.members.clear();
    CHECK_THROWS_AS(entropy_estimate(cls), std::invalid_argument);

    // strictly increasing in member count
    double prev = -1;
    for (int n = 1; n <= 64; ++n) {
        cls.members.assign(n, 0);
        const double h = entropy_estimate(cls);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("entropy_converged") {
    CHECK(entropy_converged(3, 3, 1e-9));
    CHECK_FALSE(entropy_converged(4, 3, 0.001));
    CHECK(entropy_converged(7.022, 7.000, 0.01));  // relative change ~0.0031
    CHECK(entropy_converged(0, 0, 0.001));         // documented zero extension
    CHECK_FALSE(entropy_converged(0, 1, 0.001));
}

TEST_CASE("local_cluster_3delta") {
    SUBCASE("two tight far-apart blobs, m=2") {
        std::mt19937_64 gen(5);
        int next_id = 0;
        auto blob_a = oracles::disk_blob(next_id, 50, 0, 0, 1.0, gen);
        auto blob_b = oracles::disk_blob(next_id, 50, 100, 0, 1.0, gen);
        std::vector<City> cities = blob_a;
        cities.insert(cities.end(), blob_b.begin(), blob_b.end());

        std::mt19937_64 rng(7);
        const LocalClusterResult res =
            local_cluster_3delta(cities, all_ids(cities), 2, 1e-3, 0, nullptr, rng);
        REQUIRE(res.compact.size() == 2);
        size_t classified = 0;
        for (const ClassState& cls : res.compact) classified += cls.members.size();
        CHECK(static_cast<double>(classified) / 100.0 >= 0.99);
        CHECK(members_cover(res.compact, res.residual, all_ids(cities)));
        // each compact class sits inside one generated blob
        for (const ClassState& cls : res.compact) {
            const bool left = cities[cls.members.front()].x < 50;
            for (int id : cls.members) CHECK((cities[id].x < 50) == left);
        }
    }
    SUBCASE("m singletons are all stable immediately") {
        const auto cities = cities_from({{0, 0}, {10, 0}, {0, 10}, {10, 10}});
        std::mt19937_64 rng(1);
        const LocalClusterResult res =
            local_cluster_3delta(cities, all_ids(cities), 4, 1e-3, 0, nullptr, rng);
        CHECK(res.compact.size() == 4);
        CHECK(res.residual.empty());
        for (const ClassState& cls : res.compact) CHECK(cls.members.size() == 1);
    }
    SUBCASE("one blob, m=1: phi is the compact region, sigma the fringe") {
        std::mt19937_64 gen(13);
        std::normal_distribution<double> coord(0.0, 2.0);
        std::vector<City> cities;
        for (int i = 0; i < 400; ++i) cities.push_back({i, coord(gen), coord(gen)});

        std::mt19937_64 rng(2);
        const LocalClusterResult res =
            local_cluster_3delta(cities, all_ids(cities), 1, 1e-3, 0, nullptr, rng);
        REQUIRE(res.compact.size() == 1);
        CHECK(members_cover(res.compact, res.residual, all_ids(cities)));

        // cross-check against the raw-definition radius on the full set
        const ClassState whole = whole_class(cities);
        const RadiusOracle oracle(cities, whole.members, whole.centroid);
        for (int id : res.compact[0].members)
            CHECK(std::hypot(cities[id].x - whole.centroid.x, cities[id].y - whole.centroid.y) <=
                  oracle.radius(0) + 1e-9);
        for (int id : res.residual)
            CHECK(std::hypot(cities[id].x - whole.centroid.x, cities[id].y - whole.centroid.y) >
                  oracle.radius(0) - 1e-9);
    }
    SUBCASE("m larger than the set is an error") {
        const auto cities = cities_from({{0, 0}, {1, 1}});
        std::mt19937_64 rng(1);
        CHECK_THROWS_AS(local_cluster_3delta(cities, all_ids(cities), 3, 1e-3, 0, nullptr, rng),
                        std::invalid_argument);
    }
    SUBCASE("sweep cap force-stabilizes the leftovers and flags the result") {
        const auto cities = oracles::random_cities(30, 88);
        std::mt19937_64 rng(1);
        const LocalClusterResult res =
            local_cluster_3delta(cities, all_ids(cities), 3, 1e-3, 0, nullptr, rng,
                                 /*sweep_cap=*/0);
        CHECK(res.hit_sweep_cap);
        CHECK(members_cover(res.compact, res.residual, all_ids(cities)));
    }
}

TEST_CASE("slc") {
    SUBCASE("m0=1 runs zero rounds; every point becomes a singleton") {
        const auto cities = oracles::random_cities(12, 77);
        std::mt19937_64 rng(1);
        const SlcResult res = slc(cities, all_ids(cities), 1, 1e-3, nullptr, rng);
        CHECK(res.classes.size() == 12);
        for (const ClassState& cls : res.classes) CHECK(cls.members.size() == 1);
    }
    SUBCASE("m0=2 on two tight disks extracts both as compact classes") {
        std::mt19937_64 gen(4);
        int next_id = 0;
        auto cities = oracles::disk_blob(next_id, 50, 0, 0, 1.0, gen);
        auto blob_b = oracles::disk_blob(next_id, 50, 100, 0, 1.0, gen);
        cities.insert(cities.end(), blob_b.begin(), blob_b.end());
        std::mt19937_64 rng(3);
        const SlcResult res = slc(cities, all_ids(cities), 2, 1e-3, nullptr, rng);
        CHECK(members_cover(res.classes, {}, all_ids(cities)));
        int multi = 0;
        for (const ClassState& cls : res.classes)
            if (cls.members.size() > 1) ++multi;
        CHECK(multi == 2);  // single round at p=0, disks keep all members
    }
    SUBCASE("two-gaussian set, m0=4: Num <= 30 and 90%-pure top classes") {
        std::mt19937_64 gen(6);
        std::normal_distribution<double> noise(0.0, 0.5);
        std::vector<City> cities;
        std::vector<int> label;
        for (int i = 0; i < 200; ++i) {
            const int comp = i % 2;
            cities.push_back({i, (comp == 0 ? 0.0 : 10.0) + noise(gen), noise(gen)});
            label.push_back(comp);
        }
        std::mt19937_64 rng(9);
        const SlcResult res = slc(cities, all_ids(cities), 4, 1e-3, nullptr, rng);
        CHECK(members_cover(res.classes, {}, all_ids(cities)));
        CHECK(res.classes.size() <= 30);

        std::vector<const ClassState*> by_size;
        for (const ClassState& cls : res.classes) by_size.push_back(&cls);
        std::sort(by_size.begin(), by_size.end(),
                  [](auto* a, auto* b) { return a->members.size() > b->members.size(); });
        REQUIRE(by_size.size() >= 2);
        std::set<int> majorities;
        for (int k = 0; k < 2; ++k) {
            std::map<int, int> counts;
            for (int id : by_size[k]->members) counts[label[id]]++;
            const int majority = counts[0] >= counts[1] ? 0 : 1;
            majorities.insert(majority);
            const double purity = static_cast<double>(counts[majority]) /
                                  static_cast<double>(by_size[k]->members.size());
            CHECK(purity >= 0.9);
        }
        CHECK(majorities.size() == 2);  // the two big classes map to both components
    }
    SUBCASE("partition completeness over random inputs (property)") {
        for (int trial = 0; trial < 30; ++trial) {
            const auto cities = oracles::random_cities(40 + trial, 1000 + trial);
            std::mt19937_64 rng(trial);
            const int m0 = 1 + trial % 8;
            const SlcResult res = slc(cities, all_ids(cities), m0, 1e-3, nullptr, rng);
            CHECK(members_cover(res.classes, {}, all_ids(cities)));
        }
    }
}

TEST_CASE("sector_percentages") {
    SUBCASE("8 points at sector mid-angles: exactly 1/8 each") {
        std::vector<City> cities;
        for (int k = 0; k < 8; ++k) {
            const double a = (22.5 + 45.0 * k) * M_PI / 180.0;
            cities.push_back({k, std::cos(a), std::sin(a)});
        }
        ClassState cls;
        cls.members = all_ids(cities);
        cls.centroid = {0, 0};
        const auto fractions = sector_percentages(cities, cls);
        for (double f : fractions) CHECK(f == doctest::Approx(0.125));
    }
    SUBCASE("all points on the positive x-axis: one sector holds everything") {
        const auto cities = cities_from({{1, 0}, {2, 0}, {3, 0}, {4, 0}});
        ClassState cls;
        cls.members = all_ids(cities);
        cls.centroid = {0, 0};
        const auto fractions = sector_percentages(cities, cls);
        CHECK(fractions[0] == 1.0);
        for (int s = 1; s < 8; ++s) CHECK(fractions[s] == 0.0);
    }
    SUBCASE("boundary points go to the counterclockwise-next sector") {
        const auto cities = cities_from(
            {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {0, 0}});
        ClassState cls;
        cls.members = all_ids(cities);
        cls.centroid = {0, 0};
        std::array<double, 8> expected{};
        // one boundary point lands in each sector; the centroid point in 0
        for (int s = 0; s < 8; ++s) expected[s] = 1.0 / 9.0;
        expected[0] = 2.0 / 9.0;
        const auto fractions = sector_percentages(cities, cls);
        for (int s = 0; s < 8; ++s) CHECK(fractions[s] == doctest::Approx(expected[s]));
    }
    SUBCASE("uniform disk: every sector near 1/8") {
        std::mt19937_64 gen(8);
        int next_id = 0;
        const auto cities = oracles::disk_blob(next_id, 10000, 0, 0, 1.0, gen);
        ClassState cls = whole_class(cities);
        const auto fractions = sector_percentages(cities, cls);
        for (double f : fractions) CHECK(std::abs(f - 0.125) < 0.02);
    }
    SUBCASE("fractions sum to 1 (property)") {
        for (int trial = 0; trial < 50; ++trial) {
            const auto cities = oracles::random_cities(5 + trial, 500 + trial);
            ClassState cls = whole_class(cities);
            const auto fractions = sector_percentages(cities, cls);
            CHECK(std::abs(std::accumulate(fractions.begin(), fractions.end(), 0.0) - 1.0) <
                  1e-9);
        }
    }
}

TEST_CASE("is_spherical") {
    SUBCASE("uniform disk is spherical") {
        std::mt19937_64 gen(21);
        int next_id = 0;
        const auto cities = oracles::disk_blob(next_id, 2000, 0, 0, 1.0, gen);
        CHECK(is_spherical(cities, whole_class(cities), 0.058));
    }
    SUBCASE("collinear class is not") {
        std::vector<City> cities;
        for (int i = 0; i < 100; ++i) cities.push_back({i, static_cast<double>(i), 0.0});
        CHECK_FALSE(is_spherical(cities, whole_class(cities), 0.058));
    }
    SUBCASE("one sector at 0.05 fails the 0.058 floor") {
        std::vector<City> cities;
        int id = 0;
        for (int i = 0; i < 50; ++i) {  // sector 0 carries 5%
            const double a = 22.5 * M_PI / 180.0;
            cities.push_back({id++, std::cos(a), std::sin(a)});
        }
        for (int s = 1; s < 8; ++s) {
            const double a = (22.5 + 45.0 * s) * M_PI / 180.0;
            for (int i = 0; i < 950 / 7 + 1; ++i)
                cities.push_back({id++, std::cos(a), std::sin(a)});
        }
        ClassState cls;
        cls.members = all_ids(cities);
        cls.centroid = {0, 0};
        const auto fractions = sector_percentages(cities, cls);
        CHECK(fractions[0] == doctest::Approx(0.05).epsilon(0.05));
        CHECK_FALSE(is_spherical(cities, cls, 0.058));
    }
    SUBCASE("under 8 members: marker skipped, treated as chain candidate") {
        const auto cities = circle_cities(7);
        CHECK_FALSE(is_spherical(cities, whole_class(cities), 0.058));
    }
}

TEST_CASE("chain_cluster") {
    SUBCASE("one evenly spaced line merges into a single chain") {
        std::vector<City> cities;
        for (int i = 0; i < 100; ++i) cities.push_back({i, static_cast<double>(i), 0.0});
        const ChainResult res = chain_cluster(cities, all_ids(cities), 5e-4);
        CHECK(res.chains.size() == 1);
        CHECK(res.isolated.empty());
        CHECK(res.chains[0].members.size() == 100);
        CHECK(res.chains[0].shape == Shape::Chain);
    }
    SUBCASE("two distant parallel lines give two chains") {
        std::vector<City> cities;
        int id = 0;
        for (int i = 0; i < 50; ++i) cities.push_back({id++, i * 2.0, 0.0});
        for (int i = 0; i < 50; ++i) cities.push_back({id++, i * 2.0, 50.0});
        const ChainResult res = chain_cluster(cities, all_ids(cities), 5e-4);
        CHECK(res.chains.size() == 2);
        CHECK(res.isolated.empty());
        for (const ClassState& cls : res.chains) {
            const double y0 = cities[cls.members.front()].y;
            for (int idm : cls.members) CHECK(cities[idm].y == y0);
        }
    }
    SUBCASE("a single point is isolated") {
        const auto cities = cities_from({{5, 5}});
        const ChainResult res = chain_cluster(cities, all_ids(cities), 5e-4);
        CHECK(res.chains.empty());
        CHECK(res.isolated == std::vector<int>{0});
    }
    SUBCASE("partition completeness (property)") {
        for (int trial = 0; trial < 20; ++trial) {
            const auto cities = oracles::random_cities(30 + trial, 9000 + trial);
            const ChainResult res = chain_cluster(cities, all_ids(cities), 5e-4);
            std::vector<int> residual = res.isolated;
            CHECK(members_cover(res.chains, residual, all_ids(cities)));
        }
    }
    SUBCASE("pre-merge classes respect the trace cap or are singletons (property)") {
        for (int trial = 0; trial < 20; ++trial) {
            const auto cities = oracles::random_cities(40, 9500 + trial);
            const std::vector<int> ids = all_ids(cities);
            const double threshold = 5e-4;
            const ChainResult res = chain_cluster(cities, ids, threshold);

            // replicate the documented unit-square normalization
            double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
            for (int id : ids) {
                min_x = std::min(min_x, cities[id].x);
                max_x = std::max(max_x, cities[id].x);
                min_y = std::min(min_y, cities[id].y);
                max_y = std::max(max_y, cities[id].y);
            }
            for (const auto& cls : res.pre_merge) {
                if (cls.size() == 1) continue;
                double sx = 0, sy = 0, sxx = 0, syy = 0;
                for (int id : cls) {
                    const double nx = (cities[id].x - min_x) / (max_x - min_x);
                    const double ny = (cities[id].y - min_y) / (max_y - min_y);
                    sx += nx;
                    sy += ny;
                    sxx += nx * nx;
                    syy += ny * ny;
                }
                const double n = static_cast<double>(cls.size());
                const double trace =
                    (sxx / n - (sx / n) * (sx / n)) + (syy / n - (sy / n) * (sy / n));
                CHECK(trace <= threshold + 1e-12);
            }
        }
    }
}

TEST_CASE("slc_mixture") {
    SUBCASE("two pure blobs: two spherical classes, no chains") {
        std::mt19937_64 gen(17);
        int next_id = 0;
        auto cities = oracles::disk_blob(next_id, 100, 0, 0, 2.0, gen);
        auto blob_b = oracles::disk_blob(next_id, 100, 100, 0, 2.0, gen);
        cities.insert(cities.end(), blob_b.begin(), blob_b.end());

        SeedSet seeds;
        seeds.centroids = {{0, 0}, {100, 0}};
        ClusterConfig config;
        config.rng_seed = 5;
        const MixtureResult res = slc_mixture(cities, all_ids(cities), config, &seeds);
        CHECK(members_cover(res.classes, {}, all_ids(cities)));
        int spherical = 0, chains = 0, isolated = 0;
        for (const ClassState& cls : res.classes) {
            if (cls.shape == Shape::Spherical) ++spherical;
            if (cls.shape == Shape::Chain) ++chains;
            if (cls.shape == Shape::Isolated) ++isolated;
        }
        CHECK(spherical == 2);
        CHECK(chains == 0);
        CHECK(isolated == 0);
    }
    SUBCASE("blob + line + far outlier: one of each label") {
        std::mt19937_64 gen(23);
        int next_id = 0;
        auto cities = oracles::disk_blob(next_id, 100, 0, 0, 5.0, gen);
        for (int i = 0; i < 40; ++i) cities.push_back({next_id++, 50.0 + i, 0.0});
        cities.push_back({next_id++, 200.0, 200.0});

        SeedSet seeds;
        seeds.centroids = {{0, 0}, {70, 0}};
        ClusterConfig config;
        config.rng_seed = 5;
        const MixtureResult res = slc_mixture(cities, all_ids(cities), config, &seeds);
        CHECK(members_cover(res.classes, {}, all_ids(cities)));
        int spherical = 0, chains = 0, isolated = 0;
        for (const ClassState& cls : res.classes) {
            if (cls.shape == Shape::Spherical) ++spherical;
            if (cls.shape == Shape::Chain) ++chains;
            if (cls.shape == Shape::Isolated) ++isolated;
        }
        CHECK(spherical == 1);
        CHECK(chains == 1);
        CHECK(isolated == 1);
    }
}

TEST_CASE("kmeans_partition covers the input and drops empty classes") {
    const auto cities = oracles::random_cities(60, 31);
    std::mt19937_64 rng(4);
    const auto classes = kmeans_partition(cities, all_ids(cities), 5, nullptr, rng);
    CHECK(members_cover(classes, {}, all_ids(cities)));
    for (const ClassState& cls : classes) CHECK_FALSE(cls.members.empty());
}

TEST_CASE("default_m0 rule") {
    CHECK(default_m0(4) == 2);
    CHECK(default_m0(100) == 10);
    CHECK(default_m0(130) == 11);  // round(11.40)
}
