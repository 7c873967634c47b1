#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace acoslc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct City {
    int id = 0;  // 0-based; TSPLIB 1-based ids are converted at the parse boundary
    double x = 0.0;
    double y = 0.0;
};

// EUC_2D files default to the rounded convention (best-known optima assume it);
// the exact convention is available for geometric tests.
enum class EdgeWeightType { Euc2dRounded, Euc2dExact };

const char* to_string(EdgeWeightType type);

struct Instance {
    std::string name;
    std::vector<City> cities;
    EdgeWeightType edge_weight_type = EdgeWeightType::Euc2dRounded;

    int size() const { return static_cast<int>(cities.size()); }
};

// Initial class centroids for one instance (one x= row, one y= row).
struct SeedSet {
    std::string instance_name;
    std::vector<Point> centroids;
};

class ParseError : public std::runtime_error {
  public:
    enum class Kind {
        MalformedHeader,
        MissingCoordSection,
        DimensionMismatch,
        UnsupportedEdgeWeightType,
        BadSeedFile,
        BadOptimaValue,
    };

    ParseError(Kind kind, int line_no, std::string line, const std::string& what);

    Kind kind() const { return kind_; }
    int line_no() const { return line_no_; }
    const std::string& line() const { return line_; }

  private:
    Kind kind_;
    int line_no_;
    std::string line_;
};

double distance(const City& a, const City& b, EdgeWeightType convention);
double distance(const Point& a, const Point& b);  // exact, used by clustering geometry

// TSPLIB subset: NAME, TYPE (TSP), COMMENT, DIMENSION, EDGE_WEIGHT_TYPE (EUC_2D),
// NODE_COORD_SECTION, optional EOF token.
Instance parse_tsplib(std::istream& in);
Instance load_tsplib_file(const std::string& path);

SeedSet load_seeds(std::istream& in);
SeedSet load_seeds_file(const std::string& path);

struct OptimaTable {
    std::map<std::string, double> best_known;
    std::vector<std::string> warnings;  // duplicate names, last entry wins
};

OptimaTable load_optima(std::istream& in);
OptimaTable load_optima_file(const std::string& path);

// Round-trip serializer: coordinates are written so that re-parsing reproduces
// them bit-exactly.
void write_tsplib(const Instance& instance, std::ostream& out);

}  // namespace acoslc
