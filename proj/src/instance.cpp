#include "acoslc/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace acoslc {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Splits "KEY : value" / "KEY: value"; returns false when there is no colon.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    auto pos = line.find(':');
    if (pos == std::string::npos) return false;
    key = trim(line.substr(0, pos));
    value = trim(line.substr(pos + 1));
    return true;
}

// Shortest representation that round-trips the double exactly.
std::string format_coord(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

const char* to_string(EdgeWeightType type) {
    return type == EdgeWeightType::Euc2dRounded ? "EUC_2D_ROUNDED" : "EUC_2D_EXACT";
}

ParseError::ParseError(Kind kind, int line_no, std::string line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what +
                         (line.empty() ? "" : " [" + line + "]")),
      kind_(kind),
      line_no_(line_no),
      line_(std::move(line)) {}

double distance(const City& a, const City& b, EdgeWeightType convention) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (convention == EdgeWeightType::Euc2dRounded) return std::round(d);
    return d;
}

double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

Instance parse_tsplib(std::istream& in) {
    Instance inst;
    std::string line;
    int line_no = 0;
    int dimension = -1;
    bool saw_type = false;
    bool saw_edge_weight_type = false;
    bool in_coords = false;
    bool saw_coord_section = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;

        if (!in_coords) {
            if (t == "NODE_COORD_SECTION") {
                in_coords = true;
                saw_coord_section = true;
                continue;
            }
            if (t == "EOF") break;

            std::string key, value;
            if (!split_header(t, key, value)) {
                throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                                 "expected KEY: VALUE header");
            }
            if (key == "NAME") {
                inst.name = value;
            } else if (key == "TYPE") {
                saw_type = true;
                if (value != "TSP") {
                    throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                                     "TYPE must be TSP");
                }
            } else if (key == "DIMENSION") {
                try {
                    dimension = std::stoi(value);
                } catch (const std::exception&) {
                    throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                                     "DIMENSION is not an integer");
                }
                if (dimension < 3) {
                    throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                                     "DIMENSION must be at least 3");
                }
            } else if (key == "EDGE_WEIGHT_TYPE") {
                saw_edge_weight_type = true;
                if (value != "EUC_2D") {
                    throw ParseError(ParseError::Kind::UnsupportedEdgeWeightType, line_no, t,
                                     "unsupported EDGE_WEIGHT_TYPE " + value);
                }
            } else if (key == "COMMENT" || key == "DISPLAY_DATA_TYPE") {
                // ignored
            } else {
                throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                                 "unknown header key " + key);
            }
            continue;
        }

        if (t == "EOF") break;

        std::istringstream iss(t);
        long id = 0;
        double x = 0.0, y = 0.0;
        if (!(iss >> id >> x >> y)) {
            throw ParseError(ParseError::Kind::MalformedHeader, line_no, t,
                             "expected 'id x y' coordinate line");
        }
        City c;
        c.id = static_cast<int>(inst.cities.size());
        c.x = x;
        c.y = y;
        inst.cities.push_back(c);
        if (dimension > 0 && static_cast<int>(inst.cities.size()) > dimension) {
            throw ParseError(ParseError::Kind::DimensionMismatch, line_no, t,
                             "more coordinate lines than DIMENSION " + std::to_string(dimension));
        }
    }

    if (!saw_type || dimension < 0 || !saw_edge_weight_type) {
        throw ParseError(ParseError::Kind::MalformedHeader, line_no, "",
                         "missing TYPE, DIMENSION or EDGE_WEIGHT_TYPE header");
    }
    if (!saw_coord_section) {
        throw ParseError(ParseError::Kind::MissingCoordSection, line_no, "",
                         "missing NODE_COORD_SECTION");
    }
    if (static_cast<int>(inst.cities.size()) != dimension) {
        throw ParseError(ParseError::Kind::DimensionMismatch, line_no, "",
                         "DIMENSION " + std::to_string(dimension) + " but parsed " +
                             std::to_string(inst.cities.size()) + " coordinate lines");
    }
    return inst;
}

Instance load_tsplib_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open instance file: " + path);
    return parse_tsplib(in);
}

SeedSet load_seeds(std::istream& in) {
    SeedSet seeds;
    std::vector<double> xs, ys;
    std::string line;
    int line_no = 0;

    auto parse_row = [&](const std::string& body, std::vector<double>& out, const std::string& raw) {
        std::istringstream iss(body);
        double v;
        while (iss >> v) out.push_back(v);
        if (!iss.eof()) {
            throw ParseError(ParseError::Kind::BadSeedFile, line_no, raw,
                             "non-numeric centroid coordinate");
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("name:", 0) == 0) {
            seeds.instance_name = trim(t.substr(5));
        } else if (t.rfind("x=", 0) == 0) {
            parse_row(t.substr(2), xs, t);
        } else if (t.rfind("y=", 0) == 0) {
            parse_row(t.substr(2), ys, t);
        } else {
            throw ParseError(ParseError::Kind::BadSeedFile, line_no, t,
                             "expected 'x=', 'y=', 'name:' or '#' line");
        }
    }
    if (xs.empty() && ys.empty()) {
        throw ParseError(ParseError::Kind::BadSeedFile, line_no, "", "seed file has no centroids");
    }
    if (xs.size() != ys.size()) {
        throw ParseError(ParseError::Kind::BadSeedFile, line_no, "",
                         "x row has " + std::to_string(xs.size()) + " entries but y row has " +
                             std::to_string(ys.size()));
    }
    seeds.centroids.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) seeds.centroids.push_back({xs[i], ys[i]});
    return seeds;
}

SeedSet load_seeds_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open seed file: " + path);
    return load_seeds(in);
}

OptimaTable load_optima(std::istream& in) {
    OptimaTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto comma = t.find(',');
        if (comma == std::string::npos) {
            throw ParseError(ParseError::Kind::BadOptimaValue, line_no, t,
                             "expected 'name,value' row");
        }
        std::string name = trim(t.substr(0, comma));
        std::string value_str = trim(t.substr(comma + 1));
        double value = 0.0;
        auto res = std::from_chars(value_str.data(), value_str.data() + value_str.size(), value);
        if (res.ec != std::errc() || res.ptr != value_str.data() + value_str.size()) {
            throw ParseError(ParseError::Kind::BadOptimaValue, line_no, t,
                             "non-numeric optimum value '" + value_str + "'");
        }
        if (table.best_known.count(name)) {
            table.warnings.push_back("duplicate optimum for '" + name +
                                     "' on line " + std::to_string(line_no) + ", last entry wins");
        }
        table.best_known[name] = value;
    }
    return table;
}

OptimaTable load_optima_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open optima file: " + path);
    return load_optima(in);
}

void write_tsplib(const Instance& instance, std::ostream& out) {
    out << "NAME: " << instance.name << "\n";
    out << "TYPE: TSP\n";
    out << "DIMENSION: " << instance.cities.size() << "\n";
    out << "EDGE_WEIGHT_TYPE: EUC_2D\n";
    out << "NODE_COORD_SECTION\n";
    for (const City& c : instance.cities) {
        out << (c.id + 1) << " " << format_coord(c.x) << " " << format_coord(c.y) << "\n";
    }
    out << "EOF\n";
}

}  // namespace acoslc
