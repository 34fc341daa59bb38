#include "maxsum/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace maxsum {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& p, const char* key) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ParseError(std::string("\"") + key + "\" must be an [x, y] number pair");
    }
    return {p[0].get<double>(), p[1].get<double>()};
}

std::vector<Point> parse_point_array(const json& arr, const char* key) {
    if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array of [x, y]");
    std::vector<Point> out;
    for (const json& p : arr) out.push_back(point_from_json(p, key));
    return out;
}

std::string trim(std::string s) {
    auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
    return s;
}

double parse_number(const std::string& field, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": \"" + field + "\" is not a number");
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Instance parse_instance_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("red") || !doc.contains("blue")) {
        throw ParseError("instance JSON needs \"red\" and \"blue\" arrays");
    }
    return Instance(parse_point_array(doc["red"], "red"), parse_point_array(doc["blue"], "blue"));
}

Instance parse_instance_csv(const std::string& text) {
    std::vector<Point> red, blue;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": expected color,x,y");
        std::string color = fields[0];
        std::transform(color.begin(), color.end(), color.begin(), [](unsigned char c) { return std::toupper(c); });
        if (color == "COLOR") continue;
        const Point p{parse_number(fields[1], lineno), parse_number(fields[2], lineno)};
        if (color == "R") {
            red.push_back(p);
        } else if (color == "B") {
            blue.push_back(p);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": color must be R or B");
        }
    }
    return Instance(std::move(red), std::move(blue));
}

Instance load_instance(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv" ? parse_instance_csv(text) : parse_instance_json(text);
}

json instance_to_json(const Instance& inst) {
    json red = json::array(), blue = json::array();
    for (Point p : inst.red()) red.push_back(point_json(p));
    for (Point p : inst.blue()) blue.push_back(point_json(p));
    return json{{"red", red}, {"blue", blue}};
}

void write_instance_json(const std::filesystem::path& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << instance_to_json(inst).dump(2) << '\n';
}

std::vector<MatchedPair> parse_matching(const json& doc) {
    const json& arr = doc.is_object() && doc.contains("matching") ? doc["matching"] : doc;
    if (!arr.is_array()) throw ParseError("matching must be an array of [red, blue] index pairs");
    std::vector<MatchedPair> pairs;
    for (const json& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
            throw ParseError("matching entries must be [red, blue] non-negative integers");
        }
        pairs.push_back({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
    }
    return pairs;
}

Matching load_matching(const std::filesystem::path& path, const Instance& inst) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid matching JSON: ") + e.what());
    }
    return Matching(inst, parse_matching(doc));
}

json matching_to_json(const Matching& m) {
    json pairs = json::array();
    for (const MatchedPair& p : m.pairs()) pairs.push_back(json::array({p.red, p.blue}));
    return json{{"matching", pairs}, {"total", m.total()}};
}

json certificate_to_json(const Matching& m, const CenterCertificate& cert, std::optional<bool> pass) {
    json doc = matching_to_json(m);
    doc["center"] = point_json(cert.center);
    doc["lambda_star"] = cert.lambda_star;
    doc["ratios"] = cert.ratios;
    doc["active_set"] = cert.active_set;
    doc["optimality_gap"] = cert.optimality_gap;
    doc["iterations"] = cert.iterations;
    doc["bound"] = "sqrt2";
    if (pass) doc["pass"] = *pass;
    return doc;
}

CertificateCheck check_certificate(const Instance& inst, const json& cert, double tol, double activation_tol,
                                   double gap_threshold) {
    CertificateCheck check;
    auto fail = [&](std::string why) {
        check.ok = false;
        check.problems.push_back(std::move(why));
    };
    try {
        const Matching m(inst, parse_matching(cert));
        const Point center = point_from_json(cert.at("center"), "center");
        const auto segments = matched_segments(inst, m);
        const auto ratios = focal_ratios(segments, center);
        const auto stored = cert.at("ratios").get<std::vector<double>>();
        if (stored.size() != ratios.size()) {
            fail("ratio count differs from the matching size");
        } else {
            for (std::size_t i = 0; i < ratios.size(); ++i) {
                check.max_ratio_error = std::max(check.max_ratio_error, std::abs(stored[i] - ratios[i]));
            }
            if (check.max_ratio_error > tol) fail("stored ratios differ from recomputed ratios");
        }
        const double lambda = lambda_at(segments, center);
        check.lambda_error = std::abs(lambda - cert.at("lambda_star").get<double>());
        if (check.lambda_error > tol) fail("stored lambda_star differs from the recomputed maximum ratio");
        if (std::abs(m.total() - cert.at("total").get<double>()) > tol * (1.0 + m.total())) {
            fail("stored total differs from the recomputed total");
        }
        check.recomputed_gap = optimality_certificate(segments, center, activation_tol);
        if (check.recomputed_gap > gap_threshold) fail("recomputed optimality gap exceeds the threshold");
        if (cert.contains("pass")) {
            const bool pass = lambda <= std::sqrt(2.0) + tol;
            if (cert["pass"].get<bool>() != pass) fail("stored pass flag disagrees with lambda_star");
        }
    } catch (const json::exception& e) {
        fail(std::string("malformed certificate: ") + e.what());
    } catch (const InvalidInput& e) {
        fail(e.what());
    }
    return check;
}

}  // namespace maxsum
