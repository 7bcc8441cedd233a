#include "elvis/problem_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace elvis::io {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ParseError(fmt::format("{}: unknown key", join(where, key)));
        }
    }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(fmt::format("{}: missing key", join(where, key)));
    return *it;
}

double as_real(const json& value, const std::string& path) {
    if (!value.is_number()) throw ParseError(fmt::format("{}: expected a number", path));
    return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ParseError(fmt::format("{}: expected an integer", path));
    return value.get<int>();
}

Vec2 as_point(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2) {
        throw ParseError(fmt::format("{}: expected [x, y]", path));
    }
    return {as_real(value[0], path + "[0]"), as_real(value[1], path + "[1]")};
}

SetDescription as_set(const json& value, const std::string& path) {
    if (!value.is_object()) throw ParseError(fmt::format("{}: expected an object", path));
    const json& kind = require(value, "kind", path);
    if (!kind.is_string()) throw ParseError(fmt::format("{}.kind: expected a string", path));
    const auto tag = kind.get<std::string>();
    if (tag == "ball") {
        reject_unknown(value, {"kind", "r"}, path);
        return Ball{as_real(require(value, "r", path), path + ".r")};
    }
    if (tag == "ellipse") {
        reject_unknown(value, {"kind", "a", "b", "rot"}, path);
        Ellipse e{as_real(require(value, "a", path), path + ".a"),
                  as_real(require(value, "b", path), path + ".b"), 0.0};
        if (value.contains("rot")) e.rot = as_real(value["rot"], path + ".rot");
        return e;
    }
    if (tag == "polygon") {
        reject_unknown(value, {"kind", "vertices"}, path);
        const json& vs = require(value, "vertices", path);
        if (!vs.is_array()) throw ParseError(fmt::format("{}.vertices: expected an array", path));
        Polygon poly;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            poly.vertices.push_back(as_point(vs[i], fmt::format("{}.vertices[{}]", path, i)));
        }
        return poly;
    }
    throw ParseError(fmt::format("{}.kind: unknown set kind '{}'", path, tag));
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

json set_json(const SetDescription& desc) {
    if (const auto* b = std::get_if<Ball>(&desc)) return {{"kind", "ball"}, {"r", b->r}};
    if (const auto* e = std::get_if<Ellipse>(&desc)) {
        return {{"kind", "ellipse"}, {"a", e->a}, {"b", e->b}, {"rot", e->rot}};
    }
    json vs = json::array();
    for (Vec2 v : std::get<Polygon>(desc).vertices) vs.push_back(point_json(v));
    return {{"kind", "polygon"}, {"vertices", vs}};
}

json parse_document(std::string_view text) {
    try {
        json doc = json::parse(text);
        if (!doc.is_object()) throw ParseError("top level: expected an object");
        return doc;
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("syntax error: {}", e.what()));
    }
}

bool same_set(const SetDescription& a, const SetDescription& b) {
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<Ball>(&a)) return x->r == std::get<Ball>(b).r;
    if (const auto* x = std::get_if<Ellipse>(&a)) {
        const auto& y = std::get<Ellipse>(b);
        return x->a == y.a && x->b == y.b && x->rot == y.rot;
    }
    return std::get<Polygon>(a).vertices == std::get<Polygon>(b).vertices;
}

} // namespace

Vec2 SweepGrid::node(int i, int j) const {
    const double x = nx == 1 ? xmin : xmin + (xmax - xmin) * i / (nx - 1);
    const double y = ny == 1 ? ymin : ymin + (ymax - ymin) * j / (ny - 1);
    return {x, y};
}

ProblemFile parse_problem(std::string_view text) {
    const json doc = parse_document(text);
    reject_unknown(doc, {"x0", "x1", "F0", "F1", "epsilon", "max_iter"}, "");
    ProblemFile file;
    file.x0 = as_point(require(doc, "x0", ""), "x0");
    file.x1 = as_point(require(doc, "x1", ""), "x1");
    file.F0 = as_set(require(doc, "F0", ""), "F0");
    file.F1 = as_set(require(doc, "F1", ""), "F1");
    if (doc.contains("epsilon")) file.epsilon = as_real(doc["epsilon"], "epsilon");
    if (doc.contains("max_iter")) file.max_iter = as_int(doc["max_iter"], "max_iter");
    return file;
}

std::string write_problem(const ProblemFile& file) {
    json doc = {{"x0", point_json(file.x0)},   {"x1", point_json(file.x1)},
                {"F0", set_json(file.F0)},     {"F1", set_json(file.F1)},
                {"epsilon", file.epsilon},     {"max_iter", file.max_iter}};
    return doc.dump(2) + "\n";
}

SweepSpec parse_sweep(std::string_view text) {
    const json doc = parse_document(text);
    reject_unknown(doc, {"x0", "F0", "F1", "epsilon", "max_iter", "x1_grid"}, "");
    SweepSpec spec;
    spec.x0 = as_point(require(doc, "x0", ""), "x0");
    spec.F0 = as_set(require(doc, "F0", ""), "F0");
    spec.F1 = as_set(require(doc, "F1", ""), "F1");
    if (doc.contains("epsilon")) spec.epsilon = as_real(doc["epsilon"], "epsilon");
    if (doc.contains("max_iter")) spec.max_iter = as_int(doc["max_iter"], "max_iter");

    const json& grid = require(doc, "x1_grid", "");
    if (!grid.is_object()) throw ParseError("x1_grid: expected an object");
    reject_unknown(grid, {"xmin", "xmax", "ymin", "ymax", "nx", "ny"}, "x1_grid");
    SweepGrid& g = spec.x1_grid;
    g.xmin = as_real(require(grid, "xmin", "x1_grid"), "x1_grid.xmin");
    g.xmax = as_real(require(grid, "xmax", "x1_grid"), "x1_grid.xmax");
    g.ymin = as_real(require(grid, "ymin", "x1_grid"), "x1_grid.ymin");
    g.ymax = as_real(require(grid, "ymax", "x1_grid"), "x1_grid.ymax");
    g.nx = as_int(require(grid, "nx", "x1_grid"), "x1_grid.nx");
    g.ny = as_int(require(grid, "ny", "x1_grid"), "x1_grid.ny");
    return spec;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ElvisProblem build_problem(const ProblemFile& file) {
    ElvisProblem problem{file.x0, file.x1, VelocitySet::validate(file.F0),
                         VelocitySet::validate(file.F1), file.epsilon, file.max_iter};
    check_problem(problem);
    return problem;
}

void check_grid(const SweepGrid& grid) {
    if (grid.nx < 1 || grid.ny < 1) throw ProblemError("x1_grid needs nx >= 1 and ny >= 1");
    if (!(grid.ymin > 0.0)) throw ProblemError("x1_grid must satisfy ymin > 0");
    if (grid.ymax < grid.ymin) throw ProblemError("x1_grid must satisfy ymax >= ymin");
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
    return a.x0 == b.x0 && a.x1 == b.x1 && same_set(a.F0, b.F0) && same_set(a.F1, b.F1) &&
           a.epsilon == b.epsilon && a.max_iter == b.max_iter;
}

} // namespace elvis::io
