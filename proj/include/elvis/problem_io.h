#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "elvis/geometry.h"
#include "elvis/solver.h"

namespace elvis::io {

/// Malformed problem or sweep text. The message names the offending key
/// (dotted path) or the line and column of a syntax error.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unvalidated problem as read from a file.
struct ProblemFile {
    Vec2 x0;
    Vec2 x1;
    SetDescription F0;
    SetDescription F1;
    double epsilon = kDefaultEpsilon;
    int max_iter = kDefaultMaxIter;
};

struct SweepGrid {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 1.0;
    double ymax = 1.0;
    int nx = 1;
    int ny = 1;

    /// Row-major nodes: y outer, x inner.
    Vec2 node(int i, int j) const;
};

struct SweepSpec {
    Vec2 x0;
    SetDescription F0;
    SetDescription F1;
    double epsilon = kDefaultEpsilon;
    int max_iter = kDefaultMaxIter;
    SweepGrid x1_grid;
};

ProblemFile parse_problem(std::string_view text);
std::string write_problem(const ProblemFile& file);
SweepSpec parse_sweep(std::string_view text);

/// Reads the whole file; throws ParseError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);

/// Validates the sets and endpoint invariants. Throws GeometryError or
/// ProblemError.
ElvisProblem build_problem(const ProblemFile& file);

/// Throws ProblemError when the grid is empty or leaves the upper half-plane.
void check_grid(const SweepGrid& grid);

bool operator==(const ProblemFile& a, const ProblemFile& b);

} // namespace elvis::io
