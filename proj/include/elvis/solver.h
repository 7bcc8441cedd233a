#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elvis/geometry.h"

namespace elvis {

inline constexpr double kDefaultEpsilon = 1e-12;
inline constexpr int kDefaultMaxIter = 200;
inline constexpr int kMaxBracketDoublings = 64;

class ProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SolverErrc { BracketExpansionFailed, NotIsotropic };

std::string_view to_string(SolverErrc code);

class SolverError : public std::runtime_error {
public:
    SolverError(SolverErrc code, const std::string& detail);
    SolverErrc code() const noexcept { return code_; }

private:
    SolverErrc code_;
};

/// Least-time crossing of the x-axis from x0 (lower half-plane, velocities
/// in F0) to x1 (upper half-plane, velocities in F1).
struct ElvisProblem {
    Vec2 x0;
    Vec2 x1;
    VelocitySet F0;
    VelocitySet F1;
    double epsilon = kDefaultEpsilon;
    int max_iter = kDefaultMaxIter;
};

/// Throws ProblemError naming the first violated invariant.
void check_problem(const ElvisProblem& problem);

/// Crossing time through the interface point (y, 0).
double objective(const ElvisProblem& problem, double y);

/// Range of the x-component of zeta0 + zeta1 over every admissible pair of
/// multipliers. Each value is a subgradient of the crossing time at y.
struct DeltaInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool intersects(double lower, double upper) const { return lo <= upper && hi >= lower; }
    bool is_point() const { return lo == hi; }
};

/// Multiplier faces at one crossing abscissa. `face1` holds the candidates
/// for zeta1 itself, i.e. the negation of the normal face of F1.
struct Residual {
    DeltaInterval delta;
    NormalFace face0;
    NormalFace face1;
};

Residual evaluate_residual(const ElvisProblem& problem, double y);
DeltaInterval delta(const ElvisProblem& problem, double y);

/// Picks zeta0 in face0 and zeta1 in face1 whose x-components sum to the
/// value of the residual interval closest to zero.
std::pair<Vec2, Vec2> select_multipliers(const Residual& residual);

struct Bracket {
    double l = 0.0;
    double r = 0.0;
    bool expanded = false;
};

/// Starts from the projections of x0 and x1 and doubles the bracket outward
/// until a minimizer is certified inside it. Throws SolverError
/// (BracketExpansionFailed) when that never happens.
Bracket initial_bracket(const ElvisProblem& problem);

enum class SolveStatus { Converged, ResidualZeroInFace, MaxIterations };

std::string_view to_string(SolveStatus status);

struct TraceRow {
    int k = 0;
    double l = 0.0;
    double r = 0.0;
    double y = 0.0;
    double d = 0.0;
    DeltaInterval delta;
    bool terminal = false;
};

using BisectionTrace = std::vector<TraceRow>;

struct SolveResult {
    double y = 0.0;
    double time = 0.0;
    Vec2 v0;
    Vec2 v1;
    Vec2 zeta0;
    Vec2 zeta1;
    NormalFace face0;
    NormalFace face1;
    DeltaInterval delta;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    bool bracket_expanded = false;

    /// "Converged", "BracketExpanded+Converged", ...
    std::string status_label() const;
    bool converged() const { return status != SolveStatus::MaxIterations; }
};

struct SolveOutput {
    SolveResult result;
    BisectionTrace trace;
};

SolveOutput solve(const ElvisProblem& problem);

struct SnellAngles {
    double theta0 = 0.0;
    double theta1 = 0.0;
};

/// Angles of the optimal velocities against the interface normal (0, 1),
/// positive when travelling towards +x. Only defined for ball velocity sets;
/// throws SolverError (NotIsotropic) otherwise.
SnellAngles classical_snell_angles(const SolveResult& result, const ElvisProblem& problem);

} // namespace elvis
