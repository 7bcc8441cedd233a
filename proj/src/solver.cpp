#include "elvis/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace elvis {

std::string_view to_string(SolverErrc code) {
    switch (code) {
    case SolverErrc::BracketExpansionFailed: return "BracketExpansionFailed";
    case SolverErrc::NotIsotropic: return "NotIsotropic";
    }
    return "Unknown";
}

SolverError::SolverError(SolverErrc code, const std::string& detail)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), detail)), code_(code) {}

std::string_view to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::ResidualZeroInFace: return "ResidualZeroInFace";
    case SolveStatus::MaxIterations: return "MaxIterations";
    }
    return "Unknown";
}

std::string SolveResult::status_label() const {
    if (bracket_expanded) return fmt::format("BracketExpanded+{}", to_string(status));
    return std::string(to_string(status));
}

void check_problem(const ElvisProblem& problem) {
    const auto finite = [](Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); };
    if (!finite(problem.x0)) throw ProblemError("x0 must be finite");
    if (!finite(problem.x1)) throw ProblemError("x1 must be finite");
    if (!(problem.x0.y < 0.0)) throw ProblemError("x0 must satisfy x0_y < 0");
    if (!(problem.x1.y > 0.0)) throw ProblemError("x1 must satisfy x1_y > 0");
    if (!(problem.epsilon > 0.0) || !std::isfinite(problem.epsilon)) {
        throw ProblemError("epsilon must be positive");
    }
    if (problem.max_iter < 1) throw ProblemError("max_iter must be at least 1");
}

double objective(const ElvisProblem& problem, double y) {
    const Vec2 crossing{y, 0.0};
    return gauge(problem.F0, crossing - problem.x0) + gauge(problem.F1, problem.x1 - crossing);
}

Residual evaluate_residual(const ElvisProblem& problem, double y) {
    const Vec2 crossing{y, 0.0};
    Residual res;
    res.face0 = normal_face(problem.F0, crossing - problem.x0);
    res.face1 = normal_face(problem.F1, problem.x1 - crossing).negated();
    res.delta = {res.face0.x_min() + res.face1.x_min(), res.face0.x_max() + res.face1.x_max()};
    return res;
}

DeltaInterval delta(const ElvisProblem& problem, double y) {
    return evaluate_residual(problem, y).delta;
}

std::pair<Vec2, Vec2> select_multipliers(const Residual& residual) {
    const double target = std::clamp(0.0, residual.delta.lo, residual.delta.hi);
    const double mid1 = 0.5 * (residual.face1.x_min() + residual.face1.x_max());
    const double x0 =
        std::clamp(target - mid1, residual.face0.x_min(), residual.face0.x_max());
    const double x1 =
        std::clamp(target - x0, residual.face1.x_min(), residual.face1.x_max());
    return {residual.face0.at_x(x0), residual.face1.at_x(x1)};
}

Bracket initial_bracket(const ElvisProblem& problem) {
    Bracket b;
    b.l = std::min(problem.x0.x, problem.x1.x);
    b.r = std::max(problem.x0.x, problem.x1.x);
    // Seed width for the zero-width case (vertically aligned endpoints).
    const double seed = 0.5 * (std::abs(problem.x0.y) + std::abs(problem.x1.y));
    const double eps = problem.epsilon;

    for (int n = 0; delta(problem, b.l).lo > eps; ++n) {
        if (n == kMaxBracketDoublings) {
            throw SolverError(SolverErrc::BracketExpansionFailed,
                              fmt::format("residual stays positive down to y = {}", b.l));
        }
        b.l = b.r - 2.0 * std::max(b.r - b.l, seed);
        b.expanded = true;
    }
    for (int n = 0; delta(problem, b.r).hi < -eps; ++n) {
        if (n == kMaxBracketDoublings) {
            throw SolverError(SolverErrc::BracketExpansionFailed,
                              fmt::format("residual stays negative up to y = {}", b.r));
        }
        b.r = b.l + 2.0 * std::max(b.r - b.l, seed);
        b.expanded = true;
    }
    return b;
}

namespace {

double ulp(double x) {
    const double a = std::abs(x);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

// On polygon facets the crossing time is affine in y, so a vanishing
// residual there means a whole segment of minimizers.
bool flat_polygon_piece(const ElvisProblem& problem, const Residual& res) {
    return problem.F0.is_polygon() && problem.F1.is_polygon() && !res.face0.is_segment() &&
           !res.face1.is_segment();
}

SolveStatus classify(const ElvisProblem& problem, const Residual& res) {
    const DeltaInterval& d = res.delta;
    if (d.lo < d.hi && d.lo < 0.0 && 0.0 < d.hi) return SolveStatus::ResidualZeroInFace;
    if (flat_polygon_piece(problem, res)) return SolveStatus::ResidualZeroInFace;
    return SolveStatus::Converged;
}

// Polygon vertex w exposed by a polar edge [a, b]: <a, w> = <b, w> = 1.
Vec2 exposed_vertex(const NormalFace& face) {
    const Vec2 a = face.lo;
    const Vec2 b = face.hi;
    const double det = cross(a, b);
    return {(b.y - a.y) / det, (a.x - b.x) / det};
}

// A vertex face is detected within a tolerance, so the halting iterate can
// sit up to that tolerance away from the kink. Returns the exact abscissae at
// which a leg points along an exposed vertex.
std::vector<double> kink_candidates(const ElvisProblem& problem, const Residual& res) {
    std::vector<double> ys;
    if (res.face0.is_segment()) {
        const Vec2 w = exposed_vertex(res.face0);
        if (w.y > 0.0) ys.push_back(problem.x0.x - problem.x0.y * w.x / w.y);
    }
    if (res.face1.is_segment()) {
        const Vec2 w = exposed_vertex(res.face1.negated());
        if (w.y > 0.0) ys.push_back(problem.x1.x - problem.x1.y * w.x / w.y);
    }
    return ys;
}

} // namespace

SolveOutput solve(const ElvisProblem& problem) {
    check_problem(problem);
    const double eps = problem.epsilon;
    const Bracket bracket = initial_bracket(problem);

    SolveOutput out;
    SolveResult& result = out.result;
    result.bracket_expanded = bracket.expanded;

    // The bracket is carried as (l, d) so that d halves exactly.
    double l = bracket.l;
    double d = bracket.r - bracket.l;
    Residual res;
    double y = l;
    for (int k = 0;; ++k) {
        y = d > 0.0 ? l + 0.5 * d : l;
        res = evaluate_residual(problem, y);
        TraceRow row{k, l, l + d, y, d, res.delta, false};

        bool stop = true;
        if (res.delta.intersects(-eps, eps)) {
            result.status = classify(problem, res);
        } else if (k + 1 >= problem.max_iter || 0.5 * d < 4.0 * ulp(y)) {
            result.status = SolveStatus::MaxIterations;
        } else {
            stop = false;
        }
        row.terminal = stop;
        out.trace.push_back(row);
        if (stop) break;

        // A negative residual means the crossing time still decreases at y,
        // so keep [y, l + d]; otherwise keep [l, y].
        if (res.delta.hi < -eps) l = y;
        d *= 0.5;
    }

    if (result.status == SolveStatus::ResidualZeroInFace) {
        double best = objective(problem, y);
        const double lo = out.trace.back().l;
        const double hi = out.trace.back().r;
        for (double yk : kink_candidates(problem, res)) {
            if (!(yk >= lo && yk <= hi)) continue;
            const Residual rk = evaluate_residual(problem, yk);
            const double tk = objective(problem, yk);
            if (rk.delta.intersects(-eps, eps) && tk <= best) {
                y = yk;
                res = rk;
                best = tk;
                result.status = classify(problem, rk);
            }
        }
    }

    const Vec2 crossing{y, 0.0};
    const Vec2 leg0 = crossing - problem.x0;
    const Vec2 leg1 = problem.x1 - crossing;
    const double t0 = gauge(problem.F0, leg0);
    const double t1 = gauge(problem.F1, leg1);
    const auto [zeta0, zeta1] = select_multipliers(res);

    result.y = y;
    result.time = t0 + t1;
    result.v0 = leg0 / t0;
    result.v1 = leg1 / t1;
    result.zeta0 = zeta0;
    result.zeta1 = zeta1;
    result.face0 = res.face0;
    result.face1 = res.face1;
    result.delta = res.delta;
    result.iterations = static_cast<int>(out.trace.size());
    return out;
}

SnellAngles classical_snell_angles(const SolveResult& result, const ElvisProblem& problem) {
    if (!problem.F0.is_ball() || !problem.F1.is_ball()) {
        throw SolverError(SolverErrc::NotIsotropic,
                          "classical Snell angles need ball velocity sets in both media");
    }
    return {std::atan2(result.v0.x, result.v0.y), std::atan2(result.v1.x, result.v1.y)};
}

} // namespace elvis
