#pragma once

#include <cstdint>
#include <vector>

#include "elvis/geometry.h"
#include "elvis/solver.h"

// Slow, derivative-free reference computations. Nothing here calls the
// bisection solver or the normal-face machinery.
namespace elvis::oracle {

struct OracleConfig {
    int grid_points = 4096;
    double golden_tol = 1e-12;
    int membership_samples = 10000;
};

/// Throws std::invalid_argument when grid_points < 16 or golden_tol <= 0.
void check_config(const OracleConfig& cfg);

struct OracleMinimum {
    double y_star = 0.0;
    double phi_star = 0.0;
    // Grid points whose value is within 1e-12 of the minimum. A positive
    // width signals a non-unique (flat) minimum.
    double flat_lo = 0.0;
    double flat_hi = 0.0;
    // Search interval after outward expansion.
    double bracket_l = 0.0;
    double bracket_r = 0.0;

    double flat_width() const { return flat_hi - flat_lo; }
};

/// Grid search over the crossing abscissa followed by golden-section
/// refinement. The crossing time is evaluated in quadruple precision so the
/// refinement resolves smooth minima well below sqrt(machine epsilon).
OracleMinimum minimize_objective(const ElvisProblem& problem, const OracleConfig& cfg = {});

/// Membership through the defining inequalities of each family (edge
/// orientation tests for polygons), boundary included.
bool contains(const VelocitySet& set, Vec2 u);

/// Bisection on t for the predicate "v / t lies in the set".
double gauge_by_membership(const VelocitySet& set, Vec2 v, const OracleConfig& cfg = {});

/// cfg.membership_samples points drawn uniformly from the set by rejection.
std::vector<Vec2> sample_set(const VelocitySet& set, const OracleConfig& cfg, std::uint64_t seed);

} // namespace elvis::oracle
