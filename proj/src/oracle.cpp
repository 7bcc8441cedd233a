#include "elvis/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace elvis::oracle {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

constexpr double kFlatTol = 1e-12;

Quad objective_quad(const ElvisProblem& p, const Quad& y) {
    return gauge_as<Quad>(p.F0, y - Quad(p.x0.x), -Quad(p.x0.y)) +
           gauge_as<Quad>(p.F1, Quad(p.x1.x) - y, Quad(p.x1.y));
}

std::vector<double> sample_grid(const ElvisProblem& p, double l, double r, int n,
                                std::vector<double>& ys) {
    ys.resize(static_cast<std::size_t>(n));
    std::vector<double> values(ys.size());
    for (int i = 0; i < n; ++i) {
        const double y = l + (r - l) * static_cast<double>(i) / (n - 1);
        ys[static_cast<std::size_t>(i)] = y;
        values[static_cast<std::size_t>(i)] = objective(p, y);
    }
    return values;
}

Quad golden_section(const ElvisProblem& p, Quad a, Quad b, double tol) {
    const Quad inv_phi = (boost::multiprecision::sqrt(Quad(5)) - 1) / 2;
    Quad c = b - inv_phi * (b - a);
    Quad d = a + inv_phi * (b - a);
    Quad fc = objective_quad(p, c);
    Quad fd = objective_quad(p, d);
    for (int it = 0; it < 400 && b - a > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective_quad(p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective_quad(p, d);
        }
    }
    return (a + b) / 2;
}

} // namespace

void check_config(const OracleConfig& cfg) {
    if (cfg.grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
    if (!(cfg.golden_tol > 0.0)) throw std::invalid_argument("golden_tol must be positive");
}

OracleMinimum minimize_objective(const ElvisProblem& problem, const OracleConfig& cfg) {
    check_config(cfg);
    double l = std::min(problem.x0.x, problem.x1.x);
    double r = std::max(problem.x0.x, problem.x1.x);
    if (r - l == 0.0) {
        const double seed = 0.5 * (std::abs(problem.x0.y) + std::abs(problem.x1.y));
        l -= seed;
        r += seed;
    }

    std::vector<double> ys;
    std::vector<double> values;
    std::size_t first = 0;
    for (int round = 0;; ++round) {
        values = sample_grid(problem, l, r, cfg.grid_points, ys);
        first = static_cast<std::size_t>(
            std::min_element(values.begin(), values.end()) - values.begin());
        const bool at_left = first == 0;
        const bool at_right = first + 1 == values.size();
        if ((!at_left && !at_right) || round == kMaxBracketDoublings) break;
        const double width = r - l;
        if (at_left) l = r - 2.0 * width;
        if (at_right) r = l + 2.0 * width;
    }

    const double best = values[first];
    std::size_t flat_first = values.size();
    std::size_t flat_last = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= best + kFlatTol) {
            flat_first = std::min(flat_first, i);
            flat_last = i;
        }
    }

    const std::size_t lo_idx = first == 0 ? 0 : first - 1;
    const std::size_t hi_idx = std::min(first + 1, values.size() - 1);
    const Quad y_star = golden_section(problem, Quad(ys[lo_idx]), Quad(ys[hi_idx]), cfg.golden_tol);

    OracleMinimum out;
    out.y_star = static_cast<double>(y_star);
    out.phi_star = static_cast<double>(objective_quad(problem, y_star));
    // Two tied neighbours are just a minimum straddled by the grid.
    if (flat_last >= flat_first + 2) {
        out.flat_lo = ys[flat_first];
        out.flat_hi = ys[flat_last];
    } else {
        out.flat_lo = out.flat_hi = out.y_star;
    }
    out.bracket_l = l;
    out.bracket_r = r;
    return out;
}

bool contains(const VelocitySet& set, Vec2 u) {
    const auto& desc = set.description();
    if (const auto* ball = std::get_if<Ball>(&desc)) return dot(u, u) <= ball->r * ball->r;
    if (const auto* ell = std::get_if<Ellipse>(&desc)) {
        const Vec2 w = rotate(u, -ell->rot);
        const double sx = w.x / ell->a;
        const double sy = w.y / ell->b;
        return sx * sx + sy * sy <= 1.0;
    }
    const auto& vs = std::get<Polygon>(desc).vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vec2 a = vs[i];
        const Vec2 b = vs[(i + 1) % vs.size()];
        if (cross(b - a, u - a) < 0.0) return false;
    }
    return true;
}

double gauge_by_membership(const VelocitySet& set, Vec2 v, const OracleConfig&) {
    if (v.x == 0.0 && v.y == 0.0) {
        throw GeometryError(GeometryErrc::ZeroVector, "membership gauge of the zero vector");
    }
    // Invariant: v / hi is inside, v / lo is outside.
    double hi = 1.0;
    while (!contains(set, v / hi)) hi *= 2.0;
    double lo = hi;
    do {
        lo *= 0.5;
    } while (contains(set, v / lo));

    for (int it = 0; it < 300 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (contains(set, v / mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<Vec2> sample_set(const VelocitySet& set, const OracleConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double R = set.circumradius();
    std::uniform_real_distribution<double> coord(-R, R);
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(cfg.membership_samples));
    while (out.size() < static_cast<std::size_t>(cfg.membership_samples)) {
        const Vec2 u{coord(rng), coord(rng)};
        if (contains(set, u)) out.push_back(u);
    }
    return out;
}

} // namespace elvis::oracle
