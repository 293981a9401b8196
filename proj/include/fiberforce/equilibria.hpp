#pragma once

// Equal-force distances of a two-bead chain and their stability.
//
// A pair locked at distance d* requires F1(d*) = F2(d*) with a restoring
// response: if the beads drift apart the differential force must pull them
// back, i.e. d(F1−F2)/dd > 0. Roots of g(d) = F1−F2 are located by sign
// bracketing on a dense grid (resolved well past the fastest interference
// scale pi/(k1+k2)) followed by bisection. Stability is classified from the
// sign of g' by central differences; the per-force slopes are kept as
// diagnostics. Note that without backscattering F1 is exactly independent of
// d, so the restoring condition falls entirely on F2 there.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fiberforce/chain.hpp"
#include "fiberforce/force.hpp"
#include "fiberforce/parallel.hpp"

namespace fiberforce {

/// Distance window for a two-bead search, units of 1/k1.
struct DistanceRange {
    double d_min;
    double d_max;
};

/// Default window: excludes near-contact (the point-scatterer model breaks
/// down for overlapping beads) and spans two mode beat periods.
inline DistanceRange default_distance_range(const ModePair& modes) {
    return {0.05 / modes.k1, 2.0 * modes.beat_period()};
}

/// Grid density meeting the shipped defaults: 4e3 samples per beat period
/// and no fewer than 40 per fast interference period.
inline std::size_t default_samples(const ModePair& modes, const DistanceRange& range) {
    const double per_unit =
        std::max(4000.0 / modes.beat_period(), 40.0 / modes.fast_period());
    const double len = std::max(0.0, range.d_max - range.d_min);
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(len * per_unit)) + 1);
}

/// Allocation-free force evaluator for a two-bead chain with a variable gap.
/// Precomputes the per-bead transfer matrices once.
class TwoBeadForces {
public:
    TwoBeadForces(const ChainConfig& cfg, const Injection& inj)
        : modes_(cfg.modes), inj_(inj), power_(inj.power()) {
        cfg.validate();
        inj.validate();
        if (cfg.beads.size() != 2)
            throw std::domain_error("TwoBeadForces requires exactly two beads");
        t1_ = to_transfer(cfg.beads[0]).m;
        t2_ = to_transfer(cfg.beads[1]).m;
    }

    /// Forces per unit injected power on (first, second) bead at gap d.
    std::pair<double, double> operator()(double d) const {
        const cplx p1 = std::exp(iunit * (modes_.k1 * d));
        const cplx p2 = std::exp(iunit * (modes_.k2 * d));
        const cplx phases[4] = {p1, std::conj(p1), p2, std::conj(p2)};

        // total = t2 * P(d) * t1, with P applied as a row scaling of t1
        Mat4 total;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < 4; ++k) s += t2_(i, k) * phases[k] * t1_(k, j);
                total(i, j) = s;
            }

        Mat2 k;
        k(0, 0) = total(1, 1);
        k(0, 1) = total(1, 3);
        k(1, 0) = total(3, 1);
        k(1, 1) = total(3, 3);
        const double cond = cond2(k);
        if (!(cond < kSolverCondLimit))
            throw solver_error("two-bead boundary system is singular", cond);
        const Vec2 b = solve2(k, {inj_.D1 - total(1, 0) * inj_.A1 - total(1, 2) * inj_.A2,
                                  inj_.D2 - total(3, 0) * inj_.A1 - total(3, 2) * inj_.A2});

        const Vec4 v0{inj_.A1, b[0], inj_.A2, b[1]};
        const Vec4 v1 = t1_ * v0;
        Vec4 vl2;
        for (std::size_t i = 0; i < 4; ++i) vl2[i] = phases[i] * v1[i];
        const Vec4 v2 = t2_ * vl2;

        const BeadAmps bead1{v0[0], v0[2], v0[1], v0[3], v1[0], v1[2], v1[1], v1[3]};
        const BeadAmps bead2{vl2[0], vl2[2], vl2[1], vl2[3], v2[0], v2[2], v2[1], v2[3]};
        return {particle_force(bead1, modes_) / power_, particle_force(bead2, modes_) / power_};
    }

    double force_difference(double d) const {
        const auto [f1, f2] = (*this)(d);
        return f1 - f2;
    }

    const ModePair& modes() const { return modes_; }

private:
    Mat4 t1_, t2_;
    ModePair modes_;
    Injection inj_;
    double power_;
};

struct ForceSample {
    double d;
    double F1;
    double F2;
};

/// Dense (d, F1, F2) table over the range; samples >= 2, endpoints included.
inline std::vector<ForceSample> force_vs_distance(const ChainConfig& cfg, const Injection& inj,
                                                  const DistanceRange& range,
                                                  std::size_t samples) {
    if (samples < 2) throw std::domain_error("force_vs_distance needs samples >= 2");
    if (!(range.d_min > 0.0) || !(range.d_max > range.d_min))
        throw std::domain_error("force_vs_distance needs 0 < d_min < d_max");
    const TwoBeadForces forces(cfg, inj);
    std::vector<ForceSample> out;
    out.reserve(samples);
    const double step = (range.d_max - range.d_min) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double d = range.d_min + step * static_cast<double>(i);
        const auto [f1, f2] = forces(d);
        out.push_back({d, f1, f2});
    }
    return out;
}

struct EquilibriumPoint {
    double d_star;
    double F_common;
    bool stable;
    double dF1_dd;  // finite-difference diagnostics at d_star
    double dF2_dd;
};

struct EquilibriumSearchOptions {
    std::size_t samples = 0;     // 0 -> default_samples
    double merge_tol = 1e-6;     // equilibria closer than this are duplicates
    double deriv_step = 1e-4;    // central-difference step, units 1/k1
    double g_tol = 1e-12;        // |F1-F2| target for the bisection
};

namespace detail {

inline double bisect_root(const TwoBeadForces& forces, double lo, double hi, double g_lo,
                          double g_tol) {
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double g_mid = forces.force_difference(mid);
        if (std::abs(g_mid) < g_tol) return mid;
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
            break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// All isolated roots of F1−F2 in the range, stability-classified. An empty
/// result is a valid outcome (e.g. transparent beads, where the difference
/// vanishes identically and has no isolated roots).
inline std::vector<EquilibriumPoint> find_equilibria(
    const ChainConfig& cfg, const Injection& inj, const DistanceRange& range,
    const EquilibriumSearchOptions& opt = {}) {
    if (!(range.d_min > 0.0) || !(range.d_max > range.d_min))
        throw std::domain_error("find_equilibria needs 0 < d_min < d_max");
    const TwoBeadForces forces(cfg, inj);
    const std::size_t n =
        opt.samples != 0 ? std::max<std::size_t>(2, opt.samples) : default_samples(cfg.modes, range);

    const double step = (range.d_max - range.d_min) / static_cast<double>(n - 1);
    std::vector<double> grid_d(n), grid_g(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid_d[i] = range.d_min + step * static_cast<double>(i);
        grid_g[i] = forces.force_difference(grid_d[i]);
    }

    // Roots are strict sign transitions. A grid point where g vanishes
    // exactly counts only when flanked by opposite signs; plateaus of zeros
    // (transparent beads) carry no isolated roots.
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ga = grid_g[i], gb = grid_g[i + 1];
        if (ga != 0.0 && gb != 0.0 && (ga > 0.0) != (gb > 0.0))
            roots.push_back(detail::bisect_root(forces, grid_d[i], grid_d[i + 1], ga, opt.g_tol));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (grid_g[i] != 0.0 || grid_g[i - 1] == 0.0) continue;
        std::size_t hi = i;
        while (hi + 1 < n && grid_g[hi + 1] == 0.0) ++hi;
        if (hi + 1 < n && grid_g[hi + 1] != 0.0 &&
            (grid_g[i - 1] > 0.0) != (grid_g[hi + 1] > 0.0))
            roots.push_back(grid_d[(i + hi) / 2]);
        i = hi;  // one candidate per zero plateau
    }

    std::sort(roots.begin(), roots.end());
    std::vector<EquilibriumPoint> out;
    double last_kept = -std::numeric_limits<double>::infinity();
    for (double d_star : roots) {
        if (d_star - last_kept < opt.merge_tol) continue;
        last_kept = d_star;

        const auto [f1, f2] = forces(d_star);
        if (!(std::abs(f1 - f2) < 1e-9)) continue;  // stalled bracket, not an equilibrium
        const double h = opt.deriv_step;
        const auto [f1p, f2p] = forces(d_star + h);
        const auto [f1m, f2m] = forces(d_star - h);
        const double dF1 = (f1p - f1m) / (2.0 * h);
        const double dF2 = (f2p - f2m) / (2.0 * h);
        out.push_back({d_star, 0.5 * (f1 + f2), (dF1 - dF2) > 0.0, dF1, dF2});
    }
    return out;
}

struct BindingPoint {
    double t;
    double d_star;
    double F_common;
};

/// Stable tractor distances (F_common < 0) of two identical forward-only
/// beads, per transmission coefficient. Below a threshold t the list is
/// empty: a bead that converts too much higher-mode light leaves nothing for
/// the second bead to bind against.
inline std::vector<BindingPoint> binding_distance_curve(const std::vector<double>& t_values,
                                                        const ModePair& modes,
                                                        const Injection& inj,
                                                        std::optional<DistanceRange> range = {},
                                                        const EquilibriumSearchOptions& opt = {}) {
    const DistanceRange r = range ? *range : default_distance_range(modes);
    std::vector<BindingPoint> out;
    for (double t : t_values) {
        std::vector<ScatterMatrix> beads(2, build_two_port(t, 0.0));
        ChainConfig cfg{std::move(beads), {0.0}, modes};
        for (const auto& eq : find_equilibria(cfg, inj, r, opt))
            if (eq.stable && eq.F_common < 0.0) out.push_back({t, eq.d_star, eq.F_common});
    }
    return out;
}

/// One cell of the (t12, r12) stability scan.
struct StabilityCell {
    double t12;
    double r12;
    bool feasible;         // t12² + r12² <= 1
    bool has_stable;
    double min_stable_force;  // NaN when no stable point exists
};

struct StabilityMap {
    std::size_t n_t12 = 0;
    std::size_t n_r12 = 0;
    std::vector<double> t12_values;
    std::vector<double> r12_values;
    std::vector<StabilityCell> cells;  // row-major, index = i_t12 * n_r12 + i_r12

    const StabilityCell& at(std::size_t i_t12, std::size_t i_r12) const {
        return cells[i_t12 * n_r12 + i_r12];
    }

    /// Per t12 row, the r12 where the minimal stable force crosses zero
    /// (linear interpolation between adjacent stable cells of opposite sign).
    std::vector<std::pair<double, double>> zero_contour() const {
        std::vector<std::pair<double, double>> out;
        for (std::size_t i = 0; i < n_t12; ++i)
            for (std::size_t j = 0; j + 1 < n_r12; ++j) {
                const auto& a = at(i, j);
                const auto& b = at(i, j + 1);
                if (!a.has_stable || !b.has_stable) continue;
                if ((a.min_stable_force < 0.0) == (b.min_stable_force < 0.0)) continue;
                const double w = a.min_stable_force / (a.min_stable_force - b.min_stable_force);
                out.emplace_back(a.t12, a.r12 + w * (b.r12 - a.r12));
            }
        return out;
    }
};

struct GridSpec {
    double t12_min = 0.0, t12_max = 1.0;
    std::size_t n_t12 = 100;
    double r12_min = 0.0, r12_max = 1.0;
    std::size_t n_r12 = 100;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
    return v;
}

/// Minimal stable force per (t12, r12) cell. Cells are independent and run
/// data-parallel; results land in a preallocated grid so the output ordering
/// never depends on scheduling. Cells whose boundary solve degenerates (e.g.
/// r12 → 1, no transmission channel) report no stable point.
inline StabilityMap scan_stability_region(const GridSpec& grid, const ModePair& modes,
                                          const Injection& inj, const DistanceRange& range,
                                          unsigned threads = 0,
                                          const EquilibriumSearchOptions& opt = {}) {
    StabilityMap map;
    map.n_t12 = grid.n_t12;
    map.n_r12 = grid.n_r12;
    map.t12_values = linspace(grid.t12_min, grid.t12_max, grid.n_t12);
    map.r12_values = linspace(grid.r12_min, grid.r12_max, grid.n_r12);
    map.cells.resize(grid.n_t12 * grid.n_r12);

    parallel_for(map.cells.size(), threads, [&](std::size_t idx) {
        const double t12 = map.t12_values[idx / grid.n_r12];
        const double r12 = map.r12_values[idx % grid.n_r12];
        StabilityCell cell{t12, r12, true, false, std::numeric_limits<double>::quiet_NaN()};
        if (t12 * t12 + r12 * r12 > 1.0 + 1e-12) {
            cell.feasible = false;
            map.cells[idx] = cell;
            return;
        }
        try {
            const ChainConfig cfg = two_bead_chain({t12, r12, 0.0}, 0.0, modes);
            for (const auto& eq : find_equilibria(cfg, inj, range, opt)) {
                if (!eq.stable) continue;
                if (!cell.has_stable || eq.F_common < cell.min_stable_force) {
                    cell.has_stable = true;
                    cell.min_stable_force = eq.F_common;
                }
            }
        } catch (const solver_error&) {
            // degenerate cell: leave as "no stable point"
        }
        map.cells[idx] = cell;
    });
    return map;
}

}  // namespace fiberforce
