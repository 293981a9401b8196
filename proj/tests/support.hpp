#pragma once

// Shared test helpers: a seeded generator with platform-independent uniform
// draws (raw mantissa bits, no distribution objects) and small comparison
// utilities for complex amplitudes.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "fiberforce/chain.hpp"
#include "fiberforce/scatter.hpp"

namespace testsup {

using fiberforce::cplx;

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    cplx complex_in_disk(double rmax) {
        const double r = rmax * std::sqrt(uniform());
        const double th = uniform(0.0, 2.0 * M_PI);
        return {r * std::cos(th), r * std::sin(th)};
    }

    /// Valid cross-coupling parameters away from the r12 -> 1 degeneracy.
    fiberforce::SimpleFourPortParams four_port_params(double r12_max = 0.95) {
        const double t12 = uniform(0.0, 0.95);
        const double r_cap = std::min(r12_max, 0.98 * std::sqrt(1.0 - t12 * t12));
        const double r12 = uniform(0.0, r_cap);
        const double phi = uniform(0.0, 2.0 * M_PI);
        return {t12, r12, phi};
    }

    /// Forward-only injection with nonvanishing power.
    fiberforce::Injection forward_injection(double amp = 1.5) {
        for (;;) {
            fiberforce::Injection inj{complex_in_disk(amp), complex_in_disk(amp), 0.0, 0.0};
            if (inj.power() > 1e-4) return inj;
        }
    }
};

inline double cdist(cplx a, cplx b) { return std::abs(a - b); }

inline double max_entry_distance(const fiberforce::Mat4& a, const fiberforce::Mat4& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(a.e[i] - b.e[i]));
    return worst;
}

inline double max_segment_distance(const fiberforce::FieldState& a,
                                   const fiberforce::FieldState& b) {
    double worst = 0.0;
    for (std::size_t s = 0; s < a.segments.size(); ++s) {
        worst = std::max(worst, cdist(a.segments[s].fwd1, b.segments[s].fwd1));
        worst = std::max(worst, cdist(a.segments[s].fwd2, b.segments[s].fwd2));
        worst = std::max(worst, cdist(a.segments[s].bwd1, b.segments[s].bwd1));
        worst = std::max(worst, cdist(a.segments[s].bwd2, b.segments[s].bwd2));
    }
    return worst;
}

}  // namespace testsup
