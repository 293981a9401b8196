#pragma once

// Optical forces from photon-momentum balance.
//
// Each guided photon carries Minkowski momentum n*hbar*k along the fiber, so
// the force on a bead is the net momentum flux it absorbs:
//
//   F_j ∝ k1(|A1|²+|B1|²−|C1|²−|D1|²) + k2(|A2|²+|B2|²−|C2|²−|D2|²)
//
// counting both directions on both sides. All forces here are normalized:
// the physical prefactor c*n*eps0*hbar/2 is factored out and the balance is
// divided by k1, so results are per |amplitude|² in units of the fundamental
// photon momentum. ForceResult additionally divides by the injected power.
// Sign convention: positive pushes along the injection direction, negative is
// a tractor force.

#include <cmath>

#include "fiberforce/chain.hpp"
#include "fiberforce/linalg.hpp"
#include "fiberforce/modes.hpp"
#include "fiberforce/scatter.hpp"

namespace fiberforce {

/// Normalized momentum balance at one bead (quadratic in the amplitudes).
inline double particle_force(const BeadAmps& b, const ModePair& modes) {
    const double mode1 = std::norm(b.A1) + std::norm(b.B1) - std::norm(b.C1) - std::norm(b.D1);
    const double mode2 = std::norm(b.A2) + std::norm(b.B2) - std::norm(b.C2) - std::norm(b.D2);
    return (modes.k1 * mode1 + modes.k2 * mode2) / modes.k1;
}

/// Per-bead forces of a solved chain, per unit injected power, plus the
/// global boundary momentum-flux difference in the same units. For lossless
/// propagation the per-bead balances telescope: sum(force) == total balance.
struct ForceResult {
    std::vector<double> per_bead;
    double total_flux_balance = 0.0;
};

inline ForceResult chain_forces(const FieldState& fs, const ModePair& modes,
                                const Injection& inj) {
    const double power = inj.power();
    ForceResult r;
    r.per_bead.reserve(fs.beads.size());
    for (const auto& b : fs.beads) r.per_bead.push_back(particle_force(b, modes) / power);

    const SegmentAmps& left = fs.segments.front();
    const SegmentAmps& right = fs.segments.back();
    const double mode1 = std::norm(left.fwd1) + std::norm(left.bwd1) - std::norm(right.fwd1) -
                         std::norm(right.bwd1);
    const double mode2 = std::norm(left.fwd2) + std::norm(left.bwd2) - std::norm(right.fwd2) -
                         std::norm(right.bwd2);
    r.total_flux_balance = (modes.k1 * mode1 + modes.k2 * mode2) / (modes.k1 * power);
    return r;
}

/// Single-particle closed form for two forward-propagating modes:
///   F ∝ (k2−k1)[(t²−1)(|A1|²−|A2|²) + t sqrt(1−t²)(e^{i phi}A1*A2 + c.c.)]
/// Note the interference-term phase convention: this closed form matches the
/// matrix route of build_two_port at phase pi−phi (they coincide whenever a
/// single mode is injected). Normalized like particle_force.
inline double closed_form_2p(double t, double phi, cplx A1, cplx A2, const ModePair& modes) {
    if (t < 0.0 || t > 1.0) throw std::domain_error("t must lie in [0,1]");
    const double t12 = std::sqrt(std::max(0.0, 1.0 - t * t));
    const cplx cross = std::exp(iunit * phi) * std::conj(A1) * A2;
    const double f = (modes.k2 - modes.k1) *
                     ((t * t - 1.0) * (std::norm(A1) - std::norm(A2)) +
                      t * t12 * 2.0 * cross.real());
    return f / modes.k1;
}

/// Single-particle closed form with backscattering (forward injection only):
///   F ∝ |A1|²[k1(r12²+t12²) + k2(r12²−t12²)]
///     + |A2|²[k1(r12²−t12²) + k2(r12²+t12²)]
///     + t t12 (k1−k2)(e^{i phi}A1 A2* + c.c.)
/// Equals particle_force(solve_chain(N=1)) exactly.
inline double closed_form_4p(const SimpleFourPortParams& p, cplx A1, cplx A2,
                             const ModePair& modes) {
    p.validate();
    const double t = p.t();
    const double t12sq = p.t12 * p.t12;
    const double r12sq = p.r12 * p.r12;
    const cplx cross = std::exp(iunit * p.phi) * A1 * std::conj(A2);
    const double f = std::norm(A1) * (modes.k1 * (r12sq + t12sq) + modes.k2 * (r12sq - t12sq)) +
                     std::norm(A2) * (modes.k1 * (r12sq - t12sq) + modes.k2 * (r12sq + t12sq)) +
                     p.t12 * t * (modes.k1 - modes.k2) * 2.0 * cross.real();
    return f / modes.k1;
}

/// Largest r12²/t12² for which a single bead under higher-mode injection
/// still feels a backward force: (k1−k2)/(k1+k2). Accepts the degenerate
/// k1 == k2 (threshold 0, no tractor possible).
inline double tractor_threshold(double k1, double k2) {
    if (!(k1 >= k2) || !(k2 > 0.0)) throw std::domain_error("requires k1 >= k2 > 0");
    return (k1 - k2) / (k1 + k2);
}

inline double tractor_threshold(const ModePair& modes) {
    return tractor_threshold(modes.k1, modes.k2);
}

}  // namespace fiberforce
