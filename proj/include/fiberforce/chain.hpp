#pragma once

// Steady-state fields of N beads along the waveguide.
//
// Scattering matrices relate incoming to outgoing amplitudes at one bead and
// cannot be chained by multiplication. Rearranging the scattering relation
// into a transfer matrix mapping all left-plane amplitudes to all right-plane
// amplitudes fixes that:
//
//   transfer basis   (fwd-1, bwd-1, fwd-2, bwd-2)
//   transfer map     (C1, D1, C2, D2) = T * (A1, B1, A2, B2)
//
// (mode-interleaved, unlike the scattering basis — conversions below). The
// chain is then T_N * P(d_{N-1}) * ... * P(d_1) * T_1, and the two-point
// boundary problem (forward amplitudes prescribed on the left, backward on
// the right) reduces to one 2x2 linear solve for the left-going unknowns.
//
// fabry_perot_oracle solves the two-bead case instead by summing the multiple
// reflection series bounce by bounce straight from the scattering matrices.
// It never touches the transfer-matrix path, which makes it a useful
// independent cross-check.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "fiberforce/errors.hpp"
#include "fiberforce/linalg.hpp"
#include "fiberforce/modes.hpp"
#include "fiberforce/scatter.hpp"

namespace fiberforce {

/// Condition number beyond which the boundary solve is reported singular.
inline constexpr double kSolverCondLimit = 1e12;

/// Amplitudes injected at the chain boundaries: A from the left (forward),
/// D from the right (backward, zero in every configuration studied here).
struct Injection {
    cplx A1{};
    cplx A2{};
    cplx D1{};
    cplx D2{};

    double power() const {
        return std::norm(A1) + std::norm(A2) + std::norm(D1) + std::norm(D2);
    }

    void validate() const {
        if (power() == 0.0)
            throw std::domain_error("injection must have at least one nonzero amplitude");
    }
};

/// Ordered bead list with the N−1 free-propagation gaps between them.
struct ChainConfig {
    std::vector<ScatterMatrix> beads;
    std::vector<double> gaps;  // units of 1/k1
    ModePair modes;

    ChainConfig(std::vector<ScatterMatrix> beads_, std::vector<double> gaps_, ModePair modes_)
        : beads(std::move(beads_)), gaps(std::move(gaps_)), modes(modes_) {
        validate();
    }

    void validate() const {
        if (beads.empty()) throw std::domain_error("chain needs at least one bead");
        if (gaps.size() + 1 != beads.size())
            throw std::domain_error("chain needs exactly N-1 gaps for N beads");
        for (double d : gaps)
            if (d < 0.0) throw std::domain_error("gaps must be >= 0");
    }
};

/// N identical beads with equal spacing.
inline ChainConfig uniform_chain(const SimpleFourPortParams& p, std::size_t n, double gap,
                                 const ModePair& modes) {
    if (n == 0) throw std::domain_error("chain needs at least one bead");
    std::vector<ScatterMatrix> beads(n, build_four_port(p));
    std::vector<double> gaps(n - 1, gap);
    return ChainConfig{std::move(beads), std::move(gaps), modes};
}

inline ChainConfig two_bead_chain(const SimpleFourPortParams& p, double d, const ModePair& modes) {
    return uniform_chain(p, 2, d, modes);
}

/// All four amplitudes at one reference plane, scattering basis order.
struct SegmentAmps {
    cplx fwd1, fwd2, bwd1, bwd2;
};

/// The eight amplitudes entering and leaving one bead.
struct BeadAmps {
    cplx A1, A2, B1, B2, C1, C2, D1, D2;

    double in_power() const {
        return std::norm(A1) + std::norm(A2) + std::norm(D1) + std::norm(D2);
    }
    double out_power() const {
        return std::norm(B1) + std::norm(B2) + std::norm(C1) + std::norm(C2);
    }
};

/// Relative photon-number imbalance at one bead; ~0 for a unitary bead.
inline double conservation_residual(const BeadAmps& b) {
    const double in = b.in_power();
    if (in == 0.0) return 0.0;
    return std::abs(b.out_power() - in) / in;
}

/// Solved chain: segment s holds the amplitudes at the plane immediately
/// right of bead s (segment 0 = injection plane), plus per-bead tuples.
struct FieldState {
    std::vector<SegmentAmps> segments;
    std::vector<BeadAmps> beads;
    /// How well the reconstructed right boundary reproduces the prescribed
    /// backward injection, relative to the injected amplitude scale.
    double boundary_residual = 0.0;
};

/// 4x4 matrix in the transfer basis (fwd-1, bwd-1, fwd-2, bwd-2).
struct TransferMatrix {
    Mat4 m;
};

inline TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m * b.m};
}

namespace detail {

// Mode-space 2x2 blocks of a scattering matrix.
struct ScatterBlocks {
    Mat2 tt, tr, rt, rr;  // C = tt*A + tr*D, B = rt*A + rr*D
};

inline ScatterBlocks blocks_of(const Mat4& m) {
    ScatterBlocks b;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            b.tt(i, j) = m(i, j);
            b.tr(i, j) = m(i, j + 2);
            b.rt(i, j) = m(i + 2, j);
            b.rr(i, j) = m(i + 2, j + 2);
        }
    return b;
}

}  // namespace detail

/// Rearranges the scattering relation into the transfer map. Requires the
/// backward-backward block to be invertible (fails at full cross-reflection,
/// r12 → 1, where no light reaches the far side).
inline TransferMatrix to_transfer(const ScatterMatrix& s) {
    const auto b = detail::blocks_of(s.m);
    const cplx d = det(b.rr);
    const double scale = std::max(1.0, inf_norm(b.rr) * inf_norm(b.rr));
    if (std::abs(d) <= 1e-14 * scale)
        throw solver_error("scattering matrix has a non-invertible backward block", cond2(b.rr));

    const Mat2 rr_inv = inverse(b.rr);
    const Mat2 t_cb = b.tr * rr_inv;                 // C from B
    Mat2 t_ca = b.tt;                                // C from A
    {
        const Mat2 corr = t_cb * b.rt;
        for (std::size_t k = 0; k < 4; ++k) t_ca.e[k] -= corr.e[k];
    }
    Mat2 t_da = rr_inv * b.rt;                       // D from A
    for (auto& v : t_da.e) v = -v;
    const Mat2& t_db = rr_inv;                       // D from B

    TransferMatrix t;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            t.m(2 * i, 2 * j) = t_ca(i, j);
            t.m(2 * i, 2 * j + 1) = t_cb(i, j);
            t.m(2 * i + 1, 2 * j) = t_da(i, j);
            t.m(2 * i + 1, 2 * j + 1) = t_db(i, j);
        }
    return t;
}

/// Free propagation over d in the transfer basis:
/// diag(e^{i k1 d}, e^{−i k1 d}, e^{i k2 d}, e^{−i k2 d}).
inline TransferMatrix transfer_propagation(double d, const ModePair& modes) {
    if (d < 0.0) throw std::domain_error("propagation distance must be >= 0");
    TransferMatrix t;
    t.m(0, 0) = std::exp(iunit * (modes.k1 * d));
    t.m(1, 1) = std::conj(t.m(0, 0));
    t.m(2, 2) = std::exp(iunit * (modes.k2 * d));
    t.m(3, 3) = std::conj(t.m(2, 2));
    return t;
}

/// Core solve on prebuilt per-bead transfer matrices (reused by sweeps that
/// hold the bead fixed and vary only the gap).
inline FieldState solve_transfer_chain(const std::vector<TransferMatrix>& transfers,
                                       const std::vector<double>& gaps, const ModePair& modes,
                                       const Injection& inj) {
    inj.validate();
    const std::size_t n = transfers.size();

    Mat4 total = transfers[0].m;
    for (std::size_t j = 1; j < n; ++j)
        total = transfers[j].m * (transfer_propagation(gaps[j - 1], modes).m * total);

    // Unknown left-going amplitudes from the two backward-output rows.
    Mat2 k;
    k(0, 0) = total(1, 1);
    k(0, 1) = total(1, 3);
    k(1, 0) = total(3, 1);
    k(1, 1) = total(3, 3);
    const double cond = cond2(k);
    if (!(cond < kSolverCondLimit))
        throw solver_error("chain boundary system is singular or near-singular", cond);
    const Vec2 rhs{inj.D1 - total(1, 0) * inj.A1 - total(1, 2) * inj.A2,
                   inj.D2 - total(3, 0) * inj.A1 - total(3, 2) * inj.A2};
    const Vec2 b = solve2(k, rhs);

    FieldState fs;
    fs.segments.reserve(n + 1);
    fs.beads.reserve(n);

    Vec4 v{inj.A1, b[0], inj.A2, b[1]};  // transfer basis at the injection plane
    fs.segments.push_back({v[0], v[2], v[1], v[3]});
    for (std::size_t j = 0; j < n; ++j) {
        const Vec4 left = v;
        v = transfers[j].m * v;
        fs.beads.push_back({left[0], left[2], left[1], left[3], v[0], v[2], v[1], v[3]});
        fs.segments.push_back({v[0], v[2], v[1], v[3]});
        if (j + 1 < n) v = transfer_propagation(gaps[j], modes).m * v;
    }

    const double scale = std::max(1.0, std::sqrt(inj.power()));
    fs.boundary_residual =
        (std::abs(fs.segments.back().bwd1 - inj.D1) + std::abs(fs.segments.back().bwd2 - inj.D2)) /
        scale;
    if (!(fs.boundary_residual < 1e-10))
        throw solver_error("boundary reconstruction residual exceeds 1e-10",
                           fs.boundary_residual);
    return fs;
}

/// Steady-state fields for the whole chain under the given injection.
inline FieldState solve_chain(const ChainConfig& cfg, const Injection& inj) {
    cfg.validate();
    std::vector<TransferMatrix> transfers;
    transfers.reserve(cfg.beads.size());
    for (const auto& bead : cfg.beads) transfers.push_back(to_transfer(bead));
    return solve_transfer_chain(transfers, cfg.gaps, cfg.modes, inj);
}

/// Two-bead multiple-reflection solver. Sums the bounce series directly from
/// the scattering matrices; each pass adds one more reflection order, so the
/// iteration converges geometrically with ratio ~|r12|². Test oracle only —
/// solve_chain is the production path.
inline FieldState fabry_perot_oracle(const ChainConfig& cfg, const Injection& inj,
                                     std::size_t max_bounces, double tol = 1e-12) {
    cfg.validate();
    inj.validate();
    if (cfg.beads.size() != 2)
        throw std::domain_error("fabry_perot_oracle handles exactly two beads");

    const auto m1 = detail::blocks_of(cfg.beads[0].m);
    const auto m2 = detail::blocks_of(cfg.beads[1].m);
    const double d = cfg.gaps[0];
    const cplx p1 = std::exp(iunit * (cfg.modes.k1 * d));
    const cplx p2 = std::exp(iunit * (cfg.modes.k2 * d));
    auto propagate = [&](const Vec2& v) { return Vec2{p1 * v[0], p2 * v[1]}; };

    const Vec2 a{inj.A1, inj.A2};
    const Vec2 d_right{inj.D1, inj.D2};
    const double scale = std::max(1.0, std::sqrt(inj.power()));

    Vec2 d1{};  // backward field arriving at bead 1 from bead 2
    Vec2 c1{}, b1{}, a2{}, c2{}, b2{};
    double change = 0.0;
    std::size_t bounce = 0;
    for (; bounce < max_bounces; ++bounce) {
        c1 = {m1.tt(0, 0) * a[0] + m1.tt(0, 1) * a[1] + m1.tr(0, 0) * d1[0] + m1.tr(0, 1) * d1[1],
              m1.tt(1, 0) * a[0] + m1.tt(1, 1) * a[1] + m1.tr(1, 0) * d1[0] + m1.tr(1, 1) * d1[1]};
        b1 = {m1.rt(0, 0) * a[0] + m1.rt(0, 1) * a[1] + m1.rr(0, 0) * d1[0] + m1.rr(0, 1) * d1[1],
              m1.rt(1, 0) * a[0] + m1.rt(1, 1) * a[1] + m1.rr(1, 0) * d1[0] + m1.rr(1, 1) * d1[1]};
        a2 = propagate(c1);
        c2 = {m2.tt(0, 0) * a2[0] + m2.tt(0, 1) * a2[1] + m2.tr(0, 0) * d_right[0] +
                  m2.tr(0, 1) * d_right[1],
              m2.tt(1, 0) * a2[0] + m2.tt(1, 1) * a2[1] + m2.tr(1, 0) * d_right[0] +
                  m2.tr(1, 1) * d_right[1]};
        b2 = {m2.rt(0, 0) * a2[0] + m2.rt(0, 1) * a2[1] + m2.rr(0, 0) * d_right[0] +
                  m2.rr(0, 1) * d_right[1],
              m2.rt(1, 0) * a2[0] + m2.rt(1, 1) * a2[1] + m2.rr(1, 0) * d_right[0] +
                  m2.rr(1, 1) * d_right[1]};
        const Vec2 d1_next = propagate(b2);
        change = (std::abs(d1_next[0] - d1[0]) + std::abs(d1_next[1] - d1[1])) / scale;
        d1 = d1_next;
        if (change < tol) break;
    }
    if (change >= tol)
        throw convergence_error("multiple-reflection series did not converge", bounce, change);

    // One more pass with the converged feedback field so all amplitudes are
    // mutually consistent at the bead level.
    c1 = {m1.tt(0, 0) * a[0] + m1.tt(0, 1) * a[1] + m1.tr(0, 0) * d1[0] + m1.tr(0, 1) * d1[1],
          m1.tt(1, 0) * a[0] + m1.tt(1, 1) * a[1] + m1.tr(1, 0) * d1[0] + m1.tr(1, 1) * d1[1]};
    b1 = {m1.rt(0, 0) * a[0] + m1.rt(0, 1) * a[1] + m1.rr(0, 0) * d1[0] + m1.rr(0, 1) * d1[1],
          m1.rt(1, 0) * a[0] + m1.rt(1, 1) * a[1] + m1.rr(1, 0) * d1[0] + m1.rr(1, 1) * d1[1]};
    a2 = propagate(c1);
    c2 = {m2.tt(0, 0) * a2[0] + m2.tt(0, 1) * a2[1] + m2.tr(0, 0) * d_right[0] +
              m2.tr(0, 1) * d_right[1],
          m2.tt(1, 0) * a2[0] + m2.tt(1, 1) * a2[1] + m2.tr(1, 0) * d_right[0] +
              m2.tr(1, 1) * d_right[1]};
    b2 = {m2.rt(0, 0) * a2[0] + m2.rt(0, 1) * a2[1] + m2.rr(0, 0) * d_right[0] +
              m2.rr(0, 1) * d_right[1],
          m2.rt(1, 0) * a2[0] + m2.rt(1, 1) * a2[1] + m2.rr(1, 0) * d_right[0] +
              m2.rr(1, 1) * d_right[1]};

    FieldState fs;
    fs.segments = {{a[0], a[1], b1[0], b1[1]},
                   {c1[0], c1[1], d1[0], d1[1]},
                   {c2[0], c2[1], d_right[0], d_right[1]}};
    fs.beads = {{a[0], a[1], b1[0], b1[1], c1[0], c1[1], d1[0], d1[1]},
                {a2[0], a2[1], b2[0], b2[1], c2[0], c2[1], d_right[0], d_right[1]}};
    fs.boundary_residual = 0.0;
    return fs;
}

}  // namespace fiberforce
