#pragma once

// Per-bead scattering matrices for a two-mode waveguide.
//
// A bead couples four local amplitudes: two co-propagating transverse modes
// in each direction. Conventions used by every module in this library:
//
//   basis order      (forward-1, forward-2, backward-1, backward-2)
//   scattering map   (C1, C2, B1, B2) = M * (A1, A2, D1, D2)
//
// where A are the forward amplitudes arriving from the left, D the backward
// amplitudes arriving from the right, C the forward amplitudes leaving to the
// right and B the backward amplitudes leaving to the left. First index = mode.
//
// Lossless beads give unitary M (photon number conserved). Sub-unitary
// matrices are allowed when tagged with a loss fraction; no module rescales
// them silently.

#include <cmath>
#include <stdexcept>

#include "fiberforce/linalg.hpp"
#include "fiberforce/modes.hpp"

namespace fiberforce {

/// Unitarity tolerance accepted for user-supplied matrices.
inline constexpr double kUnitarityTolInput = 1e-10;
/// Unitarity tolerance required of internally constructed matrices.
inline constexpr double kUnitarityTolBuilt = 1e-12;

struct ScatterMatrix {
    Mat4 m;
    /// Fraction of injected photons unaccounted for by this matrix; zero for
    /// a unitary bead. Recorded by the caller when accepting lossy input.
    double loss_fraction = 0.0;
};

/// ||M†M − I||_inf of the scattering matrix.
inline double check_unitarity(const ScatterMatrix& s) { return unitarity_deviation(s.m); }

/// Cross-coupling parameters of the symmetric lossless bead model:
/// equal same-mode transmission t for both modes, no same-mode reflection,
/// cross transmission t12 and cross reflection r12 with coupling phase phi.
/// Unitarity fixes t = sqrt(1 − t12² − r12²).
struct SimpleFourPortParams {
    double t12 = 0.0;
    double r12 = 0.0;
    double phi = 0.0;

    void validate() const {
        if (t12 < 0.0 || t12 > 1.0) throw std::domain_error("t12 must lie in [0,1]");
        if (r12 < 0.0 || r12 > 1.0) throw std::domain_error("r12 must lie in [0,1]");
        if (t12 * t12 + r12 * r12 > 1.0 + 1e-15)
            throw std::domain_error("t12^2 + r12^2 must not exceed 1");
    }

    double t() const {
        double rad = 1.0 - t12 * t12 - r12 * r12;
        return rad > 0.0 ? std::sqrt(rad) : 0.0;
    }
};

/// All sixteen free coefficients of the general symmetric-device matrix:
/// amplitudes t_ij, r_ij in [0,1] and phases phi_ij, psi_ij.
struct GeneralFourPortParams {
    double t11 = 1.0, t12 = 0.0, t21 = 0.0, t22 = 1.0;
    double r11 = 0.0, r12 = 0.0, r21 = 0.0, r22 = 0.0;
    double phi11 = 0.0, phi12 = 0.0, phi21 = 0.0, phi22 = 0.0;
    double psi11 = 0.0, psi12 = 0.0, psi21 = 0.0, psi22 = 0.0;

    void validate() const {
        for (double a : {t11, t12, t21, t22, r11, r12, r21, r22})
            if (a < 0.0 || a > 1.0)
                throw std::domain_error("scattering amplitudes must lie in [0,1]");
    }
};

/// Lossless forward-only mode mixer: cross transmission sqrt(1−t²) with
/// coupling phase phi, zero reflection. Forward 2x2 block
///   [ t              −e^{−i phi} t12 ]
///   [ e^{i phi} t12   t              ]
/// embedded in the 4x4 basis; the backward block is identical.
inline ScatterMatrix build_two_port(double t, double phi) {
    if (t < 0.0 || t > 1.0) throw std::domain_error("t must lie in [0,1]");
    const double t12 = std::sqrt(std::max(0.0, 1.0 - t * t));
    const cplx ep = std::exp(iunit * phi);
    const cplx em = std::conj(ep);

    ScatterMatrix s;
    Mat4& m = s.m;
    m(0, 0) = t;
    m(0, 1) = -em * t12;
    m(1, 0) = ep * t12;
    m(1, 1) = t;
    m(2, 2) = t;
    m(2, 3) = -em * t12;
    m(3, 2) = ep * t12;
    m(3, 3) = t;
    return s;
}

/// Symmetric lossless bead with backscattering:
///   [ t               −e^{−i phi} t12   0                i e^{−i phi} r12 ]
///   [ e^{i phi} t12    t                i e^{i phi} r12  0                ]
///   [ 0                i e^{−i phi} r12 t                −e^{−i phi} t12  ]
///   [ i e^{i phi} r12  0                e^{i phi} t12    t                ]
/// with t = sqrt(1 − t12² − r12²); unitary by construction.
inline ScatterMatrix build_four_port(const SimpleFourPortParams& p) {
    p.validate();
    const double t = p.t();
    const cplx ep = std::exp(iunit * p.phi);
    const cplx em = std::conj(ep);
    const cplx irp = iunit * p.r12 * ep;
    const cplx irm = iunit * p.r12 * em;

    ScatterMatrix s;
    Mat4& m = s.m;
    m(0, 0) = t;
    m(0, 1) = -em * p.t12;
    m(0, 3) = irm;
    m(1, 0) = ep * p.t12;
    m(1, 1) = t;
    m(1, 2) = irp;
    m(2, 1) = irm;
    m(2, 2) = t;
    m(2, 3) = -em * p.t12;
    m(3, 0) = irp;
    m(3, 2) = ep * p.t12;
    m(3, 3) = t;
    return s;
}

struct GeneralBuildResult {
    ScatterMatrix matrix;
    /// ||M†M − I||_inf; the caller decides whether to reject the matrix or
    /// tag it lossy via loss_fraction.
    double unitarity_deviation;
};

/// Assembles the general matrix verbatim from its coefficients. Validation is
/// reported, not thrown: arbitrary coefficient sets are usually sub-unitary.
inline GeneralBuildResult build_general_four_port(const GeneralFourPortParams& p) {
    p.validate();
    auto ph = [](double a, double arg) { return a * std::exp(iunit * arg); };
    const cplx T11 = ph(p.t11, p.phi11), T12 = ph(p.t12, p.phi12);
    const cplx T21 = ph(p.t21, p.phi21), T22 = ph(p.t22, p.phi22);
    const cplx R11 = ph(p.r11, p.psi11), R12 = ph(p.r12, p.psi12);
    const cplx R21 = ph(p.r21, p.psi21), R22 = ph(p.r22, p.psi22);

    ScatterMatrix s;
    Mat4& m = s.m;
    m(0, 0) = T11; m(0, 1) = T21; m(0, 2) = R11; m(0, 3) = R21;
    m(1, 0) = T12; m(1, 1) = T22; m(1, 2) = R12; m(1, 3) = R22;
    m(2, 0) = R11; m(2, 1) = R21; m(2, 2) = T11; m(2, 3) = T21;
    m(3, 0) = R12; m(3, 1) = R22; m(3, 2) = T12; m(3, 3) = T22;
    return {s, unitarity_deviation(m)};
}

/// Free propagation over distance d in the scattering basis:
/// diag(e^{i k1 d}, e^{i k2 d}, e^{−i k1 d}, e^{−i k2 d}). Exactly unitary.
inline Mat4 propagation_matrix(double d, const ModePair& modes) {
    if (d < 0.0) throw std::domain_error("propagation distance must be >= 0");
    Mat4 m;
    m(0, 0) = std::exp(iunit * (modes.k1 * d));
    m(1, 1) = std::exp(iunit * (modes.k2 * d));
    m(2, 2) = std::conj(m(0, 0));
    m(3, 3) = std::conj(m(1, 1));
    return m;
}

}  // namespace fiberforce
