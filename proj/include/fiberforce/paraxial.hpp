#pragma once

// Paraxial estimate of per-bead mode-coupling coefficients.
//
// A low-contrast spherical bead inside an idealized square waveguide (hard
// walls, separable sine modes) acts on the transverse field mainly as a thin
// phase screen: the field picks up the accumulated phase
//
//   phi(x,y) = (k0 / (2 n0)) (n² − n0²) L(x,y)
//
// along the chord L(x,y) = 2 sqrt(R² − rho²) through the sphere, which
// reduces to the optical path phase k0 (n − n0) L at weak contrast. Projecting
// the distorted field e^{i phi} u_n onto the unperturbed modes gives the
// transmission overlaps; a first-order Born estimate gives the (much smaller)
// back-reflected overlaps:
//
//   t_mn = ∫ u_m e^{i phi} u_n d²r
//   r_mn = i (k0 / (4 n0)) ∫ d²r u_m u_n ∫ dz (n²(r) − n0²) e^{i(β_m+β_n) z}
//
// The z integral of the Born term is elementary over the chord. Both
// transverse integrals run in polar coordinates around the bead with the
// radial substitution s = sqrt(R² − rho²) (half-chord), which makes the phase
// factors analytic in the integration variable; away from the bead the
// distorted field equals the mode, so the remaining identity part of t is
// exact. Power lost out of the retained mode set is the free-space loss of
// the two-mode force model.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fiberforce/linalg.hpp"
#include "fiberforce/quadrature.hpp"
#include "fiberforce/scatter.hpp"

namespace fiberforce {

/// Square hard-wall waveguide, lengths in units of the vacuum wavelength.
struct WaveguideSpec {
    double a;                                        // transverse side length
    double n0 = 1.0;                                 // background index
    double k0 = 2.0 * std::numbers::pi;              // vacuum wavenumber
    std::vector<std::array<int, 2>> mode_orders{};   // empty -> (1..7, 1)

    void validate() const {
        if (!(a > 0.0)) throw std::domain_error("waveguide side length must be > 0");
        if (!(n0 > 0.0)) throw std::domain_error("background index must be > 0");
        if (!(k0 > 0.0)) throw std::domain_error("vacuum wavenumber must be > 0");
    }

    std::vector<std::array<int, 2>> orders_or_default() const {
        if (!mode_orders.empty()) return mode_orders;
        std::vector<std::array<int, 2>> def;
        for (int mx = 1; mx <= 7; ++mx) def.push_back({mx, 1});
        return def;
    }
};

/// Spherical bead, lengths in vacuum wavelengths.
struct BeadSpec {
    double radius;
    double index;
    double x0;
    double y0;

    void validate(const WaveguideSpec& guide) const {
        if (!(radius >= 0.0)) throw std::domain_error("bead radius must be >= 0");
        if (!(index > 0.0)) throw std::domain_error("bead index must be > 0");
        if (x0 - radius < 0.0 || x0 + radius > guide.a || y0 - radius < 0.0 ||
            y0 + radius > guide.a)
            throw std::domain_error("bead must fit inside the guide cross-section");
    }
};

/// Bead centered in the guide.
inline BeadSpec centered_bead(double diameter, double index, const WaveguideSpec& guide) {
    return {0.5 * diameter, index, 0.5 * guide.a, 0.5 * guide.a};
}

struct GuidedMode {
    int mx;
    int my;
    double beta;  // longitudinal propagation constant
};

/// Retained guided modes u_m(x,y) = (2/a) sin(mx pi x / a) sin(my pi y / a).
struct ModeSet {
    double a = 0.0;
    std::vector<GuidedMode> modes;

    std::size_t size() const { return modes.size(); }

    double eval(std::size_t i, double x, double y) const {
        const auto& m = modes[i];
        const double pa = std::numbers::pi / a;
        return (2.0 / a) * std::sin(m.mx * pa * x) * std::sin(m.my * pa * y);
    }

    /// Index of the mode with the given transverse orders, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(int mx, int my) const {
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (modes[i].mx == mx && modes[i].my == my) return i;
        return npos;
    }
};

/// Requested transverse orders filtered to guided ones (real beta). Throws
/// when nothing survives.
inline ModeSet guided_modes(const WaveguideSpec& guide) {
    guide.validate();
    ModeSet set;
    set.a = guide.a;
    const double pa = std::numbers::pi / guide.a;
    const double nk = guide.n0 * guide.k0;
    for (const auto& [mx, my] : guide.orders_or_default()) {
        if (mx < 1 || my < 1) throw std::domain_error("mode orders must be >= 1");
        const double beta_sq = nk * nk - (mx * pa) * (mx * pa) - (my * pa) * (my * pa);
        if (beta_sq > 0.0) set.modes.push_back({mx, my, std::sqrt(beta_sq)});
    }
    if (set.modes.empty())
        throw std::domain_error("no guided modes: guide cross-section too small");
    return set;
}

/// Chord length of the sphere above transverse point (x, y); zero outside
/// the bead's shadow.
inline double chord_length(const BeadSpec& bead, double x, double y) {
    const double rho_sq = (x - bead.x0) * (x - bead.x0) + (y - bead.y0) * (y - bead.y0);
    const double rad = bead.radius * bead.radius - rho_sq;
    return rad > 0.0 ? 2.0 * std::sqrt(rad) : 0.0;
}

/// Accumulated phase of the thin screen at one transverse point.
inline double accumulated_phase_at(const BeadSpec& bead, const WaveguideSpec& guide, double x,
                                   double y) {
    const double contrast = bead.index * bead.index - guide.n0 * guide.n0;
    return (guide.k0 / (2.0 * guide.n0)) * contrast * chord_length(bead, x, y);
}

/// phi(x, y) sampled on an inclusive uniform nx-by-ny grid over [0,a]²,
/// row-major with x varying fastest.
inline std::vector<double> accumulated_phase(const BeadSpec& bead, const WaveguideSpec& guide,
                                             std::size_t nx, std::size_t ny) {
    bead.validate(guide);
    if (nx < 2 || ny < 2) throw std::domain_error("phase grid needs at least 2x2 points");
    std::vector<double> out(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = guide.a * static_cast<double>(j) / static_cast<double>(ny - 1);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = guide.a * static_cast<double>(i) / static_cast<double>(nx - 1);
            out[j * nx + i] = accumulated_phase_at(bead, guide, x, y);
        }
    }
    return out;
}

/// Square complex matrix over the retained modes, row-major.
struct CoeffMatrix {
    std::size_t n = 0;
    std::vector<cplx> e;

    cplx& operator()(std::size_t r, std::size_t c) { return e[r * n + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e[r * n + c]; }

    static CoeffMatrix identity(std::size_t n) {
        CoeffMatrix m{n, std::vector<cplx>(n * n)};
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double max_off_diagonal() const {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) best = std::max(best, std::abs(e[i * n + j]));
        return best;
    }
};

struct OverlapQuadrature {
    std::size_t radial = 96;    // Gauss-Legendre nodes in the half-chord variable
    std::size_t angular = 128;  // uniform midpoint nodes over the half circle (mirrored)
};

namespace detail {

// Shared disk-integration kernel. visit(point weight, s, mode values) is
// called for every quadrature node; mirrored angular nodes keep odd-parity
// cancellations exact to roundoff.
template <typename Visit>
void integrate_disk(const BeadSpec& bead, const ModeSet& set, const OverlapQuadrature& quad,
                    Visit&& visit) {
    const double radius = bead.radius;
    if (radius <= 0.0) return;
    const QuadratureRule radial = gauss_legendre(quad.radial, 0.0, radius);
    const std::size_t n_half = (quad.angular + 1) / 2;
    const double dtheta = std::numbers::pi / static_cast<double>(n_half);  // half circle

    std::vector<double> u(set.size());
    for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
        const double s = radial.nodes[k];                        // half chord
        const double rho = std::sqrt(std::max(0.0, radius * radius - s * s));
        const double w_base = radial.weights[k] * s * dtheta;    // dA = rho drho dtheta
        for (std::size_t l = 0; l < n_half; ++l) {
            const double theta = (static_cast<double>(l) + 0.5) * dtheta;
            const double cx = rho * std::cos(theta);
            const double cy = rho * std::sin(theta);
            for (int sign : {1, -1}) {
                const double x = bead.x0 + sign * cx;
                const double y = bead.y0 + sign * cy;
                for (std::size_t i = 0; i < set.size(); ++i) u[i] = set.eval(i, x, y);
                visit(w_base, s, u);
            }
        }
    }
}

}  // namespace detail

/// Transmission overlaps t_mn = <u_m| e^{i phi} |u_n>; identity for a
/// zero-size or index-matched bead.
inline CoeffMatrix transmission_coeffs(const BeadSpec& bead, const WaveguideSpec& guide,
                                       const ModeSet& set, const OverlapQuadrature& quad = {}) {
    bead.validate(guide);
    const std::size_t n = set.size();
    CoeffMatrix t = CoeffMatrix::identity(n);
    const double contrast = bead.index * bead.index - guide.n0 * guide.n0;
    const double phase_rate = (guide.k0 / guide.n0) * contrast;  // phi = phase_rate * s

    detail::integrate_disk(bead, set, quad, [&](double w, double s, const std::vector<double>& u) {
        const cplx screen = std::exp(iunit * (phase_rate * s)) - 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx wi = w * u[i] * screen;
            for (std::size_t j = i; j < n; ++j) t(i, j) += wi * u[j];
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) t(i, j) = t(j, i);  // symmetric by construction
    return t;
}

/// First-order Born backscattering overlaps; zero for a zero-size or
/// index-matched bead, and small against the transmission couplings in the
/// low-contrast regime this estimate assumes.
inline CoeffMatrix reflection_coeffs(const BeadSpec& bead, const WaveguideSpec& guide,
                                     const ModeSet& set, const OverlapQuadrature& quad = {}) {
    bead.validate(guide);
    const std::size_t n = set.size();
    CoeffMatrix r{n, std::vector<cplx>(n * n)};
    const double contrast = bead.index * bead.index - guide.n0 * guide.n0;
    const cplx prefactor = iunit * (guide.k0 / (4.0 * guide.n0)) * contrast;

    detail::integrate_disk(bead, set, quad, [&](double w, double s, const std::vector<double>& u) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double q = set.modes[i].beta + set.modes[j].beta;
                // ∫_{-s}^{s} e^{iqz} dz = 2 sin(q s) / q
                r(i, j) += prefactor * (w * u[i] * u[j] * 2.0 * std::sin(q * s) / q);
            }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = r(j, i);
    return r;
}

/// Coupling estimate for one bead: overlap matrices over the retained modes
/// plus the two-mode reduction targets (lowest two symmetric modes).
struct CouplingEstimate {
    ModeSet modes;
    CoeffMatrix t;
    CoeffMatrix r;
    std::size_t target_lower = 0;   // index of the fundamental target mode
    std::size_t target_higher = 0;  // index of the higher-order target mode
    double loss_fraction = 0.0;     // higher-target input power leaving the two targets
    bool contrast_warning = false;  // |n - n0| > 0.5, Born estimate marginal
};

inline CouplingEstimate estimate_coupling(const BeadSpec& bead, const WaveguideSpec& guide,
                                          const OverlapQuadrature& quad = {}) {
    CouplingEstimate est;
    est.modes = guided_modes(guide);
    est.t = transmission_coeffs(bead, guide, est.modes, quad);
    est.r = reflection_coeffs(bead, guide, est.modes, quad);
    est.contrast_warning = std::abs(bead.index - guide.n0) > 0.5;

    est.target_lower = est.modes.find(1, 1);
    est.target_higher = est.modes.find(3, 1);
    if (est.target_lower == ModeSet::npos || est.target_higher == ModeSet::npos)
        throw std::domain_error("two-mode reduction needs modes (1,1) and (3,1) guided");

    const std::size_t lo = est.target_lower, hi = est.target_higher;
    const double retained = std::norm(est.t(hi, lo)) + std::norm(est.t(hi, hi)) +
                            std::norm(est.r(hi, lo)) + std::norm(est.r(hi, hi));
    est.loss_fraction = std::max(0.0, 1.0 - retained);
    return est;
}

/// Two-mode scattering parameters distilled from a coupling estimate. Note
/// that SimpleFourPortParams is unitary by construction (t recomputed from
/// t12, r12), so the extracted same-mode transmission is kept separately;
/// the renormalized variant makes the two agree.
struct ScatterParamsReport {
    SimpleFourPortParams params;
    double t_extracted;        // |t11| as measured (params.t() when renormalized)
    double loss_fraction;      // of the reported model (0 when renormalized)
    double raw_loss_fraction;  // before any renormalization
    bool renormalized;
};

/// Reduce the estimate to the two-mode force model: t = |t11|, t12 = |t12|,
/// r12 = |r12|, phi = arg t12 − arg t11; everything else is free-space loss.
/// Optionally renormalizes the triple to a unitary model. Refuses when more
/// than half the power leaves the two-mode description.
inline ScatterParamsReport to_scatter_params(const CouplingEstimate& est,
                                             bool renormalize = false) {
    const std::size_t lo = est.target_lower, hi = est.target_higher;
    double t = std::abs(est.t(lo, lo));
    double t12 = std::abs(est.t(lo, hi));
    double r12 = std::abs(est.r(lo, hi));
    const double phi = std::arg(est.t(lo, hi)) - std::arg(est.t(lo, lo));

    double loss = 1.0 - t * t - t12 * t12 - r12 * r12;
    if (loss < 0.0) {
        // roundoff-scale overshoot: scale back onto the unitary shell
        const double norm = std::sqrt(t * t + t12 * t12 + r12 * r12);
        t /= norm;
        t12 /= norm;
        r12 /= norm;
        loss = 0.0;
    }
    if (loss > 0.5)
        throw std::domain_error(
            "two-mode model invalid: loss fraction " + std::to_string(loss) + " exceeds 0.5");

    ScatterParamsReport report{};
    report.raw_loss_fraction = loss;
    report.renormalized = renormalize;
    if (renormalize && loss > 0.0) {
        const double scale = 1.0 / std::sqrt(1.0 - loss);
        t *= scale;
        t12 *= scale;
        r12 *= scale;
        report.loss_fraction = 0.0;
    } else {
        report.loss_fraction = loss;
    }
    report.t_extracted = t;
    report.params = SimpleFourPortParams{t12, r12, phi};
    report.params.validate();
    return report;
}

}  // namespace fiberforce
