#pragma once

#include <numbers>
#include <stdexcept>

namespace fiberforce {

/// Longitudinal wavenumbers of the two guided modes. k1 belongs to the
/// fundamental mode, k2 to the higher-order one; guiding implies k1 > k2 > 0.
/// Natural units: lengths in 1/k1, so k1 = 1 is the usual choice.
struct ModePair {
    double k1;
    double k2;
    double n_medium;

    explicit ModePair(double k1_, double k2_, double n_medium_ = 1.0)
        : k1(k1_), k2(k2_), n_medium(n_medium_) {
        if (!(k1 > k2) || !(k2 > 0.0))
            throw std::domain_error("ModePair requires k1 > k2 > 0");
        if (!(n_medium > 0.0))
            throw std::domain_error("ModePair requires n_medium > 0");
    }

    /// Distance over which the two modes' relative phase advances by 2*pi.
    double beat_period() const { return 2.0 * std::numbers::pi / (k1 - k2); }

    /// Shortest oscillation scale of reflected-field interference.
    double fast_period() const { return std::numbers::pi / (k1 + k2); }
};

}  // namespace fiberforce
