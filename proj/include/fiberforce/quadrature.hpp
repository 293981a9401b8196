#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fiberforce {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], computed by Newton iteration on the
/// Legendre recurrence. Exact to machine precision for the node counts used
/// here (<= a few hundred).
inline QuadratureRule gauss_legendre(std::size_t n) {
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

/// The same rule mapped to [lo, hi].
inline QuadratureRule gauss_legendre(std::size_t n, double lo, double hi) {
    QuadratureRule q = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi);
    const double halfw = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < n; ++i) {
        q.nodes[i] = mid + halfw * q.nodes[i];
        q.weights[i] *= halfw;
    }
    return q;
}

}  // namespace fiberforce
