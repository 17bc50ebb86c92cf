#pragma once

#include <vector>

namespace solvharm {

/// One 2-dimensional block of ad_H and j(Z) on ker(j(Z))^perp:
/// ad_H = diag(rho, 1 - rho), j(Z) = [[0, -theta], [theta, 0]].
struct PairData {
    double rho = 0.5;
    double theta = 1.0;
};

/**
 * Normalized ad_H spectral data along a central geodesic, with top
 * eigenvalue 1.
 *
 * mu holds every eigenvalue of ad_H on the center, descending; mu[0] == 1
 * belongs to the chosen top eigenvector Z itself. rho_star are the eigenvalues
 * on ker j(Z), pairs the blocks on its orthogonal complement in v.
 */
struct SpectralData {
    std::vector<double> mu;
    std::vector<double> rho_star;
    std::vector<PairData> pairs;

    /// trace ad_H = sum mu + sum rho* + number of pairs (rho + (1 - rho) per pair).
    double trace_ad_h() const {
        double t = 0.0;
        for (double m : mu) t += m;
        for (double r : rho_star) t += r;
        return t + static_cast<double>(pairs.size());
    }
};

}  // namespace solvharm
