#pragma once

#include <random>

#include "fluxgate/linalg.h"

namespace testing {

inline fluxgate::Matrix random_matrix(int n, std::mt19937& rng, double scale = 1.0)
{
    std::normal_distribution<double> z;
    fluxgate::Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = fluxgate::cplx(z(rng), z(rng)) * scale;
    return m;
}

inline fluxgate::Matrix random_hermitian(int n, std::mt19937& rng)
{
    const fluxgate::Matrix a = random_matrix(n, rng);
    return 0.5 * (a + a.adjoint());
}

inline fluxgate::Matrix random_unitary(int n, std::mt19937& rng)
{
    Eigen::HouseholderQR<fluxgate::Matrix> qr(random_matrix(n, rng));
    fluxgate::Matrix q = qr.householderQ();
    // Fix column phases with R's diagonal so the draw is Haar.
    const fluxgate::Matrix r = qr.matrixQR();
    for (int k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
    return q;
}

inline fluxgate::Vector random_state(int n, std::mt19937& rng)
{
    std::normal_distribution<double> z;
    fluxgate::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = fluxgate::cplx(z(rng), z(rng));
    return v.normalized();
}

inline double max_abs(const fluxgate::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing
