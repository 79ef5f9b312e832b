#pragma once

#include <functional>
#include <vector>

namespace fluxgate {

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

// Nelder-Mead simplex minimization with the standard reflection, expansion,
// contraction and shrink coefficients (1, 2, 1/2, 1/2).
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                           double initial_step, double ftol = 1e-12, int max_evaluations = 4000);

// Brent minimization on [lo, hi].
MinimizeResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi, int max_iterations = 100);

} // namespace fluxgate
