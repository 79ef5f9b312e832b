#include "fluxgate/optimize.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/minima.hpp>

namespace fluxgate {

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                           double initial_step, double ftol, int max_evaluations)
{
    const size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
    for (size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

    std::vector<size_t> order(n + 1);
    while (evals < max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
        const size_t best = order.front(), worst = order.back(), second = order[n - 1];
        if (std::abs(values[worst] - values[best]) <= ftol * (std::abs(values[best]) + ftol)) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i : order)
            if (i != worst)
                for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
            return x;
        };

        const auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < values[best]) {
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            const bool outside = fr < values[worst];
            const auto xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                for (size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    values[i] = eval(simplex[i]);
                }
            }
        }
    }
    const size_t best = static_cast<size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    return {simplex[best], values[best], evals};
}

MinimizeResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi, int max_iterations)
{
    boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iterations);
    int evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    const auto r = boost::math::tools::brent_find_minima(counted, lo, hi, 40, iters);
    return {{r.first}, r.second, evals};
}

} // namespace fluxgate
