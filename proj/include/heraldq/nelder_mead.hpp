// nelder_mead.hpp
// Derivative-free simplex minimizer with the standard reflection/expansion/
// contraction/shrink coefficients. Deterministic given its starting point.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace heraldq {

struct SimplexOptions {
    double initial_step = 0.5;
    double diameter_tol = 1e-9;
    std::size_t max_evaluations = 10000;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
};

inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> start,
                                 const SimplexOptions& opt = {}) {
    const std::size_t n = start.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    };
    auto diameter = [&] {
        double d = 0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                d = std::max(d, std::abs(pts[i][k] - pts[0][k]));
        return d;
    };

    while (evals < opt.max_evaluations) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (diameter() < opt.diameter_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / n;
        }

        std::vector<double> refl(n);
        for (std::size_t k = 0; k < n; ++k)
            refl[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
        const double frefl = eval(refl);

        if (frefl < vals[best]) {
            std::vector<double> exp_pt(n);
            for (std::size_t k = 0; k < n; ++k)
                exp_pt[k] = centroid[k] + gamma * (refl[k] - centroid[k]);
            const double fexp = eval(exp_pt);
            if (fexp < frefl) {
                pts[worst] = std::move(exp_pt);
                vals[worst] = fexp;
            } else {
                pts[worst] = std::move(refl);
                vals[worst] = frefl;
            }
        } else if (frefl < vals[second]) {
            pts[worst] = std::move(refl);
            vals[worst] = frefl;
        } else {
            std::vector<double> contr(n);
            const bool outside = frefl < vals[worst];
            const std::vector<double>& toward = outside ? refl : pts[worst];
            for (std::size_t k = 0; k < n; ++k)
                contr[k] = centroid[k] + rho * (toward[k] - centroid[k]);
            const double fcontr = eval(contr);
            if (fcontr < (outside ? frefl : vals[worst])) {
                pts[worst] = std::move(contr);
                vals[worst] = fcontr;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k)
                        pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }

    sort_simplex();
    return {pts[order[0]], vals[order[0]], evals};
}

}  // namespace heraldq
