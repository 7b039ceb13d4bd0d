#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace qbcast {

struct NelderMeadOptions {
    std::size_t max_evaluations = 10000;
    double initial_step = 0.25;
    double f_tolerance = 1e-15;  // spread of objective values across the simplex
    double x_tolerance = 1e-10;  // largest vertex distance from the best vertex
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Downhill simplex minimization of `f` starting from `x0`.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
    std::vector<double> fx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fx[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            s2[k] = std::move(simplex[order[k]]);
            f2[k] = fx[order[k]];
        }
        simplex.swap(s2);
        fx.swap(f2);
    };

    auto along = [&](const std::vector<double>& from, double t, std::vector<double>& out) {
        // centroid + t (centroid - from)
        for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (centroid[i] - from[i]);
    };

    while (res.evaluations < opt.max_evaluations) {
        sort_simplex();
        double diameter = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
        if (fx[n] - fx[0] <= opt.f_tolerance && diameter <= opt.x_tolerance) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);

        along(simplex[n], opt.reflection, trial);
        const double fr = eval(trial);
        if (fr < fx[0]) {
            along(simplex[n], opt.reflection * opt.expansion, trial2);
            const double fe = eval(trial2);
            if (fe < fr) {
                simplex[n] = trial2;
                fx[n] = fe;
            } else {
                simplex[n] = trial;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            simplex[n] = trial;
            fx[n] = fr;
        } else {
            const bool outside = fr < fx[n];
            along(simplex[n], outside ? opt.contraction : -opt.contraction, trial2);
            const double fc = eval(trial2);
            if (fc < (outside ? fr : fx[n])) {
                simplex[n] = trial2;
                fx[n] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[k][i] = simplex[0][i] + opt.shrink * (simplex[k][i] - simplex[0][i]);
                    fx[k] = eval(simplex[k]);
                }
            }
        }
    }

    sort_simplex();
    res.x = simplex[0];
    res.value = fx[0];
    return res;
}

}  // namespace qbcast
