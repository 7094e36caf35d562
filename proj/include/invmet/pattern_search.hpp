#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace invmet {

// Derivative-free coordinate pattern search (compass search). The objectives
// it drives are nonsmooth at certificate boundaries, which rules out
// gradient-based methods; compass search with step halving is the classic
// dependency-free choice.

struct PatternResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false; // step shrank below min_step before the budget ran out
};

/// Maximize f over R^dim starting at x0. steps holds per-coordinate initial
/// step sizes; polling tries +/- step along each axis, accepts the first
/// improvement, and halves all steps after a stall. Every f call counts
/// against max_evals.
template <typename F>
PatternResult pattern_search_maximize(F&& f, std::vector<double> x0, std::vector<double> steps,
                                      int max_evals, double step_shrink_tol = 1e-9) {
    const std::size_t dim = x0.size();
    PatternResult res;
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evals = 1;

    std::vector<double> init_steps = steps;
    std::vector<double> trial = res.x;

    while (res.evals < max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < dim && res.evals < max_evals; ++i) {
            for (double sgn : {1.0, -1.0}) {
                if (res.evals >= max_evals) break;
                trial = res.x;
                trial[i] += sgn * steps[i];
                double v = f(trial);
                ++res.evals;
                if (v > res.value) {
                    res.value = v;
                    res.x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            bool all_small = true;
            for (std::size_t i = 0; i < dim; ++i) {
                steps[i] *= 0.5;
                if (steps[i] > step_shrink_tol * std::max(1.0, init_steps[i])) all_small = false;
            }
            if (all_small) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

} // namespace invmet
