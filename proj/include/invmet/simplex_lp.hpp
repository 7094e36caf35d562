#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "invmet/errors.hpp"

namespace invmet {

// Textbook two-phase simplex with Bland's rule, dense tableau. The gauge
// problems it serves have a handful of equality rows and a few thousand
// columns, where this is plenty.

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

namespace detail {

class SimplexTableau {
public:
    // min c'x s.t. Ax = b, x >= 0. A is row-major m x n.
    SimplexTableau(const std::vector<double>& c, const std::vector<double>& A,
                   const std::vector<double>& b, std::size_t m, std::size_t n)
        : m_(m), n_(n), cols_(n + m), tab_((m + 1) * (n + m + 1), 0.0), basis_(m) {
        // Layout: rows 0..m-1 constraints, row m objective; last column rhs.
        for (std::size_t i = 0; i < m; ++i) {
            double sign = b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n; ++j) at(i, j) = sign * A[i * n + j];
            at(i, n + i) = 1.0; // artificial
            rhs(i) = sign * b[i];
            basis_[i] = n + i;
        }
        // Phase 1 objective: sum of artificials, with the basic artificial
        // columns reduced to zero by subtracting the constraint rows.
        for (std::size_t j = 0; j < cols_ + 1; ++j) at(m_, j) = 0.0;
        for (std::size_t i = 0; i < m; ++i) at(m_, n + i) = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < cols_ + 1; ++j) at(m_, j) -= row_at(i, j);
        phase1_ = true;
        cost_ = c;
    }

    LpResult solve() {
        if (!iterate()) return {LpResult::Status::Unbounded, 0.0, {}};
        if (rhs(m_) < -1e-8) return {LpResult::Status::Infeasible, 0.0, {}};

        // Drive artificials out of the basis where possible, then drop them.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t pivot_col = cols_;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(at(i, j)) > 1e-9) {
                    pivot_col = j;
                    break;
                }
            if (pivot_col < cols_) pivot(i, pivot_col);
        }

        // Phase 2 objective.
        phase1_ = false;
        for (std::size_t j = 0; j < cols_ + 1; ++j) at(m_, j) = 0.0;
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = cost_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) continue;
            double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < cols_ + 1; ++j) at(m_, j) -= cb * row_at(i, j);
        }
        if (!iterate()) return {LpResult::Status::Unbounded, 0.0, {}};

        LpResult res;
        res.status = LpResult::Status::Optimal;
        res.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) res.x[basis_[i]] = rhs(i);
        res.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) res.objective += cost_[j] * res.x[j];
        return res;
    }

private:
    double& at(std::size_t i, std::size_t j) { return tab_[i * (cols_ + 1) + j]; }
    double row_at(std::size_t i, std::size_t j) const { return tab_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return tab_[i * (cols_ + 1) + cols_]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double pv = at(pr, pc);
        for (std::size_t j = 0; j < cols_ + 1; ++j) at(pr, j) /= pv;
        for (std::size_t i = 0; i < m_ + 1; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols_ + 1; ++j) at(i, j) -= f * row_at(pr, j);
        }
        basis_[pr] = pc;
    }

    // Bland's rule: smallest-index entering and leaving columns; terminates
    // without cycling.
    bool iterate() {
        const std::size_t active_cols = phase1_ ? cols_ : n_;
        for (long guard = 0; guard < 200000; ++guard) {
            std::size_t pc = active_cols;
            for (std::size_t j = 0; j < active_cols; ++j)
                if (at(m_, j) < -1e-10) {
                    pc = j;
                    break;
                }
            if (pc == active_cols) return true; // optimal
            std::size_t pr = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (at(i, pc) > 1e-11) {
                    double ratio = rhs(i) / at(i, pc);
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (pr == m_ || basis_[i] < basis_[pr]))) {
                        best_ratio = ratio;
                        pr = i;
                    }
                }
            }
            if (pr == m_) return false; // unbounded
            pivot(pr, pc);
        }
        throw convergence_error("simplex: iteration guard tripped");
    }

    std::size_t m_, n_, cols_;
    std::vector<double> tab_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    bool phase1_ = true;
};

} // namespace detail

/// min c'x subject to Ax = b, x >= 0 (A row-major, m rows, n columns).
inline LpResult simplex_solve_min(const std::vector<double>& c, const std::vector<double>& A,
                                  const std::vector<double>& b, std::size_t m, std::size_t n) {
    if (c.size() != n || A.size() != m * n || b.size() != m)
        throw dimension_error("simplex_solve_min: inconsistent shapes");
    detail::SimplexTableau t(c, A, b, m, n);
    return t.solve();
}

} // namespace invmet
