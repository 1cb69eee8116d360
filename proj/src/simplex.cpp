#include "disclosure/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace disclosure::lp {

namespace {

constexpr double kCostTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kPivotTol = 1e-11;  // smallest acceptable pivot element
constexpr double kFeasTol = 1e-8;    // phase-1 residual tolerance

/// Row-major tableau with an attached objective row per phase.
struct Tableau {
    int rows = 0, cols = 0;  // constraint rows, total columns incl. RHS
    std::vector<double> t;   // (rows+1) x cols; last row is the objective
    std::vector<int> basis;  // basic variable per constraint row

    double& at(int r, int c) { return t[std::size_t(r) * cols + c]; }
    double at(int r, int c) const { return t[std::size_t(r) * cols + c]; }
    int obj_row() const { return rows; }

    void pivot(int pr, int pc) {
        const double piv = at(pr, pc);
        double* prow = &t[std::size_t(pr) * cols];
        const double inv = 1.0 / piv;
        for (int c = 0; c < cols; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (int r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            double* row = &t[std::size_t(r) * cols];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int c = 0; c < cols; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
        basis[pr] = pc;
    }

    /// One simplex phase on the current objective row (minimization form:
    /// pick entering columns with negative reduced cost).
    LpStatus iterate(int n_pricable, long max_iters) {
        long iter = 0;
        for (;; ++iter) {
            if (iter > max_iters) return LpStatus::IterationLimit;
            const bool bland = iter > max_iters / 2;
            int pc = -1;
            double best = -kCostTol;
            const double* obj = &t[std::size_t(rows) * cols];
            for (int c = 0; c < n_pricable; ++c) {
                if (obj[c] < best) {
                    best = obj[c];
                    pc = c;
                    if (bland) break;  // first eligible column
                }
            }
            if (pc < 0) return LpStatus::Optimal;
            // Ratio test over rows with positive pivot column entries.
            int pr = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < rows; ++r) {
                const double a = at(r, pc);
                if (a <= kPivotTol) continue;
                const double ratio = at(r, cols - 1) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (pr < 0 || basis[r] < basis[pr]))) {
                    best_ratio = ratio;
                    pr = r;
                }
            }
            if (pr < 0) return LpStatus::Unbounded;
            pivot(pr, pc);
        }
    }
};

}  // namespace

LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& a_ub,
                  const std::vector<double>& b_ub,
                  const std::vector<std::vector<double>>& a_eq,
                  const std::vector<double>& b_eq) {
    const int n = int(c.size());
    const int m_ub = int(a_ub.size());
    const int m_eq = int(a_eq.size());
    const int m = m_ub + m_eq;
    for (double b : b_ub)
        if (b < 0.0) throw std::invalid_argument("solve_lp: negative b_ub entry");
    for (double b : b_eq)
        if (b < 0.0) throw std::invalid_argument("solve_lp: negative b_eq entry");

    Tableau tab;
    tab.rows = m;
    tab.cols = n + m_ub + m_eq + 1;  // structurals, slacks, artificials, RHS
    tab.t.assign(std::size_t(tab.rows + 1) * tab.cols, 0.0);
    tab.basis.resize(m);

    for (int r = 0; r < m_ub; ++r) {
        for (int j = 0; j < n; ++j) tab.at(r, j) = a_ub[r][j];
        tab.at(r, n + r) = 1.0;  // slack
        tab.at(r, tab.cols - 1) = b_ub[r];
        tab.basis[r] = n + r;
    }
    for (int r = 0; r < m_eq; ++r) {
        const int row = m_ub + r;
        for (int j = 0; j < n; ++j) tab.at(row, j) = a_eq[r][j];
        tab.at(row, n + m_ub + r) = 1.0;  // artificial
        tab.at(row, tab.cols - 1) = b_eq[r];
        tab.basis[row] = n + m_ub + r;
    }

    const long max_iters = 50L * (m + n) + 2000;

    // Phase 1: minimize the sum of artificials.  Express the objective in
    // terms of nonbasic variables by subtracting the artificial rows.
    for (int r = m_ub; r < m; ++r)
        for (int col = 0; col < tab.cols; ++col)
            tab.at(tab.obj_row(), col) -= tab.at(r, col);
    LpStatus st = tab.iterate(n + m_ub, max_iters);
    LpResult res;
    if (st == LpStatus::IterationLimit) {
        res.status = st;
        return res;
    }
    const double phase1 = -tab.at(tab.obj_row(), tab.cols - 1);
    if (phase1 > kFeasTol) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    // Pivot any artificial still basic (at level ~0) out of the basis.
    for (int r = m_ub; r < m; ++r) {
        if (tab.basis[r] < n + m_ub) continue;
        int pc = -1;
        for (int j = 0; j < n + m_ub; ++j) {
            if (std::fabs(tab.at(r, j)) > kPivotTol) {
                pc = j;
                break;
            }
        }
        if (pc >= 0) tab.pivot(r, pc);
        // Otherwise the row is all-zero (redundant constraint): harmless.
    }

    // Phase 2: maximize c·x == minimize -c·x over structural + slack columns.
    double* obj = &tab.t[std::size_t(tab.obj_row()) * tab.cols];
    for (int col = 0; col < tab.cols; ++col) obj[col] = 0.0;
    for (int j = 0; j < n; ++j) obj[j] = -c[j];
    for (int r = 0; r < m; ++r) {
        const int bv = tab.basis[r];
        const double f = obj[bv];
        if (f == 0.0) continue;
        for (int col = 0; col < tab.cols; ++col)
            obj[col] -= f * tab.at(r, col);
        obj[bv] = 0.0;
    }
    // Bar artificials from re-entering by pricing only structural + slacks.
    st = tab.iterate(n + m_ub, max_iters);
    if (st == LpStatus::IterationLimit || st == LpStatus::Unbounded) {
        res.status = st;
        return res;
    }

    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.at(r, tab.cols - 1);
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += c[j] * res.x[j];
    res.objective = z;
    return res;
}

}  // namespace disclosure::lp
