#pragma once

#include <functional>

namespace disclosure::num {

/**
 * Adaptive Simpson quadrature of f over [a, b].
 *
 * Recursion splits an interval until the Richardson error estimate of the
 * two-panel rule falls below the locally allotted absolute tolerance.
 *
 * @param f       integrand, evaluated at most max_evals times
 * @param a,b     integration bounds (a <= b)
 * @param abs_tol absolute tolerance on the result
 */
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10,
                        int max_depth = 60);

/**
 * Bisection root finder on [lo, hi]; requires f(lo) and f(hi) of opposite
 * sign (or zero).  Refines until the bracket is narrower than x_tol and
 * returns the midpoint of the final bracket.
 */
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 1e-12);

/**
 * Golden-section maximization of a unimodal f on [lo, hi]; shrinks the
 * bracket until its width is below x_tol and returns the best abscissa.
 */
double golden_max(const std::function<double(double)>& f, double lo,
                  double hi, double x_tol = 1e-10);

/// True if v is finite (guards propagating NaN through candidate searches).
bool is_finite(double v);

}  // namespace disclosure::num
