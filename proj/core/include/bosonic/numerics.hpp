#pragma once

#include <functional>

#include "bosonic/error.hpp"

/// Scalar root finding and 1-D adaptive quadrature. No domain knowledge lives
/// here; every function is pure over the caller's closure.
namespace bosonic::numerics {

struct Bracket {
  double lo;
  double hi;
};

/// `rel` bounds the relative width of the final bracket (root finding) or the
/// relative error estimate (quadrature). `abs` is an absolute bound in the
/// units of the target: |f(x)| for root finding, the integral for quadrature.
/// `max_iter` is the iteration budget (root finding) or the maximum number of
/// subintervals (quadrature).
struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;
  int max_iter = 200;

  void validate() const;
};

inline constexpr Tolerance kDefaultRootTolerance{1e-14, 0.0, 400};
inline constexpr Tolerance kDefaultQuadratureTolerance{1e-10, 0.0, 2000};

using ScalarFunction = std::function<double(double)>;

enum class RootMethod {
  Bisection,
  /// Illinois-modified regula falsi, falling back to bisection whenever the
  /// bracket fails to halve over two consecutive steps.
  Illinois,
};

/// Root of f inside `bracket`. The result always lies in [lo, hi].
/// Throws NoSignChange when f(lo) and f(hi) share a sign and NoConvergence when
/// tol.max_iter is exhausted.
double find_root(const ScalarFunction& f, Bracket bracket, const Tolerance& tol,
                 RootMethod method = RootMethod::Illinois);

/// Bracket of a strictly decreasing f around `target` by geometric
/// doubling/halving from `seed` > 0. Returns [lo, hi] with
/// f(lo) >= target >= f(hi). RangeExhausted when no bracket is found within
/// `max_steps` doublings or halvings.
Bracket expand_bracket(const ScalarFunction& f, double seed, double target,
                       int max_steps = 2200);

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. The endpoints are never
/// evaluated, so integrands with a coded limit at `a` are safe as long as they
/// short-circuit before overflowing.
double integrate(const ScalarFunction& f, double a, double b,
                 const Tolerance& tol = kDefaultQuadratureTolerance);

}  // namespace bosonic::numerics
