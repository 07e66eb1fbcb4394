#include "bosonic/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace bosonic::numerics {

void Tolerance::validate() const {
  if (!(rel > 0.0) || !(abs >= 0.0) || max_iter < 1) {
    std::ostringstream msg;
    msg << "invalid tolerance (rel=" << rel << ", abs=" << abs
        << ", max_iter=" << max_iter << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

namespace {

bool opposite_signs(double a, double b) { return (a < 0.0) != (b < 0.0); }

double checked_eval(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (std::isnan(y)) {
    std::ostringstream msg;
    msg << "function returned NaN at x=" << x;
    throw Error(Errc::DomainError, msg.str());
  }
  return y;
}

}  // namespace

double find_root(const ScalarFunction& f, Bracket bracket, const Tolerance& tol,
                 RootMethod method) {
  tol.validate();
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(Errc::DomainError, "bracket must satisfy lo < hi with finite ends");
  }
  double f_lo = checked_eval(f, lo);
  if (f_lo == 0.0) return lo;
  double f_hi = checked_eval(f, hi);
  if (f_hi == 0.0) return hi;
  if (!opposite_signs(f_lo, f_hi)) {
    std::ostringstream msg;
    msg << "f(" << lo << ")=" << f_lo << " and f(" << hi << ")=" << f_hi
        << " share a sign";
    throw Error(Errc::NoSignChange, msg.str());
  }

  // Illinois state: which end was retained last, and how many times in a row.
  int retained_side = 0;
  double width_two_steps_ago = hi - lo;
  double width_prev = hi - lo;
  bool force_bisect = method == RootMethod::Bisection;

  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= 2.0 * tol.rel * std::max(std::abs(lo), std::abs(hi)) || mid <= lo ||
        mid >= hi) {
      return mid;
    }

    double x = mid;
    if (!force_bisect) {
      x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (!(x > lo && x < hi)) x = mid;
    }

    const double fx = checked_eval(f, x);
    if (fx == 0.0 || std::abs(fx) <= tol.abs) return x;

    if (opposite_signs(f_lo, fx)) {
      hi = x;
      f_hi = fx;
      if (retained_side == -1 && !force_bisect) f_lo *= 0.5;
      retained_side = -1;
    } else {
      lo = x;
      f_lo = fx;
      if (retained_side == 1 && !force_bisect) f_hi *= 0.5;
      retained_side = 1;
    }

    if (method == RootMethod::Illinois) {
      const double width = hi - lo;
      // Fall back to bisection for one step when two steps failed to halve.
      force_bisect = width > 0.5 * width_two_steps_ago;
      width_two_steps_ago = width_prev;
      width_prev = width;
    }
  }
  std::ostringstream msg;
  msg << "root not converged after " << tol.max_iter << " iterations; bracket [" << lo
      << ", " << hi << "]";
  throw Error(Errc::NoConvergence, msg.str());
}

Bracket expand_bracket(const ScalarFunction& f, double seed, double target,
                       int max_steps) {
  if (!(seed > 0.0) || !std::isfinite(seed)) {
    throw Error(Errc::DomainError, "bracket seed must be positive and finite");
  }
  const double f_seed = checked_eval(f, seed);
  if (f_seed >= target) {
    double lo = seed;
    double hi = 2.0 * seed;
    for (int step = 0; step < max_steps && std::isfinite(hi); ++step) {
      if (checked_eval(f, hi) <= target) return {lo, hi};
      lo = hi;
      hi *= 2.0;
    }
  } else {
    double hi = seed;
    double lo = 0.5 * seed;
    for (int step = 0; step < max_steps && lo > 0.0; ++step) {
      if (checked_eval(f, lo) >= target) return {lo, hi};
      hi = lo;
      lo *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "no bracket for target " << target << " from seed " << seed;
  throw Error(Errc::RangeExhausted, msg.str());
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const ScalarFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = checked_eval(f, center);
  double kronrod = kKronrodWeights[7] * f_center;
  double gauss = kGaussWeights[3] * f_center;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = checked_eval(f, center - dx) + checked_eval(f, center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate(const ScalarFunction& f, double a, double b, const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    throw Error(Errc::DomainError, "integration limits must be finite with a <= b");
  }
  if (a == b) return 0.0;

  std::priority_queue<Panel> panels;
  const Panel whole = gauss_kronrod(f, a, b);
  panels.push(whole);
  double total = whole.value;
  double total_error = whole.error;

  int count = 1;
  while (std::max(total_error, 0.0) > std::max(tol.abs, tol.rel * std::abs(total))) {
    if (count >= tol.max_iter) {
      std::ostringstream msg;
      msg << "quadrature on [" << a << ", " << b << "] exhausted " << tol.max_iter
          << " subintervals (estimate " << total << ", error " << total_error << ")";
      throw Error(Errc::NoConvergence, msg.str());
    }
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel at floating-point resolution; nothing left to refine.
      break;
    }
    panels.pop();
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }

  // Re-sum from the panels to shed accumulated update roundoff.
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

}  // namespace bosonic::numerics
