#pragma once

#include <cmath>
#include <string>

#include "prevision/common.hpp"

namespace prevision {

namespace detail {

template <typename Scalar, typename F>
Scalar adaptive_simpson_step(const F& f, Scalar a, Scalar b, Scalar fa, Scalar fm,
                             Scalar fb, Scalar whole, Scalar tol, int depth) {
  const Scalar m = (a + b) / Scalar(2);
  const Scalar lm = (a + m) / Scalar(2);
  const Scalar rm = (m + b) / Scalar(2);
  const Scalar flm = f(lm);
  const Scalar frm = f(rm);
  const Scalar left = (m - a) / Scalar(6) * (fa + Scalar(4) * flm + fm);
  const Scalar right = (b - m) / Scalar(6) * (fm + Scalar(4) * frm + fb);
  const Scalar delta = left + right - whole;
  // Tolerance splitting stops at the roundoff floor: below that the estimate
  // cannot improve and the comparison is pure noise.
  const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                       (std::abs(left) + std::abs(right) + Scalar(1e-30));
  const Scalar goal = std::max(Scalar(15) * tol, floor);
  if (std::abs(delta) <= goal) {
    return left + right + delta / Scalar(15);
  }
  if (depth <= 0) {
    throw NumericError("adaptive quadrature did not converge on [" +
                       std::to_string(double(a)) + ", " + std::to_string(double(b)) +
                       "] (remaining error estimate " + std::to_string(double(delta)) + ")");
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, tol / Scalar(2), depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, tol / Scalar(2), depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
template <typename Scalar, typename F>
Scalar integrate(const F& f, Scalar a, Scalar b, Scalar tol, int max_depth = 48) {
  if (!(a < b)) return Scalar(0);
  const Scalar fa = f(a);
  const Scalar fb = f(b);
  const Scalar m = (a + b) / Scalar(2);
  const Scalar fm = f(m);
  const Scalar whole = (b - a) / Scalar(6) * (fa + Scalar(4) * fm + fb);
  return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace prevision
