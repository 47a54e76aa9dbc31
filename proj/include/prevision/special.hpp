#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "prevision/common.hpp"

// Special-function kernel for the Student-t predictive machinery.
// Self-contained on purpose: the only heavy numerics the library needs is
// the regularized incomplete beta, and keeping it here avoids pulling in a
// second math library next to Eigen.

namespace prevision {

template <typename Scalar>
Scalar log_beta(Scalar a, Scalar b) {
  const Scalar lo = std::min(a, b);
  const Scalar hi = std::max(a, b);
  if (hi < Scalar(300)) {
    return std::lgamma(lo) + std::lgamma(hi) - std::lgamma(a + b);
  }
  // lgamma(hi) - lgamma(lo + hi) cancels catastrophically for large hi (both
  // values are huge, the difference is O(lo log hi)). Take the difference
  // through Stirling's series instead, term by term.
  const Scalar sum = lo + hi;
  const Scalar t1 = lo / (Scalar(12) * hi * sum);
  const Scalar t2 = -lo * (Scalar(3) * hi * hi + Scalar(3) * lo * hi + lo * lo) /
                    (Scalar(360) * hi * hi * hi * sum * sum * sum);
  return std::lgamma(lo) + lo - lo * std::log(sum) -
         (hi - Scalar(0.5)) * std::log1p(lo / hi) + t1 + t2;
}

namespace detail {

// Continued fraction for the incomplete beta (Lentz's method, the classic
// scheme from Numerical Recipes §6.4). Converges quickly for
// x < (a+1)/(a+b+2); the caller handles the symmetry switch.
template <typename Scalar>
Scalar incomplete_beta_cf(Scalar a, Scalar b, Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;

  const Scalar qab = a + b;
  const Scalar qap = a + Scalar(1);
  const Scalar qam = a - Scalar(1);

  Scalar c = Scalar(1);
  Scalar d = Scalar(1) - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = Scalar(1) / d;
  Scalar h = d;

  for (int m = 1; m <= 600; ++m) {
    const Scalar m2 = Scalar(2 * m);
    Scalar aa = Scalar(m) * (b - Scalar(m)) * x / ((qam + m2) * (a + m2));
    d = Scalar(1) + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = Scalar(1) + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    h *= d * c;

    aa = -(a + Scalar(m)) * (qab + Scalar(m)) * x / ((a + m2) * (qap + m2));
    d = Scalar(1) + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = Scalar(1) + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    const Scalar delta = d * c;
    h *= delta;
    if (std::abs(delta - Scalar(1)) <= eps) {
      return h;
    }
  }
  throw NumericError("incomplete beta continued fraction failed to converge (a=" +
                     std::to_string(double(a)) + ", b=" + std::to_string(double(b)) +
                     ", x=" + std::to_string(double(x)) + ")");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). The optional `xc` is 1 - x
/// computed without cancellation; when a*log(x) is large that extra digit
/// of the complement is what keeps the front factor accurate.
template <typename Scalar>
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x,
                                   Scalar xc = std::numeric_limits<Scalar>::quiet_NaN()) {
  if (!(a > Scalar(0)) || !(b > Scalar(0))) {
    throw DomainError("incomplete beta requires a > 0 and b > 0");
  }
  if (std::isnan(x)) return x;
  if (!(x >= Scalar(0) && x <= Scalar(1))) {
    throw DomainError("incomplete beta requires x in [0, 1]");
  }
  if (std::isnan(xc)) xc = Scalar(1) - x;
  if (x == Scalar(0)) return Scalar(0);
  if (x == Scalar(1) || xc == Scalar(0)) return Scalar(1);

  // Front factor x^a (1-x)^b / B(a,b); symmetric under (a,b,x) <-> (b,a,xc).
  const Scalar log_x = x > Scalar(0.75) ? std::log1p(-xc) : std::log(x);
  const Scalar log_xc = xc > Scalar(0.75) ? std::log1p(-x) : std::log(xc);
  const Scalar front = std::exp(a * log_x + b * log_xc - log_beta(a, b));
  if (x < (a + Scalar(1)) / (a + b + Scalar(2))) {
    return front * detail::incomplete_beta_cf(a, b, x) / a;
  }
  return Scalar(1) - front * detail::incomplete_beta_cf(b, a, xc) / b;
}

/// Density of the standard Student-t with `dof` degrees of freedom.
template <typename Scalar>
Scalar t_pdf(Scalar x, Scalar dof) {
  if (!(dof > Scalar(0))) {
    throw DomainError("t_pdf requires dof > 0");
  }
  if (std::isinf(x)) return Scalar(0);
  const Scalar half = Scalar(0.5);
  const Scalar lognorm = std::lgamma(half * (dof + Scalar(1))) -
                         std::lgamma(half * dof) -
                         half * std::log(dof * Scalar(M_PI));
  return std::exp(lognorm - half * (dof + Scalar(1)) * std::log1p(x * x / dof));
}

/// CDF of the standard Student-t with `dof` degrees of freedom, through the
/// regularized incomplete beta (A&S 26.7.1). Absolute accuracy ~1e-15; the
/// tail value is computed directly (never as 1 - large) so small
/// probabilities keep their leading digits.
template <typename Scalar>
Scalar t_cdf(Scalar x, Scalar dof) {
  if (!(dof > Scalar(0))) {
    throw DomainError("t_cdf requires dof > 0");
  }
  if (std::isnan(x)) return x;
  if (x == Scalar(0)) return Scalar(0.5);
  if (std::isinf(x)) return x > Scalar(0) ? Scalar(1) : Scalar(0);

  const Scalar x2 = x * x;
  if (std::isinf(x2) || x2 > dof) {
    // Tail form: P(T >= |x|) computed directly, so tiny tail probabilities
    // keep full relative precision instead of dying in 1 - (1 - h).
    const Scalar z = dof / (dof + x2);
    const Scalar zc = x2 / (dof + x2);
    const Scalar tail = Scalar(0.5) * regularized_incomplete_beta(
                                          Scalar(0.5) * dof, Scalar(0.5), z, zc);
    return x > Scalar(0) ? Scalar(1) - tail : tail;
  }
  const Scalar z = x2 / (dof + x2);
  const Scalar zc = dof / (dof + x2);
  const Scalar center = Scalar(0.5) * regularized_incomplete_beta(
                                          Scalar(0.5), Scalar(0.5) * dof, z, zc);
  return x > Scalar(0) ? Scalar(0.5) + center : Scalar(0.5) - center;
}

}  // namespace prevision
