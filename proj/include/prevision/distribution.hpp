#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "prevision/common.hpp"
#include "prevision/special.hpp"

namespace prevision {

/// Location-scale Student-t, the flat-prior posterior predictive of an
/// ordinary regression: parameters have been integrated out, only the
/// observable's distribution remains.
template <typename Scalar>
struct StudentTDist {
  Scalar location;
  Scalar scale;
  Scalar dof;

  StudentTDist(Scalar location_, Scalar scale_, Scalar dof_)
      : location(location_), scale(scale_), dof(dof_) {
    if (!(std::isfinite(location))) {
      throw ContractError("Student-t predictive: location must be finite");
    }
    if (!(scale > Scalar(0)) || !std::isfinite(scale)) {
      throw ContractError("Student-t predictive: scale must be positive");
    }
    if (!(dof > Scalar(0))) {
      throw ContractError("Student-t predictive: dof must be positive");
    }
  }

  Scalar standardize(Scalar x) const { return (x - location) / scale; }
};

/// Discrete predictive with finite support, e.g. a model deduced from
/// premises (the six-sided die). Support is kept sorted.
template <typename Scalar>
struct DiscreteDist {
  VectorX<Scalar> support;
  VectorX<Scalar> mass;

  DiscreteDist(VectorX<Scalar> support_, VectorX<Scalar> mass_)
      : support(std::move(support_)), mass(std::move(mass_)) {
    if (support.size() == 0 || support.size() != mass.size()) {
      throw ContractError("discrete predictive: support and mass sizes must match and be nonempty");
    }
    std::vector<Index> order(static_cast<size_t>(support.size()));
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return support[a] < support[b]; });
    VectorX<Scalar> s(support.size()), m(mass.size());
    for (Index i = 0; i < support.size(); ++i) {
      s[i] = support[order[static_cast<size_t>(i)]];
      m[i] = mass[order[static_cast<size_t>(i)]];
    }
    support = std::move(s);
    mass = std::move(m);

    Scalar total = Scalar(0);
    for (Index i = 0; i < support.size(); ++i) {
      if (!std::isfinite(support[i])) {
        throw ContractError("discrete predictive: support values must be finite");
      }
      if (i > 0 && !(support[i - 1] < support[i])) {
        throw ContractError("discrete predictive: support values must be distinct");
      }
      if (!(mass[i] >= Scalar(0) && mass[i] <= Scalar(1))) {
        throw ContractError("discrete predictive: each probability must lie in [0, 1]");
      }
      total += mass[i];
    }
    if (std::abs(total - Scalar(1)) > Scalar(1e-12)) {
      throw ContractError("discrete predictive: probabilities must sum to 1 (got " +
                          format_double(double(total)) + ")");
    }
  }
};

template <typename Scalar>
using PredictiveDistribution = std::variant<StudentTDist<Scalar>, DiscreteDist<Scalar>>;

using StudentT = StudentTDist<double>;
using Discrete = DiscreteDist<double>;
using Predictive = PredictiveDistribution<double>;

// ---------------------------------------------------------------------------
// CDF primitives. Discrete tail quantities are direct mass sums, not
// 1 - cdf, so a deduced model reports exactly zero outside its support.

template <typename Scalar>
Scalar cdf(const StudentTDist<Scalar>& d, Scalar x) {
  if (std::isinf(x)) return x > Scalar(0) ? Scalar(1) : Scalar(0);
  return t_cdf(d.standardize(x), d.dof);
}

template <typename Scalar>
Scalar cdf(const DiscreteDist<Scalar>& d, Scalar x) {
  Scalar acc = Scalar(0);
  for (Index i = 0; i < d.support.size() && d.support[i] <= x; ++i) {
    acc += d.mass[i];
  }
  return acc;
}

/// Left limit P(Y < x); differs from cdf only on discrete atoms.
template <typename Scalar>
Scalar cdf_left(const StudentTDist<Scalar>& d, Scalar x) {
  return cdf(d, x);
}

template <typename Scalar>
Scalar cdf_left(const DiscreteDist<Scalar>& d, Scalar x) {
  Scalar acc = Scalar(0);
  for (Index i = 0; i < d.support.size() && d.support[i] < x; ++i) {
    acc += d.mass[i];
  }
  return acc;
}

template <typename Scalar>
Scalar prob_above(const StudentTDist<Scalar>& d, Scalar x) {
  if (std::isinf(x)) return x > Scalar(0) ? Scalar(0) : Scalar(1);
  // 1 - F computed as the symmetric CDF so small exceedances keep precision.
  return t_cdf(-d.standardize(x), d.dof);
}

template <typename Scalar>
Scalar prob_above(const DiscreteDist<Scalar>& d, Scalar x) {
  Scalar acc = Scalar(0);
  for (Index i = d.support.size() - 1; i >= 0 && d.support[i] > x; --i) {
    acc += d.mass[i];
  }
  return acc;
}

template <typename Scalar>
Scalar mass_at(const DiscreteDist<Scalar>& d, Scalar x) {
  for (Index i = 0; i < d.support.size(); ++i) {
    if (d.support[i] == x) return d.mass[i];
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar cdf(const PredictiveDistribution<Scalar>& d, Scalar x) {
  return std::visit([&](const auto& inner) { return cdf(inner, x); }, d);
}

template <typename Scalar>
Scalar cdf_left(const PredictiveDistribution<Scalar>& d, Scalar x) {
  return std::visit([&](const auto& inner) { return cdf_left(inner, x); }, d);
}

template <typename Scalar>
Scalar prob_above(const PredictiveDistribution<Scalar>& d, Scalar x) {
  return std::visit([&](const auto& inner) { return prob_above(inner, x); }, d);
}

template <typename Scalar>
bool is_continuous(const PredictiveDistribution<Scalar>& d) {
  return std::holds_alternative<StudentTDist<Scalar>>(d);
}

}  // namespace prevision
