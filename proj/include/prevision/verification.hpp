#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "prevision/common.hpp"
#include "prevision/dataset.hpp"
#include "prevision/distribution.hpp"
#include "prevision/quadrature.hpp"
#include "prevision/regression.hpp"
#include "prevision/special.hpp"

namespace prevision {

// ---------------------------------------------------------------------------
// CRPS: integral of (F(t) - 1{t >= y})^2 dt. Negatively oriented, smaller is
// better. Closed form for the t predictive when dof > 1; adaptive quadrature
// for dof in (1/2, 1]; divergent at dof <= 1/2.

namespace detail {

// Tail of the CRPS integrand beyond a window edge, integrated octave by
// octave: each doubling of the offset shrinks the octave's contribution by
// about 2^(1 - 2 dof), so the remainder is bounded by a geometric series.
// For dof barely above 1/2 that ratio approaches 1 and the required range
// can exceed what doubles represent; that genuinely nonconvergent case is
// reported, not silenced.
template <typename Scalar, typename G>
Scalar crps_tail_octaves(const G& integrand, Scalar origin, Scalar direction,
                         Scalar first_offset, Scalar dof, Scalar abs_tol) {
  const Scalar ratio = std::exp2(Scalar(1) - Scalar(2) * dof);
  Scalar total = Scalar(0);
  Scalar offset = first_offset;
  for (int k = 0; k < 1100; ++k) {
    const Scalar a = origin + direction * offset;
    const Scalar b = origin + direction * offset * Scalar(2);
    const Scalar lo = std::min(a, b);
    const Scalar hi = std::max(a, b);
    const Scalar piece =
        integrate(integrand, lo, hi, abs_tol / Scalar(20) / Scalar((k + 1) * (k + 1)));
    total += piece;
    const Scalar remaining = ratio < Scalar(1)
                                 ? piece * ratio / (Scalar(1) - ratio)
                                 : std::numeric_limits<Scalar>::infinity();
    if (remaining < abs_tol / Scalar(10)) return total;
    offset *= Scalar(2);
    if (!std::isfinite(offset) || !std::isfinite(origin + direction * offset)) break;
  }
  throw NumericError("CRPS tail integration did not converge (dof=" +
                     std::to_string(double(dof)) +
                     "): the tail decays too slowly to truncate in double range");
}

}  // namespace detail

/// Quadrature CRPS for a location-scale t: adaptive Simpson on a central
/// window plus octave-doubled tail segments.
template <typename Scalar>
Scalar crps_quadrature(const StudentTDist<Scalar>& dist, Scalar observed,
                       Scalar abs_tol = Scalar(1e-9)) {
  if (!std::isfinite(observed)) {
    throw DomainError("crps requires a finite observed value");
  }
  if (!(dist.dof > Scalar(0.5))) {
    throw NumericError("CRPS diverges for dof <= 1/2 (tail mass decays too slowly)");
  }

  const Scalar window =
      dist.scale * (Scalar(40) + std::abs(dist.standardize(observed)));
  const Scalar lo = dist.location - window;
  const Scalar hi = dist.location + window;

  const auto below = [&](Scalar t) {
    const Scalar F = cdf(dist, t);
    return F * F;
  };
  const auto above = [&](Scalar t) {
    const Scalar S = prob_above(dist, t);
    return S * S;
  };

  Scalar total = integrate(below, lo, observed, abs_tol / Scalar(4)) +
                 integrate(above, observed, hi, abs_tol / Scalar(4));
  total += detail::crps_tail_octaves(above, dist.location, Scalar(1), window,
                                     dist.dof, abs_tol);
  total += detail::crps_tail_octaves(below, dist.location, Scalar(-1), window,
                                     dist.dof, abs_tol);
  return std::max(Scalar(0), total);
}

/// CRPS of a location-scale Student-t predictive against one observation.
/// dof > 1 uses the closed form (scale * the standard-t expression); lower
/// dof falls back to quadrature.
template <typename Scalar>
Scalar crps(const StudentTDist<Scalar>& dist, Scalar observed) {
  if (!std::isfinite(observed)) {
    throw DomainError("crps requires a finite observed value");
  }
  if (!(dist.dof > Scalar(1))) {
    return crps_quadrature(dist, observed);
  }
  const Scalar nu = dist.dof;
  const Scalar z = dist.standardize(observed);
  const Scalar Fz = t_cdf(z, nu);
  const Scalar fz = t_pdf(z, nu);
  const Scalar half = Scalar(0.5);
  // B(1/2, nu - 1/2) / B(1/2, nu / 2)^2 via log-gammas.
  const Scalar log_b1 = log_beta(half, nu - half);
  const Scalar log_b2 = log_beta(half, half * nu);
  const Scalar beta_term = std::exp(log_b1 - Scalar(2) * log_b2);
  const Scalar standard = z * (Scalar(2) * Fz - Scalar(1)) +
                          Scalar(2) * fz * (nu + z * z) / (nu - Scalar(1)) -
                          Scalar(2) * std::sqrt(nu) / (nu - Scalar(1)) * beta_term;
  return dist.scale * standard;
}

/// CRPS of a finite discrete predictive: the piecewise-constant integrand
/// evaluated exactly, segment by segment.
template <typename Scalar>
Scalar crps(const DiscreteDist<Scalar>& dist, Scalar observed) {
  if (!std::isfinite(observed)) {
    throw DomainError("crps requires a finite observed value");
  }
  // Breakpoints: support values plus the observation. Between consecutive
  // breakpoints both F and the step H are constant.
  std::vector<Scalar> points(dist.support.data(), dist.support.data() + dist.support.size());
  points.push_back(observed);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  Scalar total = Scalar(0);
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const Scalar a = points[i];
    const Scalar b = points[i + 1];
    const Scalar F = cdf(dist, a);               // constant on [a, b)
    const Scalar H = a >= observed ? Scalar(1) : Scalar(0);
    total += (F - H) * (F - H) * (b - a);
  }
  return total;
}

template <typename Scalar>
Scalar crps(const PredictiveDistribution<Scalar>& dist, Scalar observed) {
  return std::visit([&](const auto& inner) { return crps(inner, observed); }, dist);
}

/// Mean CRPS of a model over every row of a dataset, each row scored by the
/// predictive at its own predictor values.
inline double mean_crps(const FittedModel& model, const Dataset& data) {
  double total = 0.0;
  for (Index r = 0; r < data.n(); ++r) {
    Scenario scenario;
    for (const auto& p : model.spec.predictors) {
      scenario[p] = data.at(r, p);
    }
    const double observed = data.at(r, model.spec.response);
    total += crps(predictive_distribution(model, scenario), observed);
  }
  return total / double(data.n());
}

/// Relative improvement of a candidate score over a comparator:
/// (comparator - candidate) / comparator. 1 is perfect, 0 is no better,
/// negative means the candidate loses.
inline double skill(double score_comparator, double score_candidate) {
  if (!(score_comparator > 0.0)) {
    throw DomainError("skill is undefined for a comparator score of zero");
  }
  if (!(score_candidate >= 0.0)) {
    throw DomainError("candidate score must be >= 0");
  }
  return (score_comparator - score_candidate) / score_comparator;
}

struct ScoredObservation {
  Index index;
  double observed;
  double crps_full;
  double crps_partial;
  double skill;
};

/// (predictor value, per-observation skill) series: the raw material of
/// per-covariate skill plots.
struct CovariateView {
  VariableName variable;
  Vector values;
  Vector skills;
};

struct VerificationReport {
  ModelSpec full_spec;
  ModelSpec partial_spec;
  std::vector<ScoredObservation> per_observation;
  double mean_crps_full = 0.0;
  double mean_crps_partial = 0.0;
  double overall_skill = 0.0;
  bool in_sample = true;
  std::string advisory;
  std::vector<CovariateView> covariate_views;
  std::string data_fingerprint;
};

/// Advisory attached to any report scored on its own fitting data.
inline std::string in_sample_warning() {
  return "scored in-sample on the fitting data; over-fitting and over-confidence "
         "will result, so treat these numbers as an initial check only";
}

/// Score a full model against a simpler comparator on the same data:
/// per-observation CRPS for both, per-observation and overall skill, and
/// per-predictor skill series.
inline VerificationReport verify(const FittedModel& full, const FittedModel& partial,
                                 const Dataset& data) {
  if (full.spec.response != partial.spec.response) {
    throw ContractError("models must predict the same response ('" +
                        full.spec.response + "' vs '" + partial.spec.response + "')");
  }

  VerificationReport report;
  report.full_spec = full.spec;
  report.partial_spec = partial.spec;
  report.data_fingerprint = fingerprint(data);
  report.per_observation.reserve(size_t(data.n()));

  double sum_full = 0.0;
  double sum_partial = 0.0;
  for (Index r = 0; r < data.n(); ++r) {
    Scenario scenario_full, scenario_partial;
    for (const auto& p : full.spec.predictors) scenario_full[p] = data.at(r, p);
    for (const auto& p : partial.spec.predictors) scenario_partial[p] = data.at(r, p);
    const double observed = data.at(r, full.spec.response);

    ScoredObservation obs;
    obs.index = r;
    obs.observed = observed;
    obs.crps_full = crps(predictive_distribution(full, scenario_full), observed);
    obs.crps_partial = crps(predictive_distribution(partial, scenario_partial), observed);
    obs.skill = (obs.crps_partial == 0.0 && obs.crps_full == 0.0)
                    ? 0.0
                    : skill(obs.crps_partial, obs.crps_full);
    sum_full += obs.crps_full;
    sum_partial += obs.crps_partial;
    report.per_observation.push_back(obs);
  }

  report.mean_crps_full = sum_full / double(data.n());
  report.mean_crps_partial = sum_partial / double(data.n());
  report.overall_skill = skill(report.mean_crps_partial, report.mean_crps_full);

  // Conservative: in-sample unless both models carry fingerprints that both
  // differ from the scoring data.
  const bool provenance_known =
      !full.data_fingerprint.empty() && !partial.data_fingerprint.empty();
  report.in_sample = !provenance_known ||
                     full.data_fingerprint == report.data_fingerprint ||
                     partial.data_fingerprint == report.data_fingerprint;
  if (report.in_sample) report.advisory = in_sample_warning();

  for (const auto& p : full.spec.predictors) {
    CovariateView view;
    view.variable = p;
    view.values = data.column(p);
    view.skills.resize(data.n());
    for (Index r = 0; r < data.n(); ++r) {
      view.skills[r] = report.per_observation[size_t(r)].skill;
    }
    report.covariate_views.push_back(std::move(view));
  }
  return report;
}

}  // namespace prevision
