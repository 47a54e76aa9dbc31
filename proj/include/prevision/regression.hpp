#pragma once

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prevision/common.hpp"
#include "prevision/dataset.hpp"
#include "prevision/distribution.hpp"

namespace prevision {

/// The regression premises: which observable is explained, by which others,
/// with or without an intercept. An empty predictor list with an intercept
/// is the null model.
struct ModelSpec {
  VariableName response;
  std::vector<VariableName> predictors;
  bool intercept = true;

  void validate() const {
    validate_variable_name(response);
    std::set<VariableName> seen;
    for (const auto& p : predictors) {
      validate_variable_name(p);
      if (p == response) {
        throw ContractError("response '" + response + "' cannot also be a predictor");
      }
      if (!seen.insert(p).second) {
        throw ContractError("duplicate predictor '" + p + "'");
      }
    }
    if (!intercept && predictors.empty()) {
      throw ContractError("a model needs an intercept or at least one predictor");
    }
  }

  /// R-style description, e.g. "cgpa ~ 1 + hgpa + sat".
  std::string formula() const {
    std::string out = response + " ~ " + (intercept ? "1" : "0");
    for (const auto& p : predictors) out += " + " + p;
    return out;
  }

  /// Names of the design matrix columns, intercept first when present.
  std::vector<std::string> design_names() const {
    std::vector<std::string> names;
    if (intercept) names.push_back("(intercept)");
    names.insert(names.end(), predictors.begin(), predictors.end());
    return names;
  }

  bool operator==(const ModelSpec& other) const {
    return response == other.response && predictors == other.predictors &&
           intercept == other.intercept;
  }
};

/// Assumed values for every predictor (the new X): no omissions, no extras.
using Scenario = std::map<VariableName, double>;

namespace detail {

template <typename Scalar>
VectorX<Scalar> design_vector(const ModelSpec& spec, const Scenario& scenario) {
  std::string missing, extra;
  for (const auto& p : spec.predictors) {
    if (!scenario.count(p)) missing += (missing.empty() ? "" : ", ") + p;
  }
  for (const auto& [name, value] : scenario) {
    (void)value;
    bool known = false;
    for (const auto& p : spec.predictors) {
      if (p == name) known = true;
    }
    if (!known) extra += (extra.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) {
    throw ContractError("scenario is missing predictor(s): " + missing);
  }
  if (!extra.empty()) {
    throw ContractError("scenario has unknown variable(s): " + extra);
  }

  VectorX<Scalar> x(Index(spec.predictors.size()) + (spec.intercept ? 1 : 0));
  Index j = 0;
  if (spec.intercept) x[j++] = Scalar(1);
  for (const auto& p : spec.predictors) {
    const double v = scenario.at(p);
    if (!std::isfinite(v)) {
      throw ContractError("scenario value for '" + p + "' must be finite");
    }
    x[j++] = Scalar(v);
  }
  return x;
}

}  // namespace detail

/// Sufficient statistics of the flat-prior fit. Everything a predictive
/// distribution needs; nothing about the rows themselves except their count
/// and fingerprint.
template <typename Scalar>
struct FittedModelT {
  ModelSpec spec;
  VectorX<Scalar> coefficients;
  Scalar residual_scale;        // sqrt(RSS / (n - p))
  MatrixX<Scalar> gram_inverse; // (X'X)^{-1}
  Index n = 0;
  Index p = 0;
  bool degenerate = false;      // residual scale indistinguishable from zero
  std::string data_fingerprint; // sha256 of the fitted data; may be empty

  void validate() const {
    spec.validate();
    if (p != coefficients.size() || p != gram_inverse.rows() || p != gram_inverse.cols()) {
      throw ContractError("fitted model: inconsistent dimensions");
    }
    if (Index(spec.design_names().size()) != p) {
      throw ContractError("fitted model: spec does not match coefficient count");
    }
    if (!(n > p)) {
      throw InsufficientDataError("fitted model requires n > p (n=" + std::to_string(n) +
                                  ", p=" + std::to_string(p) + ")");
    }
    if (!(residual_scale >= Scalar(0)) || !std::isfinite(residual_scale)) {
      throw ContractError("fitted model: residual scale must be finite and >= 0");
    }
    const Scalar denom = gram_inverse.template lpNorm<Eigen::Infinity>();
    const Scalar asym =
        (gram_inverse - gram_inverse.transpose()).template lpNorm<Eigen::Infinity>();
    if (denom > Scalar(0) && asym > Scalar(1e-10) * denom) {
      throw ContractError("fitted model: gram inverse is not symmetric");
    }
    Eigen::LLT<MatrixX<Scalar>> llt(gram_inverse);
    if (llt.info() != Eigen::Success) {
      throw ContractError("fitted model: gram inverse is not positive definite");
    }
  }

  Index dof() const { return n - p; }
};

using FittedModel = FittedModelT<double>;

/// Least-squares fit via column-pivoted Householder QR (not normal
/// equations). Rank deficiency is an error naming a dependent column rather
/// than a silent column drop: predictor choice stays a decision, not a
/// side effect.
inline FittedModel fit_linear_model(const Dataset& data, const ModelSpec& spec) {
  spec.validate();

  const Index n = data.n();
  const Index p = Index(spec.predictors.size()) + (spec.intercept ? 1 : 0);
  if (n <= p) {
    throw InsufficientDataError("need more observations than design columns (n=" +
                                std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }

  Matrix design(n, p);
  Index j = 0;
  if (spec.intercept) design.col(j++).setOnes();
  for (const auto& name : spec.predictors) {
    design.col(j++) = data.column(name);
  }
  const Vector response = data.column(spec.response);

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < p) {
    const auto perm = qr.colsPermutation().indices();
    const auto names = spec.design_names();
    // Pivots beyond the numerical rank are the dependent columns.
    std::string dependent = names[size_t(perm[qr.rank()])];
    throw SingularityError("design matrix is rank deficient: column '" + dependent +
                           "' is a linear function of the others and adds nothing");
  }

  const Vector coefficients = qr.solve(response);
  const double rss = (response - design * coefficients).squaredNorm();
  const double residual_scale = std::sqrt(rss / double(n - p));

  // (X'X)^{-1} from the R factor: with A P = Q R, (A'A)^{-1} = P R^{-1} R^{-T} P'.
  const Matrix r_factor =
      qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Matrix r_inv =
      r_factor.triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
  Matrix gram_inverse = qr.colsPermutation() * (r_inv * r_inv.transpose()) *
                        qr.colsPermutation().transpose();
  gram_inverse = ((gram_inverse + gram_inverse.transpose()) / 2.0).eval();

  const double response_rms = std::sqrt(response.squaredNorm() / double(n));
  const bool degenerate = residual_scale <= 1e-10 * std::max(1.0, response_rms);

  FittedModel model;
  model.spec = spec;
  model.coefficients = coefficients;
  model.residual_scale = residual_scale;
  model.gram_inverse = std::move(gram_inverse);
  model.n = n;
  model.p = p;
  model.degenerate = degenerate;
  model.data_fingerprint = fingerprint(data);
  model.validate();
  return model;
}

/// Point prediction x*'b. Works even for degenerate (zero-residual) fits,
/// unlike the full predictive.
template <typename Scalar>
Scalar predict_location(const FittedModelT<Scalar>& model, const Scenario& scenario) {
  const VectorX<Scalar> x = detail::design_vector<Scalar>(model.spec, scenario);
  return x.dot(model.coefficients);
}

/// The posterior predictive for one scenario: location-scale Student-t with
/// n - p degrees of freedom, location x*'b and scale
/// s * sqrt(1 + x*' (X'X)^{-1} x*). Parameters are integrated out; only the
/// observable remains.
template <typename Scalar>
PredictiveDistribution<Scalar> predictive_distribution(const FittedModelT<Scalar>& model,
                                                       const Scenario& scenario) {
  if (model.degenerate) {
    throw DegenerateModelError(
        "residual scale is zero: the data fit exactly and the continuous-t predictive "
        "is undefined (point mass)");
  }
  const VectorX<Scalar> x = detail::design_vector<Scalar>(model.spec, scenario);
  const Scalar location = x.dot(model.coefficients);
  const Scalar quad = x.dot(model.gram_inverse * x);
  const Scalar scale = model.residual_scale * std::sqrt(Scalar(1) + quad);
  return StudentTDist<Scalar>(location, scale, Scalar(model.dof()));
}

/// Model deduced from premises: m distinct outcomes, each with probability
/// exactly 1/m. No parameters were ever present.
inline Predictive deduced_uniform(const std::vector<double>& labels) {
  if (labels.empty()) {
    throw ContractError("deduced_uniform needs at least one outcome");
  }
  std::set<double> distinct(labels.begin(), labels.end());
  if (distinct.size() != labels.size()) {
    throw ContractError("deduced_uniform outcomes must be distinct");
  }
  const Index m = Index(labels.size());
  Vector support(m), mass(m);
  for (Index i = 0; i < m; ++i) {
    support[i] = labels[size_t(i)];
    mass[i] = 1.0 / double(m);
  }
  return Discrete(std::move(support), std::move(mass));
}

}  // namespace prevision
