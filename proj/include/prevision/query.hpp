#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "prevision/common.hpp"
#include "prevision/dataset.hpp"
#include "prevision/distribution.hpp"
#include "prevision/regression.hpp"

namespace prevision {

/// A set of observable values someone cares about: an exceedance Y > y0, an
/// interval a < Y <= b, or (for discrete predictives only) a single point.
struct ThresholdEvent {
  enum class Kind { exceedance, interval, point };

  Kind kind;
  double threshold = 0.0;  // exceedance
  double lower = -kInf;    // interval
  double upper = kInf;     // interval
  double value = 0.0;      // point
  std::string label;       // presentation only

  static ThresholdEvent greater_than(double y0) {
    if (std::isnan(y0) || std::isinf(y0)) {
      throw ContractError("exceedance threshold must be finite");
    }
    ThresholdEvent e;
    e.kind = Kind::exceedance;
    e.threshold = y0;
    e.label = "Y > " + format_double(y0);
    return e;
  }

  static ThresholdEvent interval(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || !(a < b)) {
      throw ContractError("interval requires a < b");
    }
    ThresholdEvent e;
    e.kind = Kind::interval;
    e.lower = a;
    e.upper = b;
    if (a == -kInf && b == kInf) {
      e.label = "Y in (-inf, inf)";
    } else if (a == -kInf) {
      e.label = "Y <= " + format_double(b);
    } else if (b == kInf) {
      e.label = "Y > " + format_double(a);
    } else {
      e.label = format_double(a) + " < Y <= " + format_double(b);
    }
    return e;
  }

  static ThresholdEvent less_than(double b) {
    ThresholdEvent e = interval(-kInf, b);
    e.label = "Y < " + format_double(b);
    return e;
  }

  static ThresholdEvent equals(double v) {
    if (!std::isfinite(v)) {
      throw ContractError("point event value must be finite");
    }
    ThresholdEvent e;
    e.kind = Kind::point;
    e.value = v;
    e.label = "Y = " + format_double(v);
    return e;
  }
};

/// Pr(Y in y | ...): the single query every other operation reduces to.
template <typename Scalar>
Scalar event_probability(const PredictiveDistribution<Scalar>& dist,
                         const ThresholdEvent& event) {
  switch (event.kind) {
    case ThresholdEvent::Kind::exceedance:
      return prob_above(dist, Scalar(event.threshold));
    case ThresholdEvent::Kind::interval: {
      if (const auto* d = std::get_if<DiscreteDist<Scalar>>(&dist)) {
        Scalar acc = Scalar(0);  // exact mass sum over a < x <= b
        for (Index i = 0; i < d->support.size(); ++i) {
          if (d->support[i] > Scalar(event.lower) && d->support[i] <= Scalar(event.upper)) {
            acc += d->mass[i];
          }
        }
        return acc;
      }
      const auto& t = std::get<StudentTDist<Scalar>>(dist);
      const Scalar hi = cdf(t, Scalar(event.upper));
      const Scalar lo = cdf(t, Scalar(event.lower));
      return std::max(Scalar(0), hi - lo);
    }
    case ThresholdEvent::Kind::point: {
      const auto* d = std::get_if<DiscreteDist<Scalar>>(&dist);
      if (!d) {
        throw ContractError(
            "a continuous predictive assigns probability to intervals, not points; "
            "ask about Y in an interval instead");
      }
      return mass_at(*d, Scalar(event.value));
    }
  }
  throw ContractError("unknown event kind");
}

/// One predictor swept over a grid with everything else held fixed; the
/// optional baseline is the same query under the model without that
/// predictor (the dashed line in a relevance plot).
struct RelevanceCurve {
  VariableName varying;
  Vector grid;
  Vector probabilities;
  std::optional<double> baseline;
  Scenario fixed;
  ThresholdEvent event;
};

inline void check_grid(const Vector& grid) {
  if (grid.size() == 0) {
    throw ContractError("grid must be non-empty");
  }
  for (Index i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw ContractError("grid values must be finite");
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw ContractError("grid must be strictly increasing");
    }
  }
}

inline RelevanceCurve relevance_curve(const FittedModel& model, const VariableName& varying,
                                      const Vector& grid, const Scenario& fixed,
                                      const ThresholdEvent& event,
                                      const FittedModel* baseline_model = nullptr) {
  check_grid(grid);
  if (fixed.count(varying)) {
    throw ContractError("'" + varying + "' cannot be both varying and fixed");
  }

  const bool in_model = [&] {
    for (const auto& p : model.spec.predictors) {
      if (p == varying) return true;
    }
    return false;
  }();

  // Every model predictor except the varying one must come from `fixed`.
  for (const auto& p : model.spec.predictors) {
    if (p != varying && !fixed.count(p)) {
      throw ContractError("fixed scenario is missing predictor '" + p + "'");
    }
  }
  for (const auto& [name, value] : fixed) {
    (void)value;
    bool known = false;
    for (const auto& p : model.spec.predictors) {
      if (p == name) known = true;
    }
    if (!known) {
      throw ContractError("fixed scenario has unknown variable '" + name + "'");
    }
  }

  RelevanceCurve curve;
  curve.varying = varying;
  curve.grid = grid;
  curve.fixed = fixed;
  curve.event = event;
  curve.probabilities.resize(grid.size());

  for (Index i = 0; i < grid.size(); ++i) {
    Scenario scenario = fixed;
    if (in_model) scenario[varying] = grid[i];
    curve.probabilities[i] =
        event_probability(predictive_distribution(model, scenario), event);
  }

  if (baseline_model) {
    ModelSpec reduced = model.spec;
    reduced.predictors.erase(
        std::remove(reduced.predictors.begin(), reduced.predictors.end(), varying),
        reduced.predictors.end());
    if (!(baseline_model->spec == reduced)) {
      throw ContractError("baseline model must be '" + reduced.formula() +
                          "' (got '" + baseline_model->spec.formula() + "')");
    }
    curve.baseline =
        event_probability(predictive_distribution(*baseline_model, fixed), event);
  }
  return curve;
}

/// Relevance is nonzero spread: does the probability move at all as X does?
/// epsilon = 0 is the strict definition; a small positive epsilon guards
/// against floating-point wiggle. Importance is not decided here.
struct RelevanceResult {
  double spread;
  bool relevant;
};

inline RelevanceResult is_relevant(const RelevanceCurve& curve, double epsilon = 1e-6) {
  if (!(epsilon >= 0.0)) {
    throw ContractError("relevance tolerance must be >= 0");
  }
  const double spread = curve.probabilities.maxCoeff() - curve.probabilities.minCoeff();
  return {spread, spread > epsilon};
}

/// Ratio and difference of two event probabilities, full vs reduced model.
/// Interpretation belongs to the decision maker; nothing is thresholded.
struct ImportanceResult {
  std::optional<double> ratio;  // empty when the reduced probability is zero
  double difference;
};

inline ImportanceResult importance_ratio(double p_full, double p_reduced) {
  if (!(p_full >= 0.0 && p_full <= 1.0) || !(p_reduced >= 0.0 && p_reduced <= 1.0)) {
    throw DomainError("probabilities must lie in [0, 1]");
  }
  ImportanceResult r;
  r.difference = p_full - p_reduced;
  if (p_reduced > 0.0) r.ratio = p_full / p_reduced;
  return r;
}

/// Event probabilities over a two-predictor lattice; cells[e](i, j) is the
/// probability of events[e] at row_grid[i], col_grid[j].
struct PredictionTable {
  VariableName row_name;
  VariableName col_name;
  Vector row_grid;
  Vector col_grid;
  std::vector<ThresholdEvent> events;
  std::vector<Matrix> cells;
  Scenario fixed;
};

inline PredictionTable prediction_table(const FittedModel& model, const VariableName& row_name,
                                        const Vector& row_grid, const VariableName& col_name,
                                        const Vector& col_grid,
                                        const std::vector<ThresholdEvent>& events,
                                        const Scenario& fixed = {}) {
  check_grid(row_grid);
  check_grid(col_grid);
  if (events.empty()) {
    throw ContractError("prediction table needs at least one event");
  }
  if (row_name == col_name) {
    throw ContractError("row and column variables must differ");
  }

  PredictionTable table;
  table.row_name = row_name;
  table.col_name = col_name;
  table.row_grid = row_grid;
  table.col_grid = col_grid;
  table.events = events;
  table.fixed = fixed;
  table.cells.assign(events.size(), Matrix(row_grid.size(), col_grid.size()));

  for (Index i = 0; i < row_grid.size(); ++i) {
    for (Index j = 0; j < col_grid.size(); ++j) {
      Scenario scenario = fixed;
      scenario[row_name] = row_grid[i];
      scenario[col_name] = col_grid[j];
      const auto dist = predictive_distribution(model, scenario);
      for (size_t e = 0; e < events.size(); ++e) {
        table.cells[e](i, j) = event_probability(dist, events[e]);
      }
    }
  }
  return table;
}

/// Probability mass the model leaks onto impossible values: below the lower
/// feasibility bound, above the upper, and their sum.
struct LeakageResult {
  double below;
  double above;
  double total;
};

template <typename Scalar>
LeakageResult leakage(const PredictiveDistribution<Scalar>& dist,
                      const FeasibilityBounds& bounds) {
  LeakageResult r;
  r.below = bounds.lower == -kInf ? 0.0 : double(cdf_left(dist, Scalar(bounds.lower)));
  r.above = bounds.upper == kInf ? 0.0 : double(prob_above(dist, Scalar(bounds.upper)));
  r.total = r.below + r.above;
  return r;
}

}  // namespace prevision
