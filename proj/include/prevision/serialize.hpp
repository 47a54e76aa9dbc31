#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prevision/common.hpp"
#include "prevision/dataset.hpp"
#include "prevision/query.hpp"
#include "prevision/regression.hpp"
#include "prevision/verification.hpp"

// JSON and CSV emission. Machine output keeps full precision (shortest
// round-trip doubles); any rounding happens strictly at the presentation
// layer. JSON has no infinity literal, so extended reals travel as the
// strings "inf" / "-inf".

namespace prevision {

using json = nlohmann::json;

inline json json_real(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

inline double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    return parse_double(j.get<std::string>());
  }
  throw ParseError("expected a number or 'inf'/'-inf' string");
}

inline json to_json(const ModelSpec& spec) {
  return json{{"response", spec.response},
              {"predictors", spec.predictors},
              {"intercept", spec.intercept},
              {"formula", spec.formula()}};
}

inline ModelSpec model_spec_from_json(const json& j) {
  ModelSpec spec;
  spec.response = j.at("response").get<std::string>();
  spec.predictors = j.at("predictors").get<std::vector<std::string>>();
  spec.intercept = j.value("intercept", true);
  spec.validate();
  return spec;
}

inline json to_json(const ThresholdEvent& event) {
  switch (event.kind) {
    case ThresholdEvent::Kind::exceedance:
      return json{{"kind", "exceedance"}, {"threshold", event.threshold}, {"label", event.label}};
    case ThresholdEvent::Kind::interval:
      return json{{"kind", "interval"},
                  {"lower", json_real(event.lower)},
                  {"upper", json_real(event.upper)},
                  {"label", event.label}};
    case ThresholdEvent::Kind::point:
      return json{{"kind", "point"}, {"value", event.value}, {"label", event.label}};
  }
  throw ContractError("unknown event kind");
}

inline json to_json(const Scenario& scenario) {
  json j = json::object();
  for (const auto& [name, value] : scenario) j[name] = value;
  return j;
}

// ---------------------------------------------------------------------------
// FittedModel: everything needed to reconstruct every predictive exactly.

inline json to_json(const FittedModel& model) {
  std::vector<double> gram(size_t(model.p) * size_t(model.p));
  for (Index i = 0; i < model.p; ++i) {
    for (Index j = 0; j < model.p; ++j) {
      gram[size_t(i * model.p + j)] = model.gram_inverse(i, j);
    }
  }
  std::vector<double> coef(model.coefficients.data(),
                           model.coefficients.data() + model.coefficients.size());
  json j{{"spec", to_json(model.spec)},
         {"coefficients", coef},
         {"residual_scale", model.residual_scale},
         {"gram_inverse", gram},
         {"n", model.n},
         {"p", model.p},
         {"degenerate", model.degenerate}};
  if (!model.data_fingerprint.empty()) j["data_sha256"] = model.data_fingerprint;
  return j;
}

inline FittedModel model_from_json(const json& j) {
  FittedModel model;
  model.spec = model_spec_from_json(j.at("spec"));
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  model.coefficients = Eigen::Map<const Vector>(coef.data(), Index(coef.size()));
  model.residual_scale = j.at("residual_scale").get<double>();
  model.n = j.at("n").get<Index>();
  model.p = j.at("p").get<Index>();
  const auto gram = j.at("gram_inverse").get<std::vector<double>>();
  if (Index(gram.size()) != model.p * model.p) {
    throw ParseError("gram_inverse must hold p*p row-major entries");
  }
  model.gram_inverse.resize(model.p, model.p);
  for (Index r = 0; r < model.p; ++r) {
    for (Index c = 0; c < model.p; ++c) {
      model.gram_inverse(r, c) = gram[size_t(r * model.p + c)];
    }
  }
  model.degenerate = j.value("degenerate", false);
  model.data_fingerprint = j.value("data_sha256", std::string{});
  model.validate();
  return model;
}

inline void save_model_file(const FittedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructureError("cannot write '" + path + "'");
  out << to_json(model).dump(2) << '\n';
}

inline FittedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructureError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid model JSON in '" + path + "': " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError("model JSON in '" + path + "' is missing fields: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Conditioning record: the full right-hand side of Pr(Y in y | X, D, M),
// embedded in every output so results stay publicly checkable.

inline json conditioning_record(const FittedModel& model) {
  json j{{"model", to_json(model.spec)},
         {"n", model.n},
         {"p", model.p},
         {"hash_algorithm", "SHA-256"}};
  j["data_sha256"] = model.data_fingerprint.empty() ? json(nullptr) : json(model.data_fingerprint);
  return j;
}

inline json conditioning_record(const FittedModel& model, const Scenario& scenario,
                                const ThresholdEvent& event) {
  json j = conditioning_record(model);
  j["scenario"] = to_json(scenario);
  j["event"] = to_json(event);
  return j;
}

// ---------------------------------------------------------------------------
// Curve, table, report emission. CSV data lines are plot-ready; the
// conditioning record rides along in '#' comment lines.

inline void write_csv_comment_record(std::ostream& out, const json& record) {
  out << "# conditioning: " << record.dump() << '\n';
}

inline json to_json(const RelevanceCurve& curve, const FittedModel& model) {
  json j = conditioning_record(model);
  j["scenario"] = to_json(curve.fixed);
  j["event"] = to_json(curve.event);
  j["varying"] = curve.varying;
  j["grid"] = std::vector<double>(curve.grid.data(), curve.grid.data() + curve.grid.size());
  j["probabilities"] = std::vector<double>(
      curve.probabilities.data(), curve.probabilities.data() + curve.probabilities.size());
  j["baseline"] = curve.baseline ? json(*curve.baseline) : json(nullptr);
  const auto rel = is_relevant(curve, 0.0);
  j["spread"] = rel.spread;
  return j;
}

inline void write_csv(std::ostream& out, const RelevanceCurve& curve,
                      const FittedModel& model) {
  json record = conditioning_record(model);
  record["scenario"] = to_json(curve.fixed);
  record["event"] = to_json(curve.event);
  write_csv_comment_record(out, record);
  out << curve.varying << ",probability";
  if (curve.baseline) out << ",baseline";
  out << '\n';
  for (Index i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ',' << format_double(curve.probabilities[i]);
    if (curve.baseline) out << ',' << format_double(*curve.baseline);
    out << '\n';
  }
}

inline json to_json(const PredictionTable& table, const FittedModel& model) {
  json j = conditioning_record(model);
  j["scenario"] = to_json(table.fixed);
  j["row"] = json{{"variable", table.row_name},
                  {"grid", std::vector<double>(table.row_grid.data(),
                                               table.row_grid.data() + table.row_grid.size())}};
  j["col"] = json{{"variable", table.col_name},
                  {"grid", std::vector<double>(table.col_grid.data(),
                                               table.col_grid.data() + table.col_grid.size())}};
  json events = json::array();
  for (size_t e = 0; e < table.events.size(); ++e) {
    json cells = json::array();
    for (Index i = 0; i < table.row_grid.size(); ++i) {
      json row = json::array();
      for (Index j2 = 0; j2 < table.col_grid.size(); ++j2) {
        row.push_back(table.cells[e](i, j2));
      }
      cells.push_back(row);
    }
    events.push_back(json{{"event", to_json(table.events[e])}, {"cells", cells}});
  }
  j["events"] = events;
  return j;
}

inline void write_csv(std::ostream& out, const PredictionTable& table,
                      const FittedModel& model) {
  json record = conditioning_record(model);
  record["scenario"] = to_json(table.fixed);
  json events = json::array();
  for (const auto& e : table.events) events.push_back(to_json(e));
  record["events"] = events;
  write_csv_comment_record(out, record);

  out << table.row_name << ',' << table.col_name;
  for (size_t e = 0; e < table.events.size(); ++e) {
    out << ",p" << e + 1 << " [" << table.events[e].label << ']';
  }
  // the sum column is the reader's check: complementary events add to 1
  out << ",p_total\n";
  for (Index i = 0; i < table.row_grid.size(); ++i) {
    for (Index j = 0; j < table.col_grid.size(); ++j) {
      out << format_double(table.row_grid[i]) << ',' << format_double(table.col_grid[j]);
      double total = 0.0;
      for (size_t e = 0; e < table.events.size(); ++e) {
        out << ',' << format_double(table.cells[e](i, j));
        total += table.cells[e](i, j);
      }
      out << ',' << format_double(total) << '\n';
    }
  }
}

inline json to_json(const VerificationReport& report) {
  json per = json::array();
  for (const auto& obs : report.per_observation) {
    per.push_back(json{{"index", obs.index},
                       {"observed", obs.observed},
                       {"crps_full", obs.crps_full},
                       {"crps_partial", obs.crps_partial},
                       {"skill", obs.skill}});
  }
  json views = json::array();
  for (const auto& view : report.covariate_views) {
    views.push_back(json{
        {"variable", view.variable},
        {"values", std::vector<double>(view.values.data(),
                                       view.values.data() + view.values.size())},
        {"skills", std::vector<double>(view.skills.data(),
                                       view.skills.data() + view.skills.size())}});
  }
  return json{{"full_model", to_json(report.full_spec)},
              {"partial_model", to_json(report.partial_spec)},
              {"data_sha256", report.data_fingerprint},
              {"hash_algorithm", "SHA-256"},
              {"mean_crps_full", report.mean_crps_full},
              {"mean_crps_partial", report.mean_crps_partial},
              {"overall_skill", report.overall_skill},
              {"in_sample", report.in_sample},
              {"advisory", report.advisory},
              {"per_observation", per},
              {"covariate_views", views}};
}

inline void write_csv(std::ostream& out, const VerificationReport& report,
                      const Dataset& data) {
  json record{{"full_model", to_json(report.full_spec)},
              {"partial_model", to_json(report.partial_spec)},
              {"data_sha256", report.data_fingerprint},
              {"hash_algorithm", "SHA-256"},
              {"mean_crps_full", report.mean_crps_full},
              {"mean_crps_partial", report.mean_crps_partial},
              {"overall_skill", report.overall_skill},
              {"in_sample", report.in_sample}};
  write_csv_comment_record(out, record);
  if (report.in_sample) out << "# advisory: " << report.advisory << '\n';

  out << "index,observed,crps_full,crps_partial,skill";
  for (const auto& p : report.full_spec.predictors) out << ',' << p;
  out << '\n';
  for (const auto& obs : report.per_observation) {
    out << obs.index << ',' << format_double(obs.observed) << ','
        << format_double(obs.crps_full) << ',' << format_double(obs.crps_partial) << ','
        << format_double(obs.skill);
    for (const auto& p : report.full_spec.predictors) {
      out << ',' << format_double(data.at(obs.index, p));
    }
    out << '\n';
  }
}

}  // namespace prevision
