// prevision: predictive probability statements about observables, with
// relevance/importance exploration and CRPS/skill verification.
//
// Subcommands: fit, predict, relevance, table, verify, leakage, synthesize.
// Every output embeds the full conditioning record (model spec, scenario,
// event, data fingerprint): a probability without its premises is not an
// answer.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prevision/dataset.hpp"
#include "prevision/query.hpp"
#include "prevision/regression.hpp"
#include "prevision/serialize.hpp"
#include "prevision/verification.hpp"

namespace pv = prevision;
using pv::json;

namespace {

// ---------------------------------------------------------------------------
// Shared flag plumbing

struct DataArgs {
  std::string path;
  std::string delimiter = "comma";
  bool no_header = false;
  std::vector<std::string> map_entries;

  CLI::Option* path_opt = nullptr;
  CLI::Option* delim_opt = nullptr;
  CLI::Option* header_opt = nullptr;
  CLI::Option* map_opt = nullptr;

  void attach(CLI::App* cmd, bool required) {
    path_opt = cmd->add_option("--data", path, "delimited text file of past observations");
    if (required) path_opt->required();
    delim_opt = cmd->add_option("--delimiter", delimiter,
                                "field delimiter: comma, tab, or whitespace")
                    ->check(CLI::IsMember({"comma", "tab", "whitespace"}));
    header_opt = cmd->add_flag("--no-header", no_header, "first line is data, not names");
    map_opt = cmd->add_option("--map", map_entries,
                              "rename a file column: <name-or-index>=<variable>");
  }
};

pv::Delimiter parse_delimiter(const std::string& name) {
  if (name == "comma") return pv::Delimiter::comma;
  if (name == "tab") return pv::Delimiter::tab;
  if (name == "whitespace") return pv::Delimiter::whitespace;
  throw pv::ContractError("unknown delimiter '" + name + "'");
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw pv::ContractError("expected <name>=<value>, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

pv::Dataset load_data(const DataArgs& args, const json& cfg) {
  pv::SchemaMap schema_map;
  if (cfg.contains("columns")) {
    for (const auto& [key, value] : cfg.at("columns").items()) {
      schema_map[key] = value.get<std::string>();
    }
  }
  for (const auto& entry : args.map_entries) {
    const auto [key, value] = split_assignment(entry);
    schema_map[key] = value;  // flags win over config
  }
  return pv::load_dataset_file(args.path,
                               {parse_delimiter(args.delimiter), !args.no_header},
                               schema_map);
}

// Config file: JSON object whose keys mirror the long option names. Values
// given on the command line always win.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pv::StructureError("cannot open config '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw pv::ParseError("invalid config JSON in '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw pv::ParseError("config must be a JSON object");
  return cfg;
}

void merge_string(CLI::Option* opt, const json& cfg, const char* key, std::string& target) {
  if ((!opt || opt->count() == 0) && cfg.contains(key)) {
    target = cfg.at(key).is_string() ? cfg.at(key).get<std::string>()
                                     : cfg.at(key).dump();
  }
}

void merge_double(CLI::Option* opt, const json& cfg, const char* key, double& target) {
  if ((!opt || opt->count() == 0) && cfg.contains(key)) {
    target = pv::real_from_json(cfg.at(key));
  }
}

void merge_flag(CLI::Option* opt, const json& cfg, const char* key, bool& target) {
  if ((!opt || opt->count() == 0) && cfg.contains(key)) {
    target = cfg.at(key).get<bool>();
  }
}

void merge_list(CLI::Option* opt, const json& cfg, const char* key,
                std::vector<std::string>& target) {
  if ((!opt || opt->count() == 0) && cfg.contains(key)) {
    target = cfg.at(key).get<std::vector<std::string>>();
  }
}

void merge_data_args(DataArgs& args, const json& cfg) {
  merge_string(args.path_opt, cfg, "data", args.path);
  merge_string(args.delim_opt, cfg, "delimiter", args.delimiter);
  merge_flag(args.header_opt, cfg, "no_header", args.no_header);
  merge_list(args.map_opt, cfg, "map", args.map_entries);
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

pv::Scenario parse_scenario(const std::vector<std::string>& assignments) {
  pv::Scenario scenario;
  for (const auto& text : assignments) {
    const auto [name, value] = split_assignment(text);
    scenario[name] = pv::parse_double(value);
  }
  return scenario;
}

// "lo:hi:step" or "v1,v2,v3"
pv::Vector parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw pv::ContractError("grid range must be lo:hi:step, got '" + text + "'");
    }
    const double lo = pv::parse_double(text.substr(0, c1));
    const double hi = pv::parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = pv::parse_double(text.substr(c2 + 1));
    if (!(step > 0.0) || !(hi >= lo)) {
      throw pv::ContractError("grid range needs hi >= lo and step > 0");
    }
    const auto count = pv::Index((hi - lo) / step + 1e-9) + 1;
    pv::Vector grid(count);
    for (pv::Index i = 0; i < count; ++i) {
      grid[i] = lo + (hi - lo) * double(i) / double(std::max<pv::Index>(count - 1, 1));
    }
    return grid;
  }
  const auto parts = split_csv_list(text);
  pv::Vector grid(pv::Index(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) grid[pv::Index(i)] = pv::parse_double(parts[i]);
  return grid;
}

// Event flags shared by predict/relevance/table. Values arrive as text so
// "inf"/"-inf" work everywhere.
struct EventArgs {
  std::vector<std::string> gt, lt, between, eq;

  void attach(CLI::App* cmd) {
    cmd->add_option("--gt", gt, "event Y > y0");
    cmd->add_option("--lt", lt, "event Y < y0");
    cmd->add_option("--between", between, "event a < Y <= b, as 'a,b'");
    cmd->add_option("--eq", eq, "event Y = v (discrete predictives only)");
  }

  std::vector<pv::ThresholdEvent> events() const {
    std::vector<pv::ThresholdEvent> out;
    for (const auto& v : gt) out.push_back(pv::ThresholdEvent::greater_than(pv::parse_double(v)));
    for (const auto& v : lt) out.push_back(pv::ThresholdEvent::less_than(pv::parse_double(v)));
    for (const auto& v : between) {
      const auto parts = split_csv_list(v);
      if (parts.size() != 2) {
        throw pv::ContractError("--between expects 'a,b', got '" + v + "'");
      }
      out.push_back(pv::ThresholdEvent::interval(pv::parse_double(parts[0]),
                                                 pv::parse_double(parts[1])));
    }
    for (const auto& v : eq) out.push_back(pv::ThresholdEvent::equals(pv::parse_double(v)));
    return out;
  }

  pv::ThresholdEvent single() const {
    const auto all = events();
    if (all.size() != 1) {
      throw pv::ContractError("exactly one of --gt/--lt/--between/--eq is required");
    }
    return all.front();
  }
};

// ---------------------------------------------------------------------------
// Output plumbing: machine output goes to the -o file (format from --format
// or the extension) or to stdout when no file is given.

enum class OutFormat { json_fmt, csv_fmt };

OutFormat resolve_format(const std::string& output, const std::string& format,
                         bool csv_supported) {
  std::string choice = format;
  if (choice.empty()) {
    if (output.size() >= 4 && output.compare(output.size() - 4, 4, ".csv") == 0) {
      choice = "csv";
    } else {
      choice = "json";
    }
  }
  if (choice == "csv" && !csv_supported) {
    throw pv::ContractError("this command emits JSON only");
  }
  if (choice != "csv" && choice != "json") {
    throw pv::ContractError("unknown format '" + choice + "'");
  }
  return choice == "csv" ? OutFormat::csv_fmt : OutFormat::json_fmt;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw pv::StructureError("cannot write '" + output + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
}

std::string two_sig(double p) { return pv::format_sig(p, 2); }

std::string scenario_text(const pv::Scenario& scenario) {
  std::string out;
  for (const auto& [name, value] : scenario) {
    if (!out.empty()) out += ", ";
    out += name + " = " + pv::format_double(value);
  }
  return out.empty() ? "-" : out;
}

std::string short_hash(const std::string& fp) {
  return fp.empty() ? std::string("unknown") : fp.substr(0, 12);
}

// The annotated probability statement: every assumption on display.
std::string conditioning_sentence(const pv::FittedModel& model, const pv::Scenario& scenario,
                                  const pv::ThresholdEvent& event, double probability) {
  std::string event_text = event.label;
  const std::string anon = "Y";
  const auto pos = event_text.find(anon);
  if (pos != std::string::npos) event_text.replace(pos, anon.size(), model.spec.response);
  return "Pr(" + event_text + " | " + scenario_text(scenario) +
         "; D = sha256:" + short_hash(model.data_fingerprint) +
         "; M: " + model.spec.formula() + ") = " + two_sig(probability);
}

// ---------------------------------------------------------------------------
// Subcommand bodies

struct FitArgs {
  DataArgs data;
  std::string config;
  std::string response;
  std::string predictors;
  bool no_intercept = false;
  std::string output;
  CLI::Option* response_opt = nullptr;
  CLI::Option* predictors_opt = nullptr;
  CLI::Option* intercept_opt = nullptr;
};

int run_fit(FitArgs& a) {
  const json cfg = load_config(a.config);
  merge_data_args(a.data, cfg);
  merge_string(a.response_opt, cfg, "response", a.response);
  merge_string(a.predictors_opt, cfg, "predictors", a.predictors);
  merge_flag(a.intercept_opt, cfg, "no_intercept", a.no_intercept);
  if (a.data.path.empty()) throw pv::ContractError("--data is required (flag or config)");
  if (a.response.empty()) throw pv::ContractError("--response is required (flag or config)");

  const pv::Dataset data = load_data(a.data, cfg);
  pv::ModelSpec spec;
  spec.response = a.response;
  spec.predictors = a.predictors.empty() ? std::vector<std::string>{}
                                         : split_csv_list(a.predictors);
  spec.intercept = !a.no_intercept;

  const pv::FittedModel model = pv::fit_linear_model(data, spec);

  std::cerr << "fitted " << spec.formula() << ": n = " << model.n << ", p = " << model.p
            << ", residual scale = " << pv::format_double(model.residual_scale)
            << ", dof = " << model.dof() << "\n";
  if (model.degenerate) {
    std::cerr << "warning: residual scale is zero; the data fit exactly and no "
                 "continuous predictive exists\n";
  }
  std::cerr << "data sha256: " << model.data_fingerprint << "\n";

  emit(a.output, pv::to_json(model).dump(2));
  return 0;
}

struct PredictArgs {
  std::string config;
  std::string model_path;
  std::vector<std::string> set;
  EventArgs event;
  std::string output;
  CLI::Option* model_opt = nullptr;
  CLI::Option* set_opt = nullptr;
};

int run_predict(PredictArgs& a) {
  const json cfg = load_config(a.config);
  merge_string(a.model_opt, cfg, "model", a.model_path);
  merge_list(a.set_opt, cfg, "set", a.set);
  if (a.model_path.empty()) throw pv::ContractError("--model is required (flag or config)");

  const pv::FittedModel model = pv::load_model_file(a.model_path);
  const pv::Scenario scenario = parse_scenario(a.set);
  const pv::ThresholdEvent event = a.event.single();

  const auto dist = pv::predictive_distribution(model, scenario);
  const double p = pv::event_probability(dist, event);

  std::cout << conditioning_sentence(model, scenario, event, p) << "\n";

  json out{{"probability", p},
           {"display", two_sig(p)},
           {"conditioning", pv::conditioning_record(model, scenario, event)}};
  if (!a.output.empty()) emit(a.output, out.dump(2));
  else std::cout << out.dump(2) << "\n";
  return 0;
}

struct RelevanceArgs {
  std::string config;
  std::string model_path;
  std::string baseline_path;
  std::string vary;
  std::string grid;
  DataArgs data;  // only for the default grid
  std::vector<std::string> set;
  EventArgs event;
  double epsilon = 1e-6;
  std::string output;
  std::string format;
  CLI::Option* model_opt = nullptr;
  CLI::Option* baseline_opt = nullptr;
  CLI::Option* vary_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* set_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
};

int run_relevance(RelevanceArgs& a) {
  const json cfg = load_config(a.config);
  merge_string(a.model_opt, cfg, "model", a.model_path);
  merge_string(a.baseline_opt, cfg, "baseline", a.baseline_path);
  merge_string(a.vary_opt, cfg, "vary", a.vary);
  merge_string(a.grid_opt, cfg, "grid", a.grid);
  merge_list(a.set_opt, cfg, "set", a.set);
  merge_double(a.epsilon_opt, cfg, "epsilon", a.epsilon);
  merge_data_args(a.data, cfg);
  if (a.model_path.empty()) throw pv::ContractError("--model is required (flag or config)");
  if (a.vary.empty()) throw pv::ContractError("--vary is required (flag or config)");

  const pv::FittedModel model = pv::load_model_file(a.model_path);
  std::optional<pv::FittedModel> baseline;
  if (!a.baseline_path.empty()) baseline = pv::load_model_file(a.baseline_path);

  pv::Vector grid;
  std::string grid_source = "user";
  if (!a.grid.empty()) {
    grid = parse_grid(a.grid);
  } else {
    // Default grid: observed min..max of the varying variable in 20 steps.
    // Clearly labeled; there is no one right set of values.
    if (a.data.path.empty()) {
      throw pv::ContractError("--grid is required unless --data supplies a default range");
    }
    const pv::Dataset data = load_data(a.data, cfg);
    const pv::Vector values = data.column(a.vary);
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (!(lo < hi)) throw pv::ContractError("observed range of '" + a.vary + "' is empty");
    grid.resize(21);
    for (pv::Index i = 0; i <= 20; ++i) grid[i] = lo + (hi - lo) * double(i) / 20.0;
    grid_source = "default (observed " + pv::format_double(lo) + ".." +
                  pv::format_double(hi) + ", 20 steps)";
  }

  const pv::Scenario fixed = parse_scenario(a.set);
  const pv::ThresholdEvent event = a.event.single();
  const auto curve = pv::relevance_curve(model, a.vary, grid, fixed, event,
                                         baseline ? &*baseline : nullptr);
  const auto rel = pv::is_relevant(curve, a.epsilon);

  std::cerr << "relevance of " << a.vary << " for " << event.label << " given {"
            << scenario_text(fixed) << "}: spread = " << two_sig(rel.spread) << " -> "
            << (rel.relevant ? "relevant" : "not relevant") << " at epsilon = "
            << pv::format_double(a.epsilon) << "\n";
  if (curve.baseline) {
    std::cerr << "baseline (model without " << a.vary << "): " << two_sig(*curve.baseline)
              << "\n";
  }

  if (resolve_format(a.output, a.format, true) == OutFormat::csv_fmt) {
    std::ostringstream out;
    out << "# grid_source: " << grid_source << "\n";
    pv::write_csv(out, curve, model);
    emit(a.output, out.str());
  } else {
    json j = pv::to_json(curve, model);
    j["epsilon"] = a.epsilon;
    j["relevant"] = rel.relevant;
    j["grid_source"] = grid_source;
    emit(a.output, j.dump(2));
  }
  return 0;
}

struct TableArgs {
  std::string config;
  std::string model_path;
  std::string rows;
  std::string cols;
  std::vector<std::string> set;
  EventArgs event;
  std::string output;
  std::string format;
  CLI::Option* model_opt = nullptr;
  CLI::Option* rows_opt = nullptr;
  CLI::Option* cols_opt = nullptr;
  CLI::Option* set_opt = nullptr;
};

int run_table(TableArgs& a) {
  const json cfg = load_config(a.config);
  merge_string(a.model_opt, cfg, "model", a.model_path);
  merge_string(a.rows_opt, cfg, "rows", a.rows);
  merge_string(a.cols_opt, cfg, "cols", a.cols);
  merge_list(a.set_opt, cfg, "set", a.set);
  if (a.model_path.empty()) throw pv::ContractError("--model is required (flag or config)");
  if (a.rows.empty() || a.cols.empty()) {
    throw pv::ContractError("--rows and --cols are required, as <variable>=<grid>");
  }

  const pv::FittedModel model = pv::load_model_file(a.model_path);
  const auto [row_name, row_grid_text] = split_assignment(a.rows);
  const auto [col_name, col_grid_text] = split_assignment(a.cols);
  const auto events = a.event.events();
  if (events.empty()) {
    throw pv::ContractError("at least one of --gt/--lt/--between/--eq is required");
  }

  const auto table =
      pv::prediction_table(model, row_name, parse_grid(row_grid_text), col_name,
                           parse_grid(col_grid_text), events, parse_scenario(a.set));

  double sum_min = pv::kInf, sum_max = -pv::kInf;
  for (pv::Index i = 0; i < table.row_grid.size(); ++i) {
    for (pv::Index j = 0; j < table.col_grid.size(); ++j) {
      double total = 0.0;
      for (size_t e = 0; e < events.size(); ++e) total += table.cells[e](i, j);
      sum_min = std::min(sum_min, total);
      sum_max = std::max(sum_max, total);
    }
  }

  // Human rendering, one block per event, probabilities at 2 significant
  // figures; machine output below keeps full precision.
  for (size_t e = 0; e < events.size(); ++e) {
    std::cerr << "Pr(" << events[e].label << ") by " << row_name << " (rows) x "
              << col_name << " (cols):\n";
    std::cerr << "  " << row_name << "\\" << col_name;
    for (pv::Index j = 0; j < table.col_grid.size(); ++j) {
      std::cerr << "\t" << pv::format_double(table.col_grid[j]);
    }
    std::cerr << "\n";
    for (pv::Index i = 0; i < table.row_grid.size(); ++i) {
      std::cerr << "  " << pv::format_double(table.row_grid[i]);
      for (pv::Index j = 0; j < table.col_grid.size(); ++j) {
        std::cerr << "\t" << two_sig(table.cells[e](i, j));
      }
      std::cerr << "\n";
    }
  }
  std::cerr << "event-probability sums per cell: min " << pv::format_double(sum_min)
            << ", max " << pv::format_double(sum_max)
            << " (1 everywhere iff the events partition the line)\n";

  if (resolve_format(a.output, a.format, true) == OutFormat::csv_fmt) {
    std::ostringstream out;
    pv::write_csv(out, table, model);
    emit(a.output, out.str());
  } else {
    emit(a.output, pv::to_json(table, model).dump(2));
  }
  return 0;
}

struct VerifyArgs {
  std::string config;
  std::string full_path;
  std::string partial_path;
  DataArgs data;
  std::string output;
  std::string format;
  CLI::Option* full_opt = nullptr;
  CLI::Option* partial_opt = nullptr;
};

int run_verify(VerifyArgs& a) {
  const json cfg = load_config(a.config);
  merge_string(a.full_opt, cfg, "full", a.full_path);
  merge_string(a.partial_opt, cfg, "partial", a.partial_path);
  merge_data_args(a.data, cfg);
  if (a.full_path.empty()) throw pv::ContractError("--full is required (flag or config)");
  if (a.partial_path.empty()) throw pv::ContractError("--partial is required (flag or config)");
  if (a.data.path.empty()) throw pv::ContractError("--data is required (flag or config)");

  const pv::Dataset data = load_data(a.data, cfg);
  const pv::FittedModel full = pv::load_model_file(a.full_path);
  // "--partial null" fits the always-available comparator: intercept only.
  const pv::FittedModel partial =
      a.partial_path == "null"
          ? pv::fit_linear_model(data, {full.spec.response, {}, true})
          : pv::load_model_file(a.partial_path);

  const auto report = pv::verify(full, partial, data);

  std::cerr << "mean CRPS, full model (" << report.full_spec.formula()
            << "): " << pv::format_sig(report.mean_crps_full, 3) << "\n";
  std::cerr << "mean CRPS, partial model (" << report.partial_spec.formula()
            << "): " << pv::format_sig(report.mean_crps_partial, 3) << "\n";
  std::cerr << "skill of full over partial: " << two_sig(report.overall_skill) << "\n";
  if (report.in_sample) std::cerr << "note: " << report.advisory << "\n";

  if (resolve_format(a.output, a.format, true) == OutFormat::csv_fmt) {
    std::ostringstream out;
    pv::write_csv(out, report, data);
    emit(a.output, out.str());
  } else {
    emit(a.output, pv::to_json(report).dump(2));
  }
  return 0;
}

struct LeakageArgs {
  std::string config;
  std::string model_path;
  std::vector<std::string> set;
  std::string lower = "-inf";
  std::string upper = "inf";
  std::string output;
  CLI::Option* model_opt = nullptr;
  CLI::Option* set_opt = nullptr;
  CLI::Option* lower_opt = nullptr;
  CLI::Option* upper_opt = nullptr;
};

int run_leakage(LeakageArgs& a) {
  const json cfg = load_config(a.config);
  merge_string(a.model_opt, cfg, "model", a.model_path);
  merge_list(a.set_opt, cfg, "set", a.set);
  merge_string(a.lower_opt, cfg, "lower", a.lower);
  merge_string(a.upper_opt, cfg, "upper", a.upper);
  if (a.model_path.empty()) throw pv::ContractError("--model is required (flag or config)");

  const pv::FittedModel model = pv::load_model_file(a.model_path);
  const pv::Scenario scenario = parse_scenario(a.set);
  const pv::FeasibilityBounds bounds(model.spec.response, pv::parse_double(a.lower),
                                     pv::parse_double(a.upper));

  const auto dist = pv::predictive_distribution(model, scenario);
  const auto leak = pv::leakage(dist, bounds);

  std::cout << "leakage of " << model.spec.response << " outside ["
            << pv::format_double(bounds.lower) << ", " << pv::format_double(bounds.upper)
            << "] given {" << scenario_text(scenario) << "}:\n";
  std::cout << "  below: " << two_sig(leak.below) << "   above: " << two_sig(leak.above)
            << "   total: " << two_sig(leak.total) << "\n";

  json out{{"lower_tail", leak.below},
           {"upper_tail", leak.above},
           {"total", leak.total},
           {"bounds", {{"variable", bounds.variable},
                       {"lower", pv::json_real(bounds.lower)},
                       {"upper", pv::json_real(bounds.upper)}}},
           {"conditioning", pv::conditioning_record(model)}};
  out["conditioning"]["scenario"] = pv::to_json(scenario);
  if (!a.output.empty()) emit(a.output, out.dump(2));
  else std::cout << out.dump(2) << "\n";
  return 0;
}

struct SynthesizeArgs {
  std::string config;
  DataArgs data;
  std::string name = "w";
  std::uint64_t seed = 0;
  double sigma = 8.0;
  bool seed_given = false;
  std::string output;
  CLI::Option* name_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
};

int run_synthesize(SynthesizeArgs& a) {
  const json cfg = load_config(a.config);
  merge_data_args(a.data, cfg);
  merge_string(a.name_opt, cfg, "name", a.name);
  merge_double(a.sigma_opt, cfg, "sigma", a.sigma);
  if ((!a.seed_opt || a.seed_opt->count() == 0)) {
    if (cfg.contains("seed")) {
      a.seed = cfg.at("seed").get<std::uint64_t>();
    } else {
      throw pv::ContractError("--seed is required: synthetic draws must be reproducible");
    }
  }
  if (a.data.path.empty()) throw pv::ContractError("--data is required (flag or config)");

  const pv::Dataset data = load_data(a.data, cfg);
  const pv::Dataset augmented = pv::synthesize_column(data, a.name, a.seed, a.sigma);

  std::cerr << "appended half-normal column '" << a.name << "' (sigma = "
            << pv::format_double(a.sigma) << ", seed = " << a.seed << ") to " << data.n()
            << " rows\n";

  std::ostringstream out;
  pv::save_dataset(augmented, out, pv::Delimiter::comma, true);
  emit(a.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"predictive probability statements about observables: fit, query, "
               "explore relevance and importance, verify with CRPS and skill, and "
               "check probability leakage"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* cmd_fit = app.add_subcommand("fit", "fit a flat-prior regression and publish it");
  fit.data.attach(cmd_fit, false);
  cmd_fit->add_option("--config", fit.config, "JSON config; flags win on conflict");
  fit.response_opt = cmd_fit->add_option("--response", fit.response, "observable to predict");
  fit.predictors_opt =
      cmd_fit->add_option("--predictors", fit.predictors,
                          "comma-separated predictor names (empty = null model)");
  fit.intercept_opt = cmd_fit->add_flag("--no-intercept", fit.no_intercept, "drop the intercept");
  cmd_fit->add_option("-o,--output", fit.output, "model JSON path (default: stdout)");

  PredictArgs predict;
  auto* cmd_predict =
      app.add_subcommand("predict", "probability of an event under a scenario");
  cmd_predict->add_option("--config", predict.config, "JSON config; flags win on conflict");
  predict.model_opt = cmd_predict->add_option("--model", predict.model_path, "model JSON");
  predict.set_opt = cmd_predict->add_option("--set", predict.set,
                                            "scenario assignment <predictor>=<value>");
  predict.event.attach(cmd_predict);
  cmd_predict->add_option("-o,--output", predict.output, "record JSON path");

  RelevanceArgs relevance;
  auto* cmd_relevance =
      app.add_subcommand("relevance", "sweep one predictor and watch the probability");
  cmd_relevance->add_option("--config", relevance.config, "JSON config; flags win on conflict");
  relevance.model_opt = cmd_relevance->add_option("--model", relevance.model_path, "model JSON");
  relevance.baseline_opt = cmd_relevance->add_option(
      "--baseline", relevance.baseline_path, "model without the varying predictor");
  relevance.vary_opt = cmd_relevance->add_option("--vary", relevance.vary, "predictor to sweep");
  relevance.grid_opt = cmd_relevance->add_option(
      "--grid", relevance.grid, "lo:hi:step or comma list (omit to use the observed range)");
  relevance.data.attach(cmd_relevance, false);
  relevance.set_opt = cmd_relevance->add_option("--set", relevance.set,
                                                "held-fixed assignment <predictor>=<value>");
  relevance.event.attach(cmd_relevance);
  relevance.epsilon_opt = cmd_relevance->add_option(
      "--epsilon", relevance.epsilon, "spread below this counts as not relevant");
  cmd_relevance->add_option("-o,--output", relevance.output, "curve path (.csv or .json)");
  cmd_relevance->add_option("--format", relevance.format, "csv or json");

  TableArgs table;
  auto* cmd_table = app.add_subcommand("table", "event probabilities over a 2-predictor lattice");
  cmd_table->add_option("--config", table.config, "JSON config; flags win on conflict");
  table.model_opt = cmd_table->add_option("--model", table.model_path, "model JSON");
  table.rows_opt = cmd_table->add_option("--rows", table.rows, "<variable>=<grid>");
  table.cols_opt = cmd_table->add_option("--cols", table.cols, "<variable>=<grid>");
  table.set_opt = cmd_table->add_option("--set", table.set,
                                        "held-fixed assignment for remaining predictors");
  table.event.attach(cmd_table);
  cmd_table->add_option("-o,--output", table.output, "table path (.csv or .json)");
  cmd_table->add_option("--format", table.format, "csv or json");

  VerifyArgs verify_args;
  auto* cmd_verify =
      app.add_subcommand("verify", "score a model against a comparator with CRPS and skill");
  cmd_verify->add_option("--config", verify_args.config, "JSON config; flags win on conflict");
  verify_args.full_opt = cmd_verify->add_option("--full", verify_args.full_path, "model JSON");
  verify_args.partial_opt = cmd_verify->add_option(
      "--partial", verify_args.partial_path, "comparator model JSON, or 'null' for intercept-only");
  verify_args.data.attach(cmd_verify, false);
  cmd_verify->add_option("-o,--output", verify_args.output, "report path (.csv or .json)");
  cmd_verify->add_option("--format", verify_args.format, "csv or json");

  LeakageArgs leak;
  auto* cmd_leakage =
      app.add_subcommand("leakage", "probability assigned to impossible values");
  cmd_leakage->add_option("--config", leak.config, "JSON config; flags win on conflict");
  leak.model_opt = cmd_leakage->add_option("--model", leak.model_path, "model JSON");
  leak.set_opt = cmd_leakage->add_option("--set", leak.set,
                                         "scenario assignment <predictor>=<value>");
  leak.lower_opt = cmd_leakage->add_option("--lower", leak.lower, "lowest possible value");
  leak.upper_opt = cmd_leakage->add_option("--upper", leak.upper, "highest possible value");
  cmd_leakage->add_option("-o,--output", leak.output, "record JSON path");

  SynthesizeArgs synth;
  auto* cmd_synth = app.add_subcommand(
      "synthesize", "append a seeded nonnegative half-normal column (made-up numbers)");
  cmd_synth->add_option("--config", synth.config, "JSON config; flags win on conflict");
  synth.data.attach(cmd_synth, false);
  synth.name_opt = cmd_synth->add_option("--name", synth.name, "new variable name");
  synth.seed_opt = cmd_synth->add_option("--seed", synth.seed, "RNG seed (required)");
  synth.sigma_opt = cmd_synth->add_option("--sigma", synth.sigma, "half-normal scale");
  cmd_synth->add_option("-o,--output", synth.output, "augmented dataset CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_fit->parsed()) return run_fit(fit);
    if (cmd_predict->parsed()) return run_predict(predict);
    if (cmd_relevance->parsed()) return run_relevance(relevance);
    if (cmd_table->parsed()) return run_table(table);
    if (cmd_verify->parsed()) return run_verify(verify_args);
    if (cmd_leakage->parsed()) return run_leakage(leak);
    if (cmd_synth->parsed()) return run_synthesize(synth);
  } catch (const pv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
