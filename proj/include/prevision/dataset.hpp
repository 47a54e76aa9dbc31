#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prevision/common.hpp"
#include "prevision/sha256.hpp"

namespace prevision {

using VariableName = std::string;

inline void validate_variable_name(const VariableName& name) {
  if (name.empty()) {
    throw SchemaError("variable names must be non-empty");
  }
}

/// Known-impossible range for an observable, supplied from evidence outside
/// the model (e.g. "a GPA of 4 is the maximum"). Either end may be infinite.
struct FeasibilityBounds {
  VariableName variable;
  double lower;
  double upper;

  FeasibilityBounds(VariableName variable_, double lower_, double upper_)
      : variable(std::move(variable_)), lower(lower_), upper(upper_) {
    if (!(lower < upper)) {
      throw ContractError("feasibility bounds require lower < upper");
    }
    if (std::isnan(lower) || std::isnan(upper)) {
      throw ContractError("feasibility bounds must not be NaN");
    }
  }
};

/// Immutable table of past observations: named columns, finite values.
class Dataset {
 public:
  Dataset(std::vector<VariableName> schema, Matrix values)
      : schema_(std::move(schema)), values_(std::move(values)) {
    if (values_.rows() < 1) {
      throw StructureError("a dataset needs at least one row");
    }
    if (Index(schema_.size()) != values_.cols()) {
      throw SchemaError("schema size does not match column count");
    }
    std::set<VariableName> seen;
    for (const auto& name : schema_) {
      validate_variable_name(name);
      if (!seen.insert(name).second) {
        throw SchemaError("duplicate variable name '" + name + "'");
      }
    }
    if (!values_.allFinite()) {
      throw StructureError("dataset values must all be finite");
    }
  }

  Index n() const { return values_.rows(); }
  Index k() const { return values_.cols(); }
  const std::vector<VariableName>& schema() const { return schema_; }
  const Matrix& values() const { return values_; }

  bool has_variable(const VariableName& name) const {
    for (const auto& s : schema_) {
      if (s == name) return true;
    }
    return false;
  }

  Index column_index(const VariableName& name) const {
    for (size_t i = 0; i < schema_.size(); ++i) {
      if (schema_[i] == name) return Index(i);
    }
    std::string available;
    for (size_t i = 0; i < schema_.size(); ++i) {
      available += (i ? ", " : "") + schema_[i];
    }
    throw LookupError("unknown variable '" + name + "' (available: " + available + ")");
  }

  /// Column values in row order.
  Vector column(const VariableName& name) const {
    return values_.col(column_index(name));
  }

  double at(Index row, const VariableName& name) const {
    return values_(row, column_index(name));
  }

 private:
  std::vector<VariableName> schema_;
  Matrix values_;
};

inline Vector column(const Dataset& data, const VariableName& name) {
  return data.column(name);
}

enum class Delimiter { comma, tab, whitespace };

struct TextFormat {
  Delimiter delimiter = Delimiter::comma;
  bool header = true;
};

/// Keys are file column names or 0-based indices rendered as text; values
/// are the variable names to use instead.
using SchemaMap = std::map<std::string, VariableName>;

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line, Delimiter delim) {
  std::vector<std::string> fields;
  if (delim == Delimiter::whitespace) {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    return fields;
  }
  const char sep = delim == Delimiter::comma ? ',' : '\t';
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parse delimited numeric text into a Dataset. Rows are kept in file
/// order, never dropped or imputed; any non-numeric or non-finite cell is
/// an error naming its position.
inline Dataset load_dataset(std::istream& in, const TextFormat& format,
                            const SchemaMap& schema_map = {}) {
  std::vector<std::string> lines;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    first = false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;  // blank lines carry no row
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw StructureError("empty input: no header or data rows found");
  }

  size_t data_begin = 0;
  std::vector<std::string> file_columns;
  if (format.header) {
    for (auto& name : detail::split_fields(lines[0], format.delimiter)) {
      file_columns.push_back(detail::trim(name));
    }
    data_begin = 1;
  }
  if (lines.size() == data_begin) {
    throw StructureError("no data rows after header");
  }

  const size_t k = detail::split_fields(lines[data_begin], format.delimiter).size();
  if (!format.header) {
    for (size_t c = 0; c < k; ++c) {
      file_columns.push_back("col" + std::to_string(c + 1));
    }
  } else if (file_columns.size() != k) {
    throw StructureError("header has " + std::to_string(file_columns.size()) +
                         " fields but first data row has " + std::to_string(k));
  }

  // schema_map entries may address a column by header name or by 0-based index.
  std::vector<VariableName> schema = file_columns;
  for (const auto& [key, variable] : schema_map) {
    bool applied = false;
    for (size_t c = 0; c < file_columns.size(); ++c) {
      if (key == file_columns[c] || key == std::to_string(c)) {
        schema[c] = variable;
        applied = true;
        break;
      }
    }
    if (!applied) {
      throw SchemaError("schema map entry '" + key + "' matches no file column");
    }
  }

  const size_t n = lines.size() - data_begin;
  Matrix values(static_cast<Index>(n), static_cast<Index>(k));
  for (size_t r = 0; r < n; ++r) {
    const std::string& raw = lines[data_begin + r];
    const auto fields = detail::split_fields(raw, format.delimiter);
    if (fields.size() != k) {
      throw StructureError("ragged row at line " + std::to_string(data_begin + r + 1) +
                           ": expected " + std::to_string(k) + " fields, found " +
                           std::to_string(fields.size()));
    }
    for (size_t c = 0; c < k; ++c) {
      double v;
      try {
        v = parse_double(fields[c]);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(data_begin + r + 1) + ", column " +
                         std::to_string(c + 1) + " ('" + schema[c] + "'): " + e.what());
      }
      if (!std::isfinite(v)) {
        throw ParseError("line " + std::to_string(data_begin + r + 1) + ", column " +
                         std::to_string(c + 1) + " ('" + schema[c] +
                         "'): non-finite value");
      }
      values(Index(r), Index(c)) = v;
    }
  }
  return Dataset(std::move(schema), std::move(values));
}

inline Dataset load_dataset_file(const std::string& path, const TextFormat& format,
                                 const SchemaMap& schema_map = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StructureError("cannot open '" + path + "'");
  }
  return load_dataset(in, format, schema_map);
}

/// Write a Dataset as delimited text with round-trip-exact numbers.
inline void save_dataset(const Dataset& data, std::ostream& out,
                         Delimiter delim = Delimiter::comma, bool header = true) {
  const char sep = delim == Delimiter::comma ? ',' : (delim == Delimiter::tab ? '\t' : ' ');
  if (header) {
    for (Index c = 0; c < data.k(); ++c) {
      if (c) out << sep;
      out << data.schema()[size_t(c)];
    }
    out << '\n';
  }
  for (Index r = 0; r < data.n(); ++r) {
    for (Index c = 0; c < data.k(); ++c) {
      if (c) out << sep;
      out << format_double(data.values()(r, c));
    }
    out << '\n';
  }
}

inline void save_dataset_file(const Dataset& data, const std::string& path,
                              Delimiter delim = Delimiter::comma, bool header = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw StructureError("cannot write '" + path + "'");
  }
  save_dataset(data, out, delim, header);
}

/// SHA-256 of the canonical serialization (comma-delimited, header row,
/// shortest round-trip numbers). Stands in for D in conditioning records.
inline std::string fingerprint(const Dataset& data) {
  std::ostringstream canonical;
  save_dataset(data, canonical, Delimiter::comma, true);
  return sha256_hex(canonical.str());
}

namespace detail {

// Deterministic standard normal: mt19937_64 + Box-Muller. std::normal_distribution
// is implementation-defined, which would break seeded reproducibility across
// standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : rng_(seed) {}

  double operator()() {
    const double u1 = next_unit_open();
    const double u2 = next_unit_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  double next_unit_open() {
    // (0, 1]: never zero, so log() stays finite.
    return (double(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
};

}  // namespace detail

/// Append a synthetic nonnegative column of |N(0, sigma^2)| draws.
/// Deterministic for a given seed.
inline Dataset synthesize_column(const Dataset& data, const VariableName& name,
                                 uint64_t seed, double sigma) {
  validate_variable_name(name);
  if (data.has_variable(name)) {
    throw SchemaError("variable '" + name + "' already exists in the schema");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("synthesize_column requires a positive finite scale");
  }
  detail::NormalSampler normal(seed);
  Matrix values(data.n(), data.k() + 1);
  values.leftCols(data.k()) = data.values();
  for (Index r = 0; r < data.n(); ++r) {
    values(r, data.k()) = std::abs(sigma * normal());
  }
  std::vector<VariableName> schema = data.schema();
  schema.push_back(name);
  return Dataset(std::move(schema), std::move(values));
}

}  // namespace prevision
