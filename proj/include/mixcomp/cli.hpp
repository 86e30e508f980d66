#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mixcomp/estimator.hpp"
#include "mixcomp/operator_estimate.hpp"
#include "mixcomp/pdelta.hpp"
#include "mixcomp/simulate.hpp"

namespace mixcomp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kEstimation = 3 };

// Bad flag values or combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files. line/column are 1-based; 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ColumnGroup {
  std::vector<int> columns;
  DataKind kind = DataKind::continuous;
};

// "0;1", "0-3;4-7", "0,2;1,3:d". Groups are ';'-separated; each is a ','-separated list of
// columns or inclusive ranges, optionally suffixed ":d" (discrete) or ":c".
std::vector<ColumnGroup> parse_grouping(std::string_view text);

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::size_t num_columns() const;
};

// Comma-separated, no quoting, blank lines skipped, '\r' stripped.
CsvTable read_csv(std::istream& in, bool has_header);

// Locale-independent strict double parse; nullopt-like failure via bool.
bool parse_double(std::string_view text, double& out);

// Builds one component per group. Discrete columns map their distinct sorted values
// (numeric order if all are numbers, else lexical) to 0, 1, 2, ...
Sample build_sample(const CsvTable& table, const std::vector<ColumnGroup>& groups);

MixtureDesign design_from_json(const nlohmann::json& doc);

void write_csv(std::ostream& out, const GeneratedSample& data, bool header, bool labels);

inline constexpr std::size_t kSigmaTruncation = 50;

nlohmann::json config_to_json(const EstimatorConfig& cfg);
nlohmann::json spectrum_to_json(const Spectrum& s, bool full);
nlohmann::json estimate_to_json(const Estimate& est, const EstimatorConfig& cfg, std::size_t n,
                                bool full_spectrum);
nlohmann::json frequency_table_to_json(const FrequencyTable& table);

// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixcomp::cli
