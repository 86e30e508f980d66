#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "mixcomp/cli.hpp"
#include "mixcomp/error.hpp"

namespace mixcomp::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_index(std::string_view s, std::string_view group) {
  s = trim(s);
  int value = -1;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw UsageError("bad column index '" + std::string(s) + "' in group '" + std::string(group) + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error([&] {
        std::string msg;
        if (line > 0) msg += "line " + std::to_string(line);
        if (column > 0) msg += ", column " + std::to_string(column);
        return msg.empty() ? what : msg + ": " + what;
      }()),
      line_(line),
      column_(column) {}

std::vector<ColumnGroup> parse_grouping(std::string_view text) {
  if (trim(text).empty()) throw UsageError("empty --groups");
  std::vector<ColumnGroup> groups;
  std::set<int> seen;
  for (auto raw : split(text, ';')) {
    auto spec = trim(raw);
    ColumnGroup group;
    if (const auto colon = spec.rfind(':'); colon != std::string_view::npos) {
      const auto tag = trim(spec.substr(colon + 1));
      if (tag == "d") {
        group.kind = DataKind::discrete;
      } else if (tag != "c") {
        throw UsageError("unknown group kind ':" + std::string(tag) + "' (use :c or :d)");
      }
      spec = trim(spec.substr(0, colon));
    }
    if (spec.empty()) throw UsageError("empty group in --groups '" + std::string(text) + "'");
    for (auto piece : split(spec, ',')) {
      const auto dash = piece.find('-');
      int lo = 0;
      int hi = 0;
      if (dash == std::string_view::npos) {
        lo = hi = parse_index(piece, spec);
      } else {
        lo = parse_index(piece.substr(0, dash), spec);
        hi = parse_index(piece.substr(dash + 1), spec);
        if (hi < lo) throw UsageError("descending range in group '" + std::string(spec) + "'");
      }
      for (int c = lo; c <= hi; ++c) {
        if (!seen.insert(c).second) {
          throw UsageError("column " + std::to_string(c) + " appears in more than one group");
        }
        group.columns.push_back(c);
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::size_t CsvTable::num_columns() const {
  if (!header.empty()) return header.size();
  return rows.empty() ? 0 : rows.front().fields.size();
}

CsvTable read_csv(std::istream& in, bool has_header) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    for (auto f : split(line, ',')) fields.emplace_back(trim(f));
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    if (header_pending) {
      table.header = std::move(fields);
      header_pending = false;
    } else {
      table.rows.push_back({line_no, std::move(fields)});
    }
  }
  if (in.bad()) throw ParseError("read error");
  if (table.rows.empty()) throw ParseError("no data rows");
  return table;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

Sample build_sample(const CsvTable& table, const std::vector<ColumnGroup>& groups) {
  const std::size_t width = table.num_columns();
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  std::vector<ComponentSample> comps;
  for (const auto& group : groups) {
    ObservationMatrix values(n, static_cast<Eigen::Index>(group.columns.size()));
    for (std::size_t j = 0; j < group.columns.size(); ++j) {
      const auto col = static_cast<std::size_t>(group.columns[j]);
      if (col >= width) {
        throw UsageError("column " + std::to_string(col) + " does not exist (file has " +
                         std::to_string(width) + " columns)");
      }
      if (group.kind == DataKind::continuous) {
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto& row = table.rows[static_cast<std::size_t>(i)];
          double v = 0.0;
          if (!parse_double(row.fields[col], v) || !std::isfinite(v)) {
            throw ParseError("not a finite number: '" + row.fields[col] + "'", row.line, col + 1);
          }
          values(i, static_cast<Eigen::Index>(j)) = v;
        }
        continue;
      }
      // Discrete: distinct values, sorted, coded 0..L-1. Numeric columns sort by value
      // (so "1" and "1.0" share a code), anything else lexically.
      bool numeric = true;
      for (const auto& row : table.rows) {
        double v = 0.0;
        numeric = numeric && parse_double(row.fields[col], v);
      }
      if (numeric) {
        std::map<double, double> code;
        for (const auto& row : table.rows) {
          double v = 0.0;
          parse_double(row.fields[col], v);
          code.emplace(v, 0.0);
        }
        double next = 0.0;
        for (auto& [value, c] : code) c = next++;
        for (Eigen::Index i = 0; i < n; ++i) {
          double v = 0.0;
          parse_double(table.rows[static_cast<std::size_t>(i)].fields[col], v);
          values(i, static_cast<Eigen::Index>(j)) = code.at(v);
        }
      } else {
        std::map<std::string, double> code;
        for (const auto& row : table.rows) code.emplace(row.fields[col], 0.0);
        double next = 0.0;
        for (auto& [token, c] : code) c = next++;
        for (Eigen::Index i = 0; i < n; ++i) {
          values(i, static_cast<Eigen::Index>(j)) = code.at(table.rows[static_cast<std::size_t>(i)].fields[col]);
        }
      }
    }
    comps.emplace_back(std::move(values), group.kind);
  }
  return Sample(std::move(comps));
}

namespace {

Law1D law_from_json(const nlohmann::json& j) {
  const auto kind = j.at("law").get<std::string>();
  if (kind == "normal") return Law1D::normal(j.at("mean").get<double>(), j.at("sd").get<double>());
  if (kind == "uniform") return Law1D::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  throw ParseError("unknown law '" + kind + "' (use normal or uniform)");
}

}  // namespace

MixtureDesign design_from_json(const nlohmann::json& doc) {
  MixtureDesign design;
  try {
    design.name = doc.value("name", std::string("custom"));
    design.weights = doc.at("weights").get<std::vector<double>>();
    for (const auto& per_m : doc.at("components")) {
      std::vector<std::vector<Law1D>> comps;
      for (const auto& per_k : per_m) {
        std::vector<Law1D> coords;
        if (per_k.is_object()) {
          coords.push_back(law_from_json(per_k));
        } else {
          for (const auto& c : per_k) coords.push_back(law_from_json(c));
        }
        comps.push_back(std::move(coords));
      }
      design.laws.push_back(std::move(comps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("design file: ") + e.what());
  }
  return design;
}

void write_csv(std::ostream& out, const GeneratedSample& data, bool header, bool labels) {
  const auto& sample = data.sample;
  if (header) {
    bool first = true;
    for (std::size_t k = 0; k < sample.num_components(); ++k) {
      for (int c = 0; c < sample.component(k).dim(); ++c) {
        out << (first ? "" : ",") << "x" << k;
        if (sample.component(k).dim() > 1) out << "_" << c;
        first = false;
      }
    }
    if (labels) out << ",label";
    out << '\n';
  }
  out << std::setprecision(17);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    bool first = true;
    for (const auto& comp : sample.components()) {
      for (double v : comp.row(i)) {
        out << (first ? "" : ",") << v;
        first = false;
      }
    }
    if (labels) out << ',' << data.labels[i];
    out << '\n';
  }
}

}  // namespace mixcomp::cli
