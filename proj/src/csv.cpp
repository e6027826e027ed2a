#include "varbound/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "varbound/scenario.hpp"

namespace varbound {

namespace {

std::string format_lambda(double lambda) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", lambda);
  return buffer;
}

double parse_field(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ScenarioError("sweep csv: " + where + ": cannot parse number '" +
                        text + "'");
  }
  return value;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  std::istringstream in(line);
  while (std::getline(in, current, ',')) fields.push_back(current);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_value(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%#.12g", v);
  return buffer;
}

std::string format_exact(double v) {
  char buffer[48];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (ec != std::errc()) throw std::runtime_error("format_exact failed");
  return std::string(buffer, ptr);
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("write_sweep_csv: rows must be nonempty");
  }
  const SweepRow& front = rows.front();

  std::ostringstream out;
  out << "theta,var_a,var_b,product,robertson,schrodinger,mbp,milne";
  for (const auto& [lambda, value] : front.report.callebaut) {
    out << ",callebaut_" << format_lambda(lambda);
  }
  const bool optimized = front.l2.has_value();
  if (optimized) {
    for (const auto& [lambda, value] : front.l1) {
      out << ",l1_" << format_lambda(lambda);
    }
    out << ",l2";
  }
  out << '\n';

  for (const SweepRow& row : rows) {
    const BoundReport& r = row.report;
    out << format_exact(row.theta) << ',' << format_value(r.variance_a) << ','
        << format_value(r.variance_b) << ',' << format_value(r.product) << ','
        << format_value(r.robertson) << ',' << format_value(r.schrodinger)
        << ',' << format_value(r.mbp) << ',' << format_value(r.milne);
    for (const auto& [lambda, value] : r.callebaut) {
      out << ',' << format_value(value);
    }
    if (optimized) {
      for (const auto& [lambda, value] : row.l1) {
        out << ',' << format_value(value);
      }
      out << ',' << format_value(*row.l2);
    }
    out << '\n';
  }

  const std::filesystem::path temp = path.string() + ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw ScenarioError("sweep csv: cannot open '" + temp.string() +
                          "' for writing");
    }
    file << out.str();
    file.flush();
    if (!file) {
      file.close();
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      throw ScenarioError("sweep csv: write to '" + temp.string() +
                          "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    throw ScenarioError("sweep csv: cannot move output into place at '" +
                        path.string() + "': " + ec.message());
  }
}

SweepTable read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError("sweep csv: cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ScenarioError("sweep csv: empty file");
  }
  const std::vector<std::string> header = split_line(line);
  const std::vector<std::string> fixed = {
      "theta", "var_a", "var_b",      "product",
      "robertson", "schrodinger", "mbp", "milne"};
  if (header.size() < fixed.size()) {
    throw ScenarioError("sweep csv: header has too few columns");
  }
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    if (header[k] != fixed[k]) {
      throw ScenarioError("sweep csv: expected header column '" + fixed[k] +
                          "', found '" + header[k] + "'");
    }
  }

  SweepTable table;
  std::size_t column = fixed.size();
  while (column < header.size() &&
         header[column].starts_with("callebaut_")) {
    table.lambdas.push_back(
        parse_field(header[column].substr(10), "header"));
    ++column;
  }
  while (column < header.size() && header[column].starts_with("l1_")) {
    table.l1_lambdas.push_back(parse_field(header[column].substr(3), "header"));
    ++column;
  }
  if (column < header.size() && header[column] == "l2") {
    table.has_l2 = true;
    ++column;
  }
  if (column != header.size()) {
    throw ScenarioError("sweep csv: unrecognized header column '" +
                        header[column] + "'");
  }

  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw ScenarioError("sweep csv: line " + std::to_string(line_number) +
                          " has " + std::to_string(fields.size()) +
                          " fields, header has " +
                          std::to_string(header.size()));
    }
    const std::string where = "line " + std::to_string(line_number);
    SweepRow row{};
    std::size_t f = 0;
    row.theta = parse_field(fields[f++], where);
    row.report.variance_a = parse_field(fields[f++], where);
    row.report.variance_b = parse_field(fields[f++], where);
    row.report.product = parse_field(fields[f++], where);
    row.report.robertson = parse_field(fields[f++], where);
    row.report.schrodinger = parse_field(fields[f++], where);
    row.report.mbp = parse_field(fields[f++], where);
    row.report.milne = parse_field(fields[f++], where);
    row.report.combined = row.report.milne;
    for (const double lambda : table.lambdas) {
      const double value = parse_field(fields[f++], where);
      row.report.callebaut[lambda] = value;
      row.report.combined = std::max(row.report.combined, value);
    }
    for (const double lambda : table.l1_lambdas) {
      row.l1[lambda] = parse_field(fields[f++], where);
    }
    if (table.has_l2) {
      row.l2 = parse_field(fields[f++], where);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace varbound
