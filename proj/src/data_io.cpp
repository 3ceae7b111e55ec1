#include "mixtest/data_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mixtest {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  const auto is_sep = [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r';
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool parse_value(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

struct Row {
  std::size_t line_number;
  std::vector<std::string_view> tokens;
};

}  // namespace

Transform parse_transform(const std::string& name) {
  if (name == "none") return Transform::none;
  if (name == "log") return Transform::log;
  if (name == "sqrt") return Transform::sqrt;
  throw InputError("unknown transform '" + name + "' (expected none, log, or sqrt)");
}

std::string transform_name(Transform t) {
  switch (t) {
    case Transform::none: return "none";
    case Transform::log: return "log";
    case Transform::sqrt: return "sqrt";
  }
  return "none";
}

Sample read_data(const std::string& path, const ReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file: " + path);

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));

  std::vector<Row> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tokens = tokenize(lines[i]);
    if (!tokens.empty()) rows.push_back({i + 1, std::move(tokens)});
  }
  if (rows.empty()) throw InputError("data file is empty: " + path);

  std::size_t column_index = 0;
  std::size_t first_data_row = 0;
  if (options.column) {
    const std::string& selector = *options.column;
    // A header row is any first row with a non-numeric token.
    bool has_header = false;
    for (std::string_view tok : rows[0].tokens) {
      double ignored;
      if (!parse_value(tok, ignored)) {
        has_header = true;
        break;
      }
    }
    int index_selector = -1;
    {
      int parsed = 0;
      const auto [ptr, ec] =
          std::from_chars(selector.data(), selector.data() + selector.size(), parsed);
      if (ec == std::errc{} && ptr == selector.data() + selector.size() && parsed >= 1) {
        index_selector = parsed;
      }
    }
    if (index_selector >= 1) {
      column_index = static_cast<std::size_t>(index_selector) - 1;
      if (has_header) first_data_row = 1;
    } else {
      if (!has_header) {
        throw InputError("column '" + selector + "' requested but the file has no header row");
      }
      bool found = false;
      for (std::size_t c = 0; c < rows[0].tokens.size(); ++c) {
        if (rows[0].tokens[c] == selector) {
          column_index = c;
          found = true;
          break;
        }
      }
      if (!found) {
        throw InputError("column '" + selector + "' not found in the header row");
      }
      first_data_row = 1;
    }
  }

  std::vector<double> values;
  std::vector<std::size_t> value_lines;
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (!options.column && row.tokens.size() != 1) {
      throw InputError("line " + std::to_string(row.line_number) +
                       ": found " + std::to_string(row.tokens.size()) +
                       " columns; pass a column selector to pick one");
    }
    if (column_index >= row.tokens.size()) {
      throw InputError("line " + std::to_string(row.line_number) +
                       ": fewer columns than the requested selector");
    }
    double v;
    if (!parse_value(row.tokens[column_index], v)) {
      throw InputError("line " + std::to_string(row.line_number) + ": '" +
                       std::string(row.tokens[column_index]) + "' is not a number");
    }
    values.push_back(v);
    value_lines.push_back(row.line_number);
  }

  if (options.transform != Transform::none) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0)) {
        throw InputError("line " + std::to_string(value_lines[i]) + ": " +
                         transform_name(options.transform) +
                         " transform requires positive values (got " +
                         std::to_string(values[i]) + ")");
      }
      values[i] = options.transform == Transform::log ? std::log(values[i])
                                                      : std::sqrt(values[i]);
    }
  }

  try {
    return Sample(std::move(values));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(e.what()) + " in " + path);
  }
}

}  // namespace mixtest
