#include "randgame/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace randgame::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

Matrix parse_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;

    std::size_t count = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" +
                             std::string(field) + "' as a number",
                         line_no);
      }
      if (!std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": non-finite entry", line_no);
      }
      data.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                           " columns, found " + std::to_string(count),
                       line_no);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("empty matrix", 0);
  return Matrix(rows, cols, std::move(data));
}

std::string to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("data")) {
    throw ParseError("matrix JSON must have fields n, m, data", 0);
  }
  const auto n = j.at("n").get<long long>();
  const auto m = j.at("m").get<long long>();
  if (n < 1 || m < 1) throw ParseError("matrix JSON: n and m must be >= 1", 0);
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != static_cast<std::size_t>(n * m)) {
    throw ParseError("matrix JSON: data has " + std::to_string(data.size()) + " entries, expected " +
                         std::to_string(n * m),
                     0);
  }
  Matrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(m), std::move(data));
  if (!out.all_finite()) throw ParseError("matrix JSON: non-finite entry", 0);
  return out;
}

nlohmann::json to_json(const Matrix& m) {
  return {{"n", m.rows()},
          {"m", m.cols()},
          {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    try {
      return from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid matrix JSON: ") + e.what(), 0);
    }
  }
  return parse_csv(text);
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

}  // namespace randgame::io
