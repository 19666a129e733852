#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "randgame/matrix.hpp"

namespace randgame::io {

// Raised for malformed matrix text. line() is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// CSV: one row per line, decimal floats, no header. Blank lines are skipped.
Matrix parse_csv(std::string_view text);
std::string to_csv(const Matrix& m);

// JSON: {"n": rows, "m": cols, "data": [row-major entries]}.
Matrix from_json(const nlohmann::json& j);
nlohmann::json to_json(const Matrix& m);

// Picks JSON when the first non-space character is '{', CSV otherwise.
Matrix parse_matrix(std::string_view text);
Matrix read_matrix_file(const std::filesystem::path& path);

// Shortest decimal text that round-trips (max 17 significant digits).
std::string format_double(double x);

}  // namespace randgame::io
