#pragma once

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

namespace mvtl::io {

/// JSON syntax error with its line and column.
class JsonParseError : public std::runtime_error {
 public:
  JsonParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a JSON document; JsonParseError reports "<source>:<line>:<column>".
nlohmann::json parse_json(const std::string& text, const std::string& source);
nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed, newline-terminated, written atomically.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace mvtl::io
