#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

namespace impactlab::cli {

using Json = nlohmann::ordered_json;

struct RunHeader {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

std::string hex64(std::uint64_t value);
std::string format_number(double x);  // %.17g

// CSV text with a '#' header block carrying command, config hash and seed.
class CsvTable {
 public:
  CsvTable(const RunHeader& header, std::initializer_list<const char*> columns);

  CsvTable& cell(double x);
  CsvTable& cell(std::uint64_t x);
  CsvTable& cell(const std::string& s);
  CsvTable& cell(bool b);
  void end_row();

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  bool row_open_ = false;
};

// JSON document stamped with the same header fields.
Json json_document(const RunHeader& header);
// Finite numbers as-is, everything else as null.
Json finite_or_null(double x);

// Writes through a temporary file in the same directory and renames it into
// place, so readers never see a partial file.
void write_atomic(const std::filesystem::path& file, const std::string& content);
void write_json(const std::filesystem::path& file, const Json& doc);

}  // namespace impactlab::cli
