#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "impactlab/errors.hpp"

namespace impactlab::cli {

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(const RunHeader& header, std::initializer_list<const char*> columns) {
  text_ = "# impactlab " + header.command + "\n# config_hash=" + hex64(header.config_hash) +
          "\n# seed=" + std::to_string(header.seed) + "\n";
  bool first = true;
  for (const char* c : columns) {
    if (!first) text_ += ',';
    text_ += c;
    first = false;
  }
  text_ += '\n';
}

CsvTable& CsvTable::cell(const std::string& s) {
  if (row_open_) text_ += ',';
  text_ += s;
  row_open_ = true;
  return *this;
}

CsvTable& CsvTable::cell(double x) { return cell(format_number(x)); }
CsvTable& CsvTable::cell(std::uint64_t x) { return cell(std::to_string(x)); }
CsvTable& CsvTable::cell(bool b) { return cell(std::string(b ? "1" : "0")); }

void CsvTable::end_row() {
  text_ += '\n';
  row_open_ = false;
}

Json json_document(const RunHeader& header) {
  Json doc;
  doc["command"] = header.command;
  doc["config_hash"] = hex64(header.config_hash);
  doc["seed"] = header.seed;
  return doc;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void write_atomic(const std::filesystem::path& file, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_json(const std::filesystem::path& file, const Json& doc) { write_atomic(file, doc.dump(2) + "\n"); }

}  // namespace impactlab::cli
