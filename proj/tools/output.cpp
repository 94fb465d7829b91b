#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace wigdec::cli {

namespace fs = std::filesystem;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_real(v); }
  std::string operator()(const std::string &s) const {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (!std::isfinite(v)) return format_real(v);
    return v;
  }
  nlohmann::ordered_json operator()(const std::string &s) const { return s; }
};

fs::path temp_sibling(const fs::path &path) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

}  // namespace

std::string to_csv(const Table &table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += CsvCell{}(table.columns[i]);
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::visit(CsvCell{}, row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Table &table, const nlohmann::ordered_json &meta) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto &row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto &c : row) r.push_back(std::visit(JsonCell{}, c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

void write_atomic(const fs::path &path, const std::string &contents) {
  const fs::path tmp = temp_sibling(path);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void probe_writable(const fs::path &path) {
  if (path.empty()) return;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    throw std::runtime_error(path.string() + " is a directory");
  }
  const fs::path tmp = temp_sibling(path);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("output path " + path.string() + " is not writable");
  }
  fs::remove(tmp, ec);
}

void emit(const Table &table, const nlohmann::ordered_json &meta, Format format,
          const fs::path &path) {
  if (format == Format::Json) {
    const std::string text = to_json(table, meta).dump(1) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      write_atomic(path, text);
    }
    return;
  }
  const std::string text = to_csv(table);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  write_atomic(path, text);
  fs::path sidecar = path;
  sidecar += ".meta.json";
  write_atomic(sidecar, meta.dump(1) + "\n");
}

}  // namespace wigdec::cli
