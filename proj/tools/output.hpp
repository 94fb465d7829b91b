#pragma once

// Tabular output: CSV or JSON, written atomically, with a provenance record.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace wigdec::cli {

/// Empty cell, integer, real or text. Non-finite reals are written as the
/// strings "inf", "-inf" and "nan".
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { Csv, Json };

/// 17 significant digits, so every double survives a round trip.
std::string format_real(double v);

std::string to_csv(const Table &table);
nlohmann::ordered_json to_json(const Table &table, const nlohmann::ordered_json &meta);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Throws std::runtime_error with a diagnostic on failure.
void write_atomic(const std::filesystem::path &path, const std::string &contents);

/// Fails fast (before any computation) when `path` cannot be created.
void probe_writable(const std::filesystem::path &path);

/// CSV goes to `path` with the provenance in `path.meta.json`; JSON embeds
/// it under "meta". An empty path writes the data to stdout.
void emit(const Table &table, const nlohmann::ordered_json &meta, Format format,
          const std::filesystem::path &path);

}  // namespace wigdec::cli
