#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgfactor/harness/config.hpp"
#include "kgfactor/harness/experiments.hpp"
#include "kgfactor/harness/run.hpp"

namespace kgfactor::harness {

inline constexpr const char* kVersion = "0.1.0";

/// Decimal text with 17 significant digits (reads back to exactly v).
std::string format_number(double v);

/// A parsed CSV table: header plus numeric cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Column layouts of every CSV the harness writes.
enum class CsvSchema {
  series,      ///< step_index, t_or_z, <named series...>
  field,       ///< grid_index, coordinate, re, im
  scan,        ///< point_index, value, metric
  dispersion,  ///< mode_index, wavenumber, measured, predicted, relative_error
  resonance,   ///< point_index, omega_xi, max_minus_norm, growth
};

std::vector<std::string> fixed_columns(CsvSchema schema);

std::string series_csv(const Series& s);
/// Rows are flattened row-major; with a transverse axis the coordinate is the primary-axis coordinate.
std::string field_csv(const ComplexField& f);
std::string scan_csv(const ScanResult& r);
std::string dispersion_csv(const std::vector<DispersionPoint>& points);
std::string resonance_csv(const ResonanceResult& r);

/// Parses numeric CSV text. Throws ConfigError on ragged rows or bad cells.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
/// Throws ConfigError unless the table's leading columns match the schema.
void check_schema(const CsvTable& table, CsvSchema schema);
/// Rebuild a series from its CSV form.
Series series_from_csv(const CsvTable& table);
ComplexField field_from_csv(const CsvTable& table, const Grid& grid, const std::optional<Grid>& transverse);

void write_text(const std::filesystem::path& path, const std::string& text);

/// metadata.json: config echo, version, command and wall time.
json metadata(const json& config_echo, const std::string& command, double wall_time);

/// Writes series.csv, snapshot CSVs and metadata.json for one run into dir.
/// Returns the file names written, in order.
std::vector<std::string> write_run(const std::filesystem::path& dir, const SimResult& r, const std::string& command);

}  // namespace kgfactor::harness
