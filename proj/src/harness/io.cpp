#include "kgfactor/harness/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kgfactor/errors.hpp"

namespace kgfactor::harness {
namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::string integer(std::size_t v) { return std::to_string(v); }
std::string integer(long v) { return std::to_string(v); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

std::string snapshot_name(std::size_t step, const std::string& component) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%08zu_%s.csv", step, component.c_str());
  return buf;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> fixed_columns(CsvSchema schema) {
  switch (schema) {
    case CsvSchema::series: return {"step_index", "t_or_z"};
    case CsvSchema::field: return {"grid_index", "coordinate", "re", "im"};
    case CsvSchema::scan: return {"point_index", "value", "metric"};
    case CsvSchema::dispersion: return {"mode_index", "wavenumber", "measured", "predicted", "relative_error"};
    case CsvSchema::resonance: return {"point_index", "omega_xi", "max_minus_norm", "growth"};
  }
  return {};
}

std::string series_csv(const Series& s) {
  std::string out;
  auto header = fixed_columns(CsvSchema::series);
  header.insert(header.end(), s.names.begin(), s.names.end());
  append_row(out, header);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<std::string> cells{integer(s.step_index[i]), format_number(s.coordinate[i])};
    for (double v : s.rows[i]) cells.push_back(format_number(v));
    append_row(out, cells);
  }
  return out;
}

std::string field_csv(const ComplexField& f) {
  std::string out;
  append_row(out, fixed_columns(CsvSchema::field));
  const std::size_t n = f.row_length();
  for (std::size_t i = 0; i < f.size(); ++i)
    append_row(out, {integer(i), format_number(f.grid().coordinate(i % n)), format_number(f[i].real()),
                     format_number(f[i].imag())});
  return out;
}

std::string scan_csv(const ScanResult& r) {
  std::string out;
  append_row(out, fixed_columns(CsvSchema::scan));
  for (std::size_t i = 0; i < r.values.size(); ++i)
    append_row(out, {integer(i), format_number(r.values[i]), format_number(r.metrics[i])});
  return out;
}

std::string dispersion_csv(const std::vector<DispersionPoint>& points) {
  std::string out;
  append_row(out, fixed_columns(CsvSchema::dispersion));
  for (const auto& p : points)
    append_row(out, {integer(p.index), format_number(p.wavenumber), format_number(p.measured),
                     format_number(p.predicted), format_number(p.relative_error)});
  return out;
}

std::string resonance_csv(const ResonanceResult& r) {
  std::string out;
  append_row(out, fixed_columns(CsvSchema::resonance));
  for (std::size_t i = 0; i < r.omegas.size(); ++i)
    append_row(out, {integer(i), format_number(r.omegas[i]), format_number(r.max_minus[i]), format_number(r.growth[i])});
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ConfigError("csv line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(t.header.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ConfigError("csv line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ConfigError("csv has no header");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void check_schema(const CsvTable& table, CsvSchema schema) {
  const auto cols = fixed_columns(schema);
  const bool open_ended = schema == CsvSchema::series;
  if (table.header.size() < cols.size() || (!open_ended && table.header.size() != cols.size()))
    throw ConfigError("csv header has the wrong number of columns");
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (table.header[i] != cols[i]) throw ConfigError("csv column " + std::to_string(i) + " should be '" + cols[i] + "'");
}

Series series_from_csv(const CsvTable& table) {
  check_schema(table, CsvSchema::series);
  Series s;
  s.names.assign(table.header.begin() + 2, table.header.end());
  for (const auto& row : table.rows) s.push(static_cast<std::size_t>(row[0]), row[1], {row.begin() + 2, row.end()});
  return s;
}

ComplexField field_from_csv(const CsvTable& table, const Grid& grid, const std::optional<Grid>& transverse) {
  check_schema(table, CsvSchema::field);
  std::vector<cplx> values;
  values.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i][0] != static_cast<double>(i)) throw ConfigError("field csv grid_index is not sequential");
    values.emplace_back(table.rows[i][2], table.rows[i][3]);
  }
  return ComplexField(grid, transverse, std::move(values));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

json metadata(const json& config_echo, const std::string& command, double wall_time) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_echo;
  j["wall_time_s"] = wall_time;
  return j;
}

std::vector<std::string> write_run(const std::filesystem::path& dir, const SimResult& r, const std::string& command) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files{"series.csv"};
  write_text(dir / "series.csv", series_csv(r.series));
  for (const auto& snap : r.snapshots) {
    for (const auto& [name, field] : snap.components) {
      files.push_back(snapshot_name(snap.step, name));
      write_text(dir / files.back(), field_csv(field));
    }
  }
  json meta = metadata(to_json(r.config), command, r.wall_time);
  meta["validity"] = json{{"worst_ratio", r.worst_validity.ratio},
                          {"threshold", r.worst_validity.threshold},
                          {"ok", r.worst_validity.ok}};
  meta["files"] = files;
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
  files.push_back("metadata.json");
  return files;
}

}  // namespace kgfactor::harness
