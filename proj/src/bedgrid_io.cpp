#include "bedmorph/bedgrid_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bedmorph/errors.hpp"
#include "binary_io.hpp"

namespace fs = std::filesystem;

namespace bedmorph {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::CorruptPayload, "bad " + what + " value '" + token + "'");
  }
}

long long parse_int(const std::string& token, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(token, &pos);
    if (pos != token.size() || v < 0) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::CorruptPayload, "bad " + what + " value '" + token + "'");
  }
}

}  // namespace

void write_bedgrid(const ElevationField& field, const std::string& path) {
  validate(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::InputNotFound, "cannot open for writing: " + path);

  std::ostringstream header;
  header << "BEDGRID v1 nx=" << field.nx << " ny=" << field.ny << " nt=" << field.nt
         << " dx=" << format_double(field.dx) << " dy=" << format_double(field.dy)
         << " dt=" << format_double(field.dt) << " x0=" << format_double(field.x0)
         << " y0=" << format_double(field.y0) << "\n";
  out << header.str();
  detail::put_f64_block_le(out, field.values.data(), field.values.size());
  if (!out) raise(ErrorCode::CorruptPayload, "short write to " + path);
}

ElevationField read_bedgrid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::InputNotFound, "cannot open: " + path);

  std::string header;
  if (!std::getline(in, header)) raise(ErrorCode::CorruptPayload, "missing header in " + path);

  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "BEDGRID") raise(ErrorCode::FormatVersionMismatch, "not a BEDGRID file: " + path);
  if (version != "v1") {
    raise(ErrorCode::FormatVersionMismatch, "unsupported BEDGRID version '" + version + "'");
  }

  ElevationField field;
  bool have_nx = false, have_ny = false, have_nt = false;
  bool have_dx = false, have_dy = false, have_dt = false;
  std::string token;
  while (hs >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) raise(ErrorCode::CorruptPayload, "bad header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "nx") { field.nx = static_cast<std::size_t>(parse_int(val, key)); have_nx = true; }
    else if (key == "ny") { field.ny = static_cast<std::size_t>(parse_int(val, key)); have_ny = true; }
    else if (key == "nt") { field.nt = static_cast<std::size_t>(parse_int(val, key)); have_nt = true; }
    else if (key == "dx") { field.dx = parse_double(val, key); have_dx = true; }
    else if (key == "dy") { field.dy = parse_double(val, key); have_dy = true; }
    else if (key == "dt") { field.dt = parse_double(val, key); have_dt = true; }
    else if (key == "x0") { field.x0 = parse_double(val, key); }
    else if (key == "y0") { field.y0 = parse_double(val, key); }
    else raise(ErrorCode::CorruptPayload, "unknown header key '" + key + "'");
  }
  if (!(have_nx && have_ny && have_nt && have_dx && have_dy && have_dt)) {
    raise(ErrorCode::CorruptPayload, "incomplete BEDGRID header in " + path);
  }

  field.values.resize(field.nx * field.ny * field.nt);
  if (!detail::get_f64_block_le(in, field.values.data(), field.values.size())) {
    raise(ErrorCode::CorruptPayload, "truncated BEDGRID payload in " + path);
  }
  char extra;
  if (in.read(&extra, 1)) raise(ErrorCode::CorruptPayload, "trailing bytes in " + path);

  validate(field);
  return field;
}

void write_csv_dir(const ElevationField& field, const std::string& dir) {
  validate(field);
  fs::create_directories(dir);

  nlohmann::json meta;
  meta["dx"] = field.dx;
  meta["dy"] = field.dy;
  meta["dt"] = field.dt;
  meta["x0"] = field.x0;
  meta["y0"] = field.y0;
  std::ofstream mf(fs::path(dir) / "meta.json");
  mf << meta.dump(2) << "\n";

  for (std::size_t t = 0; t < field.nt; ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%05zu.csv", t);
    std::ofstream out(fs::path(dir) / name);
    for (std::size_t i = 0; i < field.nx; ++i) {
      for (std::size_t j = 0; j < field.ny; ++j) {
        if (j) out << ',';
        out << format_double(field.at(i, j, t));
      }
      out << '\n';
    }
  }
}

ElevationField read_csv_dir(const std::string& dir) {
  const fs::path meta_path = fs::path(dir) / "meta.json";
  if (!fs::exists(meta_path)) {
    raise(ErrorCode::InputNotFound, "missing meta.json in " + dir);
  }
  nlohmann::json meta;
  try {
    std::ifstream mf(meta_path);
    mf >> meta;
  } catch (const std::exception& e) {
    raise(ErrorCode::CorruptPayload, std::string("bad meta.json: ") + e.what());
  }

  ElevationField field;
  try {
    field.dx = meta.at("dx").get<double>();
    field.dy = meta.at("dy").get<double>();
    field.dt = meta.at("dt").get<double>();
    field.x0 = meta.value("x0", 0.0);
    field.y0 = meta.value("y0", 0.0);
  } catch (const std::exception& e) {
    raise(ErrorCode::CorruptPayload, std::string("meta.json must carry dx/dy/dt: ") + e.what());
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) raise(ErrorCode::InputNotFound, "no snapshot CSV files in " + dir);

  field.nt = files.size();
  for (std::size_t t = 0; t < files.size(); ++t) {
    std::ifstream in(files[t]);
    if (!in) raise(ErrorCode::InputNotFound, "cannot open " + files[t].string());
    std::vector<double> plane;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t row_cols = 0;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) {
        plane.push_back(parse_double(cell, "csv cell"));
        ++row_cols;
      }
      if (cols == 0) cols = row_cols;
      else if (row_cols != cols) {
        raise(ErrorCode::CorruptPayload, "ragged rows in " + files[t].string());
      }
      ++rows;
    }
    if (t == 0) {
      field.nx = rows;
      field.ny = cols;
      field.values.reserve(rows * cols * field.nt);
    } else if (rows != field.nx || cols != field.ny) {
      raise(ErrorCode::ShapeMismatch, "snapshot shape changed at " + files[t].string());
    }
    field.values.insert(field.values.end(), plane.begin(), plane.end());
  }

  validate(field);
  return field;
}

ElevationField read_field(const std::string& path) {
  if (!fs::exists(path)) raise(ErrorCode::InputNotFound, "no such input: " + path);
  if (fs::is_directory(path)) return read_csv_dir(path);
  return read_bedgrid(path);
}

}  // namespace bedmorph
