#include "morse_lsm/field_io.hpp"

#include "morse_lsm/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace morse_lsm {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

} // namespace

std::string field_to_json(const ScalarField2D& field) {
  const auto& g = field.grid;
  std::ostringstream out;
  out << "{\n";
  out << "  \"schema\": " << quoted(field_schema) << ",\n";
  out << "  \"grid\": {\"a_min\": " << number(g.inv_width.min) << ", \"a_max\": "
      << number(g.inv_width.max) << ", \"n_a\": " << g.inv_width.count
      << ", \"C_min\": " << number(g.depth.min) << ", \"C_max\": " << number(g.depth.max)
      << ", \"n_C\": " << g.depth.count << "},\n";
  out << "  \"s\": " << number(field.scale) << ",\n";
  out << "  \"r0\": " << number(field.r0) << ",\n";
  out << "  \"convention\": {\"hbar\": 1, \"mass\": 1},\n";
  out << "  \"solver_digest\": " << quoted(field.solver_digest) << ",\n";
  out << "  \"values\": [";
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (k) out << (k % g.inv_width.count == 0 ? ",\n    " : ", ");
    out << (field.valid[k] ? number(field.values[k]) : "null");
  }
  out << "],\n  \"mask\": [";
  for (std::size_t k = 0; k < field.valid.size(); ++k) {
    if (k) out << (k % g.inv_width.count == 0 ? ",\n    " : ", ");
    out << (field.valid[k] ? "true" : "false");
  }
  out << "]\n}\n";
  return out.str();
}

ScalarField2D field_from_json(const std::string& text,
                              const std::optional<std::string>& expected_digest) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("field file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw LoadError("field file must hold a JSON object");
    if (doc.at("schema").get<std::string>() != field_schema)
      throw LoadError("field schema mismatch: expected " + std::string(field_schema) + ", got " +
                      doc.at("schema").get<std::string>());
    ScalarField2D field;
    const auto& g = doc.at("grid");
    field.grid.inv_width = {g.at("a_min").get<double>(), g.at("a_max").get<double>(),
                            g.at("n_a").get<std::size_t>()};
    field.grid.depth = {g.at("C_min").get<double>(), g.at("C_max").get<double>(),
                        g.at("n_C").get<std::size_t>()};
    try {
      field.grid.validate();
    } catch (const DomainError& e) {
      throw LoadError(std::string("field grid invalid: ") + e.what());
    }
    field.scale = doc.at("s").get<double>();
    field.r0 = doc.at("r0").get<double>();
    const auto& conv = doc.at("convention");
    if (conv.at("hbar").get<double>() != 1.0 || conv.at("mass").get<double>() != 1.0)
      throw LoadError("field uses an unsupported unit convention");
    field.solver_digest = doc.at("solver_digest").get<std::string>();
    if (expected_digest && *expected_digest != field.solver_digest)
      throw LoadError("solver digest mismatch: file has " + field.solver_digest + ", expected " +
                      *expected_digest);

    const auto& values = doc.at("values");
    const auto& mask = doc.at("mask");
    const std::size_t n = field.grid.size();
    if (!values.is_array() || !mask.is_array() || values.size() != n || mask.size() != n)
      throw LoadError("field arrays must both have n_a * n_C = " + std::to_string(n) + " entries");
    field.values.resize(n);
    field.valid.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const bool ok = mask[k].get<bool>();
      field.valid[k] = ok ? 1 : 0;
      if (ok) {
        if (!values[k].is_number()) throw LoadError("valid cell without a numeric value");
        field.values[k] = values[k].get<double>();
        if (!std::isfinite(field.values[k])) throw LoadError("non-finite value in valid cell");
      } else {
        field.values[k] = std::nan("");
      }
    }
    return field;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("field file is malformed: ") + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_field(const ScalarField2D& field, const std::filesystem::path& path) {
  write_file_atomic(path, field_to_json(field));
}

ScalarField2D load_field(const std::filesystem::path& path,
                         const std::optional<std::string>& expected_digest) {
  return field_from_json(read_file(path), expected_digest);
}

} // namespace morse_lsm
