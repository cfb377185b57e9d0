#pragma once

#include "morse_lsm/param_field.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace morse_lsm {

inline constexpr const char* field_schema = "morse-field/1";

/// JSON text of a field. Numbers use 17 significant digits; invalid cells are
/// written as null with a false mask entry.
std::string field_to_json(const ScalarField2D& field);
ScalarField2D field_from_json(const std::string& text,
                              const std::optional<std::string>& expected_digest = std::nullopt);

/// Writes through a temporary file in the same directory, then renames.
void save_field(const ScalarField2D& field, const std::filesystem::path& path);

/// Throws LoadError for malformed content, a schema mismatch, inconsistent
/// array lengths, or (when given) a solver digest mismatch; IoError when the
/// file cannot be read.
ScalarField2D load_field(const std::filesystem::path& path,
                         const std::optional<std::string>& expected_digest = std::nullopt);

/// Write `text` to `path` atomically.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

} // namespace morse_lsm
