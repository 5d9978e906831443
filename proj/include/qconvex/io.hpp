#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qconvex/grid.hpp"

namespace qconvex {

// File formats
//
// CSV: first line "H,W", then H lines of W comma-separated reals printed with
//      17 significant digits, so doubles round-trip exactly. Row i of the
//      file is x = i.
// PGM: P2 (ASCII) or P5 (binary), maxval <= 255. Reading divides by maxval;
//      writing stores round(clamp(u, 0, 1) * 255) as P5. Lossy except for
//      fields already quantised to multiples of 1/255.

enum class FieldFormat { Csv, Pgm };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FieldFormat parse_format(std::string_view text);  // "csv" | "pgm"
/// Guess from the file extension; nullopt when it is neither .csv nor .pgm.
std::optional<FieldFormat> format_from_path(const std::filesystem::path& path);

ScalarField parse_csv(std::string_view text);
std::string to_csv(const ScalarField& field);
ScalarField parse_pgm(std::string_view bytes);
std::string to_pgm(const ScalarField& field);

ScalarField read_field(const std::filesystem::path& path,
                       std::optional<FieldFormat> format = std::nullopt);
void write_field(const std::filesystem::path& path, const ScalarField& field,
                 std::optional<FieldFormat> format = std::nullopt);

/// Throws IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace qconvex
