#pragma once
#include <cstdint>
#include <filesystem>
#include <string>

#include "nbv/grid.hpp"

namespace nbv {

// Row-major CSV, one row per j, full precision round-trip.
std::string field_to_csv(const ScalarField& u);
ScalarField field_from_csv(const std::string& text, double h);

// 8-bit ASCII PGM (P2), min-max normalized.
std::string field_to_pgm(const ScalarField& u);

// FNV-1a 64-bit over bytes, rendered as "fnv1a:<hex>".
std::string fnv1a_hex(const std::string& bytes);

// Write-to-temp then rename, so a failed command never corrupts an existing
// file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace nbv
