#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "strato/field.hpp"

namespace strato::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary snapshot: "SLF1", u32 n, f64 L, then n*n f64 in row-major order,
/// all little-endian.
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

/// Plain CSV (x1, x2, value) for small grids; refuses n > 256.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

/// Opens `path` for writing, creating parent directories, or throws IoError.
std::ofstream open_output(const std::filesystem::path& path, bool binary = false);

}  // namespace strato::io
