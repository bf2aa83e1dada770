#include "strato/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace strato::io {
namespace {

constexpr char kMagic[4] = {'S', 'L', 'F', '1'};

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError(path.string() + ": truncated header");
  return v;
}

}  // namespace

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!os) throw IoError(path.string() + ": cannot open for writing");
  return os;
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  auto os = open_output(path, true);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n()));
  put<double>(os, f.grid().half_length());
  auto v = f.values();
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!os) throw IoError(path.string() + ": write failed");
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string() + ": cannot open");
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError(path.string() + ": not an SLF1 file");
  const auto n = get<std::uint32_t>(is, path);
  const auto half_length = get<double>(is, path);
  GridSpec grid = [&] {
    try {
      return GridSpec(static_cast<int>(n), half_length);
    } catch (const std::invalid_argument& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }();
  std::vector<double> values(grid.size());
  if (!is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)))) {
    throw IoError(path.string() + ": truncated payload");
  }
  return ScalarField(grid, std::move(values));
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  const auto& grid = f.grid();
  if (grid.n() > 256) throw IoError(path.string() + ": CSV export is limited to n <= 256");
  auto os = open_output(path);
  os << "x1,x2,value\n";
  char buf[96];
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.coord(i), grid.coord(j), f(i, j));
      os << buf;
    }
  }
  if (!os) throw IoError(path.string() + ": write failed");
}

}  // namespace strato::io
