#include "csvx/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "csvx/error.hpp"

namespace csvx {

namespace {

constexpr char kMagic[5] = {'C', 'S', 'V', 'X', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::Parse, "truncated field dump");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  const TorusGrid& g = field.grid();
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n1()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n2()));
  put_le(os, g.lattice().e1().x);
  put_le(os, g.lattice().e1().y);
  put_le(os, g.lattice().e2().x);
  put_le(os, g.lattice().e2().y);
  for (double x : field.values()) put_le(os, x);
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

FieldDump read_field_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::Parse, path.string() + " is not a CSVX1 field dump");
  }
  FieldDump d;
  const auto n1 = get_le<std::uint32_t>(is);
  const auto n2 = get_le<std::uint32_t>(is);
  if (n1 == 0 || n2 == 0 || n1 > (1u << 16) || n2 > (1u << 16)) {
    throw Error(ErrorCode::Parse, "implausible grid size in " + path.string());
  }
  d.n1 = static_cast<int>(n1);
  d.n2 = static_cast<int>(n2);
  d.e1 = {get_le<double>(is), get_le<double>(is)};
  d.e2 = {get_le<double>(is), get_le<double>(is)};
  d.values.resize(static_cast<std::size_t>(n1) * n2);
  for (double& x : d.values) x = get_le<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::Parse, "trailing bytes in " + path.string());
  }
  return d;
}

ScalarField read_field(const std::filesystem::path& path, const GridPtr& grid) {
  FieldDump d = read_field_dump(path);
  const Vec2 e1 = grid->lattice().e1(), e2 = grid->lattice().e2();
  if (d.n1 != grid->n1() || d.n2 != grid->n2() || d.e1.x != e1.x || d.e1.y != e1.y ||
      d.e2.x != e2.x || d.e2.y != e2.y) {
    throw Error(ErrorCode::GridMismatch, path.string() + " was written on a different grid");
  }
  return ScalarField(grid, std::move(d.values));
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  const int n1 = field.grid().n1(), n2 = field.grid().n2();
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (j) os << ',';
      os << field.at(i, j);
    }
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace csvx
