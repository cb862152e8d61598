#pragma once

// CSVX1 binary field dumps: the 5-byte magic "CSVX1", n1 and n2 as
// little-endian uint32, the lattice vectors e1, e2 as four little-endian
// doubles, then n1*n2 row-major little-endian doubles.

#include <filesystem>
#include <vector>

#include "csvx/torus.hpp"

namespace csvx {

struct FieldDump {
  Vec2 e1, e2;
  int n1 = 0, n2 = 0;
  std::vector<double> values;
};

/// Throws Error(Io) on write failure.
void write_field(const std::filesystem::path& path, const ScalarField& field);

/// Throws Error(Io) if unreadable, Error(Parse) on a malformed file.
FieldDump read_field_dump(const std::filesystem::path& path);

/// Reads a dump and binds it to `grid`; Error(GridMismatch) if the stored
/// dimensions or lattice differ.
ScalarField read_field(const std::filesystem::path& path, const GridPtr& grid);

/// Plain text, one row of the n1 x n2 array per line.
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

}  // namespace csvx
