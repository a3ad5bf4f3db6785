#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "egwp/spectral/fields.hpp"

namespace egwp::spectral {

/// Binary field snapshot, little-endian:
///
///   offset  size  content
///   0       4     magic "EGWP"
///   4       4     version (u32, currently 1)
///   8       4     N (u32)
///   12      1     kind (u8, SnapshotKind)
///   13      8     time (f64)
///   21      ...   collocation samples, f64, row-major (i1 slowest)
///
/// Velocity snapshots carry two planes (first component, then second);
/// every other kind carries one plane of N*N samples.
enum class SnapshotKind : std::uint8_t {
  scalar = 0,
  vorticity = 1,
  passive_scalar = 2,
  pressure = 3,
  velocity = 4,
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  std::uint32_t n = 0;
  SnapshotKind kind = SnapshotKind::scalar;
  double time = 0.0;
  std::vector<double> samples;

  int planes() const { return kind == SnapshotKind::velocity ? 2 : 1; }
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
/// Throws std::runtime_error on a bad magic, unknown version or short file.
Snapshot read_snapshot(const std::filesystem::path& path);

Snapshot make_snapshot(const SpectralScalar& f, SnapshotKind kind, double time);
Snapshot make_snapshot(const SpectralVector& u, double time);

/// Rebuilds spectral fields from a snapshot.
SpectralScalar scalar_from_snapshot(const Snapshot& s);
SpectralVector vector_from_snapshot(const Snapshot& s);

}  // namespace egwp::spectral
