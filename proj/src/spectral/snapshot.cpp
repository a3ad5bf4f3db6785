#include "egwp/spectral/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "egwp/spectral/operators.hpp"

namespace egwp::spectral {
namespace {

constexpr char kMagic[4] = {'E', 'G', 'W', 'P'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 1 + 8;

template <class U>
void put_le(std::vector<unsigned char>& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<unsigned char>(value >> (8 * b)));
}

template <class U>
U get_le(const unsigned char* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) value |= static_cast<U>(p[b]) << (8 * b);
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  const std::size_t expected = static_cast<std::size_t>(s.planes()) * s.n * s.n;
  if (s.samples.size() != expected) throw std::invalid_argument("write_snapshot: sample count does not match header");
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderBytes + 8 * expected);
  bytes.insert(bytes.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(bytes, kSnapshotVersion);
  put_le<std::uint32_t>(bytes, s.n);
  bytes.push_back(static_cast<unsigned char>(s.kind));
  put_le<std::uint64_t>(bytes, std::bit_cast<std::uint64_t>(s.time));
  for (double v : s.samples) put_le<std::uint64_t>(bytes, std::bit_cast<std::uint64_t>(v));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path.string());
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kSnapshotVersion)
    throw std::runtime_error("read_snapshot: unsupported version " + std::to_string(version));
  Snapshot s;
  s.n = get_le<std::uint32_t>(bytes.data() + 8);
  const unsigned kind = bytes[12];
  if (kind > static_cast<unsigned>(SnapshotKind::velocity))
    throw std::runtime_error("read_snapshot: unknown kind " + std::to_string(kind));
  s.kind = static_cast<SnapshotKind>(kind);
  s.time = std::bit_cast<double>(get_le<std::uint64_t>(bytes.data() + 13));
  const std::size_t count = static_cast<std::size_t>(s.planes()) * s.n * s.n;
  if (bytes.size() != kHeaderBytes + 8 * count)
    throw std::runtime_error("read_snapshot: truncated or oversized payload in " + path.string());
  s.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    s.samples[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes.data() + kHeaderBytes + 8 * i));
  return s;
}

Snapshot make_snapshot(const SpectralScalar& f, SnapshotKind kind, double time) {
  if (kind == SnapshotKind::velocity) throw std::invalid_argument("make_snapshot: scalar field with velocity kind");
  const PhysicalScalar g = to_physical(f);
  return {static_cast<std::uint32_t>(f.grid().size()), kind, time, {g.samples().begin(), g.samples().end()}};
}

Snapshot make_snapshot(const SpectralVector& u, double time) {
  Snapshot s{static_cast<std::uint32_t>(u.grid().size()), SnapshotKind::velocity, time, {}};
  for (int c = 0; c < 2; ++c) {
    const PhysicalScalar g = to_physical(u[c]);
    s.samples.insert(s.samples.end(), g.samples().begin(), g.samples().end());
  }
  return s;
}

SpectralScalar scalar_from_snapshot(const Snapshot& s) {
  if (s.kind == SnapshotKind::velocity) throw std::invalid_argument("scalar_from_snapshot: velocity snapshot");
  const FourierGrid grid(static_cast<int>(s.n));
  return to_spectral(PhysicalScalar(grid, s.samples));
}

SpectralVector vector_from_snapshot(const Snapshot& s) {
  if (s.kind != SnapshotKind::velocity) throw std::invalid_argument("vector_from_snapshot: not a velocity snapshot");
  const FourierGrid grid(static_cast<int>(s.n));
  const auto half = static_cast<std::ptrdiff_t>(grid.points());
  std::vector<double> a(s.samples.begin(), s.samples.begin() + half);
  std::vector<double> b(s.samples.begin() + half, s.samples.end());
  return SpectralVector(to_spectral(PhysicalScalar(grid, std::move(a))), to_spectral(PhysicalScalar(grid, std::move(b))));
}

}  // namespace egwp::spectral
