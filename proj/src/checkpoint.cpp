#include "chstab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace chstab {

namespace {

constexpr char magic[8] = {'C', 'H', 'S', 'E', 'E', 'D', '1', '\0'};
constexpr std::size_t header_bytes = 8 + 8 + 8 + 8;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return out;
}

void put(std::vector<unsigned char>& out, std::uint64_t v) {
  v = to_little(v);
  unsigned char buf[8];
  std::memcpy(buf, &v, 8);
  out.insert(out.end(), buf, buf + 8);
}

std::uint64_t get(const std::vector<unsigned char>& in, std::size_t offset) {
  std::uint64_t v = 0;
  std::memcpy(&v, in.data() + offset, 8);
  return to_little(v);
}

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c) {
  if (c.values.size() != c.nx * c.ny) throw CheckpointError("checkpoint value count does not match nx * ny");
  std::vector<unsigned char> out(magic, magic + 8);
  out.reserve(header_bytes + 8 * c.values.size());
  put(out, c.nx);
  put(out, c.ny);
  put(out, std::bit_cast<std::uint64_t>(c.t));
  for (double v : c.values) put(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < header_bytes) throw CheckpointError("checkpoint truncated: header incomplete");
  if (std::memcmp(bytes.data(), magic, 8) != 0) throw CheckpointError("bad checkpoint magic");
  Checkpoint c;
  c.nx = get(bytes, 8);
  c.ny = get(bytes, 16);
  c.t = std::bit_cast<double>(get(bytes, 24));
  if (c.nx == 0 || c.ny == 0 || c.nx > (1u << 20) || c.ny > (1u << 20))
    throw CheckpointError("implausible checkpoint dimensions");
  const std::uint64_t count = c.nx * c.ny;
  if (bytes.size() != header_bytes + 8 * count)
    throw CheckpointError("checkpoint size " + std::to_string(bytes.size()) + " does not match " +
                          std::to_string(c.nx) + " x " + std::to_string(c.ny) + " values");
  c.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) c.values[i] = std::bit_cast<double>(get(bytes, header_bytes + 8 * i));
  return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  const auto bytes = encode_checkpoint(c);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed for " + path.string());
}

void write_checkpoint(const std::filesystem::path& path, const Field& u, double t) {
  Checkpoint c;
  c.nx = c.ny = u.grid().n();
  c.t = t;
  c.values.assign(u.values().begin(), u.values().end());
  write_checkpoint(path, c);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

Field to_field(const Checkpoint& c, double length) {
  if (c.nx != c.ny) throw CheckpointError("only square checkpoints can be loaded onto the solver grid");
  return Field(Grid2D::make(c.nx, length), c.values);
}

}  // namespace chstab
