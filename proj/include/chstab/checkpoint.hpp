#pragma once

#include "chstab/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace chstab {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout: the 8 bytes "CHSEED1\0", little-endian u64 nx, u64 ny,
/// f64 t, then nx * ny f64 values in row-major order.
struct Checkpoint {
  std::uint64_t nx = 0;
  std::uint64_t ny = 0;
  double t = 0.0;
  std::vector<double> values;
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
void write_checkpoint(const std::filesystem::path& path, const Field& u, double t);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Field on a square grid of side `length`; throws CheckpointError if nx != ny.
Field to_field(const Checkpoint& c, double length);

}  // namespace chstab
