#pragma once

// Binary checkpoint of a FlowState.
//
// Layout (little-endian): "LCSM", u32 version, u32 nx, u32 ny, f64 t,
// f64 shear_time, then w, d1, d2, d3 as interleaved (re, im) f64 pairs,
// row-major over (k-index, xi-index). Box sizes are not stored; the caller
// supplies them.

#include <cstdint>
#include <string>

#include "flow_model.hpp"

namespace lcsim {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Writes to a temporary file and renames it over path. Throws IoError.
void save_checkpoint(const FlowState& s, const std::string& path);

// Throws FormatError on bad magic, unknown version, size mismatch with grid or
// truncation, IoError if the file cannot be read.
FlowState load_checkpoint(const std::string& path, const Grid& grid);

struct CheckpointHeader {
  std::uint32_t version = 0;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double t = 0.0;
  double shear_time = 0.0;
};

CheckpointHeader read_checkpoint_header(const std::string& path);

}  // namespace lcsim
