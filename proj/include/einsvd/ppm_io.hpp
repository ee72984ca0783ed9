#pragma once

#include <filesystem>

#include "einsvd/dense_tensor.hpp"

namespace einsvd {

/// Read a binary PPM (P6, maxval 255) into an order-3 tensor shaped
/// (rows, cols, 3) with channel values scaled to [0, 1].  Header comments
/// (`#` to end of line) are accepted; other maxvals are rejected.
[[nodiscard]] DenseTensor read_ppm(const std::filesystem::path& path);

/// Write an order-3 (rows, cols, 3) tensor as a binary PPM.  Values are
/// clamped to [0, 1] and rounded to the nearest of 256 levels.
void write_ppm(const std::filesystem::path& path, const DenseTensor& image);

/// Load every *.ppm file in a directory, sorted by filename, into an
/// order-4 tensor shaped (rows, cols, 3, frames).  Frames must agree in
/// size; an empty directory is an error.
[[nodiscard]] DenseTensor read_video_frames(const std::filesystem::path& dir);

} // namespace einsvd
