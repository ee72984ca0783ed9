#pragma once

#include <filesystem>

#include "einsvd/dense_tensor.hpp"

namespace einsvd {

/// Binary dense-tensor container, byte layout (all integers little-endian):
///
///   bytes 0..3   magic "ETEN"
///   byte  4      format version, 0x01
///   byte  5      order d (number of modes, >= 1)
///   next  8*d    extents as u64, one per mode
///   rest         elements as f64, first-index-fastest order
///
/// The writer emits exactly this layout; the reader rejects wrong magic or
/// version, zero extents, truncated or oversized payloads, and non-finite
/// element values.
void write_eten(const std::filesystem::path& path, const DenseTensor& t);
[[nodiscard]] DenseTensor read_eten(const std::filesystem::path& path);

} // namespace einsvd
