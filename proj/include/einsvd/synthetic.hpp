#pragma once

#include <cstdint>

#include "einsvd/pca.hpp"

namespace einsvd {

/// Deterministic synthetic recognition dataset: `classes` smooth random
/// prototype images (sums of a few seeded low-frequency waves per channel),
/// each sampled `per_class` times with additive Gaussian pixel noise and
/// clamped to [0, 1].  Labels are "class_01", "class_02", ...  The same
/// seed always produces the same byte-for-byte dataset.
[[nodiscard]] LabeledImages make_synthetic_faces(std::size_t classes, std::size_t per_class,
                                                 std::size_t rows, std::size_t cols,
                                                 std::uint64_t seed, double noise = 0.05);

/// Deterministic synthetic clip shaped (rows, cols, 3, frames): a few seeded
/// waves moving smoothly through space and time plus a little pixel noise,
/// clamped to [0, 1].  The spectrum decays quickly but never hits zero, so
/// truncation experiments have something to measure at every rank.
[[nodiscard]] DenseTensor make_synthetic_video(std::size_t rows, std::size_t cols,
                                               std::size_t frames, std::uint64_t seed,
                                               double noise = 0.01);

} // namespace einsvd
