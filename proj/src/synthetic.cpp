#include "einsvd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "einsvd/prng.hpp"

namespace einsvd {

namespace {

constexpr std::size_t kWaves = 6;

struct Wave {
    double amp, fr, fc, ft, phase;
};

// A smooth field as a sum of seeded low-frequency cosines.  Frequencies are
// small integers so neighbouring pixels stay correlated, which is what makes
// a handful of singular values carry most of the energy.
std::vector<Wave> draw_waves(Xorshift64Star& rng, bool temporal) {
    std::vector<Wave> waves(kWaves);
    for (Wave& w : waves) {
        w.amp = 0.06 + 0.14 * rng.next_uniform();
        w.fr = 1.0 + std::floor(3.0 * rng.next_uniform());
        w.fc = 1.0 + std::floor(3.0 * rng.next_uniform());
        w.ft = temporal ? 1.0 + std::floor(2.0 * rng.next_uniform()) : 0.0;
        w.phase = 2.0 * std::numbers::pi * rng.next_uniform();
    }
    return waves;
}

double field_value(const std::vector<Wave>& waves, double r, double c, double t,
                   double channel_shift) {
    double v = 0.5;
    for (const Wave& w : waves)
        v += w.amp * std::cos(2.0 * std::numbers::pi * (w.fr * r + w.fc * c + w.ft * t) +
                              w.phase + channel_shift);
    return v;
}

} // namespace

LabeledImages make_synthetic_faces(std::size_t classes, std::size_t per_class, std::size_t rows,
                                   std::size_t cols, std::uint64_t seed, double noise) {
    if (classes == 0 || per_class == 0 || rows == 0 || cols == 0)
        throw precondition_error("make_synthetic_faces: all sizes must be positive");
    LabeledImages set;
    set.rows = rows;
    set.cols = cols;
    set.channels = 3;
    Xorshift64Star rng(seed);
    for (std::size_t cls = 0; cls < classes; ++cls) {
        const std::vector<Wave> waves = draw_waves(rng, false);
        std::string label = "class_";
        label += static_cast<char>('0' + (cls + 1) / 10);
        label += static_cast<char>('0' + (cls + 1) % 10);
        for (std::size_t s = 0; s < per_class; ++s) {
            DenseTensor img(Shape{rows, cols, 3});
            std::span<double> d = img.data();
            for (std::size_t ch = 0; ch < 3; ++ch) {
                const double shift = 0.7 * static_cast<double>(ch);
                for (std::size_t c = 0; c < cols; ++c)
                    for (std::size_t r = 0; r < rows; ++r) {
                        const double base =
                            field_value(waves, static_cast<double>(r) / static_cast<double>(rows),
                                        static_cast<double>(c) / static_cast<double>(cols), 0.0,
                                        shift);
                        const double v = base + noise * rng.next_normal();
                        d[r + rows * (c + cols * ch)] = std::clamp(v, 0.0, 1.0);
                    }
            }
            set.images.push_back(std::move(img));
            set.labels.push_back(label);
        }
    }
    return set;
}

DenseTensor make_synthetic_video(std::size_t rows, std::size_t cols, std::size_t frames,
                                 std::uint64_t seed, double noise) {
    if (rows == 0 || cols == 0 || frames == 0)
        throw precondition_error("make_synthetic_video: all sizes must be positive");
    Xorshift64Star rng(seed);
    const std::vector<Wave> waves = draw_waves(rng, true);
    DenseTensor video(Shape{rows, cols, 3, frames});
    std::span<double> d = video.data();
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t ch = 0; ch < 3; ++ch) {
            const double shift = 0.7 * static_cast<double>(ch);
            for (std::size_t c = 0; c < cols; ++c)
                for (std::size_t r = 0; r < rows; ++r) {
                    const double base =
                        field_value(waves, static_cast<double>(r) / static_cast<double>(rows),
                                    static_cast<double>(c) / static_cast<double>(cols),
                                    static_cast<double>(t) / static_cast<double>(frames), shift);
                    const double v = base + noise * rng.next_normal();
                    d[r + rows * (c + cols * (ch + 3 * t))] = std::clamp(v, 0.0, 1.0);
                }
        }
    return video;
}

} // namespace einsvd
