#include "einsvd/ppm_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace einsvd {

namespace {

// Next header token, skipping whitespace and `#` comments.
std::string header_token(std::istream& is, const std::filesystem::path& path) {
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF)
        throw io_error("read_ppm: truncated header in " + path.string());
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = is.get();
    }
    return tok;
}

std::size_t header_number(std::istream& is, const std::filesystem::path& path,
                          const char* what) {
    const std::string tok = header_token(is, path);
    std::size_t value = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw io_error("read_ppm: malformed " + std::string(what) + " in " + path.string());
        value = value * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (tok.empty() || value == 0)
        throw io_error("read_ppm: malformed " + std::string(what) + " in " + path.string());
    return value;
}

} // namespace

DenseTensor read_ppm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_ppm: cannot open " + path.string());

    if (header_token(is, path) != "P6")
        throw io_error("read_ppm: " + path.string() + " is not a binary PPM (P6)");
    const std::size_t cols = header_number(is, path, "width");
    const std::size_t rows = header_number(is, path, "height");
    const std::size_t maxval = header_number(is, path, "maxval");
    if (maxval != 255)
        throw io_error("read_ppm: unsupported maxval " + std::to_string(maxval) + " in " +
                       path.string() + " (only 255 is handled)");
    // The single whitespace byte separating header and payload was consumed
    // by the maxval token scan.

    std::vector<char> raw(rows * cols * 3);
    if (!is.read(raw.data(), static_cast<std::streamsize>(raw.size())))
        throw io_error("read_ppm: truncated pixel data in " + path.string());

    // File order: rows top-to-bottom, pixels left-to-right, channels
    // interleaved.  Tensor order: (row, col, channel), first index fastest.
    DenseTensor image(Shape{rows, cols, 3});
    std::span<double> dst = image.data();
    std::size_t src = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t ch = 0; ch < 3; ++ch)
                dst[r + rows * (c + cols * ch)] =
                    static_cast<double>(static_cast<unsigned char>(raw[src++])) / 255.0;
    return image;
}

void write_ppm(const std::filesystem::path& path, const DenseTensor& image) {
    if (image.order() != 3 || image.shape().extent(3) != 3)
        throw shape_error("write_ppm: image must be shaped (rows, cols, 3), got " +
                          image.shape().to_string());
    const std::size_t rows = image.shape().extent(1);
    const std::size_t cols = image.shape().extent(2);

    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("write_ppm: cannot open " + path.string());
    os << "P6\n" << cols << " " << rows << "\n255\n";

    std::span<const double> src = image.data();
    std::vector<char> raw(rows * cols * 3);
    std::size_t dst = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t ch = 0; ch < 3; ++ch) {
                const double v = std::clamp(src[r + rows * (c + cols * ch)], 0.0, 1.0);
                raw[dst++] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
            }
    os.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!os) throw io_error("write_ppm: write failed for " + path.string());
}

DenseTensor read_video_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw io_error("read_video_frames: " + dir.string() + " is not a directory");
    std::vector<std::filesystem::path> frames;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            frames.push_back(entry.path());
    if (frames.empty())
        throw io_error("read_video_frames: no .ppm frames in " + dir.string());
    std::sort(frames.begin(), frames.end());

    DenseTensor first = read_ppm(frames[0]);
    const Shape frame_shape = first.shape();
    DenseTensor video(frame_shape.concat(Shape{frames.size()}));
    std::span<double> dst = video.data();
    const std::size_t stride = first.element_count();
    std::copy(first.data().begin(), first.data().end(), dst.begin());
    for (std::size_t t = 1; t < frames.size(); ++t) {
        DenseTensor frame = read_ppm(frames[t]);
        if (frame.shape() != frame_shape)
            throw io_error("read_video_frames: frame " + frames[t].string() + " is " +
                           frame.shape().to_string() + " but earlier frames are " +
                           frame_shape.to_string());
        std::copy(frame.data().begin(), frame.data().end(), dst.begin() + t * stride);
    }
    return video;
}

} // namespace einsvd
