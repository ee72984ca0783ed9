#include "einsvd/eten_io.hpp"

#include <cmath>
#include <fstream>

#include "binary_io.hpp"

namespace einsvd {

namespace {

constexpr char kMagic[4] = {'E', 'T', 'E', 'N'};
constexpr std::uint8_t kVersion = 0x01;
// Sanity bound on the element count of a file we are willing to load.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 40;

} // namespace

void write_eten(const std::filesystem::path& path, const DenseTensor& t) {
    if (t.order() == 0 || t.order() > 255)
        throw io_error("write_eten: tensor order " + std::to_string(t.order()) +
                       " not representable");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("write_eten: cannot open " + path.string());
    os.write(kMagic, 4);
    detail::put_u8(os, kVersion);
    detail::put_u8(os, static_cast<std::uint8_t>(t.order()));
    for (std::size_t e : t.shape().extents()) detail::put_u64(os, e);
    for (double x : t.data()) detail::put_f64(os, x);
    if (!os) throw io_error("write_eten: write failed for " + path.string());
}

DenseTensor read_eten(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_eten: cannot open " + path.string());

    char magic[4];
    if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
        throw io_error("read_eten: " + path.string() + " is not a tensor container (bad magic)");
    if (detail::get_u8(is, "version") != kVersion)
        throw io_error("read_eten: unsupported format version in " + path.string());
    const std::uint8_t order = detail::get_u8(is, "order");
    if (order == 0)
        throw io_error("read_eten: zero tensor order in " + path.string());

    std::vector<std::size_t> extents(order);
    std::uint64_t count = 1;
    for (std::uint8_t i = 0; i < order; ++i) {
        const std::uint64_t e = detail::get_u64(is, "extent");
        if (e == 0)
            throw io_error("read_eten: zero extent in " + path.string());
        if (e > kMaxElements / count)
            throw io_error("read_eten: element count overflows the supported range in " +
                           path.string());
        count *= e;
        extents[i] = static_cast<std::size_t>(e);
    }

    std::vector<double> data(static_cast<std::size_t>(count));
    for (double& x : data) {
        x = detail::get_f64(is, "element");
        if (!std::isfinite(x))
            throw io_error("read_eten: non-finite element in " + path.string());
    }
    if (is.get() != EOF)
        throw io_error("read_eten: trailing bytes after payload in " + path.string());
    return DenseTensor(Shape(std::move(extents)), std::move(data));
}

} // namespace einsvd
