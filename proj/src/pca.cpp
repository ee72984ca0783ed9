#include "einsvd/pca.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "einsvd/ppm_io.hpp"

namespace einsvd {

namespace {

constexpr char kMagic[4] = {'E', 'P', 'C', 'A'};
constexpr std::uint8_t kVersion = 0x01;

// (rows, cols, channels) image flattened to a (rows*cols, channels) slice.
// Storage order is untouched, so this is a pure reshape.
DenseTensor to_slice(const DenseTensor& image) {
    const Shape& s = image.shape();
    return image.reshaped(Shape{s.extent(1) * s.extent(2), s.extent(3)});
}

void require_image(const PcaModel& model, const DenseTensor& image) {
    const Shape expect{model.rows, model.cols, model.channels};
    if (image.shape() != expect)
        throw shape_error("pca_query: image shaped " + image.shape().to_string() +
                          " does not match the model's " + expect.to_string());
}

} // namespace

LabeledImages load_image_dataset(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw io_error("load_image_dataset: " + root.string() + " is not a directory");

    std::vector<std::filesystem::path> label_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root))
        if (entry.is_directory()) label_dirs.push_back(entry.path());
    if (label_dirs.empty())
        throw io_error("load_image_dataset: no label directories under " + root.string());
    std::sort(label_dirs.begin(), label_dirs.end());

    LabeledImages set;
    for (const auto& dir : label_dirs) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".ppm")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            DenseTensor img = read_ppm(file);
            if (set.images.empty()) {
                set.rows = img.shape().extent(1);
                set.cols = img.shape().extent(2);
                set.channels = img.shape().extent(3);
            } else if (img.shape() != Shape{set.rows, set.cols, set.channels}) {
                throw io_error("load_image_dataset: " + file.string() + " is " +
                               img.shape().to_string() + " but earlier images are " +
                               Shape{set.rows, set.cols, set.channels}.to_string());
            }
            set.images.push_back(std::move(img));
            set.labels.push_back(dir.filename().string());
        }
    }
    if (set.images.empty())
        throw io_error("load_image_dataset: no .ppm images under " + root.string());
    return set;
}

void write_image_dataset(const std::filesystem::path& root, const LabeledImages& set) {
    std::filesystem::create_directories(root);
    std::size_t serial = 0;
    std::string prev;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set.labels[i] != prev) {
            prev = set.labels[i];
            serial = 0;
            std::filesystem::create_directories(root / prev);
        }
        ++serial;
        char name[32];
        std::snprintf(name, sizeof name, "img_%04zu.ppm", serial);
        write_ppm(root / prev / name, set.images[i]);
    }
}

PcaModel pca_train(const LabeledImages& training, std::size_t k, Method method,
                   const SolverParams& params) {
    const std::size_t n = training.size();
    if (n == 0)
        throw precondition_error("pca_train: empty training set");
    const std::size_t pixels = training.rows * training.cols;
    if (k < 1 || k > std::min(pixels * training.channels, n))
        throw precondition_error("pca_train: k = " + std::to_string(k) +
                                 " outside [1, min(pixels*channels, samples) = " +
                                 std::to_string(std::min(pixels * training.channels, n)) + "]");

    PcaModel model;
    model.rows = training.rows;
    model.cols = training.cols;
    model.channels = training.channels;
    model.k = k;
    model.labels = training.labels;

    // Mean of the reshaped samples, then the mean-centered stack
    // (pixels, channels, n) treated with two row modes.
    model.mean = DenseTensor(Shape{pixels, training.channels});
    for (const DenseTensor& img : training.images) model.mean += to_slice(img);
    model.mean *= 1.0 / static_cast<double>(n);

    TensorStack centered(Shape{pixels, training.channels});
    for (const DenseTensor& img : training.images) {
        DenseTensor slice = to_slice(img);
        slice -= model.mean;
        centered.push(slice);
    }
    const SplitTensor stacked(centered.to_tensor(), 2);

    SolveSummary solve = top_triplets(stacked, k, method, params);
    model.converged = solve.converged;
    model.iterations = solve.iterations;
    model.projector = TensorStack(Shape{pixels, training.channels});
    for (const SingularTriplet& t : solve.triplets) model.projector.push(t.left);

    model.projected = DenseMatrix(k, n);
    for (std::size_t j = 1; j <= n; ++j) {
        const DenseTensor slice = centered.slice(j);
        for (std::size_t i = 1; i <= k; ++i)
            model.projected(i - 1, j - 1) = inner(model.projector.slice(i), slice);
    }
    return model;
}

QueryResult pca_query(const PcaModel& model, const DenseTensor& image) {
    require_image(model, image);
    DenseTensor slice = to_slice(image);
    slice -= model.mean;

    std::vector<double> feature(model.k);
    for (std::size_t i = 1; i <= model.k; ++i)
        feature[i - 1] = inner(model.projector.slice(i), slice);

    const std::size_t n = model.projected.cols();
    QueryResult best;
    double best_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < model.k; ++i) {
            const double d = feature[i] - model.projected(i, j);
            sq += d * d;
        }
        if (j == 0 || sq < best_sq) {
            best_sq = sq;
            best.train_index = j + 1;
        }
    }
    best.distance = std::sqrt(best_sq);
    best.label = model.labels[best.train_index - 1];
    return best;
}

RecognitionStats identification_rate(const PcaModel& model, const LabeledImages& tests) {
    RecognitionStats stats;
    stats.tested = tests.size();
    for (std::size_t i = 0; i < tests.size(); ++i)
        if (pca_query(model, tests.images[i]).label == tests.labels[i]) ++stats.recognized;
    stats.rate = stats.tested == 0
                     ? 0.0
                     : 100.0 * static_cast<double>(stats.recognized) /
                           static_cast<double>(stats.tested);
    return stats;
}

void save_model(const std::filesystem::path& path, const PcaModel& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("save_model: cannot open " + path.string());
    os.write(kMagic, 4);
    detail::put_u8(os, kVersion);
    detail::put_u64(os, model.rows);
    detail::put_u64(os, model.cols);
    detail::put_u64(os, model.channels);
    detail::put_u64(os, model.k);
    detail::put_u64(os, model.labels.size());
    detail::put_u8(os, model.converged ? 1 : 0);
    detail::put_u64(os, model.iterations);
    for (double x : model.mean.data()) detail::put_f64(os, x);
    for (std::size_t i = 1; i <= model.projector.size(); ++i)
        for (double x : model.projector.slice_data(i)) detail::put_f64(os, x);
    for (double x : model.projected.data()) detail::put_f64(os, x);
    for (const std::string& label : model.labels) {
        detail::put_u64(os, label.size());
        os.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    if (!os) throw io_error("save_model: write failed for " + path.string());
}

PcaModel load_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("load_model: cannot open " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
        throw io_error("load_model: " + path.string() + " is not a model file (bad magic)");
    if (detail::get_u8(is, "version") != kVersion)
        throw io_error("load_model: unsupported model version in " + path.string());

    PcaModel model;
    model.rows = detail::get_u64(is, "rows");
    model.cols = detail::get_u64(is, "cols");
    model.channels = detail::get_u64(is, "channels");
    model.k = detail::get_u64(is, "k");
    const std::size_t n = detail::get_u64(is, "sample count");
    if (model.rows == 0 || model.cols == 0 || model.channels == 0 || model.k == 0 || n == 0)
        throw io_error("load_model: zero dimension field in " + path.string());
    model.converged = detail::get_u8(is, "converged flag") != 0;
    model.iterations = detail::get_u64(is, "iterations");

    const std::size_t pixels = model.rows * model.cols;
    const auto read_block = [&](std::size_t count, const char* what) {
        std::vector<double> data(count);
        for (double& x : data) {
            x = detail::get_f64(is, what);
            if (!std::isfinite(x))
                throw io_error("load_model: non-finite value in " + path.string());
        }
        return data;
    };

    model.mean = DenseTensor(Shape{pixels, model.channels},
                             read_block(pixels * model.channels, "mean"));
    model.projector = TensorStack(Shape{pixels, model.channels});
    for (std::size_t i = 0; i < model.k; ++i)
        model.projector.push(DenseTensor(Shape{pixels, model.channels},
                                         read_block(pixels * model.channels, "projector")));
    model.projected = DenseMatrix(model.k, n, read_block(model.k * n, "features"));
    model.labels.resize(n);
    for (std::string& label : model.labels) {
        const std::uint64_t len = detail::get_u64(is, "label length");
        if (len > 4096) throw io_error("load_model: implausible label length in " + path.string());
        label.resize(len);
        if (!is.read(label.data(), static_cast<std::streamsize>(len)))
            throw io_error("load_model: truncated label in " + path.string());
    }
    if (is.get() != EOF)
        throw io_error("load_model: trailing bytes in " + path.string());
    return model;
}

} // namespace einsvd
