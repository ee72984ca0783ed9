#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "einsvd/solvers.hpp"

namespace einsvd {

/// A flat list of (rows, cols, channels) images with one label each.
struct LabeledImages {
    std::vector<DenseTensor> images;
    std::vector<std::string> labels;  // parallel to images
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t channels = 0;

    [[nodiscard]] std::size_t size() const { return images.size(); }
};

/// Load a dataset laid out as <root>/<label>/<image>.ppm.  Labels and images
/// within each label are taken in lexicographic filename order, so the
/// sample order is reproducible.
[[nodiscard]] LabeledImages load_image_dataset(const std::filesystem::path& root);

/// Write a dataset back out in the same layout (frame_0001.ppm, ... within
/// each label directory).  Used to materialize synthetic sets for the CLI.
void write_image_dataset(const std::filesystem::path& root, const LabeledImages& set);

/// Trained subspace model for nearest-neighbor recognition.  Each image is
/// reshaped to a (rows*cols, channels) slice; the model keeps the training
/// mean, the k leading left singular tensors of the mean-centered training
/// stack as the projector, and the projected training samples.
struct PcaModel {
    std::size_t rows = 0, cols = 0, channels = 0, k = 0;
    DenseTensor mean;        // (rows*cols, channels)
    TensorStack projector;   // k slices shaped (rows*cols, channels)
    DenseMatrix projected;   // k x n_train, column j = features of sample j
    std::vector<std::string> labels;  // n_train entries
    bool converged = true;
    std::size_t iterations = 0;
};

/// Train on the given images: center the reshaped samples, stack them into a
/// (rows*cols, channels, n) split tensor with two row modes, and keep the k
/// leading left singular tensors.  k must not exceed min(rows*cols*channels, n).
[[nodiscard]] PcaModel pca_train(const LabeledImages& training, std::size_t k, Method method,
                                 const SolverParams& params);

struct QueryResult {
    std::string label;      // label of the nearest training sample
    double distance = 0.0;  // Euclidean distance in feature space
    std::size_t train_index = 0;  // 1-based position of that sample
};

/// Project a query image and return its nearest training sample by feature
/// distance (ties broken toward the lower index).
[[nodiscard]] QueryResult pca_query(const PcaModel& model, const DenseTensor& image);

struct RecognitionStats {
    std::size_t tested = 0;
    std::size_t recognized = 0;
    double rate = 0.0;  // percent
};

/// Query every test image and count label matches.
[[nodiscard]] RecognitionStats identification_rate(const PcaModel& model,
                                                   const LabeledImages& tests);

/// Binary model container (magic "EPCA", version 0x01, little-endian
/// integers and doubles).  The reader validates magic, version, element
/// counts, and finiteness.
void save_model(const std::filesystem::path& path, const PcaModel& model);
[[nodiscard]] PcaModel load_model(const std::filesystem::path& path);

} // namespace einsvd
