#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqn/vec_ops.hpp"

namespace sqn {

/// In-memory classification dataset. Features are 64-bit floats (byte-valued
/// sources are scaled by 1/255 on load); immutable once built and freely
/// shareable.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t num_classes = 0;
    std::vector<double> features;  // n x d, row-major
    std::vector<int> labels;       // values in [0, num_classes)

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(features).subspan(i * d, d);
    }
};

/// Decoded IDX image file: count x (rows * cols) pixels scaled into [0, 1].
struct IdxImages {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;
};

// IDX readers/writers (big-endian container used by the MNIST distribution;
// files must be uncompressed). Bad magic numbers and truncation raise
// FormatError naming the offset; unreadable paths raise IoError.
IdxImages load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);
void save_idx_images(const std::string& path, std::size_t count, std::size_t rows,
                     std::size_t cols, std::span<const double> pixels);
void save_idx_labels(const std::string& path, std::span<const int> labels);

/// Loads a paired images/labels file into a Dataset; the two counts must
/// agree (consistency error otherwise). num_classes = max label + 1.
Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path);

/// Unit-variance Gaussian blobs around separation-scaled random centers,
/// deterministic for a fixed seed. Samples are class-major.
Dataset synthetic_blobs(std::size_t n_per_class, std::size_t num_classes, std::size_t d,
                        double separation, std::uint64_t seed);

/// Disjoint stratified (train, test) samples of a dataset, proportional per
/// class, deterministic for a fixed seed.
std::pair<Dataset, Dataset> subset(const Dataset& data, std::size_t n_train, std::size_t n_test,
                                   std::uint64_t seed);

/// Procedurally rendered digit corpus: 28x28 glyphs for classes 0-9 with
/// seeded shifts, contrast jitter, pixel dropout, and Gaussian noise,
/// byte-quantized so IDX round-trips are exact. Stands in for handwritten
/// digits wherever real MNIST files are not available.
Dataset synthetic_digits(std::size_t n, std::uint64_t seed);

}  // namespace sqn
