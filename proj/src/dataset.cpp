#include "sqn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "sqn/errors.hpp"
#include "sqn/rng.hpp"

namespace sqn {

namespace {

constexpr std::uint32_t idx_images_magic = 0x00000803;  // 2051
constexpr std::uint32_t idx_labels_magic = 0x00000801;  // 2049

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return bytes;
}

std::uint32_t read_u32_be(const std::vector<unsigned char>& bytes, std::size_t offset,
                          const std::string& path) {
    if (offset + 4 > bytes.size()) {
        throw FormatError(path + ": truncated, need 4 bytes at offset " + std::to_string(offset) +
                          " but file has " + std::to_string(bytes.size()));
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(std::uint32_t found, std::uint32_t expected, const std::string& path) {
    if (found != expected) {
        throw FormatError(path + ": bad magic at offset 0, expected " + std::to_string(expected) +
                          ", found " + std::to_string(found));
    }
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                    static_cast<unsigned char>(v >> 16),
                                    static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

IdxImages load_idx_images(const std::string& path) {
    const auto bytes = read_file(path);
    check_magic(read_u32_be(bytes, 0, path), idx_images_magic, path);
    IdxImages img;
    img.count = read_u32_be(bytes, 4, path);
    img.rows = read_u32_be(bytes, 8, path);
    img.cols = read_u32_be(bytes, 12, path);
    const std::size_t expected = img.count * img.rows * img.cols;
    if (bytes.size() != 16 + expected) {
        throw FormatError(path + ": truncated, expected " + std::to_string(expected) +
                          " pixel bytes at offset 16, file holds " +
                          std::to_string(bytes.size() - 16));
    }
    img.pixels.resize(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        img.pixels[i] = static_cast<double>(bytes[16 + i]) / 255.0;
    }
    return img;
}

std::vector<int> load_idx_labels(const std::string& path) {
    const auto bytes = read_file(path);
    check_magic(read_u32_be(bytes, 0, path), idx_labels_magic, path);
    const std::size_t count = read_u32_be(bytes, 4, path);
    if (bytes.size() != 8 + count) {
        throw FormatError(path + ": truncated, expected " + std::to_string(count) +
                          " label bytes at offset 8, file holds " + std::to_string(bytes.size() - 8));
    }
    std::vector<int> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = bytes[8 + i];
    return labels;
}

void save_idx_images(const std::string& path, std::size_t count, std::size_t rows,
                     std::size_t cols, std::span<const double> pixels) {
    if (pixels.size() != count * rows * cols) {
        throw InvalidInputError("save_idx_images: pixel count does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_u32_be(out, idx_images_magic);
    write_u32_be(out, static_cast<std::uint32_t>(count));
    write_u32_be(out, static_cast<std::uint32_t>(rows));
    write_u32_be(out, static_cast<std::uint32_t>(cols));
    std::vector<unsigned char> bytes(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double v = std::clamp(pixels[i], 0.0, 1.0);
        bytes[i] = static_cast<unsigned char>(std::llround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on '" + path + "'");
}

void save_idx_labels(const std::string& path, std::span<const int> labels) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_u32_be(out, idx_labels_magic);
    write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    for (int label : labels) {
        if (label < 0 || label > 255) throw InvalidInputError("save_idx_labels: label out of byte range");
        const unsigned char b = static_cast<unsigned char>(label);
        out.write(reinterpret_cast<const char*>(&b), 1);
    }
    if (!out) throw IoError("write failure on '" + path + "'");
}

Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path) {
    IdxImages img = load_idx_images(images_path);
    std::vector<int> labels = load_idx_labels(labels_path);
    if (img.count != labels.size()) {
        throw FormatError("paired IDX files disagree: " + images_path + " holds " +
                          std::to_string(img.count) + " images, " + labels_path + " holds " +
                          std::to_string(labels.size()) + " labels");
    }
    Dataset data;
    data.n = img.count;
    data.d = img.rows * img.cols;
    data.features = std::move(img.pixels);
    data.labels = std::move(labels);
    int max_label = -1;
    for (int label : data.labels) max_label = std::max(max_label, label);
    data.num_classes = static_cast<std::size_t>(max_label + 1);
    return data;
}

Dataset synthetic_blobs(std::size_t n_per_class, std::size_t num_classes, std::size_t d,
                        double separation, std::uint64_t seed) {
    if (d < 1) throw InvalidInputError("synthetic_blobs: dimension must be >= 1");
    if (n_per_class < 1 || num_classes < 1) {
        throw InvalidInputError("synthetic_blobs: counts must be positive");
    }
    Rng rng(mix_seed(seed, 0xb10b5ull));
    std::vector<double> centers(num_classes * d);
    for (double& v : centers) v = separation * rng.normal();

    Dataset data;
    data.n = n_per_class * num_classes;
    data.d = d;
    data.num_classes = num_classes;
    data.features.resize(data.n * d);
    data.labels.resize(data.n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
            data.labels[row] = static_cast<int>(c);
            for (std::size_t j = 0; j < d; ++j) {
                data.features[row * d + j] = centers[c * d + j] + rng.normal();
            }
        }
    }
    return data;
}

namespace {

// Integer largest-remainder split of `total` proportional to weights.
std::vector<std::size_t> proportional_alloc(const std::vector<std::size_t>& weights,
                                            std::size_t weight_sum, std::size_t total) {
    const std::size_t k = weights.size();
    std::vector<std::size_t> alloc(k, 0);
    if (weight_sum == 0 || total == 0) return alloc;
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, class)
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        alloc[c] = total * weights[c] / weight_sum;
        assigned += alloc[c];
        remainders.emplace_back(total * weights[c] % weight_sum, c);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) {
        alloc[remainders[i].second] += 1;
    }
    return alloc;
}

Dataset gather_rows(const Dataset& src, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.n = rows.size();
    out.d = src.d;
    out.num_classes = src.num_classes;
    out.features.resize(out.n * out.d);
    out.labels.resize(out.n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = src.row(rows[i]);
        std::copy(r.begin(), r.end(), out.features.begin() + static_cast<std::ptrdiff_t>(i * out.d));
        out.labels[i] = src.labels[rows[i]];
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> subset(const Dataset& data, std::size_t n_train, std::size_t n_test,
                                   std::uint64_t seed) {
    if (n_train + n_test > data.n) {
        throw InvalidInputError("subset: requested " + std::to_string(n_train + n_test) +
                                " rows from a dataset of " + std::to_string(data.n));
    }
    const std::size_t k = std::max<std::size_t>(data.num_classes, 1);
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < data.n; ++i) {
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }
    std::vector<std::size_t> counts(k);
    for (std::size_t c = 0; c < k; ++c) {
        counts[c] = by_class[c].size();
        Rng rng(mix_seed(seed, c));
        rng.shuffle(by_class[c]);
    }

    const auto train_alloc = proportional_alloc(counts, data.n, n_train);
    std::vector<std::size_t> remaining(k);
    for (std::size_t c = 0; c < k; ++c) remaining[c] = counts[c] - train_alloc[c];
    const auto test_alloc = proportional_alloc(remaining, data.n - n_train, n_test);

    std::vector<std::size_t> train_rows, test_rows;
    train_rows.reserve(n_train);
    test_rows.reserve(n_test);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < train_alloc[c]; ++i) train_rows.push_back(by_class[c][i]);
        for (std::size_t i = 0; i < test_alloc[c]; ++i) {
            test_rows.push_back(by_class[c][train_alloc[c] + i]);
        }
    }
    return {gather_rows(data, train_rows), gather_rows(data, test_rows)};
}

namespace {

// 5x7 glyph bitmaps for the ten digit classes.
constexpr const char* digit_glyphs[10][7] = {
    {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "},
    {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "},
    {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"},
    {" ### ", "#   #", "    #", " ### ", "    #", "#   #", " ### "},
    {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "},
    {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "},
    {" ### ", "#    ", "#    ", "#### ", "#   #", "#   #", " ### "},
    {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "},
    {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "},
    {" ### ", "#   #", "#   #", " ####", "    #", "    #", " ### "},
};

constexpr std::size_t digit_side = 28;
constexpr std::size_t glyph_scale = 3;
constexpr double digit_noise_sigma = 0.22;
constexpr double digit_dropout = 0.10;

}  // namespace

Dataset synthetic_digits(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidInputError("synthetic_digits: count must be positive");
    Dataset data;
    data.n = n;
    data.d = digit_side * digit_side;
    data.num_classes = 10;
    data.features.assign(n * data.d, 0.0);
    data.labels.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 10);
        data.labels[i] = label;
        Rng rng(mix_seed(seed, i));  // per-sample stream, prefix-stable in n
        const long dx = static_cast<long>(rng.below(7)) - 3;
        const long dy = static_cast<long>(rng.below(7)) - 3;
        const double intensity = rng.uniform(0.55, 1.0);

        double* img = data.features.data() + i * data.d;
        for (std::size_t gr = 0; gr < 7; ++gr) {
            for (std::size_t gc = 0; gc < 5; ++gc) {
                if (digit_glyphs[label][gr][gc] != '#') continue;
                const bool dropped = rng.uniform01() < digit_dropout;
                const double value = intensity * rng.uniform(0.8, 1.0);
                if (dropped) continue;
                for (std::size_t sr = 0; sr < glyph_scale; ++sr) {
                    for (std::size_t sc = 0; sc < glyph_scale; ++sc) {
                        const long row = static_cast<long>(3 + gr * glyph_scale + sr) + dy;
                        const long col = static_cast<long>(6 + gc * glyph_scale + sc) + dx;
                        if (row < 0 || col < 0 || row >= static_cast<long>(digit_side) ||
                            col >= static_cast<long>(digit_side)) {
                            continue;
                        }
                        img[static_cast<std::size_t>(row) * digit_side +
                            static_cast<std::size_t>(col)] = value;
                    }
                }
            }
        }
        for (std::size_t p = 0; p < data.d; ++p) {
            const double noisy = std::clamp(img[p] + digit_noise_sigma * rng.normal(), 0.0, 1.0);
            img[p] = std::llround(noisy * 255.0) / 255.0;  // byte grid: IDX round-trips exactly
        }
    }
    return data;
}

}  // namespace sqn
