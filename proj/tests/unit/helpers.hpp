#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qpc/codebook.hpp"
#include "qpc/image.hpp"

namespace qpc::test {

inline std::filesystem::path data_dir() {
    return std::filesystem::path(QPC_TEST_DATA_DIR);
}

// Fresh empty directory under the system temp root.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("qpc_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline RasterImage random_image(std::mt19937& rng, uint32_t w, uint32_t h,
                                uint32_t c, int lo = 0, int hi = 255) {
    RasterImage img = RasterImage::create(w, h, c);
    std::uniform_int_distribution<int> dist(lo, hi);
    for (auto& s : img.samples) s = static_cast<uint8_t>(dist(rng));
    return img;
}

// Arbitrary embeddable text: printable characters, spaces, newlines and
// paragraph breaks. Already in normal form by construction.
inline std::string random_normalized_text(std::mt19937& rng, size_t approx_len) {
    std::string s;
    std::uniform_int_distribution<int> kind(0, 99);
    std::uniform_int_distribution<int> printable('!', '~');
    while (s.size() < approx_len) {
        int k = kind(rng);
        if (k < 70)
            s += static_cast<char>(printable(rng));
        else if (k < 85)
            s += ' ';
        else if (k < 93)
            s += '\n';
        else
            s += "\n\n";
    }
    return s;
}

inline std::vector<Symbol> random_symbols(std::mt19937& rng, size_t count) {
    std::vector<Symbol> out;
    out.reserve(count);
    std::uniform_int_distribution<int> idx(0, kAlphabetSize - 2);  // no terminator
    for (size_t i = 0; i < count; ++i)
        out.push_back(Symbol::from_index(idx(rng)));
    return out;
}

} // namespace qpc::test
