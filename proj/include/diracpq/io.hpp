#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "diracpq/common.hpp"

namespace diracpq {

// Shortest decimal representation that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Write-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("io: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("io: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

// CSV with a mandatory header row, LF line endings, shortest round-trip
// number formatting.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) body_ += ',';
            body_ += header[i];
        }
        body_ += '\n';
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) body_ += ',';
            body_ += format_double(values[i]);
        }
        body_ += '\n';
    }

    const std::string& str() const { return body_; }

private:
    std::string body_;
    std::size_t columns_;
};

// 8-bit binary PGM (P5) heatmap. Values are scaled linearly so that
// `scale` maps to 255; a zero scale produces an all-black image.
inline std::string pgm_image(const std::vector<double>& values, int width, int height,
                             double scale) {
    if (static_cast<std::size_t>(width) * height != values.size())
        throw std::invalid_argument("pgm: dimensions do not match data size");
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + values.size());
    for (double v : values) {
        long level = (scale > 0.0) ? std::lround(255.0 * v / scale) : 0;
        level = std::clamp(level, 0L, 255L);
        out.push_back(static_cast<char>(static_cast<unsigned char>(level)));
    }
    return out;
}

}  // namespace diracpq
