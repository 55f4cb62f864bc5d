#pragma once

#include "blockband/rng.hpp"
#include "blockband/types.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace testing {

inline blockband::Matrix random_matrix(blockband::Index rows, blockband::Index cols, std::uint64_t seed,
                                       double lo = -1.0, double hi = 1.0) {
    blockband::Rng rng(seed);
    blockband::Matrix m(rows, cols);
    for (blockband::Index i = 0; i < rows; ++i) {
        for (blockband::Index j = 0; j < cols; ++j) {
            m(i, j) = rng.uniform(lo, hi);
        }
    }
    return m;
}

inline double max_relative_error(const blockband::Matrix& a, const blockband::Matrix& b) {
    double worst = 0.0;
    for (blockband::Index i = 0; i < a.rows(); ++i) {
        for (blockband::Index j = 0; j < a.cols(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(std::abs(b(i, j)), 1e-300));
        }
    }
    return worst;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("blockband-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
