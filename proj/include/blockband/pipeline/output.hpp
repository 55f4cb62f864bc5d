#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace blockband::pipeline {

/// Lower-case hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Write to `<path>.tmp-<pid>` then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/**
 * Collects a run's files in a hidden staging directory inside `target` and
 * moves them into place on commit(). Without commit() the staging directory is
 * removed, so an aborted run leaves no partial outputs behind.
 */
class StagedOutput {
public:
    explicit StagedOutput(std::filesystem::path target);
    ~StagedOutput();

    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;

    /// Stage `contents` under the relative name; returns its SHA-256.
    std::string add(const std::string& name, std::string_view contents);

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::filesystem::path& target() const noexcept { return target_; }

    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path staging_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

}  // namespace blockband::pipeline
