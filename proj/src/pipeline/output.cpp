#include "blockband/pipeline/output.hpp"

#include "blockband/error.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <fstream>
#include <memory>
#include <sstream>

namespace blockband::pipeline {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int k = 0; k < length; ++k) {
        hex.push_back(kHex[digest[k] >> 4]);
        hex.push_back(kHex[digest[k] & 0xf]);
    }
    return hex;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot read '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sha256_hex(buffer.str());
}

namespace {

void write_bytes(const fs::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
        throw Error(ErrorCode::ParseError, "failed writing '" + path.string() + "'");
    }
}

std::string unique_suffix() {
    static std::atomic<unsigned> counter{0};
    return std::to_string(::getpid()) + "-" + std::to_string(counter++);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path temp = path;
    temp += ".tmp-" + unique_suffix();
    write_bytes(temp, contents);
    fs::rename(temp, path);
}

StagedOutput::StagedOutput(fs::path target) : target_(std::move(target)) {
    fs::create_directories(target_);
    staging_ = target_ / (".staging-" + unique_suffix());
    fs::create_directories(staging_);
}

StagedOutput::~StagedOutput() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
}

std::string StagedOutput::add(const std::string& name, std::string_view contents) {
    if (committed_) {
        throw std::logic_error("StagedOutput already committed");
    }
    const fs::path path = staging_ / name;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    write_bytes(path, contents);
    names_.push_back(name);
    return sha256_hex(contents);
}

void StagedOutput::commit() {
    for (const auto& name : names_) {
        const fs::path destination = target_ / name;
        if (destination.has_parent_path()) {
            fs::create_directories(destination.parent_path());
        }
        fs::rename(staging_ / name, destination);
    }
    committed_ = true;
}

}  // namespace blockband::pipeline
