#pragma once

#include <filesystem>
#include <random>
#include <string>

// Scratch directory wiped on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        path = base / ("sapred_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};
