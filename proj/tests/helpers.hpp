#pragma once

#include "lexforge/text.hpp"

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "lexforge") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

    std::filesystem::path write(const std::string& name, const std::string& contents) const {
        auto p = path_ / name;
        lexforge::text::write_file(p, contents);
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path toy(const std::string& name) { return std::filesystem::path(LEXFORGE_TOY_DIR) / name; }

} // namespace testing
