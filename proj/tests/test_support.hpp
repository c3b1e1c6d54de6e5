#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace dealersim::test {

/// Fresh per-test scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::path(DEALERSIM_TEST_TMPDIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text;
}

}  // namespace dealersim::test
