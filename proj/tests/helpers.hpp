#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <unistd.h>

namespace testutil {

// Unique scratch directory per call; never reused, so parallel ctest
// invocations cannot collide.
inline std::string fresh_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto p = std::filesystem::temp_directory_path() /
                   ("floodecon_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(p);
    return p.string();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string repo_root() { return FLOODECON_ROOT; }

}  // namespace testutil
