#pragma once

#include "hbmut/dataset.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace testing {

namespace fs = std::filesystem;

class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("hbmut-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

  private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the command-line tool with `args`; returns its exit status.
inline int run_cli(const std::string& args) {
    const std::string cmd = std::string(HBMUT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

// Genes x types x samples with the same coverage everywhere.
inline hbmut::MutationDataset uniform_dataset(std::size_t genes, std::vector<std::string> types, std::size_t samples,
                                              std::int64_t coverage) {
    hbmut::DatasetBuilder b(types);
    for (std::size_t g = 0; g < genes; ++g) b.add_gene("g" + std::to_string(g + 1));
    for (std::size_t k = 0; k < samples; ++k) b.add_sample("s" + std::to_string(k + 1));
    for (std::uint32_t g = 0; g < genes; ++g)
        for (std::uint32_t m = 0; m < types.size(); ++m) b.add_broadcast_coverage(g, m, coverage);
    return std::move(b).build();
}

} // namespace testing
