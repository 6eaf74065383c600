#pragma once
// Minimal tab-separated reader shared by the file loaders.

#include "hbmut/errors.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hbmut::tsv {

inline std::vector<std::string_view> split(std::string_view line, char sep = '\t') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Iterates data lines; skips blank lines and '#' comments.
class Reader {
  public:
    explicit Reader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw ParseError(path.string() + ": cannot open file");
    }

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(path_.string() + ":" + std::to_string(line_no_) + ": " + what);
    }

    std::size_t line_no() const { return line_no_; }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace hbmut::tsv
