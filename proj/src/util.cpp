// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/util.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "zscan/error.hpp"

namespace zscan {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::Io, "FileNotReadable", "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) raise(Errc::Io, "FileNotReadable", "read failed on '" + path + "'");
    return std::move(ss).str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";

    std::error_code ec;
    if (!fs::exists(dir, ec))
        raise(Errc::Io, "FileNotWritable", "directory '" + dir.string() + "' does not exist");

    const fs::path tmp = dir / (target.filename().string() + ".tmp." +
                                std::to_string(static_cast<unsigned long>(::getpid())));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::Io, "FileNotWritable", "cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            raise(Errc::Io, "FileNotWritable", "write failed on '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        raise(Errc::Io, "FileNotWritable", "cannot rename temp file onto '" + path + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, err] = std::to_chars(buf, buf + sizeof(buf), v);
    if (err != std::errc()) raise(Errc::Numeric, "FormatFailure", "double formatting failed");
    return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

} // namespace zscan
