#include "vll/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "vll/error.hpp"

namespace vll {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::invalid_configuration, "cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) fail(ErrorKind::invalid_configuration, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorKind::invalid_configuration, "cannot move " + tmp.string() + ": " + ec.message());
}

} // namespace vll
