#include "memk/textio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace memk {

std::string format_real17(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool parse_real(std::string_view token, double& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last) return false;
    return std::isfinite(out);
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    for (;;) {
        size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool valid_video_id(std::string_view token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace memk
