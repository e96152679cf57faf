#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace memk {

// Reals in every CSV the toolkit writes use 17 significant digits, enough
// for bit-exact double roundtrips. Locale-independent (charconv).
std::string format_real17(double value);

// Strict double parse: the whole token must be consumed and the result
// finite. Returns false otherwise.
bool parse_real(std::string_view token, double& out);

// Splits on ',' only; no quoting (video ids may not contain commas).
std::vector<std::string_view> split_csv_line(std::string_view line);

// True if the token is a valid video id: non-empty, no commas, no whitespace.
bool valid_video_id(std::string_view token);

} // namespace memk
