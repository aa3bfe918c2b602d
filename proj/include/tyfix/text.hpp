#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tyfix::text {

/// Splits content into lines, each keeping its own terminator ("\n" or
/// "\r\n"). The last element has no terminator when the content does not end
/// with a newline. Concatenating the result reproduces the input exactly.
std::vector<std::string> split_lines(std::string_view content);

/// Splits on '\n' and drops the terminators (and a trailing '\r').
/// "a\nb" and "a\nb\n" both give {"a", "b"}.
std::vector<std::string> split_plain(std::string_view content);

std::string join(const std::vector<std::string>& lines, std::string_view sep = "\n");

/// Line without its terminator.
std::string_view strip_eol(std::string_view line);
/// The terminator of a line from split_lines ("", "\n" or "\r\n").
std::string_view eol_of(std::string_view line);

/// Terminator used by the first terminated line; "\n" when there is none.
std::string detect_eol(std::string_view content);

std::string_view rtrim(std::string_view s);
std::string_view ltrim(std::string_view s);
std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

/// Converts CRLF to LF.
std::string normalize_eol(std::string_view s);

/// Number of code points in UTF-8 text (invalid bytes count as one each).
std::size_t utf8_length(std::string_view s);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace tyfix::text
