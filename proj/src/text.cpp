#include "tyfix/text.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace tyfix::text {

std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (begin < content.size()) {
    auto nl = content.find('\n', begin);
    if (nl == std::string_view::npos) {
      lines.emplace_back(content.substr(begin));
      break;
    }
    lines.emplace_back(content.substr(begin, nl - begin + 1));
    begin = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_plain(std::string_view content) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(content)) out.emplace_back(strip_eol(line));
  return out;
}

std::string join(const std::vector<std::string>& lines, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += sep;
    out += lines[i];
  }
  return out;
}

std::string_view strip_eol(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string_view eol_of(std::string_view line) {
  return line.substr(strip_eol(line).size());
}

std::string detect_eol(std::string_view content) {
  auto nl = content.find('\n');
  if (nl != std::string_view::npos && nl > 0 && content[nl - 1] == '\r') return "\r\n";
  return "\n";
}

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == '\n' || s.back() == '\f' || s.back() == '\v'))
    s.remove_suffix(1);
  return s;
}

std::string_view ltrim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\f'))
    s.remove_prefix(1);
  return s;
}

std::string_view trim(std::string_view s) { return ltrim(rtrim(s)); }

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::string normalize_eol(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') continue;
    out += s[i];
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace tyfix::text
