#include "tyfix/diff.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "tyfix/error.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

namespace {

enum class Op : char { kEqual, kDelete, kInsert };

using OpList = std::vector<Op>;

void diff_range(const int* a, int n, const int* b, int m, OpList& out);

// Middle-snake bisection (Myers 1986, linear space). Finds the split point of
// an optimal edit script and recurses on both halves.
void bisect(const int* a, int n, const int* b, int m, OpList& out) {
  const int max_d = (n + m + 1) / 2;
  const int v_offset = max_d;
  const int v_length = 2 * max_d + 2;
  std::vector<int> v1(v_length, -1);
  std::vector<int> v2(v_length, -1);
  v1[v_offset + 1] = 0;
  v2[v_offset + 1] = 0;
  const int delta = n - m;
  const bool front = (delta % 2 != 0);
  int k1start = 0, k1end = 0, k2start = 0, k2end = 0;

  auto split = [&](int x, int y) {
    diff_range(a, x, b, y, out);
    diff_range(a + x, n - x, b + y, m - y, out);
  };

  for (int d = 0; d < max_d; ++d) {
    for (int k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
      const int k1_offset = v_offset + k1;
      int x1;
      if (k1 == -d || (k1 != d && v1[k1_offset - 1] < v1[k1_offset + 1]))
        x1 = v1[k1_offset + 1];
      else
        x1 = v1[k1_offset - 1] + 1;
      int y1 = x1 - k1;
      while (x1 < n && y1 < m && a[x1] == b[y1]) {
        ++x1;
        ++y1;
      }
      v1[k1_offset] = x1;
      if (x1 > n) {
        k1end += 2;
      } else if (y1 > m) {
        k1start += 2;
      } else if (front) {
        const int k2_offset = v_offset + delta - k1;
        if (k2_offset >= 0 && k2_offset < v_length && v2[k2_offset] != -1) {
          const int x2 = n - v2[k2_offset];
          if (x1 >= x2) return split(x1, y1);
        }
      }
    }
    for (int k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
      const int k2_offset = v_offset + k2;
      int x2;
      if (k2 == -d || (k2 != d && v2[k2_offset - 1] < v2[k2_offset + 1]))
        x2 = v2[k2_offset + 1];
      else
        x2 = v2[k2_offset - 1] + 1;
      int y2 = x2 - k2;
      while (x2 < n && y2 < m && a[n - x2 - 1] == b[m - y2 - 1]) {
        ++x2;
        ++y2;
      }
      v2[k2_offset] = x2;
      if (x2 > n) {
        k2end += 2;
      } else if (y2 > m) {
        k2start += 2;
      } else if (!front) {
        const int k1_offset = v_offset + delta - k2;
        if (k1_offset >= 0 && k1_offset < v_length && v1[k1_offset] != -1) {
          const int x1 = v1[k1_offset];
          const int y1 = v_offset + x1 - k1_offset;
          if (x1 >= n - x2) return split(x1, y1);
        }
      }
    }
  }
  out.insert(out.end(), n, Op::kDelete);
  out.insert(out.end(), m, Op::kInsert);
}

void diff_range(const int* a, int n, const int* b, int m, OpList& out) {
  int prefix = 0;
  while (prefix < n && prefix < m && a[prefix] == b[prefix]) ++prefix;
  int suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix && a[n - 1 - suffix] == b[m - 1 - suffix])
    ++suffix;
  out.insert(out.end(), prefix, Op::kEqual);
  const int* ma = a + prefix;
  const int* mb = b + prefix;
  const int mn = n - prefix - suffix;
  const int mm = m - prefix - suffix;
  if (mn == 0) {
    out.insert(out.end(), mm, Op::kInsert);
  } else if (mm == 0) {
    out.insert(out.end(), mn, Op::kDelete);
  } else {
    bisect(ma, mn, mb, mm, out);
  }
  out.insert(out.end(), suffix, Op::kEqual);
}

void check_subset(std::span<const Hunk> sorted, std::size_t old_lines) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Hunk& h = sorted[i];
    if (h.old_len != static_cast<int>(h.old_text.size()) ||
        h.new_len != static_cast<int>(h.new_text.size()))
      throw HunkMismatch("hunk " + std::to_string(h.index) + ": length does not match text");
    if (h.old_start < 1 || static_cast<std::size_t>(h.old_end() - 1) > old_lines)
      throw HunkMismatch("hunk " + std::to_string(h.index) + ": outside the file");
    if (i + 1 < sorted.size()) {
      const Hunk& next = sorted[i + 1];
      if (h.old_end() > next.old_start || h.old_start == next.old_start)
        throw OverlappingHunks("hunks " + std::to_string(h.index) + " and " +
                               std::to_string(next.index) + " overlap");
    }
  }
}

std::vector<Hunk> sorted_copy(std::span<const Hunk> hunks) {
  std::vector<Hunk> out(hunks.begin(), hunks.end());
  std::stable_sort(out.begin(), out.end(), [](const Hunk& x, const Hunk& y) {
    return x.old_start != y.old_start ? x.old_start < y.old_start : x.old_len < y.old_len;
  });
  return out;
}

}  // namespace

std::vector<Hunk> diff(std::string_view old, std::string_view neu) {
  const auto old_lines = text::split_lines(old);
  const auto new_lines = text::split_lines(neu);

  std::unordered_map<std::string_view, int> ids;
  auto intern = [&ids](const std::vector<std::string>& lines) {
    std::vector<int> out;
    out.reserve(lines.size());
    for (const auto& l : lines) {
      auto [it, _] = ids.try_emplace(l, static_cast<int>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  const auto a = intern(old_lines);
  const auto b = intern(new_lines);

  OpList ops;
  ops.reserve(a.size() + b.size());
  diff_range(a.data(), static_cast<int>(a.size()), b.data(), static_cast<int>(b.size()), ops);

  std::vector<Hunk> hunks;
  std::size_t i = 0, j = 0, k = 0;
  while (k < ops.size()) {
    if (ops[k] == Op::kEqual) {
      ++i;
      ++j;
      ++k;
      continue;
    }
    Hunk h;
    h.index = hunks.size();
    h.old_start = static_cast<int>(i) + 1;
    h.new_start = static_cast<int>(j) + 1;
    while (k < ops.size() && ops[k] != Op::kEqual) {
      if (ops[k] == Op::kDelete)
        h.old_text.push_back(old_lines[i++]);
      else
        h.new_text.push_back(new_lines[j++]);
      ++k;
    }
    h.old_len = static_cast<int>(h.old_text.size());
    h.new_len = static_cast<int>(h.new_text.size());
    hunks.push_back(std::move(h));
  }
  return hunks;
}

std::string patch(std::string_view old, std::span<const Hunk> subset) {
  const auto lines = text::split_lines(old);
  const auto sorted = sorted_copy(subset);
  check_subset(sorted, lines.size());

  std::string out;
  out.reserve(old.size());
  std::size_t cursor = 0;  // 0-based index of the next old line to copy
  for (const Hunk& h : sorted) {
    const auto begin = static_cast<std::size_t>(h.old_start - 1);
    for (; cursor < begin; ++cursor) out += lines[cursor];
    for (int n = 0; n < h.old_len; ++n, ++cursor) {
      if (lines[cursor] != h.old_text[n])
        throw HunkMismatch("hunk " + std::to_string(h.index) + " does not match line " +
                           std::to_string(cursor + 1));
    }
    for (const auto& l : h.new_text) out += l;
  }
  for (; cursor < lines.size(); ++cursor) out += lines[cursor];
  return out;
}

LineMap::LineMap(std::span<const Hunk> applied) : applied_(sorted_copy(applied)) {}

RemapResult LineMap::remap(int old_line) const {
  int shift = 0;
  for (const Hunk& h : applied_) {
    if (h.old_len > 0 && old_line >= h.old_start && old_line < h.old_end())
      return InsideHunk{h.index};
    if (h.old_end() <= old_line) shift += h.new_len - h.old_len;
  }
  return old_line + shift;
}

LineMap::Region LineMap::new_region(std::size_t hunk_index) const {
  int shift = 0;
  for (const Hunk& h : applied_) {
    if (h.index == hunk_index) return Region{h.old_start + shift, h.new_len};
    shift += h.new_len - h.old_len;
  }
  return Region{0, 0};
}

RemapResult remap_line(int old_line, std::span<const Hunk> subset) {
  return LineMap(subset).remap(old_line);
}

namespace {

bool parse_range(std::string_view s, int& start, int& len) {
  auto comma = s.find(',');
  auto num = s.substr(0, comma);
  if (std::from_chars(num.data(), num.data() + num.size(), start).ec != std::errc{}) return false;
  len = 1;
  if (comma != std::string_view::npos) {
    auto l = s.substr(comma + 1);
    if (std::from_chars(l.data(), l.data() + l.size(), len).ec != std::errc{}) return false;
  }
  return true;
}

std::string strip_prefix_path(std::string_view p) {
  p = text::rtrim(p);
  auto tab = p.find('\t');
  if (tab != std::string_view::npos) p = p.substr(0, tab);
  if (p.starts_with("a/") || p.starts_with("b/")) p.remove_prefix(2);
  return std::string(p);
}

void drop_terminator(std::string& line) {
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::vector<FileDiff> parse_unified_diff(std::string_view diff_text) {
  std::vector<FileDiff> files;
  const auto lines = text::split_lines(diff_text);

  FileDiff* file = nullptr;
  bool in_hunk = false;
  int old_pos = 0, new_pos = 0, old_remaining = 0, new_remaining = 0;
  Hunk current;
  bool have_current = false;
  std::string* last_line = nullptr;

  auto flush = [&] {
    if (!have_current) return;
    current.old_len = static_cast<int>(current.old_text.size());
    current.new_len = static_cast<int>(current.new_text.size());
    current.index = file->hunks.size();
    file->hunks.push_back(std::move(current));
    current = Hunk{};
    have_current = false;
    last_line = nullptr;
  };
  auto ensure_file = [&] {
    if (!file) {
      files.emplace_back();
      file = &files.back();
    }
  };

  for (const auto& raw : lines) {
    std::string_view line = raw;
    if (in_hunk && (old_remaining > 0 || new_remaining > 0)) {
      if (line.empty()) throw MalformedDiff("truncated hunk");
      const char tag = line.front();
      std::string body(line.substr(1));
      if (tag == ' ') {
        flush();
        ++old_pos;
        ++new_pos;
        --old_remaining;
        --new_remaining;
        continue;
      }
      if (tag == '-' || tag == '+') {
        if (!have_current) {
          current.old_start = old_pos;
          current.new_start = new_pos;
          have_current = true;
        }
        auto& dest = tag == '-' ? current.old_text : current.new_text;
        dest.push_back(std::move(body));
        last_line = &dest.back();
        if (tag == '-') {
          ++old_pos;
          --old_remaining;
        } else {
          ++new_pos;
          --new_remaining;
        }
        continue;
      }
      if (tag != '\\') throw MalformedDiff("unexpected line in hunk: " + std::string(line));
    }
    if (!line.empty() && line.front() == '\\') {
      if (last_line) drop_terminator(*last_line);
      continue;
    }
    flush();
    in_hunk = false;
    if (line.starts_with("diff ")) {
      files.emplace_back();
      file = &files.back();
    } else if (line.starts_with("--- ")) {
      if (file && (!file->hunks.empty() || !file->old_path.empty())) {
        files.emplace_back();
        file = &files.back();
      }
      ensure_file();
      file->old_path = strip_prefix_path(line.substr(4));
    } else if (line.starts_with("+++ ")) {
      ensure_file();
      file->new_path = strip_prefix_path(line.substr(4));
    } else if (line.starts_with("@@ ")) {
      ensure_file();
      auto body = text::strip_eol(line.substr(3));
      auto end = body.find(" @@");
      if (end == std::string_view::npos || body.empty() || body.front() != '-')
        throw MalformedDiff("bad hunk header: " + std::string(line));
      body = body.substr(0, end);
      auto space = body.find(' ');
      if (space == std::string_view::npos || body.size() < space + 2 || body[space + 1] != '+')
        throw MalformedDiff("bad hunk header: " + std::string(line));
      int a, b, c, d;
      if (!parse_range(body.substr(1, space - 1), a, b) || !parse_range(body.substr(space + 2), c, d))
        throw MalformedDiff("bad hunk header: " + std::string(line));
      old_pos = b == 0 ? a + 1 : a;
      new_pos = d == 0 ? c + 1 : c;
      old_remaining = b;
      new_remaining = d;
      in_hunk = true;
    }
  }
  if (in_hunk && (old_remaining > 0 || new_remaining > 0)) throw MalformedDiff("truncated hunk");
  flush();
  // "diff --git" headers that were followed directly by "---" leave an empty
  // placeholder; drop those.
  std::erase_if(files, [](const FileDiff& f) {
    return f.hunks.empty() && f.old_path.empty() && f.new_path.empty();
  });
  return files;
}

std::string render_unified(std::span<const Hunk> hunks, std::string_view old_path,
                           std::string_view new_path) {
  std::string out;
  out += "--- a/";
  out += old_path;
  out += "\n+++ b/";
  out += new_path;
  out += "\n";
  auto range = [](int start, int len) {
    // git prints the line *before* an empty range.
    std::string r = std::to_string(len == 0 ? start - 1 : start);
    if (len != 1) r += "," + std::to_string(len);
    return r;
  };
  auto emit = [&out](char tag, const std::string& line) {
    out += tag;
    out += line;
    if (line.empty() || line.back() != '\n') out += "\n\\ No newline at end of file\n";
  };
  for (const Hunk& h : sorted_copy(hunks)) {
    out += "@@ -" + range(h.old_start, h.old_len) + " +" + range(h.new_start, h.new_len) + " @@\n";
    for (const auto& l : h.old_text) emit('-', l);
    for (const auto& l : h.new_text) emit('+', l);
  }
  return out;
}

}  // namespace tyfix
