#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tyfix {

/// One contiguous change region between two file versions, with no context
/// lines. Lines in old_text/new_text keep their terminators, so applying a
/// hunk is byte-exact (CRLF files and a missing final newline survive).
///
/// Line numbers are 1-based. The old region is [old_start, old_start+old_len);
/// a pure insertion (old_len == 0) goes immediately before line old_start.
/// new_start is the same convention in the fully patched file.
struct Hunk {
  std::size_t index = 0;
  int old_start = 1;
  int old_len = 0;
  int new_start = 1;
  int new_len = 0;
  std::vector<std::string> old_text;
  std::vector<std::string> new_text;

  int old_end() const { return old_start + old_len; }
  bool operator==(const Hunk&) const = default;
};

/// Zero-context line diff. Applying every returned hunk to `old` yields `neu`
/// exactly; hunks are sorted, non-overlapping, and indexed 0..n-1.
std::vector<Hunk> diff(std::string_view old, std::string_view neu);

/// Applies a subset of one diff of `old`. Throws OverlappingHunks when two
/// hunks touch the same old lines and HunkMismatch when a hunk does not fit.
std::string patch(std::string_view old, std::span<const Hunk> subset);

struct InsideHunk {
  std::size_t hunk_index;
  bool operator==(const InsideHunk&) const = default;
};

using RemapResult = std::variant<int, InsideHunk>;

/// Translates old-file line numbers into the file obtained by applying a
/// subset of hunks.
class LineMap {
 public:
  LineMap() = default;
  explicit LineMap(std::span<const Hunk> applied);

  RemapResult remap(int old_line) const;

  /// 1-based first line and length of an applied hunk's new text in the
  /// patched file.
  struct Region {
    int start;
    int len;
    bool contains(int line) const { return line >= start && line < start + len; }
  };
  Region new_region(std::size_t hunk_index) const;

  const std::vector<Hunk>& applied() const { return applied_; }

 private:
  std::vector<Hunk> applied_;
};

RemapResult remap_line(int old_line, std::span<const Hunk> subset);

/// Per-file hunk list parsed from unified diff text (e.g. `git diff -U0`).
struct FileDiff {
  std::string old_path;
  std::string new_path;
  std::vector<Hunk> hunks;
};

std::vector<FileDiff> parse_unified_diff(std::string_view text);

/// Renders hunks as a unified diff with zero context lines.
std::string render_unified(std::span<const Hunk> hunks, std::string_view old_path,
                           std::string_view new_path);

}  // namespace tyfix
