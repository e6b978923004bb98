#pragma once

// Parser registry and the ordered message catalog.
//
// A catalog fixes the row space of every relation matrix: row k (1-based)
// is the k-th message pattern, owned by exactly one parser. A parser may own
// several disjoint row ranges.
//
// Regex dialect: ECMAScript as implemented by std::regex (character classes,
// alternation, anchors, quantifiers). Patterns are searched for anywhere in
// a single stderr line; use ^/$ to anchor.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace docstat {

using RowIndex = std::size_t;  // 1-based catalog row

inline constexpr std::string_view kFilePlaceholder = "{file}";

struct ParserSpec {
  std::string name;
  std::string command;
  // Exactly one occurrence of kFilePlaceholder across all arguments.
  std::vector<std::string> args;
  std::chrono::duration<double> timeout{30.0};

  // args with the placeholder replaced by `file`.
  std::vector<std::string> expand_args(const std::filesystem::path& file) const;

  bool operator==(const ParserSpec&) const = default;
};

enum class PatternKind {
  kRegex,
  // Fires once when the run exited with a nonzero status. Never matched
  // against stderr text.
  kNonzeroExit,
};

struct MessagePattern {
  RowIndex row = 0;
  std::string parser;
  std::string regex;
  std::string description;
  PatternKind kind = PatternKind::kRegex;

  bool operator==(const MessagePattern&) const = default;
};

// Immutable once constructed; construction validates every invariant and
// compiles the regexes. Copies share the compiled patterns.
class MessageCatalog {
 public:
  // Throws ValidationError naming the first violated invariant.
  MessageCatalog(std::vector<ParserSpec> parsers, std::vector<MessagePattern> patterns);

  std::size_t size() const noexcept { return patterns_.size(); }
  const std::vector<ParserSpec>& parsers() const noexcept { return parsers_; }
  const std::vector<MessagePattern>& patterns() const noexcept { return patterns_; }

  const MessagePattern& pattern(RowIndex row) const;
  const std::regex& compiled(RowIndex row) const;

  // nullptr when the parser is not declared.
  const ParserSpec* find_parser(std::string_view name) const;
  const std::string& owner(RowIndex row) const { return pattern(row).parser; }

  // Rows owned by `parser`, ascending. Empty for unknown parsers.
  std::span<const RowIndex> rows_of(std::string_view parser) const;

  // Copy of this catalog with one kNonzeroExit row appended per parser, in
  // parser declaration order.
  MessageCatalog with_exit_rows() const;

  bool operator==(const MessageCatalog& other) const {
    return parsers_ == other.parsers_ && patterns_ == other.patterns_;
  }

 private:
  std::vector<ParserSpec> parsers_;
  std::vector<MessagePattern> patterns_;
  std::shared_ptr<const std::vector<std::optional<std::regex>>> compiled_;
  std::map<std::string, std::vector<RowIndex>, std::less<>> rows_by_parser_;
};

// JSON document:
//   { "parsers":  [ {"name", "command", "args", "timeout_s"} ],
//     "messages": [ {"row", "parser", "regex", "description"} ] }
// A message may carry "kind": "nonzero_exit" instead of a regex.
MessageCatalog parse_catalog(std::string_view json_text);
MessageCatalog load_catalog(const std::filesystem::path& path);
std::string catalog_to_json(const MessageCatalog& catalog);
void save_catalog(const MessageCatalog& catalog, const std::filesystem::path& path);

// Every row 1..N appears in exactly one parser's set.
std::map<std::string, std::vector<RowIndex>> parser_row_ranges(const MessageCatalog& catalog);

}  // namespace docstat
