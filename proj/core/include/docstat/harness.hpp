#pragma once

// Runs every parser on every corpus file, or ingests pre-captured stderr
// logs, and turns each run's stderr into per-row message counts.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docstat/catalog.hpp"

namespace docstat {

using FileId = std::size_t;  // 1-based within a manifest

enum class Label { kValid, kRejected };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);  // "" -> nullopt; throws otherwise

struct ManifestEntry {
  FileId file_id = 0;
  std::filesystem::path path;
  std::optional<Label> ground_truth;
};

// file_id values are exactly 1..M in order and paths are distinct.
struct CorpusManifest {
  std::string dataset_label;
  std::vector<ManifestEntry> entries;

  void validate() const;
};

// CSV with header `file_id,path,ground_truth`. Relative paths resolve against
// the manifest's directory.
CorpusManifest load_manifest(const std::filesystem::path& path, std::string dataset_label);

struct ParserRun {
  FileId file_id = 0;
  std::string parser;
  std::optional<int> exit_code;  // absent when timed_out
  std::string stderr_text;       // valid UTF-8
  double duration_s = 0.0;
  bool timed_out = false;

  bool operator==(const ParserRun&) const = default;
};

struct RunOptions {
  std::size_t parallelism = 1;
  std::size_t max_stderr_bytes = 16u << 20;
};

// M x P runs sorted by (file_id, parser declaration order). Throws
// MissingExecutableError before starting anything if a command does not
// resolve. Timeouts are recorded in the run, never thrown.
std::vector<ParserRun> run_corpus(const CorpusManifest& manifest, const MessageCatalog& catalog,
                                  const RunOptions& options = {});

struct IngestResult {
  std::vector<ParserRun> runs;
  std::vector<std::string> warnings;
};

// Reads `<dir>/f<file_id:06>.<parser>.stderr` and optional
// `<dir>/f<file_id:06>.<parser>.meta` ({"exit_code","duration_s","timed_out"}).
// Missing logs produce an empty-stderr run plus a warning. Any other file name
// is a ParseError naming the path.
IngestResult ingest_captured(const std::filesystem::path& dir, const CorpusManifest& manifest,
                             const MessageCatalog& catalog);

// Writes runs in the layout ingest_captured reads.
void write_captured(const std::filesystem::path& dir, const std::vector<ParserRun>& runs);

std::string captured_log_stem(FileId file_id, std::string_view parser);

// Row -> count over the rows owned by run.parser. Each nonempty stderr line
// increments the first matching row in row order, if any. A kNonzeroExit row
// counts 1 when the run exited nonzero.
std::map<RowIndex, std::size_t> match_messages(const ParserRun& run, const MessageCatalog& catalog);

// Invalid UTF-8 sequences become U+FFFD.
std::string decode_lossy(std::string_view bytes);

}  // namespace docstat
