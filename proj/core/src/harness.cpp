#include "docstat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <regex>
#include <set>
#include <thread>

#include <json.hpp>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"
#include "docstat/subprocess.hpp"

namespace docstat {

namespace fs = std::filesystem;

std::string_view to_string(Label label) {
  return label == Label::kValid ? "valid" : "rejected";
}

std::optional<Label> parse_label(std::string_view text) {
  text = csv::trim(text);
  if (text.empty()) return std::nullopt;
  if (text == "valid") return Label::kValid;
  if (text == "rejected") return Label::kRejected;
  throw ParseError("unknown ground-truth label '" + std::string(text) + "'");
}

void CorpusManifest::validate() const {
  std::set<fs::path> paths;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.file_id != i + 1)
      throw ValidationError("manifest: expected file_id " + std::to_string(i + 1) + ", found " +
                            std::to_string(e.file_id));
    if (!paths.insert(e.path.lexically_normal()).second)
      throw ValidationError("manifest: duplicate path " + e.path.string());
  }
}

CorpusManifest load_manifest(const fs::path& path, std::string dataset_label) {
  const auto text = csv::read_file(path);
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows.front()) != "file_id,path,ground_truth")
    throw ParseError(path.string() + ": expected header 'file_id,path,ground_truth'");

  CorpusManifest manifest;
  manifest.dataset_label = std::move(dataset_label);
  const auto base = path.parent_path();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto fields = csv::split(rows[i]);
    if (fields.size() != 3)
      throw ParseError(path.string() + ":" + std::to_string(i + 1) + ": expected 3 fields");
    ManifestEntry e;
    const auto id = csv::parse_integer(fields[0]);
    if (id < 1) throw ParseError(path.string() + ":" + std::to_string(i + 1) + ": bad file_id");
    e.file_id = static_cast<FileId>(id);
    fs::path p(std::string(csv::trim(fields[1])));
    e.path = p.is_absolute() ? p : base / p;
    e.ground_truth = parse_label(fields[2]);
    manifest.entries.push_back(std::move(e));
  }
  manifest.validate();
  return manifest;
}

std::string decode_lossy(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  const auto* s = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned char lo = 0x80, hi = 0xBF;  // bounds for the second byte
    if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      if (c == 0xE0) lo = 0xA0;
      if (c == 0xED) hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;
    }
    if (len == 0) {
      out += kReplacement;
      ++i;
      continue;
    }
    std::size_t k = 1;
    for (; k < len && i + k < n; ++k) {
      const unsigned char b = s[i + k];
      const unsigned char b_lo = k == 1 ? lo : 0x80;
      const unsigned char b_hi = k == 1 ? hi : 0xBF;
      if (b < b_lo || b > b_hi) break;
    }
    if (k == len) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      // Maximal valid prefix collapses to one replacement character.
      out += kReplacement;
      i += k;
    }
  }
  return out;
}

std::vector<ParserRun> run_corpus(const CorpusManifest& manifest, const MessageCatalog& catalog,
                                  const RunOptions& options) {
  if (options.parallelism < 1) throw PreconditionError("parallelism must be >= 1");
  manifest.validate();

  const auto& parsers = catalog.parsers();
  std::vector<fs::path> executables;
  executables.reserve(parsers.size());
  for (const auto& p : parsers) {
    auto exe = resolve_executable(p.command);
    if (!exe) throw MissingExecutableError(p.name, p.command);
    executables.push_back(std::move(*exe));
  }

  const std::size_t n_jobs = manifest.entries.size() * parsers.size();
  std::vector<ParserRun> runs(n_jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (true) {
      const auto job = next.fetch_add(1);
      if (job >= n_jobs) return;
      const auto& entry = manifest.entries[job / parsers.size()];
      const auto pi = job % parsers.size();
      const auto& parser = parsers[pi];
      try {
        auto res = run_process(executables[pi], parser.expand_args(entry.path), parser.timeout,
                               options.max_stderr_bytes);
        auto& run = runs[job];
        run.file_id = entry.file_id;
        run.parser = parser.name;
        run.exit_code = res.exit_code;
        run.stderr_text = decode_lossy(res.stderr_bytes);
        run.duration_s = res.duration_s;
        run.timed_out = res.timed_out;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_jobs);
        return;
      }
    }
  };

  const auto n_threads = std::min(options.parallelism, std::max<std::size_t>(n_jobs, 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

std::string captured_log_stem(FileId file_id, std::string_view parser) {
  char id[32];
  std::snprintf(id, sizeof id, "f%06zu", file_id);
  return std::string(id) + "." + std::string(parser);
}

IngestResult ingest_captured(const fs::path& dir, const CorpusManifest& manifest,
                             const MessageCatalog& catalog) {
  using nlohmann::json;
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  manifest.validate();

  static const std::regex kName(R"(^f(\d{6,})\.(.+)\.(stderr|meta)$)");
  struct Logs {
    std::optional<fs::path> stderr_path;
    std::optional<fs::path> meta_path;
  };
  std::map<std::pair<FileId, std::string>, Logs> found;
  IngestResult result;

  std::vector<fs::path> names;
  for (const auto& de : fs::directory_iterator(dir)) names.push_back(de.path());
  std::sort(names.begin(), names.end());
  for (const auto& p : names) {
    const auto name = p.filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, kName))
      throw ParseError("captured-log layout violation: " + p.string());
    const auto id = static_cast<FileId>(std::stoull(m[1].str()));
    const auto parser = m[2].str();
    if (id < 1 || id > manifest.entries.size()) {
      result.warnings.push_back("ignoring log for unknown file id: " + p.string());
      continue;
    }
    if (catalog.find_parser(parser) == nullptr) {
      result.warnings.push_back("ignoring log for undeclared parser: " + p.string());
      continue;
    }
    auto& logs = found[{id, parser}];
    (m[3].str() == "stderr" ? logs.stderr_path : logs.meta_path) = p;
  }

  for (const auto& entry : manifest.entries) {
    for (const auto& parser : catalog.parsers()) {
      ParserRun run;
      run.file_id = entry.file_id;
      run.parser = parser.name;
      const auto it = found.find({entry.file_id, parser.name});
      const Logs logs = it == found.end() ? Logs{} : it->second;
      if (logs.stderr_path) {
        run.stderr_text = decode_lossy(csv::read_file(*logs.stderr_path));
      } else {
        result.warnings.push_back("missing stderr log " +
                                  captured_log_stem(entry.file_id, parser.name) + ".stderr");
      }
      if (logs.meta_path) {
        try {
          const auto meta = json::parse(csv::read_file(*logs.meta_path));
          if (meta.contains("exit_code") && !meta.at("exit_code").is_null())
            run.exit_code = meta.at("exit_code").get<int>();
          run.duration_s = meta.value("duration_s", 0.0);
          run.timed_out = meta.value("timed_out", false);
        } catch (const json::exception& e) {
          throw ParseError(logs.meta_path->string() + ": " + e.what());
        }
        if (run.timed_out && run.exit_code)
          throw ParseError(logs.meta_path->string() + ": timed_out run cannot carry exit_code");
      }
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

void write_captured(const fs::path& dir, const std::vector<ParserRun>& runs) {
  using nlohmann::json;
  fs::create_directories(dir);
  for (const auto& run : runs) {
    const auto stem = captured_log_stem(run.file_id, run.parser);
    csv::write_file_atomic(dir / (stem + ".stderr"), run.stderr_text);
    json meta;
    meta["exit_code"] = run.exit_code ? json(*run.exit_code) : json(nullptr);
    meta["duration_s"] = run.duration_s;
    meta["timed_out"] = run.timed_out;
    csv::write_file_atomic(dir / (stem + ".meta"), meta.dump() + "\n");
  }
}

std::map<RowIndex, std::size_t> match_messages(const ParserRun& run,
                                               const MessageCatalog& catalog) {
  std::map<RowIndex, std::size_t> counts;
  const auto rows = catalog.rows_of(run.parser);
  if (rows.empty()) return counts;

  std::vector<RowIndex> regex_rows;
  regex_rows.reserve(rows.size());
  for (const auto row : rows) {
    if (catalog.pattern(row).kind == PatternKind::kNonzeroExit) {
      if (run.exit_code && *run.exit_code != 0) counts[row] = 1;
    } else {
      regex_rows.push_back(row);
    }
  }

  std::string_view text = run.stderr_text;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    for (const auto row : regex_rows) {
      if (std::regex_search(line.begin(), line.end(), catalog.compiled(row))) {
        ++counts[row];
        break;
      }
    }
  }
  return counts;
}

}  // namespace docstat
