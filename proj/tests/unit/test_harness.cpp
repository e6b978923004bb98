#include <doctest.h>

#include <fstream>

#include "support.hpp"

using namespace docstat;
namespace fs = std::filesystem;

namespace {

std::string stub() { return (support::fixture_dir() / "parsers" / "stub_parser.sh").string(); }

ParserSpec stub_parser(const std::string& name, double timeout = 10.0) {
  return {name, stub(), {name, "{file}"}, std::chrono::duration<double>(timeout)};
}

MessageCatalog two_parser_catalog() {
  return MessageCatalog(
      {stub_parser("alpha"), stub_parser("beta")},
      {
          {1, "alpha", "xref", "", PatternKind::kRegex},
          {2, "alpha", "xref table broken", "", PatternKind::kRegex},  // shadowed by row 1
          {3, "beta", "^beta: missing (font|glyph)", "", PatternKind::kRegex},
          {4, "beta", "fatal", "", PatternKind::kRegex},
          {5, "alpha", "trailer", "", PatternKind::kRegex},
      });
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Files 1..n with the given contents plus a manifest.
CorpusManifest make_corpus(const support::TempDir& dir, const std::vector<std::string>& contents,
                           const std::vector<std::string>& truth = {}) {
  std::string manifest = "file_id,path,ground_truth\n";
  for (std::size_t i = 0; i < contents.size(); ++i) {
    const auto name = "file" + std::to_string(i + 1) + ".pdf";
    write_text(dir / name, contents[i]);
    manifest += std::to_string(i + 1) + "," + name + "," + (truth.empty() ? "" : truth[i]) + "\n";
  }
  write_text(dir / "manifest.csv", manifest);
  return load_manifest(dir / "manifest.csv", "corpus");
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("manifest loading and validation") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {"a", "b"}, {"valid", "rejected"});
    REQUIRE(m.entries.size() == 2);
    CHECK(m.dataset_label == "corpus");
    CHECK(m.entries[0].path == dir / "file1.pdf");
    CHECK(m.entries[0].ground_truth == Label::kValid);
    CHECK(m.entries[1].ground_truth == Label::kRejected);

    write_text(dir / "bad.csv", "file_id,path,ground_truth\n1,a.pdf,\n3,b.pdf,\n");
    CHECK_THROWS_AS(load_manifest(dir / "bad.csv", "x"), ValidationError);
    write_text(dir / "dup.csv", "file_id,path,ground_truth\n1,a.pdf,\n2,a.pdf,\n");
    CHECK_THROWS_AS(load_manifest(dir / "dup.csv", "x"), ValidationError);
    write_text(dir / "hdr.csv", "id,path\n1,a.pdf\n");
    CHECK_THROWS_AS(load_manifest(dir / "hdr.csv", "x"), ParseError);
    write_text(dir / "lbl.csv", "file_id,path,ground_truth\n1,a.pdf,maybe\n");
    CHECK_THROWS_AS(load_manifest(dir / "lbl.csv", "x"), ParseError);
  }

  TEST_CASE("first matching row wins within a parser") {
    const auto c = two_parser_catalog();
    ParserRun run{1, "alpha", 0, "alpha: xref table broken\nalpha: trailer\n\nalpha: trailer\n", 0,
                  false};
    const auto counts = match_messages(run, c);
    CHECK(counts.size() == 2);
    CHECK(counts.at(1) == 1);
    CHECK(counts.count(2) == 0);
    CHECK(counts.at(5) == 2);
  }

  TEST_CASE("rows of other parsers never match") {
    const auto c = two_parser_catalog();
    ParserRun run{1, "beta", 0, "xref trailer\n", 0, false};
    CHECK(match_messages(run, c).empty());
    ParserRun unknown{1, "gamma", 0, "xref\n", 0, false};
    CHECK(match_messages(unknown, c).empty());
  }

  TEST_CASE("nonzero-exit rows") {
    const auto c = two_parser_catalog().with_exit_rows();
    CHECK(c.size() == 7);
    ParserRun failed{1, "beta", 1, "", 0, false};
    CHECK(match_messages(failed, c) == std::map<RowIndex, std::size_t>{{7, 1}});
    ParserRun ok{1, "beta", 0, "", 0, false};
    CHECK(match_messages(ok, c).empty());
    ParserRun timeout{1, "beta", std::nullopt, "", 0, true};
    CHECK(match_messages(timeout, c).empty());
  }

  TEST_CASE("run_corpus runs every pair in canonical order") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {
                                        "alpha: xref\nbeta: missing font\n",
                                        "beta: fatal\n",
                                        "nothing\n",
                                    });
    const auto c = two_parser_catalog();
    const auto runs = run_corpus(m, c, {2});
    REQUIRE(runs.size() == 6);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      CHECK(runs[i].file_id == i / 2 + 1);
      CHECK(runs[i].parser == (i % 2 == 0 ? "alpha" : "beta"));
      CHECK_FALSE(runs[i].timed_out);
    }
    CHECK(runs[0].stderr_text == "alpha: xref\n");
    CHECK(runs[1].stderr_text == "beta: missing font\n");
    CHECK(runs[3].exit_code == 1);
    CHECK(runs[2].exit_code == 0);

    const auto serial = run_corpus(m, c, {1});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      CHECK(serial[i].stderr_text == runs[i].stderr_text);
      CHECK(serial[i].exit_code == runs[i].exit_code);
    }
  }

  TEST_CASE("missing executable fails before running anything") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {"x"});
    MessageCatalog c({stub_parser("alpha"),
                      {"ghost", "docstat-no-such-binary", {"{file}"},
                       std::chrono::duration<double>(1.0)}},
                     {{1, "alpha", "x", "", PatternKind::kRegex},
                      {2, "ghost", "x", "", PatternKind::kRegex}});
    try {
      run_corpus(m, c);
      FAIL("expected MissingExecutableError");
    } catch (const MissingExecutableError& e) {
      CHECK(e.parser() == "ghost");
    }
  }

  TEST_CASE("timeouts and signals are recorded") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {"x"});
    const auto fixtures = support::fixture_dir() / "parsers";
    MessageCatalog c(
        {{"slow", (fixtures / "slow_parser.sh").string(), {"{file}"},
          std::chrono::duration<double>(0.3)},
         {"crash", (fixtures / "crash_parser.sh").string(), {"{file}"},
          std::chrono::duration<double>(5.0)},
         {"noisy", (fixtures / "noisy_parser.sh").string(), {"{file}"},
          std::chrono::duration<double>(5.0)}},
        {{1, "slow", "starting", "", PatternKind::kRegex},
         {2, "crash", "crash", "", PatternKind::kRegex},
         {3, "noisy", "^dos line$", "", PatternKind::kRegex},
         {4, "noisy", "bad byte", "", PatternKind::kRegex}});
    const auto runs = run_corpus(m, c, {3});
    REQUIRE(runs.size() == 3);

    CHECK(runs[0].timed_out);
    CHECK_FALSE(runs[0].exit_code.has_value());
    CHECK(runs[0].duration_s < 5.0);
    CHECK(runs[0].stderr_text.find("starting") != std::string::npos);

    CHECK(runs[1].exit_code == 128 + 11);
    CHECK(runs[2].exit_code == 0);
    CHECK(runs[2].stderr_text.find("\xEF\xBF\xBD") != std::string::npos);

    const auto matrix = build_relation_matrix(runs, c, "t");
    CHECK(matrix.count(0, 0) == 1);
    CHECK(matrix.count(1, 0) == 1);
    CHECK(matrix.count(2, 0) == 1);
    CHECK(matrix.count(3, 0) == 1);
  }

  TEST_CASE("lossy decoding") {
    CHECK(decode_lossy("plain") == "plain");
    CHECK(decode_lossy("caf\xC3\xA9") == "caf\xC3\xA9");
    CHECK(decode_lossy("a\xFF" "b") == "a\xEF\xBF\xBD" "b");
    CHECK(decode_lossy("\xE2\x82") == "\xEF\xBF\xBD");
  }

  TEST_CASE("captured logs round trip") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {"a", "b"});
    const auto c = two_parser_catalog();
    std::vector<ParserRun> runs{
        {1, "alpha", 0, "alpha: xref\n", 0.5, false},
        {1, "beta", 3, "", 0.25, false},
        {2, "alpha", std::nullopt, "partial", 10.0, true},
        {2, "beta", 0, "beta: missing glyph\n", 0.125, false},
    };
    write_captured(dir / "logs", runs);
    CHECK(fs::exists(dir / "logs" / (captured_log_stem(1, "alpha") + ".stderr")));
    CHECK(captured_log_stem(1, "alpha") == "f000001.alpha");

    const auto back = ingest_captured(dir / "logs", m, c);
    CHECK(back.warnings.empty());
    CHECK(back.runs == runs);
  }

  TEST_CASE("ingest tolerates gaps and rejects layout violations") {
    support::TempDir dir;
    const auto m = make_corpus(dir, {"a", "b"});
    const auto c = two_parser_catalog();
    fs::create_directories(dir / "logs");
    write_text(dir / "logs" / "f000001.alpha.stderr", "alpha: xref\n");
    write_text(dir / "logs" / "f000009.alpha.stderr", "alpha: xref\n");
    write_text(dir / "logs" / "f000001.gamma.stderr", "x\n");

    const auto r = ingest_captured(dir / "logs", m, c);
    CHECK(r.runs.size() == 4);
    CHECK(r.warnings.size() == 2 + 3);
    CHECK(r.runs[0].stderr_text == "alpha: xref\n");
    CHECK(r.runs[1].stderr_text.empty());

    write_text(dir / "logs" / "notes.txt", "");
    CHECK_THROWS_AS(ingest_captured(dir / "logs", m, c), ParseError);
    fs::remove(dir / "logs" / "notes.txt");

    write_text(dir / "logs" / "f000002.beta.meta", R"({"exit_code": 1, "timed_out": true})");
    CHECK_THROWS_AS(ingest_captured(dir / "logs", m, c), ParseError);
  }
}
