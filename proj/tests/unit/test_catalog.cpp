#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace docstat;

namespace {

ParserSpec parser(std::string name) {
  return {std::move(name), "true", {"-q", "{file}"}, std::chrono::duration<double>(1.0)};
}

MessagePattern msg(RowIndex row, std::string owner, std::string regex = ".+") {
  return {row, std::move(owner), std::move(regex), "", PatternKind::kRegex};
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("published catalog has 955 rows and every row has one owner") {
    const auto c = support::table2_catalog();
    CHECK(c.size() == 955);
    CHECK(c.parsers().size() == 22);

    const auto ranges = parser_row_ranges(c);
    std::set<RowIndex> seen;
    std::size_t total = 0;
    for (const auto& [name, rows] : ranges) {
      total += rows.size();
      seen.insert(rows.begin(), rows.end());
    }
    CHECK(total == 955);
    CHECK(seen.size() == 955);
    CHECK(*seen.begin() == 1);
    CHECK(*seen.rbegin() == 955);
  }

  TEST_CASE("parsers own disjoint ranges") {
    const auto c = support::table2_catalog();
    const auto ranges = parser_row_ranges(c);

    std::vector<RowIndex> mutool(ranges.at("mutool_show"));
    REQUIRE(mutool.size() == 48);
    CHECK(mutool.front() == 590);
    CHECK(mutool[45] == 635);
    CHECK(mutool[46] == 922);
    CHECK(mutool[47] == 923);

    const auto& caradoc = ranges.at("caradoc_extract");
    CHECK(caradoc.size() == 198);
    CHECK(caradoc[195] == 196);
    CHECK(caradoc[196] == 912);
    CHECK(caradoc[197] == 913);

    CHECK(c.owner(589) == "hammer");
    CHECK(ranges.at("hammer") == std::vector<RowIndex>{589, 918, 919});
  }

  TEST_CASE("duplicate row index is rejected with the row") {
    try {
      MessageCatalog({parser("p")}, {msg(1, "p"), msg(2, "p"), msg(2, "p")});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.row() == 2);
    }
  }

  TEST_CASE("structural violations") {
    CHECK_THROWS_AS(MessageCatalog({parser("p")}, {msg(1, "p"), msg(3, "p")}), ValidationError);
    CHECK_THROWS_AS(MessageCatalog({parser("p")}, {msg(2, "p"), msg(1, "p")}), ValidationError);
    CHECK_THROWS_AS(MessageCatalog({parser("p")}, {msg(1, "q")}), ValidationError);
    CHECK_THROWS_AS(MessageCatalog({parser("p"), parser("p")}, {msg(1, "p")}), ValidationError);
    CHECK_THROWS_AS(MessageCatalog({parser("p")}, {msg(1, "p", "(unclosed")}), ValidationError);

    auto no_placeholder = parser("p");
    no_placeholder.args = {"-q"};
    CHECK_THROWS_AS(MessageCatalog({no_placeholder}, {msg(1, "p")}), ValidationError);
    auto two_placeholders = parser("p");
    two_placeholders.args = {"{file}", "{file}"};
    CHECK_THROWS_AS(MessageCatalog({two_placeholders}, {msg(1, "p")}), ValidationError);
    auto zero_timeout = parser("p");
    zero_timeout.timeout = std::chrono::duration<double>(0.0);
    CHECK_THROWS_AS(MessageCatalog({zero_timeout}, {msg(1, "p")}), ValidationError);
  }

  TEST_CASE("expand_args substitutes the placeholder") {
    auto p = parser("p");
    p.args = {"--in={file}", "-v"};
    CHECK(p.expand_args("/tmp/x.pdf") == std::vector<std::string>{"--in=/tmp/x.pdf", "-v"});
  }

  TEST_CASE("json round trip") {
    const auto c = support::table2_catalog();
    const auto back = parse_catalog(catalog_to_json(c));
    CHECK(back == c);

    const auto with_exit = c.with_exit_rows();
    CHECK(with_exit.size() == 955 + 22);
    CHECK(with_exit.pattern(956).kind == PatternKind::kNonzeroExit);
    CHECK(with_exit.owner(956) == "caradoc_extract");
    CHECK(parse_catalog(catalog_to_json(with_exit)) == with_exit);
  }

  TEST_CASE("json errors") {
    CHECK_THROWS_AS(parse_catalog("{not json"), ParseError);
    CHECK_THROWS_AS(parse_catalog(R"({"parsers": []})"), ParseError);
    const auto dup = R"({"parsers":[{"name":"p","command":"true","args":["{file}"],"timeout_s":1}],
      "messages":[{"row":1,"parser":"p","regex":"a","description":""},
                  {"row":1,"parser":"p","regex":"b","description":""}]})";
    try {
      parse_catalog(dup);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.row() == 1);
    }
  }

  TEST_CASE("save and load") {
    support::TempDir dir;
    const auto c = support::table2_catalog();
    save_catalog(c, dir / "c.json");
    CHECK(load_catalog(dir / "c.json") == c);
  }
}
