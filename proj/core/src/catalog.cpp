#include "docstat/catalog.hpp"

#include <set>

#include <json.hpp>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

namespace {

using nlohmann::json;

std::size_t count_placeholders(const std::vector<std::string>& args) {
  std::size_t n = 0;
  for (const auto& a : args) {
    for (auto pos = a.find(kFilePlaceholder); pos != std::string::npos;
         pos = a.find(kFilePlaceholder, pos + kFilePlaceholder.size())) {
      ++n;
    }
  }
  return n;
}

void validate_parsers(const std::vector<ParserSpec>& parsers) {
  std::set<std::string, std::less<>> seen;
  for (const auto& p : parsers) {
    if (p.name.empty()) throw ValidationError("parser name must be nonempty");
    if (!seen.insert(p.name).second)
      throw ValidationError("duplicate parser name '" + p.name + "'");
    if (p.command.empty())
      throw ValidationError("parser '" + p.name + "': command must be nonempty");
    if (count_placeholders(p.args) != 1)
      throw ValidationError("parser '" + p.name + "': args must contain exactly one " +
                            std::string(kFilePlaceholder) + " placeholder");
    if (!(p.timeout.count() > 0.0))
      throw ValidationError("parser '" + p.name + "': timeout must be positive");
  }
}

}  // namespace

std::vector<std::string> ParserSpec::expand_args(const std::filesystem::path& file) const {
  std::vector<std::string> out;
  out.reserve(args.size());
  const auto file_str = file.string();
  for (auto a : args) {
    if (auto pos = a.find(kFilePlaceholder); pos != std::string::npos)
      a.replace(pos, kFilePlaceholder.size(), file_str);
    out.push_back(std::move(a));
  }
  return out;
}

MessageCatalog::MessageCatalog(std::vector<ParserSpec> parsers,
                               std::vector<MessagePattern> patterns)
    : parsers_(std::move(parsers)), patterns_(std::move(patterns)) {
  validate_parsers(parsers_);

  std::set<RowIndex> rows;
  for (const auto& m : patterns_) {
    if (m.row == 0) throw ValidationError("row_index must be >= 1", m.row);
    if (!rows.insert(m.row).second)
      throw ValidationError("duplicate row_index " + std::to_string(m.row), m.row);
  }
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (patterns_[i].row != i + 1) {
      const RowIndex expected = i + 1;
      const bool gap = rows.count(expected) == 0;
      throw ValidationError(gap ? "missing row_index " + std::to_string(expected)
                                : "row_index " + std::to_string(patterns_[i].row) +
                                      " out of order",
                            gap ? expected : patterns_[i].row);
    }
  }

  auto compiled = std::make_shared<std::vector<std::optional<std::regex>>>();
  compiled->reserve(patterns_.size());
  std::set<std::string, std::less<>> exit_rows;
  for (const auto& m : patterns_) {
    if (find_parser(m.parser) == nullptr)
      throw ValidationError("row " + std::to_string(m.row) + ": undeclared parser '" +
                                m.parser + "'",
                            m.row);
    if (m.kind == PatternKind::kNonzeroExit) {
      if (!exit_rows.insert(m.parser).second)
        throw ValidationError("row " + std::to_string(m.row) +
                                  ": second nonzero_exit row for parser '" + m.parser + "'",
                              m.row);
      compiled->emplace_back(std::nullopt);
      continue;
    }
    try {
      compiled->emplace_back(std::regex(m.regex, std::regex::ECMAScript | std::regex::optimize));
    } catch (const std::regex_error& e) {
      throw ValidationError("row " + std::to_string(m.row) + ": regex does not compile: " +
                                e.what(),
                            m.row);
    }
  }
  for (const auto& m : patterns_) rows_by_parser_[m.parser].push_back(m.row);
  compiled_ = std::move(compiled);
}

const MessagePattern& MessageCatalog::pattern(RowIndex row) const {
  if (row == 0 || row > patterns_.size())
    throw PreconditionError("row " + std::to_string(row) + " outside catalog 1.." +
                            std::to_string(patterns_.size()));
  return patterns_[row - 1];
}

const std::regex& MessageCatalog::compiled(RowIndex row) const {
  const auto& slot = (*compiled_)[pattern(row).row - 1];
  if (!slot) throw PreconditionError("row " + std::to_string(row) + " has no regex");
  return *slot;
}

const ParserSpec* MessageCatalog::find_parser(std::string_view name) const {
  for (const auto& p : parsers_)
    if (p.name == name) return &p;
  return nullptr;
}

std::span<const RowIndex> MessageCatalog::rows_of(std::string_view parser) const {
  const auto it = rows_by_parser_.find(parser);
  if (it == rows_by_parser_.end()) return {};
  return it->second;
}

MessageCatalog MessageCatalog::with_exit_rows() const {
  auto patterns = patterns_;
  for (const auto& p : parsers_) {
    MessagePattern m;
    m.row = patterns.size() + 1;
    m.parser = p.name;
    m.description = "nonzero exit status";
    m.kind = PatternKind::kNonzeroExit;
    patterns.push_back(std::move(m));
  }
  return MessageCatalog(parsers_, std::move(patterns));
}

MessageCatalog parse_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }

  std::vector<ParserSpec> parsers;
  std::vector<MessagePattern> patterns;
  try {
    for (const auto& jp : doc.at("parsers")) {
      ParserSpec p;
      p.name = jp.at("name").get<std::string>();
      p.command = jp.at("command").get<std::string>();
      p.args = jp.at("args").get<std::vector<std::string>>();
      p.timeout = std::chrono::duration<double>(jp.at("timeout_s").get<double>());
      parsers.push_back(std::move(p));
    }
    for (const auto& jm : doc.at("messages")) {
      MessagePattern m;
      const auto row = jm.at("row").get<long long>();
      if (row < 1) throw ValidationError("row_index must be >= 1");
      m.row = static_cast<RowIndex>(row);
      m.parser = jm.at("parser").get<std::string>();
      m.description = jm.value("description", std::string{});
      const auto kind = jm.value("kind", std::string{"regex"});
      if (kind == "nonzero_exit") {
        m.kind = PatternKind::kNonzeroExit;
      } else if (kind == "regex") {
        m.regex = jm.at("regex").get<std::string>();
      } else {
        throw ParseError("catalog: unknown message kind '" + kind + "'");
      }
      patterns.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  return MessageCatalog(std::move(parsers), std::move(patterns));
}

MessageCatalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(csv::read_file(path));
}

std::string catalog_to_json(const MessageCatalog& catalog) {
  json doc;
  doc["parsers"] = json::array();
  for (const auto& p : catalog.parsers()) {
    doc["parsers"].push_back({{"name", p.name},
                              {"command", p.command},
                              {"args", p.args},
                              {"timeout_s", p.timeout.count()}});
  }
  doc["messages"] = json::array();
  for (const auto& m : catalog.patterns()) {
    json jm = {{"row", m.row}, {"parser", m.parser}, {"description", m.description}};
    if (m.kind == PatternKind::kNonzeroExit)
      jm["kind"] = "nonzero_exit";
    else
      jm["regex"] = m.regex;
    doc["messages"].push_back(std::move(jm));
  }
  return doc.dump(2) + "\n";
}

void save_catalog(const MessageCatalog& catalog, const std::filesystem::path& path) {
  csv::write_file_atomic(path, catalog_to_json(catalog));
}

std::map<std::string, std::vector<RowIndex>> parser_row_ranges(const MessageCatalog& catalog) {
  std::map<std::string, std::vector<RowIndex>> out;
  for (const auto& m : catalog.patterns()) out[m.parser].push_back(m.row);
  return out;
}

}  // namespace docstat
