#include "argmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "argmine/errors.hpp"
#include "argmine/random.hpp"

namespace argmine {

using nlohmann::json;

const char* to_string(Role r) {
  return r == Role::premise ? "premise" : "conclusion";
}

const char* to_string(CaseType c) {
  return c == CaseType::decision ? "decision" : "judgement";
}

const char* to_string(Scope s) {
  return s == Scope::full ? "full" : "law_section";
}

Role role_from_string(const std::string& s) {
  if (s == "premise") return Role::premise;
  if (s == "conclusion") return Role::conclusion;
  throw MalformedRecord("unknown role: \"" + s + "\"");
}

CaseType case_type_from_string(const std::string& s) {
  if (s == "decision") return CaseType::decision;
  if (s == "judgement") return CaseType::judgement;
  throw MalformedRecord("unknown case_type: \"" + s + "\"");
}

Scope scope_from_string(const std::string& s) {
  if (s == "full") return Scope::full;
  if (s == "law_section") return Scope::law_section;
  throw ConfigError("unknown scope: \"" + s + "\"");
}

bool Clause::has_role(Role r) const {
  for (const auto& m : memberships)
    if (m.role == r) return true;
  return false;
}

bool clauses_share_argument(const Clause& a, const Clause& b) {
  for (const auto& ma : a.memberships)
    for (const auto& mb : b.memberships)
      if (ma.argument_id == mb.argument_id) return true;
  return false;
}

const Document* Corpus::find(const std::string& document_id) const {
  for (const auto& d : documents)
    if (d.document_id == document_id) return &d;
  return nullptr;
}

bool ValidationReport::has_warnings() const {
  return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == ValidationIssue::Severity::warning;
  });
}

bool ValidationReport::has_errors() const {
  return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == ValidationIssue::Severity::error;
  });
}

namespace {

std::string normalize_heading(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i)
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i]))));
  return out;
}

[[noreturn]] void malformed(int line, const std::string& what) {
  throw MalformedRecord("line " + std::to_string(line) + ": " + what);
}

std::string require_string(const json& j, const char* field, int line) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string())
    malformed(line, std::string("missing or non-string field \"") + field + "\"");
  return it->get<std::string>();
}

}  // namespace

std::optional<int> detect_law_section(const Document& doc) {
  for (const auto& clause : doc.clauses) {
    const std::string h = normalize_heading(clause.text);
    if (h == "AS TO THE LAW" || h == "THE LAW") return clause.order_index;
  }
  return std::nullopt;
}

Corpus parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  return parse_corpus(in, path.string());
}

Corpus parse_corpus(std::istream& in, const std::string& provenance) {
  Corpus corpus;
  corpus.provenance = provenance;

  std::set<std::string> seen_docs;
  std::set<std::string> seen_clauses;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      malformed(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) malformed(line_no, "record is not a JSON object");

    Document doc;
    doc.document_id = require_string(record, "document_id", line_no);
    doc.case_type = case_type_from_string(require_string(record, "case_type", line_no));
    if (!seen_docs.insert(doc.document_id).second)
      malformed(line_no, "duplicate document_id \"" + doc.document_id + "\"");

    auto clauses_it = record.find("clauses");
    if (clauses_it == record.end() || !clauses_it->is_array())
      malformed(line_no, "missing or non-array field \"clauses\"");

    int index = 0;
    for (const auto& cj : *clauses_it) {
      if (!cj.is_object()) malformed(line_no, "clause entry is not an object");
      Clause clause;
      clause.document_id = doc.document_id;
      clause.order_index = index++;
      clause.clause_id = require_string(cj, "clause_id", line_no);
      clause.text = require_string(cj, "text", line_no);
      if (!seen_clauses.insert(clause.clause_id).second)
        throw DuplicateClauseId("line " + std::to_string(line_no) +
                                ": duplicate clause_id \"" + clause.clause_id + "\"");

      if (auto ms = cj.find("memberships"); ms != cj.end()) {
        if (!ms->is_array()) malformed(line_no, "\"memberships\" is not an array");
        for (const auto& mj : *ms) {
          if (!mj.is_object()) malformed(line_no, "membership entry is not an object");
          Membership m;
          m.argument_id = require_string(mj, "argument_id", line_no);
          m.role = role_from_string(require_string(mj, "role", line_no));
          clause.memberships.push_back(std::move(m));
        }
        std::sort(clause.memberships.begin(), clause.memberships.end());
        clause.memberships.erase(
            std::unique(clause.memberships.begin(), clause.memberships.end()),
            clause.memberships.end());
        // both roles in one argument on one clause breaks the membership
        // contract outright
        for (std::size_t i = 1; i < clause.memberships.size(); ++i) {
          if (clause.memberships[i].argument_id == clause.memberships[i - 1].argument_id)
            malformed(line_no, "clause \"" + clause.clause_id +
                                   "\" holds two roles in argument \"" +
                                   clause.memberships[i].argument_id + "\"");
        }
      }
      doc.clauses.push_back(std::move(clause));
    }

    if (auto ls = record.find("law_section_start"); ls != record.end()) {
      if (!ls->is_number_integer())
        malformed(line_no, "\"law_section_start\" is not an integer");
      const int v = ls->get<int>();
      if (v < 0 || v >= static_cast<int>(doc.clauses.size()))
        malformed(line_no, "\"law_section_start\" out of range: " + std::to_string(v));
      doc.law_section_start = v;
    } else {
      doc.law_section_start = detect_law_section(doc);
    }

    // every referenced argument must have a conclusion clause somewhere in
    // the document
    std::map<std::string, bool> has_conclusion;
    for (const auto& clause : doc.clauses)
      for (const auto& m : clause.memberships)
        has_conclusion[m.argument_id] |= (m.role == Role::conclusion);
    for (const auto& [arg_id, ok] : has_conclusion) {
      if (!ok)
        throw DanglingArgumentRef("line " + std::to_string(line_no) + ": argument \"" +
                                  arg_id + "\" in document \"" + doc.document_id +
                                  "\" has no conclusion clause");
    }

    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) {
    json record;
    record["document_id"] = doc.document_id;
    record["case_type"] = to_string(doc.case_type);
    if (doc.law_section_start) record["law_section_start"] = *doc.law_section_start;
    json clauses = json::array();
    for (const auto& clause : doc.clauses) {
      json cj;
      cj["clause_id"] = clause.clause_id;
      cj["text"] = clause.text;
      json ms = json::array();
      for (const auto& m : clause.memberships)
        ms.push_back({{"argument_id", m.argument_id}, {"role", to_string(m.role)}});
      cj["memberships"] = std::move(ms);
      clauses.push_back(std::move(cj));
    }
    record["clauses"] = std::move(clauses);
    out << record.dump() << "\n";
  }
}

void serialize_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  serialize_corpus(corpus, out);
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  report.documents = static_cast<int>(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    (doc.case_type == CaseType::decision ? report.decisions : report.judgements)++;
    report.clauses += static_cast<int>(doc.clauses.size());

    std::map<std::string, std::pair<int, int>> premise_conclusion_counts;
    for (const auto& clause : doc.clauses) {
      if (clause.is_argument()) ++report.argument_clauses;
      for (const auto& m : clause.memberships) {
        auto& counts = premise_conclusion_counts[m.argument_id];
        if (m.role == Role::premise) {
          ++counts.first;
          ++report.premise_memberships;
        } else {
          ++counts.second;
          ++report.conclusion_memberships;
        }
      }
    }
    report.arguments += static_cast<int>(premise_conclusion_counts.size());

    for (const auto& [arg_id, counts] : premise_conclusion_counts) {
      if (counts.second > 1)
        report.issues.push_back({ValidationIssue::Severity::warning, doc.document_id,
                                 "argument \"" + arg_id + "\" has " +
                                     std::to_string(counts.second) + " conclusion clauses"});
      if (counts.first == 0)
        report.issues.push_back({ValidationIssue::Severity::warning, doc.document_id,
                                 "argument \"" + arg_id + "\" has no premise clause"});
    }
    if (doc.clauses.empty())
      report.issues.push_back({ValidationIssue::Severity::warning, doc.document_id,
                               "document has no clauses"});
  }
  return report;
}

std::vector<Clause> scope_filter(const Document& doc, Scope scope,
                                 std::vector<std::string>* warnings) {
  if (scope == Scope::law_section) {
    if (!doc.law_section_start) {
      if (warnings)
        warnings->push_back("document \"" + doc.document_id +
                            "\" has no law-section boundary; using full text");
    } else {
      return {doc.clauses.begin() + *doc.law_section_start, doc.clauses.end()};
    }
  }
  return doc.clauses;
}

Split split_corpus(const Corpus& corpus, double train_fraction, int k,
                   std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");
  if (k < 2) throw ConfigError("k must be >= 2");

  std::vector<std::string> ids;
  ids.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) ids.push_back(d.document_id);
  std::sort(ids.begin(), ids.end());

  const auto n_docs = static_cast<std::int64_t>(ids.size());
  const auto n_train =
      static_cast<std::int64_t>(std::floor(train_fraction * static_cast<double>(n_docs) + 0.5));
  if (n_train < k)
    throw TooFewDocuments("need at least k=" + std::to_string(k) +
                          " training documents, got " + std::to_string(n_train));
  if (n_train >= n_docs)
    throw TooFewDocuments("split leaves no test documents");

  RandomStream rng(seed);
  rng.shuffle(ids);

  Split split;
  split.seed = seed;
  split.train_doc_ids.assign(ids.begin(), ids.begin() + n_train);
  split.test_doc_ids.assign(ids.begin() + n_train, ids.end());

  // Near-equal fold validation groups, larger groups first.
  const std::int64_t base = n_train / k;
  const std::int64_t larger = n_train % k;
  std::int64_t offset = 0;
  for (int f = 0; f < k; ++f) {
    const std::int64_t size = base + (f < larger ? 1 : 0);
    Fold fold;
    fold.val_doc_ids.assign(split.train_doc_ids.begin() + offset,
                            split.train_doc_ids.begin() + offset + size);
    for (std::int64_t i = 0; i < n_train; ++i) {
      if (i < offset || i >= offset + size)
        fold.train_doc_ids.push_back(split.train_doc_ids[i]);
    }
    split.folds.push_back(std::move(fold));
    offset += size;
  }
  return split;
}

std::string split_to_json(const Split& split) {
  json j;
  j["seed"] = split.seed;
  j["train_doc_ids"] = split.train_doc_ids;
  j["test_doc_ids"] = split.test_doc_ids;
  json folds = json::array();
  for (const auto& f : split.folds)
    folds.push_back({{"train", f.train_doc_ids}, {"val", f.val_doc_ids}});
  j["folds"] = std::move(folds);
  return j.dump(2);
}

Split split_from_json(const std::string& text) {
  json j = json::parse(text);
  Split split;
  split.seed = j.at("seed").get<std::uint64_t>();
  split.train_doc_ids = j.at("train_doc_ids").get<std::vector<std::string>>();
  split.test_doc_ids = j.at("test_doc_ids").get<std::vector<std::string>>();
  for (const auto& fj : j.at("folds")) {
    Fold f;
    f.train_doc_ids = fj.at("train").get<std::vector<std::string>>();
    f.val_doc_ids = fj.at("val").get<std::vector<std::string>>();
    split.folds.push_back(std::move(f));
  }
  return split;
}

}  // namespace argmine
