#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace argmine {

enum class Role { premise, conclusion };
enum class CaseType { decision, judgement };
enum class Scope { full, law_section };

const char* to_string(Role r);
const char* to_string(CaseType c);
const char* to_string(Scope s);
Role role_from_string(const std::string& s);
CaseType case_type_from_string(const std::string& s);
Scope scope_from_string(const std::string& s);

// One (argument, role) membership of a clause. A clause can be a premise in
// one argument and the conclusion of another.
struct Membership {
  std::string argument_id;
  Role role = Role::premise;

  bool operator==(const Membership&) const = default;
  bool operator<(const Membership& o) const {
    if (argument_id != o.argument_id) return argument_id < o.argument_id;
    return static_cast<int>(role) < static_cast<int>(o.role);
  }
};

// Sentence-level text unit. order_index is the position within the document,
// contiguous from 0.
struct Clause {
  std::string clause_id;
  std::string document_id;
  int order_index = 0;
  std::string text;
  std::vector<Membership> memberships;  // sorted, unique

  bool is_argument() const { return !memberships.empty(); }
  bool has_role(Role r) const;

  bool operator==(const Clause&) const = default;
};

// Symmetric predicate: do two clauses belong to at least one common argument?
bool clauses_share_argument(const Clause& a, const Clause& b);

struct Document {
  std::string document_id;
  CaseType case_type = CaseType::decision;
  std::vector<Clause> clauses;
  // Resolved at parse time: the explicit record field when present, else the
  // detected heading position, else absent.
  std::optional<int> law_section_start;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::string provenance;

  const Document* find(const std::string& document_id) const;

  bool operator==(const Corpus&) const = default;
};

struct Fold {
  std::vector<std::string> train_doc_ids;
  std::vector<std::string> val_doc_ids;

  bool operator==(const Fold&) const = default;
};

struct Split {
  std::vector<std::string> train_doc_ids;
  std::vector<std::string> test_doc_ids;
  std::vector<Fold> folds;
  std::uint64_t seed = 0;

  bool operator==(const Split&) const = default;
};

struct ValidationIssue {
  enum class Severity { warning, error };
  Severity severity = Severity::warning;
  std::string document_id;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  int documents = 0;
  int decisions = 0;
  int judgements = 0;
  int clauses = 0;
  int argument_clauses = 0;
  int arguments = 0;
  int premise_memberships = 0;
  int conclusion_memberships = 0;

  bool has_warnings() const;
  bool has_errors() const;
};

// Index of the first clause whose normalized text (uppercased, trimmed)
// equals "AS TO THE LAW" or "THE LAW".
std::optional<int> detect_law_section(const Document& doc);

// Parses one JSONL document record per line. Throws MalformedRecord,
// DuplicateClauseId or DanglingArgumentRef with the offending line number.
// Degenerate arguments (multiple conclusions, zero premises) load fine and
// surface as warnings from validate_corpus.
Corpus parse_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in, const std::string& provenance);

void serialize_corpus(const Corpus& corpus, std::ostream& out);
void serialize_corpus(const Corpus& corpus, const std::filesystem::path& path);

ValidationReport validate_corpus(const Corpus& corpus);

// scope=full: every clause. scope=law_section: clauses at or after the
// boundary; documents without a boundary fall back to the full list and emit
// a warning.
std::vector<Clause> scope_filter(const Document& doc, Scope scope,
                                 std::vector<std::string>* warnings = nullptr);

// Document-granularity shuffle split: |train| = round(train_fraction * N),
// the k folds partition the train documents into near-equal validation
// groups (larger groups first). Deterministic for a fixed seed.
Split split_corpus(const Corpus& corpus, double train_fraction, int k,
                   std::uint64_t seed);

std::string split_to_json(const Split& split);
Split split_from_json(const std::string& text);

}  // namespace argmine
