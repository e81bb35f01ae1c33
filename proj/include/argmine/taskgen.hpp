#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "argmine/corpus.hpp"

namespace argmine {

// Task 1: is this clause argumentative at all?
struct ClauseExample {
  std::string clause_id;
  std::string document_id;
  std::string text;
  int label = 0;  // 1 iff the clause has at least one membership

  bool operator==(const ClauseExample&) const = default;
};

// Task 2: do two argument clauses belong to the same argument? offset is the
// position distance within the per-document argument-clause sequence.
struct ClausePairExample {
  std::string clause_id_a;
  std::string clause_id_b;
  std::string document_id;
  std::string text_a;
  std::string text_b;
  int label = 0;
  int offset = 0;

  bool operator==(const ClausePairExample&) const = default;
};

// Task 3: does this argument clause carry role_target in any argument?
struct ComponentExample {
  std::string clause_id;
  std::string document_id;
  std::string text;
  Role role_target = Role::premise;
  int label = 0;

  bool operator==(const ComponentExample&) const = default;
};

// One example per scoped clause, label 1 iff argumentative. Documents whose
// scope yields zero clauses are skipped with a warning.
std::vector<ClauseExample> build_clause_recognition(
    const Corpus& corpus, Scope scope, std::vector<std::string>* warnings = nullptr);

// All argument clauses of the document in order_index order (gold clauses;
// downstream tasks assume perfect clause recognition).
std::vector<Clause> order_argument_clauses(const Document& doc);

// Pairs (i, j) with 1 <= j - i <= window - 1 over one ordered argument-clause
// sequence, ascending i then j. Label 1 iff the clauses share an argument.
std::vector<ClausePairExample> build_relation_pairs(
    const std::vector<Clause>& argument_clauses, int window = 5);

// Per-document pair generation over the whole corpus; pairs never cross
// document boundaries.
std::vector<ClausePairExample> build_relation_pairs(const Corpus& corpus,
                                                    Scope scope = Scope::full,
                                                    int window = 5);

// One example per scoped argument clause (non-argument clauses excluded).
std::vector<ComponentExample> build_component_task(
    const Corpus& corpus, Role role_target, Scope scope = Scope::full);

// Closed-form pair count for n argument clauses and window w.
std::int64_t relation_pair_count(std::int64_t n, int window);

struct LabelStats {
  std::int64_t total = 0;
  std::int64_t positives = 0;
  double positive_rate() const {
    return total == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(total);
  }
};

LabelStats label_stats(const std::vector<ClauseExample>& xs);
LabelStats label_stats(const std::vector<ClausePairExample>& xs);
LabelStats label_stats(const std::vector<ComponentExample>& xs);

void serialize_examples(const std::vector<ClauseExample>& xs, std::ostream& out);
void serialize_examples(const std::vector<ClausePairExample>& xs, std::ostream& out);
void serialize_examples(const std::vector<ComponentExample>& xs, std::ostream& out);

}  // namespace argmine
