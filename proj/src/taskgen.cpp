#include "argmine/taskgen.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

namespace argmine {

using nlohmann::json;

std::vector<ClauseExample> build_clause_recognition(const Corpus& corpus, Scope scope,
                                                    std::vector<std::string>* warnings) {
  std::vector<ClauseExample> examples;
  for (const auto& doc : corpus.documents) {
    const auto scoped = scope_filter(doc, scope, warnings);
    if (scoped.empty()) {
      if (warnings)
        warnings->push_back("document \"" + doc.document_id +
                            "\" contributes no clauses in scope; skipped");
      continue;
    }
    for (const auto& clause : scoped) {
      examples.push_back({clause.clause_id, doc.document_id, clause.text,
                          clause.is_argument() ? 1 : 0});
    }
  }
  return examples;
}

std::vector<Clause> order_argument_clauses(const Document& doc) {
  std::vector<Clause> out;
  for (const auto& clause : doc.clauses)
    if (clause.is_argument()) out.push_back(clause);
  return out;  // doc.clauses is already in order_index order
}

std::vector<ClausePairExample> build_relation_pairs(
    const std::vector<Clause>& argument_clauses, int window) {
  const auto n = static_cast<std::int64_t>(argument_clauses.size());
  std::vector<ClausePairExample> pairs;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n && j - i <= window - 1; ++j) {
      const Clause& a = argument_clauses[i];
      const Clause& b = argument_clauses[j];
      pairs.push_back({a.clause_id, b.clause_id, a.document_id, a.text, b.text,
                       clauses_share_argument(a, b) ? 1 : 0,
                       static_cast<int>(j - i)});
    }
  }
  return pairs;
}

std::vector<ClausePairExample> build_relation_pairs(const Corpus& corpus, Scope scope,
                                                    int window) {
  std::vector<ClausePairExample> pairs;
  for (const auto& doc : corpus.documents) {
    Document scoped_doc = doc;
    scoped_doc.clauses = scope_filter(doc, scope);
    auto doc_pairs = build_relation_pairs(order_argument_clauses(scoped_doc), window);
    pairs.insert(pairs.end(), doc_pairs.begin(), doc_pairs.end());
  }
  return pairs;
}

std::vector<ComponentExample> build_component_task(const Corpus& corpus, Role role_target,
                                                   Scope scope) {
  std::vector<ComponentExample> examples;
  for (const auto& doc : corpus.documents) {
    for (const auto& clause : scope_filter(doc, scope)) {
      if (!clause.is_argument()) continue;
      examples.push_back({clause.clause_id, doc.document_id, clause.text, role_target,
                          clause.has_role(role_target) ? 1 : 0});
    }
  }
  return examples;
}

std::int64_t relation_pair_count(std::int64_t n, int window) {
  std::int64_t total = 0;
  for (int d = 1; d <= window - 1; ++d) total += std::max<std::int64_t>(0, n - d);
  return total;
}

LabelStats label_stats(const std::vector<ClauseExample>& xs) {
  LabelStats s;
  for (const auto& x : xs) { ++s.total; s.positives += x.label; }
  return s;
}

LabelStats label_stats(const std::vector<ClausePairExample>& xs) {
  LabelStats s;
  for (const auto& x : xs) { ++s.total; s.positives += x.label; }
  return s;
}

LabelStats label_stats(const std::vector<ComponentExample>& xs) {
  LabelStats s;
  for (const auto& x : xs) { ++s.total; s.positives += x.label; }
  return s;
}

void serialize_examples(const std::vector<ClauseExample>& xs, std::ostream& out) {
  for (const auto& x : xs) {
    json j{{"clause_id", x.clause_id},
           {"document_id", x.document_id},
           {"text", x.text},
           {"label", x.label}};
    out << j.dump() << "\n";
  }
}

void serialize_examples(const std::vector<ClausePairExample>& xs, std::ostream& out) {
  for (const auto& x : xs) {
    json j{{"clause_id_a", x.clause_id_a}, {"clause_id_b", x.clause_id_b},
           {"document_id", x.document_id}, {"text_a", x.text_a},
           {"text_b", x.text_b},           {"label", x.label},
           {"offset", x.offset}};
    out << j.dump() << "\n";
  }
}

void serialize_examples(const std::vector<ComponentExample>& xs, std::ostream& out) {
  for (const auto& x : xs) {
    json j{{"clause_id", x.clause_id},
           {"document_id", x.document_id},
           {"text", x.text},
           {"role_target", to_string(x.role_target)},
           {"label", x.label}};
    out << j.dump() << "\n";
  }
}

}  // namespace argmine
