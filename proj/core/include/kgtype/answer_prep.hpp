#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgtype/coarse_ner.hpp"
#include "kgtype/embedding_store.hpp"
#include "kgtype/type_graph.hpp"
#include "kgtype/type_suggest.hpp"

namespace kgtype {

struct QAPair {
  std::string question;
  std::string answer;
  std::size_t index = 0;  // position in the input file
};

// A question/answer pair annotated with its ranked supervision types.
struct AugmentedExample {
  std::string question;
  std::string answer;
  RankedTypeList types;
};

// The model's type vocabulary: the six coarse classes (always, in canonical
// order, rows 0..5) followed by the surviving knowledge-graph types ordered
// by descending document frequency, ties lexicographic. Row order is the
// embedding-matrix row order.
struct TypeVocabulary {
  std::vector<std::string> entries;
  std::size_t restriction_k = 0;
  std::size_t threshold_c = 0;
  double ner_score = 1.0;

  std::size_t size() const { return entries.size(); }
  bool contains(const std::string& name) const { return index_of(name) >= 0; }
  int index_of(const std::string& name) const;
  // Knowledge-graph members only (rows 6..), the valid remap targets.
  std::span<const std::string> kg_entries() const;

  static TypeVocabulary from_entries(std::vector<std::string> entries, std::size_t restriction_k,
                                     std::size_t threshold_c, double ner_score);

 private:
  mutable std::unordered_map<std::string, int> index_;  // built lazily from entries
};

struct PrepConfig {
  std::size_t restriction_k = 1;
  std::size_t threshold_c = 1;
  double ner_score = 1.0;
};

struct PrepStats {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t remapped = 0;
};

// Type acquisition: the coarse recognizer when it fires (a singleton list at
// ner_score), the one-seed type suggestion over the answer string otherwise.
// nullopt when neither route yields a type; such drops are reported on diag.
std::optional<AugmentedExample> acquire_types(const TypeGraph& g, const EmbeddingStore& store,
                                              const QAPair& pair, double ner_score,
                                              std::ostream* diag = nullptr);

// Frequency-based restriction: keep the top restriction_k knowledge-graph
// types by document frequency (ties lexicographic), then among those only the
// ones with frequency < threshold_c, and union with the six coarse classes.
TypeVocabulary build_vocabulary(std::span<const AugmentedExample> dataset,
                                std::size_t restriction_k, std::size_t threshold_c,
                                double ner_score = 1.0);

// Maps every out-of-vocabulary type to its nearest in-vocabulary
// knowledge-graph type by subclass-graph distance (ties lexicographic;
// unreachable entries are dropped), merging duplicate targets by summing
// their weights.
AugmentedExample restrict_types(const TypeGraph& g, const AugmentedExample& example,
                                const TypeVocabulary& vocab, std::size_t* remapped = nullptr);

// acquire -> build_vocabulary -> restrict, then per-example weights are
// normalized to sum to 1. Output order equals input order.
std::pair<TypeVocabulary, std::vector<AugmentedExample>> prepare_dataset(
    const TypeGraph& g, const EmbeddingStore& store, std::span<const QAPair> pairs,
    const PrepConfig& cfg, PrepStats* stats = nullptr, std::ostream* diag = nullptr);

// `question<TAB>answer` lines, `#` comments allowed.
std::vector<QAPair> load_qa_pairs(const std::filesystem::path& path);

// JSON lines, one {"question", "answer", "types": [[type, weight], ...]}
// object per example.
void save_dataset(const std::filesystem::path& path, std::span<const AugmentedExample> dataset);
std::vector<AugmentedExample> load_dataset(const std::filesystem::path& path);

// Sidecar vocabulary file, one entry per line in row order.
void save_vocabulary(const std::filesystem::path& path, const TypeVocabulary& vocab);
TypeVocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace kgtype
