#include "kgtype/answer_prep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgtype/errors.hpp"
#include "kgtype/text.hpp"

namespace kgtype {

int TypeVocabulary::index_of(const std::string& name) const {
  if (index_.size() != entries.size()) {
    index_.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) index_[entries[i]] = static_cast<int>(i);
  }
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

std::span<const std::string> TypeVocabulary::kg_entries() const {
  return {entries.data() + kCoarseClasses.size(), entries.size() - kCoarseClasses.size()};
}

TypeVocabulary TypeVocabulary::from_entries(std::vector<std::string> entries,
                                            std::size_t restriction_k, std::size_t threshold_c,
                                            double ner_score) {
  TypeVocabulary vocab;
  vocab.entries = std::move(entries);
  vocab.restriction_k = restriction_k;
  vocab.threshold_c = threshold_c;
  vocab.ner_score = ner_score;
  if (vocab.entries.size() < kCoarseClasses.size())
    throw ConfigError("type vocabulary is missing the coarse classes");
  for (std::size_t i = 0; i < kCoarseClasses.size(); ++i) {
    if (vocab.entries[i] != to_string(kCoarseClasses[i]))
      throw ConfigError("type vocabulary row " + std::to_string(i) + " must be " +
                        std::string(to_string(kCoarseClasses[i])) + ", got " + vocab.entries[i]);
  }
  return vocab;
}

std::optional<AugmentedExample> acquire_types(const TypeGraph& g, const EmbeddingStore& store,
                                              const QAPair& pair, double ner_score,
                                              std::ostream* diag) {
  if (auto coarse = coarse_ner(pair.answer)) {
    return AugmentedExample{pair.question, pair.answer,
                            {{std::string(to_string(*coarse)), ner_score}}};
  }
  // One-seed suggestion over the answer string; k = 1 keeps expansion off so
  // no neighbor semantics leak into the supervision signal.
  RankedTypeList ranked = suggest(g, store, SeedQuery{{pair.answer}, 1}, nullptr);
  if (ranked.empty()) {
    if (diag)
      *diag << "dropped pair " << pair.index << ": answer \"" << pair.answer
            << "\" is neither a coarse value nor linkable\n";
    return std::nullopt;
  }
  return AugmentedExample{pair.question, pair.answer, std::move(ranked)};
}

TypeVocabulary build_vocabulary(std::span<const AugmentedExample> dataset,
                                std::size_t restriction_k, std::size_t threshold_c,
                                double ner_score) {
  if (dataset.empty()) throw ConfigError("cannot build a vocabulary from an empty dataset");
  if (restriction_k < 1) throw ConfigError("restriction_k must be >= 1");
  if (threshold_c < 1) throw ConfigError("threshold_c must be >= 1");

  // Document frequency per knowledge-graph type; the coarse classes do not
  // compete for the k slots, they are always unioned in below.
  std::map<std::string, std::size_t> freq;
  for (const auto& example : dataset)
    for (const auto& entry : example.types)
      if (!is_coarse_class_name(entry.type)) ++freq[entry.type];

  std::vector<std::pair<std::string, std::size_t>> ordered(freq.begin(), freq.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ordered.size() > restriction_k) ordered.resize(restriction_k);

  std::vector<std::string> kept;
  for (const auto& [type, count] : ordered)
    if (count < threshold_c) kept.push_back(type);
  if (kept.empty() && !freq.empty())
    throw Error("empty vocabulary: every type was pruned as generic (frequency >= " +
                std::to_string(threshold_c) + ")");

  std::vector<std::string> entries;
  entries.reserve(kCoarseClasses.size() + kept.size());
  for (CoarseClass c : kCoarseClasses) entries.emplace_back(to_string(c));
  entries.insert(entries.end(), kept.begin(), kept.end());
  return TypeVocabulary::from_entries(std::move(entries), restriction_k, threshold_c, ner_score);
}

AugmentedExample restrict_types(const TypeGraph& g, const AugmentedExample& example,
                                const TypeVocabulary& vocab, std::size_t* remapped) {
  if (vocab.entries.empty()) throw ConfigError("empty type vocabulary");

  std::map<std::string, double> merged;
  for (const auto& [type, weight] : example.types) {
    if (vocab.contains(type)) {
      merged[type] += weight;
      continue;
    }
    // Nearest in-vocabulary knowledge-graph type; coarse classes are not in
    // the graph and cannot be remap targets.
    if (g.type_index(type) < 0) continue;
    std::optional<int> best_dist;
    const std::string* best = nullptr;
    for (const auto& candidate : vocab.kg_entries()) {
      if (g.type_index(candidate) < 0) continue;
      auto dist = g.distance(type, candidate);
      if (!dist) continue;
      if (!best_dist || *dist < *best_dist || (*dist == *best_dist && candidate < *best)) {
        best_dist = dist;
        best = &candidate;
      }
    }
    if (!best) continue;  // unreachable from every vocabulary member
    merged[*best] += weight;
    if (remapped) ++*remapped;
  }

  AugmentedExample out{example.question, example.answer, {}};
  out.types.reserve(merged.size());
  for (const auto& [type, weight] : merged) out.types.push_back({type, weight});
  std::sort(out.types.begin(), out.types.end(), [](const ScoredType& a, const ScoredType& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.type < b.type;
  });
  return out;
}

std::pair<TypeVocabulary, std::vector<AugmentedExample>> prepare_dataset(
    const TypeGraph& g, const EmbeddingStore& store, std::span<const QAPair> pairs,
    const PrepConfig& cfg, PrepStats* stats, std::ostream* diag) {
  PrepStats local;
  std::vector<AugmentedExample> acquired;
  acquired.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (auto example = acquire_types(g, store, pair, cfg.ner_score, diag))
      acquired.push_back(std::move(*example));
    else
      ++local.dropped;
  }
  if (acquired.empty()) throw Error("empty dataset: no question/answer pair survived acquisition");

  TypeVocabulary vocab =
      build_vocabulary(acquired, cfg.restriction_k, cfg.threshold_c, cfg.ner_score);

  std::vector<AugmentedExample> restricted;
  restricted.reserve(acquired.size());
  for (auto& example : acquired) {
    AugmentedExample out = restrict_types(g, example, vocab, &local.remapped);
    // Normalize the surviving weights into a per-example distribution.
    double total = 0.0;
    RankedTypeList positive;
    for (auto& entry : out.types)
      if (entry.score > 0.0) {
        total += entry.score;
        positive.push_back(entry);
      }
    if (positive.empty()) {
      ++local.dropped;
      if (diag)
        *diag << "dropped example (answer \"" << out.answer
              << "\"): no in-vocabulary type with positive weight\n";
      continue;
    }
    for (auto& entry : positive) entry.score /= total;
    out.types = std::move(positive);
    restricted.push_back(std::move(out));
  }
  if (restricted.empty()) throw Error("empty dataset: restriction removed every example");
  local.kept = restricted.size();
  if (stats) *stats = local;
  return {std::move(vocab), std::move(restricted)};
}

std::vector<QAPair> load_qa_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open question/answer file: " + path.string());
  std::vector<QAPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2)
      throw ParseError(path.string(), lineno, "expected question<TAB>answer");
    if (fields[0].empty() || fields[1].empty())
      throw ParseError(path.string(), lineno, "empty question or answer");
    pairs.push_back({fields[0], fields[1], pairs.size()});
  }
  return pairs;
}

void save_dataset(const std::filesystem::path& path, std::span<const AugmentedExample> dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file: " + path.string());
  for (const auto& example : dataset) {
    nlohmann::ordered_json row;
    row["question"] = example.question;
    row["answer"] = example.answer;
    auto types = nlohmann::ordered_json::array();
    for (const auto& [type, weight] : example.types)
      types.push_back(nlohmann::ordered_json::array({type, weight}));
    row["types"] = std::move(types);
    out << row.dump() << '\n';
  }
}

std::vector<AugmentedExample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path.string());
  std::vector<AugmentedExample> dataset;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
    if (!row.contains("question") || !row.contains("answer") || !row.contains("types"))
      throw ParseError(path.string(), lineno, "missing question/answer/types field");
    AugmentedExample example;
    example.question = row["question"].get<std::string>();
    example.answer = row["answer"].get<std::string>();
    for (const auto& entry : row["types"]) {
      if (!entry.is_array() || entry.size() != 2)
        throw ParseError(path.string(), lineno, "types entries must be [type, weight] pairs");
      example.types.push_back({entry[0].get<std::string>(), entry[1].get<double>()});
    }
    if (example.types.empty())
      throw ParseError(path.string(), lineno, "example has no types");
    dataset.push_back(std::move(example));
  }
  if (dataset.empty()) throw ParseError(path.string(), lineno, "empty dataset file");
  return dataset;
}

void save_vocabulary(const std::filesystem::path& path, const TypeVocabulary& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary file: " + path.string());
  out << "# type vocabulary, rows are embedding-matrix rows\n";
  out << "# restriction_k=" << vocab.restriction_k << " threshold_c=" << vocab.threshold_c
      << " ner_score=" << vocab.ner_score << '\n';
  for (const auto& entry : vocab.entries) out << entry << '\n';
}

TypeVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vocabulary file: " + path.string());
  std::vector<std::string> entries;
  std::size_t restriction_k = 0, threshold_c = 0;
  double ner_score = 1.0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "restriction_k") restriction_k = std::stoull(value);
        else if (key == "threshold_c") threshold_c = std::stoull(value);
        else if (key == "ner_score") ner_score = std::stod(value);
      }
      continue;
    }
    entries.push_back(line);
  }
  return TypeVocabulary::from_entries(std::move(entries), restriction_k, threshold_c, ner_score);
}

}  // namespace kgtype
