#include "kgtype/embedding_store.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "kgtype/errors.hpp"
#include "kgtype/text.hpp"

namespace kgtype {

namespace {
constexpr double kNormEpsilon = 1e-12;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ConfigError("cosine: length mismatch, " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kNormEpsilon || nb < kNormEpsilon) return 0.0;
  return dot / (na * nb);
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings file: " + path.string());
  return parse(in, path.string());
}

EmbeddingStore EmbeddingStore::parse(std::istream& in, const std::string& source) {
  EmbeddingStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string term;
    fields >> term;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (!fields.eof())
      throw ParseError(source, lineno, "non-numeric vector component for term: " + term);
    if (values.empty()) throw ParseError(source, lineno, "no vector components for term: " + term);
    if (store.dim_ == 0) {
      store.dim_ = values.size();
    } else if (values.size() != store.dim_) {
      throw ParseError(source, lineno,
                       "inconsistent dimension: expected " + std::to_string(store.dim_) +
                           ", got " + std::to_string(values.size()));
    }
    term = to_lower(term);
    if (!store.index_.emplace(term, store.terms_.size()).second)
      throw ParseError(source, lineno, "duplicate term after lowercasing: " + term);
    store.terms_.push_back(term);
    store.values_.insert(store.values_.end(), values.begin(), values.end());
  }
  if (store.terms_.empty()) throw ParseError(source, lineno, "empty embeddings file");
  return store;
}

std::span<const double> EmbeddingStore::vector_at(std::size_t idx) const {
  return {values_.data() + idx * dim_, dim_};
}

bool EmbeddingStore::contains(std::string_view term) const { return find(term) != nullptr; }

const double* EmbeddingStore::find(std::string_view term) const {
  auto it = index_.find(to_lower(term));
  if (it == index_.end()) return nullptr;
  return values_.data() + it->second * dim_;
}

std::optional<std::vector<double>> EmbeddingStore::vector_for(std::string_view term) const {
  if (const double* direct = find(term))
    return std::vector<double>(direct, direct + dim_);
  const auto tokens = tokenize(term);
  if (tokens.size() < 2) return std::nullopt;
  std::vector<double> mean(dim_, 0.0);
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    if (const double* v = find(token)) {
      for (std::size_t i = 0; i < dim_; ++i) mean[i] += v[i];
      ++hits;
    }
  }
  if (hits == 0) return std::nullopt;
  for (double& x : mean) x /= static_cast<double>(hits);
  return mean;
}

std::optional<std::string> EmbeddingStore::nearest_linked_term(
    std::string_view anchor, const std::unordered_set<std::string>& exclude,
    const std::function<bool(const std::string&)>& links) const {
  const std::string key = to_lower(anchor);
  auto it = index_.find(key);
  if (it == index_.end()) throw LookupError("unknown anchor term: " + key);
  std::unordered_set<std::string> skip = exclude;
  skip.insert(key);
  return nearest_linked(vector_at(it->second), skip, links);
}

std::optional<std::string> EmbeddingStore::nearest_linked(
    std::span<const double> anchor, const std::unordered_set<std::string>& exclude,
    const std::function<bool(const std::string&)>& links) const {
  std::optional<std::string> best;
  double best_sim = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const std::string& candidate = terms_[i];
    if (exclude.count(candidate)) continue;
    if (links && !links(candidate)) continue;
    double sim = cosine(anchor, vector_at(i));
    if (!best || sim > best_sim || (sim == best_sim && candidate < *best)) {
      best = candidate;
      best_sim = sim;
    }
  }
  return best;
}

}  // namespace kgtype
