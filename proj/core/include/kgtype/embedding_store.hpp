#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgtype {

// Cosine similarity in [-1, 1]; zero when either vector has norm < 1e-12.
double cosine(std::span<const double> a, std::span<const double> b);

// Pretrained word vectors in the standard text format, one `term v1 .. vd`
// line each. Terms are lowercased on load; lookups are lowercased too.
// Immutable after load.
class EmbeddingStore {
 public:
  static EmbeddingStore load(const std::filesystem::path& path);
  static EmbeddingStore parse(std::istream& in, const std::string& source_name);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  const std::string& term(std::size_t idx) const { return terms_[idx]; }
  std::span<const double> vector_at(std::size_t idx) const;

  bool contains(std::string_view term) const;
  // Exact vocabulary hit, nullptr when absent.
  const double* find(std::string_view term) const;
  // Vocabulary hit, or the mean of in-vocabulary token vectors for
  // multi-word terms; nullopt when nothing is known.
  std::optional<std::vector<double>> vector_for(std::string_view term) const;

  // Most cosine-similar vocabulary term to `anchor` that is not the anchor,
  // not excluded, and accepted by `links`. Ties break toward the
  // lexicographically smaller term. The anchor must be in the vocabulary.
  std::optional<std::string> nearest_linked_term(
      std::string_view anchor, const std::unordered_set<std::string>& exclude,
      const std::function<bool(const std::string&)>& links) const;

  // Same scan anchored at an arbitrary vector.
  std::optional<std::string> nearest_linked(
      std::span<const double> anchor, const std::unordered_set<std::string>& exclude,
      const std::function<bool(const std::string&)>& links) const;

 private:
  EmbeddingStore() = default;

  std::size_t dim_ = 0;
  std::vector<std::string> terms_;           // load order
  std::vector<double> values_;               // terms_.size() x dim_, row major
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace kgtype
