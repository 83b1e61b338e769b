#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgtype/answer_prep.hpp"
#include "kgtype/embedding_store.hpp"
#include "kgtype/encoder.hpp"
#include "kgtype/tensor.hpp"

namespace kgtype {

// How each type-embedding row was initialized.
enum class RowInit : std::uint8_t { SingleToken = 0, TokenMean = 1, Random = 2 };
std::string_view to_string(RowInit r);

// Name tokens used to look a type up in the word-vector store: namespace
// prefix and trailing digits stripped, camel-case split, "wikicat" dropped,
// lowercased.
std::vector<std::string> type_name_tokens(std::string_view type_id);

struct TypeEmbeddingMatrix {
  Mat s;  // |T| x dim, row order = vocabulary row order
  std::vector<RowInit> provenance;
};

// Per vocabulary entry: mean of the in-store name-token vectors, or a seeded
// uniform(-0.1, 0.1) row when no token is known.
TypeEmbeddingMatrix init_type_embedding(const EmbeddingStore& store, const TypeVocabulary& vocab,
                                        std::uint64_t seed);

// The trained answer-type predictor. Immutable once loaded; predict() may be
// called concurrently on a shared instance.
struct AnswerTypeModel {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint64_t seed = 0;
  std::vector<std::string> type_vocab;   // row order of type_embedding
  std::vector<RowInit> provenance;       // per type row
  std::vector<std::string> token_vocab;  // row order of encoder.token_table (UNK row last)
  EncoderParams encoder;
  Mat type_embedding;  // |T| x 2H

  std::size_t hidden() const { return encoder.hidden(); }
  std::size_t input_dim() const { return encoder.input_dim(); }
  std::size_t num_types() const { return type_vocab.size(); }

  int token_id(const std::string& token) const;  // UNK row when absent
  // Tokenizes with the shared label normalizer; throws on an empty question.
  std::vector<int> question_token_ids(std::string_view question) const;

  void save(const std::filesystem::path& path) const;
  static AnswerTypeModel load(const std::filesystem::path& path);

 private:
  mutable std::unordered_map<std::string, int> token_lookup_;
};

// Named views over every trainable tensor, in a fixed order shared by the
// optimizer, the checkpoint writer and the gradient checker.
struct TensorRef {
  std::string name;
  double* data;
  std::size_t size;
  std::vector<std::size_t> shape;
};
std::vector<TensorRef> parameter_tensors(EncoderParams& encoder, Mat& type_embedding);

// logit r = qvec . S[r, :]
Vec score_types_nn(std::span<const double> qvec, const Mat& s);

Vec softmax(std::span<const double> logits);

struct Prediction {
  Vec probs;                 // full softmax over the vocabulary
  std::vector<int> ranking;  // descending probability, ties by row index
};

Prediction predict(const AnswerTypeModel& model, std::string_view question);

}  // namespace kgtype
