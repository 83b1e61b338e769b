#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgtype/answer_prep.hpp"
#include "kgtype/embedding_store.hpp"
#include "kgtype/model.hpp"

namespace kgtype {

struct TrainConfig {
  std::size_t hidden = 0;  // LSTM size D; 0 derives it from the store dimension (2D = dim)
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 1;
  std::size_t negatives = 0;  // sampled-softmax negatives m per example
  std::uint64_t seed = 42;
  enum class Optimizer { Sgd, Adam };
  Optimizer optimizer = Optimizer::Adam;
};

// A prepared example mapped onto model rows: question token ids and
// (type row, weight) targets whose weights sum to 1.
struct TrainExample {
  std::vector<int> tokens;
  std::vector<std::pair<int, double>> targets;
};

// J = -sum_j s_j log max(P[t_j], 1e-12); throws on an out-of-range index.
double weighted_ce_loss(std::span<const double> probs,
                        std::span<const std::pair<int, double>> targets);

// Fresh model: type embeddings from the store via the name-token rules,
// token table rows copied from the store (seeded random UNK row), seeded
// uniform LSTM/attention parameters. Validates 2*hidden == store dim.
AnswerTypeModel init_model(const EmbeddingStore& store, const TypeVocabulary& vocab,
                           const TrainConfig& cfg);

std::vector<TrainExample> to_train_examples(const AnswerTypeModel& model,
                                            std::span<const AugmentedExample> dataset,
                                            const TypeVocabulary& vocab);

// Target rows first, then `m` uniform without-replacement negative rows; all
// rows when m covers the remainder (full softmax).
std::vector<int> sample_indices(const TrainExample& example, std::size_t num_types, std::size_t m,
                                std::mt19937_64& rng);

// Forward pass restricted to `sample`; probabilities are softmax over the
// sampled logits only.
double example_loss(const AnswerTypeModel& model, const TrainExample& example,
                    std::span<const int> sample);

// Same forward pass plus analytic gradients for every trainable tensor,
// accumulated into enc_grads / s_grads.
double example_loss_and_grads(const AnswerTypeModel& model, const TrainExample& example,
                              std::span<const int> sample, EncoderParams& enc_grads,
                              Mat& s_grads);

struct TrainResult {
  AnswerTypeModel model;
  std::vector<double> epoch_mean_loss;
};

// Deterministic single-threaded training; per-epoch mean loss is written to
// `progress` as `epoch<TAB>mean_loss` lines. Throws NumericError when the
// loss goes non-finite.
TrainResult train(std::span<const AugmentedExample> dataset, const TypeVocabulary& vocab,
                  const EmbeddingStore& store, const TrainConfig& cfg,
                  std::ostream* progress = nullptr);

// Fraction of examples whose rank-1 prediction is their highest-weight target.
double top1_accuracy(const AnswerTypeModel& model, std::span<const TrainExample> examples);

// --- gradient checking ------------------------------------------------

// Small random model plus one example, sized for finite differences
// (D <= 4, |T| <= 6, |q| <= 5).
struct GradCheckCase {
  AnswerTypeModel model;
  TrainExample example;
};
GradCheckCase random_gradcheck_case(std::uint64_t seed);

// Central finite differences (step h) against the analytic gradients over
// every parameter tensor; returns the worst relative error. Full softmax.
double gradient_check_model(AnswerTypeModel& model, const TrainExample& example, double h = 1e-5,
                            std::string* worst_tensor = nullptr);

// Negative control: the attention gradient is deliberately doubled before
// comparison; a healthy checker reports a large error.
double gradient_check_corrupted_att(AnswerTypeModel& model, const TrainExample& example,
                                    double h = 1e-5);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::uint64_t worst_seed = 0;
};
GradCheckReport gradient_check_suite(std::size_t num_models, std::uint64_t base_seed = 1,
                                     double h = 1e-5);

}  // namespace kgtype
