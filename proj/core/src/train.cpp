#include "kgtype/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kgtype/errors.hpp"

namespace kgtype {

namespace {

constexpr double kLogClamp = 1e-12;

void fill_uniform(std::span<double> out, std::mt19937_64& rng, double limit) {
  std::uniform_real_distribution<double> uniform(-limit, limit);
  for (double& v : out) v = uniform(rng);
}

}  // namespace

double weighted_ce_loss(std::span<const double> probs,
                        std::span<const std::pair<int, double>> targets) {
  double loss = 0.0;
  for (const auto& [idx, weight] : targets) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= probs.size())
      throw LookupError("target type index " + std::to_string(idx) + " out of range (|T| = " +
                        std::to_string(probs.size()) + ")");
    loss -= weight * std::log(std::max(probs[idx], kLogClamp));
  }
  return loss;
}

AnswerTypeModel init_model(const EmbeddingStore& store, const TypeVocabulary& vocab,
                           const TrainConfig& cfg) {
  const std::size_t dim = store.dim();
  std::size_t hidden = cfg.hidden;
  if (hidden == 0) {
    if (dim % 2 != 0)
      throw ConfigError("store dimension " + std::to_string(dim) +
                        " is odd; pass an explicit hidden size");
    hidden = dim / 2;
  }
  if (2 * hidden != dim)
    throw ConfigError("2*hidden (" + std::to_string(2 * hidden) +
                      ") must equal the word-vector dimension (" + std::to_string(dim) +
                      "): the question vector is scored against type rows without projection");

  AnswerTypeModel model;
  model.seed = cfg.seed;
  model.type_vocab = vocab.entries;

  TypeEmbeddingMatrix s = init_type_embedding(store, vocab, cfg.seed);
  model.type_embedding = std::move(s.s);
  model.provenance = std::move(s.provenance);

  model.token_vocab.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) model.token_vocab.push_back(store.term(i));
  model.encoder.token_table = Mat(store.size() + 1, dim);
  for (std::size_t i = 0; i < store.size(); ++i) {
    auto v = store.vector_at(i);
    for (std::size_t j = 0; j < dim; ++j) model.encoder.token_table(i, j) = v[j];
  }

  // Encoder parameters draw from a stream decoupled from the type-embedding
  // stream so adding vocabulary rows does not shift them.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  fill_uniform(model.encoder.token_table.row(store.size()), rng, 0.1);  // UNK row
  model.encoder.fwd.w_in = Mat(4 * hidden, dim);
  model.encoder.fwd.w_rec = Mat(4 * hidden, hidden);
  model.encoder.fwd.bias = Vec(4 * hidden, 0.0);
  model.encoder.bwd.w_in = Mat(4 * hidden, dim);
  model.encoder.bwd.w_rec = Mat(4 * hidden, hidden);
  model.encoder.bwd.bias = Vec(4 * hidden, 0.0);
  model.encoder.att = Vec(2 * hidden, 0.0);
  fill_uniform(model.encoder.fwd.w_in.data, rng, 0.2);
  fill_uniform(model.encoder.fwd.w_rec.data, rng, 0.2);
  fill_uniform(model.encoder.bwd.w_in.data, rng, 0.2);
  fill_uniform(model.encoder.bwd.w_rec.data, rng, 0.2);
  fill_uniform(model.encoder.att, rng, 0.2);
  return model;
}

std::vector<TrainExample> to_train_examples(const AnswerTypeModel& model,
                                            std::span<const AugmentedExample> dataset,
                                            const TypeVocabulary& vocab) {
  std::vector<TrainExample> examples;
  examples.reserve(dataset.size());
  for (const auto& example : dataset) {
    TrainExample out;
    out.tokens = model.question_token_ids(example.question);
    double total = 0.0;
    for (const auto& [type, weight] : example.types) {
      int row = vocab.index_of(type);
      if (row < 0) throw ConfigError("dataset type not in vocabulary: " + type);
      out.targets.emplace_back(row, weight);
      total += weight;
    }
    if (std::abs(total - 1.0) > 1e-6)
      throw ConfigError("supervision weights for question \"" + example.question +
                        "\" sum to " + std::to_string(total) + ", expected 1");
    examples.push_back(std::move(out));
  }
  return examples;
}

std::vector<int> sample_indices(const TrainExample& example, std::size_t num_types, std::size_t m,
                                std::mt19937_64& rng) {
  std::vector<int> sample;
  std::vector<bool> is_target(num_types, false);
  for (const auto& [row, _] : example.targets) {
    sample.push_back(row);
    is_target[row] = true;
  }
  std::vector<int> pool;
  pool.reserve(num_types - sample.size());
  for (std::size_t r = 0; r < num_types; ++r)
    if (!is_target[r]) pool.push_back(static_cast<int>(r));

  if (m >= pool.size()) {
    sample.insert(sample.end(), pool.begin(), pool.end());
    return sample;
  }
  for (std::size_t i = 0; i < m; ++i) {  // partial Fisher-Yates draw
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    sample.push_back(pool[i]);
  }
  return sample;
}

namespace {

struct SampledForward {
  EncoderTrace trace;
  Vec probs;  // over the sample positions
};

SampledForward sampled_forward(const AnswerTypeModel& model, const TrainExample& example,
                               std::span<const int> sample) {
  SampledForward fwd;
  fwd.trace = encode_question_traced(model.encoder, example.tokens);
  Vec logits(sample.size(), 0.0);
  for (std::size_t k = 0; k < sample.size(); ++k)
    logits[k] = dot(fwd.trace.enc.qvec, model.type_embedding.row(sample[k]));
  fwd.probs = softmax(logits);
  return fwd;
}

// Targets occupy the first positions of the sample, by construction.
double sampled_loss(const SampledForward& fwd, const TrainExample& example) {
  double loss = 0.0;
  for (std::size_t j = 0; j < example.targets.size(); ++j)
    loss -= example.targets[j].second * std::log(std::max(fwd.probs[j], kLogClamp));
  return loss;
}

}  // namespace

double example_loss(const AnswerTypeModel& model, const TrainExample& example,
                    std::span<const int> sample) {
  return sampled_loss(sampled_forward(model, example, sample), example);
}

double example_loss_and_grads(const AnswerTypeModel& model, const TrainExample& example,
                              std::span<const int> sample, EncoderParams& enc_grads,
                              Mat& s_grads) {
  SampledForward fwd = sampled_forward(model, example, sample);
  const double loss = sampled_loss(fwd, example);

  // d loss / d logit_k = P_k - w_k with the target weights w summing to 1.
  Vec d_logits = fwd.probs;
  for (std::size_t j = 0; j < example.targets.size(); ++j)
    d_logits[j] -= example.targets[j].second;

  const std::size_t width = model.type_embedding.cols;
  Vec d_qvec(width, 0.0);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const auto row = model.type_embedding.row(sample[k]);
    for (std::size_t j = 0; j < width; ++j) {
      s_grads(sample[k], j) += d_logits[k] * fwd.trace.enc.qvec[j];
      d_qvec[j] += d_logits[k] * row[j];
    }
  }
  encoder_backward(model.encoder, fwd.trace, d_qvec, enc_grads);
  return loss;
}

namespace {

struct AdamState {
  EncoderParams m_enc, v_enc;
  Mat m_s, v_s;
  std::size_t step = 0;
};

void apply_update(AnswerTypeModel& model, EncoderParams& enc_grads, Mat& s_grads,
                  const TrainConfig& cfg, AdamState& adam, double scale) {
  auto params = parameter_tensors(model.encoder, model.type_embedding);
  auto grads = parameter_tensors(enc_grads, s_grads);
  if (cfg.optimizer == TrainConfig::Optimizer::Sgd) {
    for (std::size_t t = 0; t < params.size(); ++t)
      for (std::size_t i = 0; i < params[t].size; ++i)
        params[t].data[i] -= cfg.learning_rate * scale * grads[t].data[i];
    return;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++adam.step;
  auto m = parameter_tensors(adam.m_enc, adam.m_s);
  auto v = parameter_tensors(adam.v_enc, adam.v_s);
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam.step));
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size; ++i) {
      const double g = scale * grads[t].data[i];
      m[t].data[i] = beta1 * m[t].data[i] + (1.0 - beta1) * g;
      v[t].data[i] = beta2 * v[t].data[i] + (1.0 - beta2) * g * g;
      const double m_hat = m[t].data[i] / bc1;
      const double v_hat = v[t].data[i] / bc2;
      params[t].data[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

void zero_grads(EncoderParams& enc_grads, Mat& s_grads) {
  auto tensors = parameter_tensors(enc_grads, s_grads);
  for (auto& t : tensors) std::fill(t.data, t.data + t.size, 0.0);
}

}  // namespace

TrainResult train(std::span<const AugmentedExample> dataset, const TypeVocabulary& vocab,
                  const EmbeddingStore& store, const TrainConfig& cfg, std::ostream* progress) {
  if (dataset.empty()) throw ConfigError("training dataset is empty");
  if (cfg.epochs < 1 || cfg.batch_size < 1) throw ConfigError("epochs and batch size must be >= 1");
  if (cfg.learning_rate <= 0.0) throw ConfigError("learning rate must be positive");

  TrainResult result;
  result.model = init_model(store, vocab, cfg);
  AnswerTypeModel& model = result.model;
  const auto examples = to_train_examples(model, dataset, vocab);

  std::mt19937_64 sampler(cfg.seed ^ 0xda3e39cb94b95bdbULL);
  EncoderParams enc_grads = zeros_like(model.encoder);
  Mat s_grads(model.type_embedding.rows, model.type_embedding.cols);
  AdamState adam;
  if (cfg.optimizer == TrainConfig::Optimizer::Adam) {
    adam.m_enc = zeros_like(model.encoder);
    adam.v_enc = zeros_like(model.encoder);
    adam.m_s = Mat(model.type_embedding.rows, model.type_embedding.cols);
    adam.v_s = Mat(model.type_embedding.rows, model.type_embedding.cols);
  }

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t in_batch = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const auto sample = sample_indices(examples[i], model.num_types(), cfg.negatives, sampler);
      const double loss = example_loss_and_grads(model, examples[i], sample, enc_grads, s_grads);
      if (!std::isfinite(loss))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", example " +
                           std::to_string(i));
      loss_sum += loss;
      ++in_batch;
      if (in_batch == cfg.batch_size || i + 1 == examples.size()) {
        apply_update(model, enc_grads, s_grads, cfg, adam, 1.0 / static_cast<double>(in_batch));
        zero_grads(enc_grads, s_grads);
        in_batch = 0;
      }
    }
    const double mean = loss_sum / static_cast<double>(examples.size());
    result.epoch_mean_loss.push_back(mean);
    if (progress) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.9f", mean);
      *progress << epoch << '\t' << buf << '\n';
    }
  }
  return result;
}

double top1_accuracy(const AnswerTypeModel& model, std::span<const TrainExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& example : examples) {
    const QuestionEncoding enc = encode_question(model.encoder, example.tokens);
    const Vec logits = score_types_nn(enc.qvec, model.type_embedding);
    std::size_t best = 0;
    for (std::size_t r = 1; r < logits.size(); ++r)
      if (logits[r] > logits[best]) best = r;
    if (static_cast<int>(best) == example.targets.front().first) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

GradCheckCase random_gradcheck_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  const std::size_t hidden = pick(1, 4);
  const std::size_t dim = 2 * hidden;
  const std::size_t in_dim = pick(2, 4);
  const std::size_t vocab = pick(3, 6);
  const std::size_t n_types = pick(2, 6);
  const std::size_t n_tokens = pick(1, 5);

  GradCheckCase gc;
  AnswerTypeModel& model = gc.model;
  model.seed = seed;
  for (std::size_t i = 0; i < n_types; ++i) model.type_vocab.push_back("t" + std::to_string(i));
  model.provenance.assign(n_types, RowInit::Random);
  for (std::size_t i = 0; i < vocab; ++i) model.token_vocab.push_back("w" + std::to_string(i));

  model.encoder.token_table = Mat(vocab + 1, in_dim);
  model.encoder.fwd.w_in = Mat(4 * hidden, in_dim);
  model.encoder.fwd.w_rec = Mat(4 * hidden, hidden);
  model.encoder.fwd.bias = Vec(4 * hidden, 0.0);
  model.encoder.bwd = model.encoder.fwd;
  model.encoder.att = Vec(2 * hidden, 0.0);
  model.type_embedding = Mat(n_types, dim);
  auto tensors = parameter_tensors(model.encoder, model.type_embedding);
  for (auto& tensor : tensors) fill_uniform({tensor.data, tensor.size}, rng, 0.8);

  for (std::size_t t = 0; t < n_tokens; ++t)
    gc.example.tokens.push_back(static_cast<int>(rng() % (vocab + 1)));

  const std::size_t n_targets = pick(1, std::min<std::size_t>(3, n_types));
  std::vector<int> rows(n_types);
  for (std::size_t r = 0; r < n_types; ++r) rows[r] = static_cast<int>(r);
  for (std::size_t i = 0; i < n_targets; ++i) {
    std::uniform_int_distribution<std::size_t> pick_row(i, rows.size() - 1);
    std::swap(rows[i], rows[pick_row(rng)]);
  }
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n_targets; ++i) {
    gc.example.targets.emplace_back(rows[i], weight(rng));
    total += gc.example.targets.back().second;
  }
  for (auto& [_, w] : gc.example.targets) w /= total;
  return gc;
}

namespace {

std::vector<int> full_sample(const TrainExample& example, std::size_t num_types) {
  std::mt19937_64 unused(0);
  return sample_indices(example, num_types, num_types, unused);
}

double compare_tensors(AnswerTypeModel& model, const TrainExample& example,
                       std::span<const int> sample, EncoderParams& enc_grads, Mat& s_grads,
                       double h, const std::string* only_tensor, std::string* worst_tensor) {
  auto params = parameter_tensors(model.encoder, model.type_embedding);
  auto grads = parameter_tensors(enc_grads, s_grads);
  double max_err = 0.0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (only_tensor && params[t].name != *only_tensor) continue;
    for (std::size_t i = 0; i < params[t].size; ++i) {
      const double original = params[t].data[i];
      params[t].data[i] = original + h;
      const double plus = example_loss(model, example, sample);
      params[t].data[i] = original - h;
      const double minus = example_loss(model, example, sample);
      params[t].data[i] = original;
      const double numeric = (plus - minus) / (2.0 * h);
      const double analytic = grads[t].data[i];
      const double rel = std::abs(numeric - analytic) /
                         std::max({1.0, std::abs(numeric), std::abs(analytic)});
      if (rel > max_err) {
        max_err = rel;
        if (worst_tensor) *worst_tensor = params[t].name;
      }
    }
  }
  return max_err;
}

}  // namespace

double gradient_check_model(AnswerTypeModel& model, const TrainExample& example, double h,
                            std::string* worst_tensor) {
  const auto sample = full_sample(example, model.num_types());
  EncoderParams enc_grads = zeros_like(model.encoder);
  Mat s_grads(model.type_embedding.rows, model.type_embedding.cols);
  example_loss_and_grads(model, example, sample, enc_grads, s_grads);
  return compare_tensors(model, example, sample, enc_grads, s_grads, h, nullptr, worst_tensor);
}

double gradient_check_corrupted_att(AnswerTypeModel& model, const TrainExample& example,
                                    double h) {
  const auto sample = full_sample(example, model.num_types());
  EncoderParams enc_grads = zeros_like(model.encoder);
  Mat s_grads(model.type_embedding.rows, model.type_embedding.cols);
  example_loss_and_grads(model, example, sample, enc_grads, s_grads);
  for (double& g : enc_grads.att) g *= 2.0;
  const std::string only = "attention";
  return compare_tensors(model, example, sample, enc_grads, s_grads, h, &only, nullptr);
}

GradCheckReport gradient_check_suite(std::size_t num_models, std::uint64_t base_seed, double h) {
  GradCheckReport report;
  for (std::size_t i = 0; i < num_models; ++i) {
    GradCheckCase gc = random_gradcheck_case(base_seed + i);
    std::string worst;
    const double err = gradient_check_model(gc.model, gc.example, h, &worst);
    if (err > report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_tensor = worst;
      report.worst_seed = base_seed + i;
    }
  }
  return report;
}

}  // namespace kgtype
