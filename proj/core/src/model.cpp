#include "kgtype/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>

#include "kgtype/errors.hpp"
#include "kgtype/text.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace kgtype {

std::string_view to_string(RowInit r) {
  switch (r) {
    case RowInit::SingleToken: return "single-token";
    case RowInit::TokenMean: return "token-mean";
    case RowInit::Random: return "random";
  }
  return "random";
}

std::vector<std::string> type_name_tokens(std::string_view type_id) {
  std::string name(type_id);
  if (auto colon = name.find(':'); colon != std::string::npos) name = name.substr(colon + 1);
  static const std::regex trailing_digits(R"(\d+$)");
  name = std::regex_replace(name, trailing_digits, "");

  std::vector<std::string> tokens;
  for (const auto& part : camel_split(name)) {
    std::string lowered = to_lower(part);
    if (lowered == "wikicat" || lowered.empty()) continue;
    tokens.push_back(std::move(lowered));
  }
  return tokens;
}

TypeEmbeddingMatrix init_type_embedding(const EmbeddingStore& store, const TypeVocabulary& vocab,
                                        std::uint64_t seed) {
  const std::size_t dim = store.dim();
  TypeEmbeddingMatrix out;
  out.s = Mat(vocab.size(), dim);
  out.provenance.resize(vocab.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    const auto tokens = type_name_tokens(vocab.entries[r]);
    std::size_t hits = 0;
    for (const auto& token : tokens) {
      if (const double* v = store.find(token)) {
        for (std::size_t j = 0; j < dim; ++j) out.s(r, j) += v[j];
        ++hits;
      }
    }
    if (hits == 0) {
      for (std::size_t j = 0; j < dim; ++j) out.s(r, j) = uniform(rng);
      out.provenance[r] = RowInit::Random;
    } else {
      for (std::size_t j = 0; j < dim; ++j) out.s(r, j) /= static_cast<double>(hits);
      out.provenance[r] = hits == 1 ? RowInit::SingleToken : RowInit::TokenMean;
    }
  }
  return out;
}

int AnswerTypeModel::token_id(const std::string& token) const {
  if (token_lookup_.size() != token_vocab.size()) {
    token_lookup_.clear();
    for (std::size_t i = 0; i < token_vocab.size(); ++i)
      token_lookup_[token_vocab[i]] = static_cast<int>(i);
  }
  auto it = token_lookup_.find(token);
  return it == token_lookup_.end() ? static_cast<int>(encoder.unk_row()) : it->second;
}

std::vector<int> AnswerTypeModel::question_token_ids(std::string_view question) const {
  const auto tokens = tokenize(question);
  if (tokens.empty()) throw ConfigError("question has no tokens after normalization");
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) ids.push_back(token_id(token));
  return ids;
}

std::vector<TensorRef> parameter_tensors(EncoderParams& encoder, Mat& type_embedding) {
  auto mat = [](const char* name, Mat& m) {
    return TensorRef{name, m.data.data(), m.data.size(), {m.rows, m.cols}};
  };
  auto vec = [](const char* name, Vec& v) {
    return TensorRef{name, v.data(), v.size(), {v.size()}};
  };
  return {
      mat("type_embedding", type_embedding),
      vec("attention", encoder.att),
      mat("fwd.w_in", encoder.fwd.w_in),
      mat("fwd.w_rec", encoder.fwd.w_rec),
      vec("fwd.bias", encoder.fwd.bias),
      mat("bwd.w_in", encoder.bwd.w_in),
      mat("bwd.w_rec", encoder.bwd.w_rec),
      vec("bwd.bias", encoder.bwd.bias),
      mat("token_table", encoder.token_table),
  };
}

namespace {

constexpr char kMagic[8] = {'K', 'G', 'T', 'Y', 'C', 'K', 'P', 'T'};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::string read_string(std::istream& in) {
  std::uint32_t len = read_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  return s;
}

}  // namespace

void AnswerTypeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kFormatVersion);
  write_u64(out, seed);
  write_u32(out, static_cast<std::uint32_t>(hidden()));
  write_u32(out, static_cast<std::uint32_t>(input_dim()));

  write_u32(out, static_cast<std::uint32_t>(type_vocab.size()));
  for (const auto& name : type_vocab) write_string(out, name);
  for (RowInit p : provenance) out.put(static_cast<char>(p));

  write_u32(out, static_cast<std::uint32_t>(token_vocab.size()));
  for (const auto& term : token_vocab) write_string(out, term);

  auto& self = const_cast<AnswerTypeModel&>(*this);
  auto tensors = parameter_tensors(self.encoder, self.type_embedding);
  write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& tensor : tensors) {
    write_string(out, tensor.name);
    write_u32(out, static_cast<std::uint32_t>(tensor.shape.size()));
    for (std::size_t d : tensor.shape) write_u64(out, d);
    out.write(reinterpret_cast<const char*>(tensor.data),
              static_cast<std::streamsize>(tensor.size * sizeof(double)));
  }
  if (!out) throw Error("short write while saving checkpoint: " + path.string());
}

AnswerTypeModel AnswerTypeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic))
    throw Error("not a kgtype checkpoint: " + path.string());
  const std::uint32_t version = read_u32(in);
  if (version != kFormatVersion)
    throw Error("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                std::to_string(kFormatVersion) + ")");

  AnswerTypeModel model;
  model.seed = read_u64(in);
  const std::uint32_t hidden = read_u32(in);
  const std::uint32_t input_dim = read_u32(in);

  const std::uint32_t n_types = read_u32(in);
  model.type_vocab.reserve(n_types);
  for (std::uint32_t i = 0; i < n_types; ++i) model.type_vocab.push_back(read_string(in));
  model.provenance.resize(n_types);
  for (std::uint32_t i = 0; i < n_types; ++i) {
    char byte = 0;
    in.get(byte);
    if (byte < 0 || byte > 2) throw Error("bad provenance tag in checkpoint");
    model.provenance[i] = static_cast<RowInit>(byte);
  }

  const std::uint32_t n_tokens = read_u32(in);
  model.token_vocab.reserve(n_tokens);
  for (std::uint32_t i = 0; i < n_tokens; ++i) model.token_vocab.push_back(read_string(in));

  // Materialize shapes so the tensor views line up, then fill from the file.
  model.encoder.token_table = Mat(n_tokens + 1, input_dim);
  model.encoder.fwd.w_in = Mat(4 * hidden, input_dim);
  model.encoder.fwd.w_rec = Mat(4 * hidden, hidden);
  model.encoder.fwd.bias = Vec(4 * hidden, 0.0);
  model.encoder.bwd = model.encoder.fwd;
  model.encoder.att = Vec(2 * hidden, 0.0);
  model.type_embedding = Mat(n_types, 2 * hidden);

  auto tensors = parameter_tensors(model.encoder, model.type_embedding);
  const std::uint32_t n_tensors = read_u32(in);
  if (n_tensors != tensors.size())
    throw Error("checkpoint carries " + std::to_string(n_tensors) + " tensors, expected " +
                std::to_string(tensors.size()));
  for (auto& tensor : tensors) {
    const std::string name = read_string(in);
    if (name != tensor.name)
      throw Error("checkpoint tensor order mismatch: got " + name + ", expected " + tensor.name);
    const std::uint32_t ndim = read_u32(in);
    std::vector<std::size_t> shape(ndim);
    for (auto& d : shape) d = read_u64(in);
    if (shape != tensor.shape) throw Error("checkpoint tensor shape mismatch for " + name);
    in.read(reinterpret_cast<char*>(tensor.data),
            static_cast<std::streamsize>(tensor.size * sizeof(double)));
  }
  if (!in) throw Error("truncated checkpoint: " + path.string());
  return model;
}

Vec score_types_nn(std::span<const double> qvec, const Mat& s) {
  if (qvec.size() != s.cols)
    throw ConfigError("question vector length " + std::to_string(qvec.size()) +
                      " does not match type embedding width " + std::to_string(s.cols));
  Vec logits(s.rows, 0.0);
  for (std::size_t r = 0; r < s.rows; ++r) logits[r] = dot(qvec, s.row(r));
  return logits;
}

Vec softmax(std::span<const double> logits) {
  Vec probs(logits.size(), 0.0);
  if (logits.empty()) return probs;
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

Prediction predict(const AnswerTypeModel& model, std::string_view question) {
  const auto ids = model.question_token_ids(question);
  const QuestionEncoding enc = encode_question(model.encoder, ids);
  const Vec logits = score_types_nn(enc.qvec, model.type_embedding);

  Prediction pred;
  pred.probs = softmax(logits);
  pred.ranking.resize(pred.probs.size());
  std::iota(pred.ranking.begin(), pred.ranking.end(), 0);
  std::sort(pred.ranking.begin(), pred.ranking.end(), [&](int a, int b) {
    if (pred.probs[a] != pred.probs[b]) return pred.probs[a] > pred.probs[b];
    return a < b;
  });
  return pred;
}

}  // namespace kgtype
