// kgtype: type suggestion over a toy knowledge base plus an answer-type
// prediction model trained by distant supervision.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 empty result,
// 3 numeric failure.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "kgtype/answer_prep.hpp"
#include "kgtype/embedding_store.hpp"
#include "kgtype/errors.hpp"
#include "kgtype/model.hpp"
#include "kgtype/text.hpp"
#include "kgtype/train.hpp"
#include "kgtype/type_graph.hpp"
#include "kgtype/type_suggest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEmpty = 2;
constexpr int kExitNumeric = 3;

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  return buf;
}

struct SuggestArgs {
  std::string kb, embeddings, seeds, format = "tsv";
  std::size_t k = 1;
};

int run_suggest(const SuggestArgs& args) {
  const auto g = kgtype::TypeGraph::load(args.kb);
  const auto store = kgtype::EmbeddingStore::load(args.embeddings);
  kgtype::SeedQuery query;
  for (auto& term : kgtype::split(args.seeds, ','))
    if (!term.empty()) query.terms.push_back(term);
  query.k = args.k;

  const auto ranked = kgtype::suggest(g, store, query, &std::cerr);
  if (ranked.empty()) return kExitEmpty;
  std::cout << (args.format == "json" ? kgtype::to_json_lines(ranked) : kgtype::to_tsv(ranked));
  return kExitOk;
}

struct IngestArgs {
  std::string kb, embeddings;
};

int run_ingest_check(const IngestArgs& args) {
  const auto g = kgtype::TypeGraph::load(args.kb);
  std::size_t labels = 0, instance_edges = 0;
  for (std::size_t e = 0; e < g.entity_total(); ++e) {
    labels += g.labels_at(e).size();
    instance_edges += g.types_of_at(e).size();
  }
  std::cout << "entities\t" << g.entity_total() << '\n'
            << "types\t" << g.type_total() << '\n'
            << "labels\t" << labels << '\n'
            << "instance_of\t" << instance_edges << '\n'
            << "subclass_of\t" << g.subclass_edges().size() << '\n';
  if (!args.embeddings.empty()) {
    const auto store = kgtype::EmbeddingStore::load(args.embeddings);
    std::cout << "terms\t" << store.size() << '\n' << "dim\t" << store.dim() << '\n';
  }
  return kExitOk;
}

struct PrepareArgs {
  std::string kb, embeddings, qa, out, vocab_out;
  std::size_t restriction_k = 25;
  std::size_t threshold_c = 1000;
  double ner_score = 1.0;
};

int run_prepare(const PrepareArgs& args) {
  const auto g = kgtype::TypeGraph::load(args.kb);
  const auto store = kgtype::EmbeddingStore::load(args.embeddings);
  const auto pairs = kgtype::load_qa_pairs(args.qa);

  kgtype::PrepConfig cfg;
  cfg.restriction_k = args.restriction_k;
  cfg.threshold_c = args.threshold_c;
  cfg.ner_score = args.ner_score;

  kgtype::PrepStats stats;
  auto [vocab, dataset] = kgtype::prepare_dataset(g, store, pairs, cfg, &stats, &std::cerr);
  kgtype::save_dataset(args.out, dataset);
  kgtype::save_vocabulary(args.vocab_out, vocab);
  std::cout << "kept=" << stats.kept << " dropped=" << stats.dropped
            << " remapped=" << stats.remapped << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string dataset, vocab, embeddings, checkpoint, loss_log;
  kgtype::TrainConfig cfg;
  std::string optimizer = "adam";
};

int run_train(const TrainArgs& args) {
  const auto store = kgtype::EmbeddingStore::load(args.embeddings);
  const auto vocab = kgtype::load_vocabulary(args.vocab);
  const auto dataset = kgtype::load_dataset(args.dataset);

  kgtype::TrainConfig cfg = args.cfg;
  if (args.optimizer == "sgd")
    cfg.optimizer = kgtype::TrainConfig::Optimizer::Sgd;
  else if (args.optimizer == "adam")
    cfg.optimizer = kgtype::TrainConfig::Optimizer::Adam;
  else
    throw kgtype::ConfigError("unknown optimizer: " + args.optimizer);

  const auto result = kgtype::train(dataset, vocab, store, cfg, &std::cout);
  result.model.save(args.checkpoint);

  const std::string loss_path =
      args.loss_log.empty() ? args.checkpoint + ".loss.tsv" : args.loss_log;
  std::ofstream loss_out(loss_path, std::ios::binary);
  if (!loss_out) throw kgtype::Error("cannot write loss log: " + loss_path);
  for (std::size_t i = 0; i < result.epoch_mean_loss.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", result.epoch_mean_loss[i]);
    loss_out << (i + 1) << '\t' << buf << '\n';
  }
  return kExitOk;
}

struct PredictArgs {
  std::string checkpoint, question, format = "tsv";
  std::size_t top = 5;
};

int run_predict(const PredictArgs& args) {
  const auto model = kgtype::AnswerTypeModel::load(args.checkpoint);
  const auto pred = kgtype::predict(model, args.question);
  const std::size_t n = std::min(args.top, pred.ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int row = pred.ranking[i];
    if (args.format == "json") {
      nlohmann::ordered_json line;
      line["rank"] = i + 1;
      line["type"] = model.type_vocab[row];
      line["prob"] = pred.probs[row];
      std::cout << line.dump() << '\n';
    } else {
      std::cout << (i + 1) << '\t' << model.type_vocab[row] << '\t'
                << format_prob(pred.probs[row]) << '\n';
    }
  }
  return kExitOk;
}

struct GradCheckArgs {
  std::size_t seeds = 100;
  std::uint64_t base_seed = 1;
  double step = 1e-5;
  double tolerance = 1e-4;
};

int run_gradcheck(const GradCheckArgs& args) {
  const auto report = kgtype::gradient_check_suite(args.seeds, args.base_seed, args.step);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", report.max_rel_error);
  std::cout << buf << '\n';
  if (report.max_rel_error < args.tolerance) return kExitOk;
  std::cerr << "gradient check failed: max relative error " << buf << " in tensor "
            << report.worst_tensor << " (seed " << report.worst_seed << ")\n";
  return kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph type suggestion and answer type prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value config file; flags win");

  IngestArgs ingest;
  auto* cmd_ingest = app.add_subcommand("ingest-check", "load and validate inputs");
  cmd_ingest->add_option("--kb", ingest.kb, "type system TSV")->required();
  cmd_ingest->add_option("--embeddings", ingest.embeddings, "word vectors (optional)");

  SuggestArgs suggest;
  auto* cmd_suggest = app.add_subcommand("suggest", "rank types for seed query terms");
  cmd_suggest->add_option("--kb", suggest.kb, "type system TSV")->required();
  cmd_suggest->add_option("--embeddings", suggest.embeddings, "word vectors")->required();
  cmd_suggest->add_option("--seeds", suggest.seeds, "comma-separated seed terms")->required();
  cmd_suggest->add_option("--k", suggest.k, "minimum seed count")->check(CLI::PositiveNumber);
  cmd_suggest->add_option("--format", suggest.format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));

  PrepareArgs prepare;
  auto* cmd_prepare = app.add_subcommand("prepare", "build the distant-supervision dataset");
  cmd_prepare->add_option("--kb", prepare.kb, "type system TSV")->required();
  cmd_prepare->add_option("--embeddings", prepare.embeddings, "word vectors")->required();
  cmd_prepare->add_option("--qa", prepare.qa, "question<TAB>answer file")->required();
  cmd_prepare->add_option("--out", prepare.out, "output dataset (JSON lines)")->required();
  cmd_prepare->add_option("--vocab-out", prepare.vocab_out, "output vocabulary sidecar")
      ->required();
  cmd_prepare->add_option("--restriction-k", prepare.restriction_k, "keep top k types")
      ->check(CLI::PositiveNumber);
  cmd_prepare->add_option("--threshold-c", prepare.threshold_c, "generic-type frequency cutoff")
      ->check(CLI::PositiveNumber);
  cmd_prepare->add_option("--ner-score", prepare.ner_score, "score for coarse classes")
      ->check(CLI::PositiveNumber);

  TrainArgs train;
  auto* cmd_train = app.add_subcommand("train", "train the answer-type model");
  cmd_train->add_option("--dataset", train.dataset, "prepared dataset (JSON lines)")->required();
  cmd_train->add_option("--vocab", train.vocab, "vocabulary sidecar")->required();
  cmd_train->add_option("--embeddings", train.embeddings, "word vectors")->required();
  cmd_train->add_option("--checkpoint", train.checkpoint, "output checkpoint")->required();
  cmd_train->add_option("--loss-log", train.loss_log, "loss log path (default <checkpoint>.loss.tsv)");
  cmd_train->add_option("--hidden", train.cfg.hidden, "LSTM size D (0 = vectors dim / 2)");
  cmd_train->add_option("--lr", train.cfg.learning_rate, "learning rate")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--epochs", train.cfg.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--batch", train.cfg.batch_size, "batch size")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--negatives", train.cfg.negatives, "sampled-softmax negatives m");
  cmd_train->add_option("--seed", train.cfg.seed, "RNG seed");
  cmd_train->add_option("--optimizer", train.optimizer, "adam or sgd")
      ->check(CLI::IsMember({"adam", "sgd"}));

  PredictArgs predict;
  auto* cmd_predict = app.add_subcommand("predict", "rank answer types for a question");
  cmd_predict->add_option("--checkpoint", predict.checkpoint, "model checkpoint")->required();
  cmd_predict->add_option("--question", predict.question, "question string")->required();
  cmd_predict->add_option("--top", predict.top, "number of rows to print")
      ->check(CLI::PositiveNumber);
  cmd_predict->add_option("--format", predict.format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));

  GradCheckArgs gradcheck;
  auto* cmd_gradcheck =
      app.add_subcommand("gradcheck", "finite-difference validation of the gradients");
  cmd_gradcheck->add_option("--seeds", gradcheck.seeds, "number of seeded random models")
      ->check(CLI::PositiveNumber);
  cmd_gradcheck->add_option("--base-seed", gradcheck.base_seed, "first seed");
  cmd_gradcheck->add_option("--step", gradcheck.step, "finite-difference step")
      ->check(CLI::PositiveNumber);
  cmd_gradcheck->add_option("--tolerance", gradcheck.tolerance, "max relative error accepted")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_ingest->parsed()) return run_ingest_check(ingest);
    if (cmd_suggest->parsed()) return run_suggest(suggest);
    if (cmd_prepare->parsed()) return run_prepare(prepare);
    if (cmd_train->parsed()) return run_train(train);
    if (cmd_predict->parsed()) return run_predict(predict);
    if (cmd_gradcheck->parsed()) return run_gradcheck(gradcheck);
  } catch (const kgtype::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
