#include "mmt/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "mmt/common/rng.hpp"
#include "mmt/corpus/corpus.hpp"
#include "mmt/corpus/feature_file.hpp"
#include "mmt/inference/translate.hpp"
#include "mmt/metrics/bleu.hpp"
#include "mmt/metrics/ribes.hpp"
#include "mmt/model/nmt_model.hpp"
#include "mmt/subword/bpe.hpp"
#include "mmt/subword/vocabulary.hpp"
#include "mmt/trainer/checkpoint.hpp"
#include "mmt/trainer/trainer.hpp"

namespace mmt::cli {

namespace fs = std::filesystem;
using corpus::Tokens;

std::vector<std::string> settable_keys() {
  KeyValues kv;
  model::ModelConfig{}.to_key_values(kv);
  trainer::TrainConfig{}.to_key_values(kv);
  kv.erase("model.src_vocab");
  kv.erase("model.tgt_vocab");
  kv.erase("model.dropout");
  std::vector<std::string> keys;
  for (const auto& [k, v] : kv) keys.push_back(k);
  return keys;
}

std::string qualify_key(std::string_view key) {
  const auto keys = settable_keys();
  const std::string k(key);
  if (std::ranges::find(keys, k) != keys.end()) return k;
  if (k.find('.') == std::string::npos) {
    std::vector<std::string> hits;
    for (const auto& full : keys) {
      if (full.substr(full.find('.') + 1) == k) hits.push_back(full);
    }
    if (hits.size() == 1) return hits.front();
  }
  throw ConfigError("unknown config key '" + k + "'");
}

RunConfig resolve_run_config(const std::vector<KeyValues>& layers) {
  KeyValues merged;
  RunConfig rc;
  for (const auto& layer : layers) {
    for (const auto& [k, v] : layer) {
      const auto q = qualify_key(k);
      merged[q] = v;
      rc.explicit_keys.insert(q);
    }
  }
  rc.model = model::ModelConfig::from_key_values(merged);
  rc.train = trainer::TrainConfig::from_key_values(merged);
  rc.model.dropout = rc.train.dropout;
  rc.train.validate();
  return rc;
}

namespace {

struct Outputs {
  std::ostream& out;
  std::ostream& err;
};

enum class TsvKind { multimodal, parallel };

TsvKind detect_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto tabs = std::ranges::count(line, '\t');
    if (tabs == 6) return TsvKind::multimodal;
    if (tabs == 1) return TsvKind::parallel;
    throw std::runtime_error(path + ": expected 7 (multimodal) or 2 (parallel) tab-separated fields");
  }
  throw std::runtime_error(path + ": empty corpus");
}

// Tokenized sentence pairs plus the feature key of each row (empty for
// parallel text).
struct TextPairs {
  std::vector<Tokens> src, tgt;
  std::vector<std::string> keys;
  bool multimodal = false;
};

TextPairs read_pairs(const std::string& path) {
  TextPairs p;
  if (detect_tsv(path) == TsvKind::multimodal) {
    p.multimodal = true;
    const auto rows = corpus::load_multimodal_tsv(path);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      p.src.push_back(corpus::split_whitespace(rows[i].src_text));
      p.tgt.push_back(corpus::split_whitespace(rows[i].tgt_text));
      p.keys.push_back(corpus::feature_key(i, rows[i].image_id));
    }
  } else {
    for (const auto& e : corpus::load_parallel_tsv(path).examples) {
      p.src.push_back(corpus::split_whitespace(e.src_text));
      p.tgt.push_back(corpus::split_whitespace(e.tgt_text));
      p.keys.emplace_back();
    }
  }
  return p;
}

std::vector<Tokens> encode_all(const subword::BpeModel& bpe, const std::vector<Tokens>& sentences) {
  std::vector<Tokens> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(bpe.apply(s));
  return out;
}

std::vector<model::SentencePair> to_pairs(const std::vector<Tokens>& src, const std::vector<Tokens>& tgt,
                                          const std::vector<std::string>& keys, const subword::Vocabulary& sv,
                                          const subword::Vocabulary& tv) {
  std::vector<model::SentencePair> pairs;
  for (std::size_t i = 0; i < src.size(); ++i) pairs.push_back({sv.encode(src[i]), tv.encode(tgt[i]), keys[i]});
  return pairs;
}

void ensure_parent(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_out(const std::string& path) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

KeyValues parse_overrides(const std::vector<std::string>& items) {
  KeyValues kv;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + item + "'");
    kv[std::string(trim(std::string_view(item).substr(0, eq)))] = std::string(trim(std::string_view(item).substr(eq + 1)));
  }
  return kv;
}

// stats ---------------------------------------------------------------------

struct StatsArgs {
  std::string tsv, parallel, label = "train";
};

void cmd_stats(const StatsArgs& a, Outputs io) {
  if (a.tsv.empty() == a.parallel.empty()) throw UsageError("stats: give exactly one of --tsv or --parallel");
  if (!a.tsv.empty()) {
    corpus::print_stats(io.out, a.label, corpus::compute_stats(corpus::load_multimodal_tsv(a.tsv)));
  } else {
    const auto c = corpus::load_parallel_tsv(a.parallel);
    corpus::print_stats(io.out, a.label, corpus::compute_stats(c.examples));
    io.out << "dropped=" << c.dropped << '\n';
  }
}

// bpe-learn / bpe-apply -----------------------------------------------------

struct BpeLearnArgs {
  std::vector<std::string> tsv, parallel, text;
  std::size_t merges = 10000;
  std::string out;
};

void cmd_bpe_learn(const BpeLearnArgs& a, Outputs io) {
  if (a.tsv.empty() && a.parallel.empty() && a.text.empty()) {
    throw UsageError("bpe-learn: give at least one --tsv, --parallel or --text input");
  }
  std::vector<Tokens> sentences;
  for (const auto& path : a.tsv) {
    for (const auto& r : corpus::load_multimodal_tsv(path)) {
      sentences.push_back(corpus::split_whitespace(r.src_text));
      sentences.push_back(corpus::split_whitespace(r.tgt_text));
    }
  }
  for (const auto& path : a.parallel) {
    for (const auto& e : corpus::load_parallel_tsv(path).examples) {
      sentences.push_back(corpus::split_whitespace(e.src_text));
      sentences.push_back(corpus::split_whitespace(e.tgt_text));
    }
  }
  for (const auto& path : a.text) {
    for (const auto& line : corpus::load_text_lines(path)) sentences.push_back(corpus::split_whitespace(line));
  }
  const auto model = subword::learn_bpe(sentences, a.merges);
  auto f = open_out(a.out);
  model.write(f);
  io.out << "merges=" << model.size() << " requested=" << a.merges << '\n';
}

struct BpeApplyArgs {
  std::string model, in, out;
};

void cmd_bpe_apply(const BpeApplyArgs& a, Outputs) {
  const auto bpe = subword::BpeModel::load(a.model);
  auto f = open_out(a.out);
  for (const auto& line : corpus::load_text_lines(a.in)) {
    f << corpus::join_tokens(bpe.apply(corpus::split_whitespace(line))) << '\n';
  }
}

// train ---------------------------------------------------------------------

struct TrainArgs {
  std::string config, train_tsv, valid_tsv, features, valid_features, bpe_model, out_dir, init;
  std::vector<std::string> vocab_tsv, set;
  std::string mode = "scratch";
  std::uint64_t seed = 1;
  std::size_t epochs = 25, batch_size = 40, max_len = 50;
  double lr = 0.001, dropout = 0.3, clip_norm = 0.0;
};

void cmd_train(const TrainArgs& a, const CLI::App& sub, Outputs io) {
  std::vector<KeyValues> layers;
  if (!a.config.empty()) layers.push_back(load_key_values(a.config));
  layers.push_back(parse_overrides(a.set));
  KeyValues flags;
  const auto flag = [&](const char* name, const char* key, std::string value) {
    if (sub.count(name) > 0) flags[key] = std::move(value);
  };
  flag("--mode", "train.mode", a.mode);
  flag("--seed", "train.seed", std::to_string(a.seed));
  flag("--epochs", "train.max_epochs", std::to_string(a.epochs));
  flag("--batch-size", "train.batch_size", std::to_string(a.batch_size));
  flag("--max-len", "train.max_len", std::to_string(a.max_len));
  flag("--lr", "train.lr", format_real(a.lr));
  flag("--dropout", "train.dropout", format_real(a.dropout));
  flag("--clip-norm", "train.clip_norm", format_real(a.clip_norm));
  layers.push_back(flags);
  const RunConfig rc = resolve_run_config(layers);
  const auto mode = rc.train.mode;
  const bool multimodal = mode != trainer::TrainMode::pretrain;

  if (mode == trainer::TrainMode::finetune && a.init.empty()) throw UsageError("train: --mode finetune needs --init");
  if (mode != trainer::TrainMode::finetune && !a.init.empty()) throw UsageError("train: --init is only valid with --mode finetune");
  if (multimodal && a.features.empty()) throw UsageError("train: multimodal modes need --features");
  if (!multimodal && (!a.features.empty() || !a.valid_features.empty())) {
    throw UsageError("train: --mode pretrain is text-only and takes no feature files");
  }
  if (multimodal && !a.valid_tsv.empty() && a.valid_features.empty()) {
    throw UsageError("train: --valid-tsv in a multimodal mode needs --valid-features");
  }

  const auto bpe = subword::BpeModel::load(a.bpe_model);
  const auto fingerprint = inference::bpe_fingerprint_text(bpe);
  const auto train_text = read_pairs(a.train_tsv);
  if (multimodal && !train_text.multimodal) {
    throw std::runtime_error(a.train_tsv + ": multimodal training needs the 7-field TSV with image ids");
  }
  const auto src_enc = encode_all(bpe, train_text.src);
  const auto tgt_enc = encode_all(bpe, train_text.tgt);

  std::unique_ptr<model::NmtModel<float>> net;
  subword::Vocabulary src_vocab, tgt_vocab;
  if (!a.init.empty()) {
    const auto ckpt = trainer::load_checkpoint((fs::path(a.init) / "model.ckpt").string());
    if (const auto it = ckpt.meta.find("bpe_hash"); it != ckpt.meta.end() && it->second != fingerprint) {
      throw UsageError("--init checkpoint was trained with a different BPE model");
    }
    KeyValues have;
    ckpt.model.to_key_values(have);
    KeyValues want;
    rc.model.to_key_values(want);
    for (const auto& key : rc.explicit_keys) {
      if (key.starts_with("model.") && have.at(key) != want.at(key)) {
        throw UsageError("config sets " + key + "=" + want.at(key) + " but the --init checkpoint has " +
                                 have.at(key));
      }
    }
    src_vocab = subword::Vocabulary::load((fs::path(a.init) / "src.vocab").string());
    tgt_vocab = subword::Vocabulary::load((fs::path(a.init) / "tgt.vocab").string());
    net = std::make_unique<model::NmtModel<float>>(trainer::instantiate(ckpt));
  } else {
    std::vector<Tokens> vocab_src = src_enc, vocab_tgt = tgt_enc;
    for (const auto& path : a.vocab_tsv) {
      const auto extra = read_pairs(path);
      for (auto& s : encode_all(bpe, extra.src)) vocab_src.push_back(std::move(s));
      for (auto& s : encode_all(bpe, extra.tgt)) vocab_tgt.push_back(std::move(s));
    }
    src_vocab = subword::Vocabulary::build(vocab_src);
    tgt_vocab = subword::Vocabulary::build(vocab_tgt);
    auto cfg = rc.model;
    cfg.src_vocab = src_vocab.size();
    cfg.tgt_vocab = tgt_vocab.size();
    cfg.validate();
    net = std::make_unique<model::NmtModel<float>>(cfg);
    Rng init_rng(~rc.train.seed);
    net->init_uniform(init_rng);
  }

  std::unique_ptr<corpus::FeatureStore> train_features, valid_features;
  if (multimodal) {
    train_features = std::make_unique<corpus::FeatureStore>(corpus::FeatureStore::load(a.features));
    if (!a.valid_features.empty()) {
      valid_features = std::make_unique<corpus::FeatureStore>(corpus::FeatureStore::load(a.valid_features));
    }
  }
  trainer::TrainSet train_set{to_pairs(src_enc, tgt_enc, train_text.keys, src_vocab, tgt_vocab), train_features.get()};
  trainer::TrainSet valid_set{{}, valid_features.get()};
  if (!a.valid_tsv.empty()) {
    const auto v = read_pairs(a.valid_tsv);
    if (multimodal && !v.multimodal) throw std::runtime_error(a.valid_tsv + ": expected the 7-field multimodal TSV");
    valid_set.pairs = to_pairs(encode_all(bpe, v.src), encode_all(bpe, v.tgt), v.keys, src_vocab, tgt_vocab);
  }

  KeyValues meta{{"bpe_hash", fingerprint}};
  const auto result = trainer::train(
      rc.train, *net, train_set, valid_set,
      [&](const trainer::EpochLog& e) { io.out << trainer::format_epoch_log(e) << '\n' << std::flush; }, meta);

  fs::create_directories(a.out_dir);
  trainer::save_checkpoint((fs::path(a.out_dir) / "model.ckpt").string(), result.best);
  src_vocab.save((fs::path(a.out_dir) / "src.vocab").string());
  tgt_vocab.save((fs::path(a.out_dir) / "tgt.vocab").string());
  io.out << "dropped=" << result.dropped << " best_epoch=" << result.best.epoch
         << " best_valid_ppl=" << format_real(result.best.valid_ppl) << '\n';
}

// translate -----------------------------------------------------------------

struct TranslateArgs {
  std::vector<std::string> models;
  std::string bpe_model, src, features, out, scores;
  std::size_t beam = 5, max_len = 50, threads = 1;
  double length_penalty = 0.0;
};

struct LoadedModel {
  model::NmtModel<float> net;
  subword::Vocabulary src_vocab, tgt_vocab;
  std::string bpe_hash;
};

void cmd_translate(const TranslateArgs& a, Outputs io) {
  if (a.beam < 1) throw UsageError("translate: --beam must be >= 1");
  const auto bpe = subword::BpeModel::load(a.bpe_model);
  std::vector<std::unique_ptr<LoadedModel>> loaded;
  std::vector<inference::TranslationModel> models;
  for (const auto& dir : a.models) {
    const auto ckpt = trainer::load_checkpoint((fs::path(dir) / "model.ckpt").string());
    auto hash = ckpt.meta.contains("bpe_hash") ? ckpt.meta.at("bpe_hash") : std::string();
    loaded.push_back(std::make_unique<LoadedModel>(LoadedModel{
        trainer::instantiate(ckpt), subword::Vocabulary::load((fs::path(dir) / "src.vocab").string()),
        subword::Vocabulary::load((fs::path(dir) / "tgt.vocab").string()), std::move(hash)}));
    const auto& m = *loaded.back();
    models.push_back({&m.net, &m.src_vocab, &m.tgt_vocab, m.bpe_hash});
  }

  std::vector<inference::SourceSentence> sources;
  std::unique_ptr<corpus::FeatureStore> features;
  if (!a.features.empty()) {
    features = std::make_unique<corpus::FeatureStore>(corpus::FeatureStore::load(a.features));
    const auto rows = corpus::load_multimodal_tsv(a.src);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sources.push_back({corpus::split_whitespace(rows[i].src_text), corpus::feature_key(i, rows[i].image_id)});
    }
  } else {
    for (const auto& line : corpus::load_text_lines(a.src)) sources.push_back({corpus::split_whitespace(line), {}});
  }

  inference::TranslateOptions options;
  options.beam.beam_width = a.beam;
  options.beam.max_len = a.max_len;
  options.beam.length_penalty = a.length_penalty;
  options.threads = a.threads;
  const auto translations = inference::translate_corpus(models, bpe, sources, features.get(), options);
  auto text = open_out(a.out);
  inference::write_translations(text, translations);
  auto sidecar = open_out(a.scores.empty() ? a.out + ".scores" : a.scores);
  inference::write_score_sidecar(sidecar, translations);
  io.out << "translated=" << translations.size() << '\n';
}

// evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string hyp, ref, ref_tsv;
};

void cmd_evaluate(const EvaluateArgs& a, Outputs io) {
  if (a.ref.empty() == a.ref_tsv.empty()) throw UsageError("evaluate: give exactly one of --ref or --ref-tsv");
  std::vector<Tokens> hyps, refs;
  for (const auto& line : corpus::load_text_lines(a.hyp)) hyps.push_back(corpus::split_whitespace(line));
  if (!a.ref.empty()) {
    for (const auto& line : corpus::load_text_lines(a.ref)) refs.push_back(corpus::split_whitespace(line));
  } else {
    for (const auto& r : corpus::load_multimodal_tsv(a.ref_tsv)) refs.push_back(corpus::split_whitespace(r.tgt_text));
  }
  if (hyps.size() != refs.size()) {
    throw std::runtime_error("evaluate: " + std::to_string(hyps.size()) + " hypotheses but " +
                             std::to_string(refs.size()) + " references");
  }
  const auto bleu = metrics::corpus_bleu(hyps, refs);
  const auto ribes = metrics::corpus_ribes(hyps, refs);
  char line[64];
  std::snprintf(line, sizeof line, "RIBES = %.6f", ribes.ribes);
  io.out << metrics::format_bleu(bleu) << '\n' << line << '\n' << metrics::bleu_key_values(bleu)
         << "ribes=" << format_real(ribes.ribes) << '\n';
}

// gen-features-fixture ------------------------------------------------------

struct FixtureArgs {
  std::string tsv, out;
  std::size_t regions = 49, dim = 512;
  std::uint64_t seed = 1;
};

void cmd_fixture(const FixtureArgs& a, Outputs io) {
  if (a.regions < 1 || a.dim < 1) throw UsageError("gen-features-fixture: --regions and --dim must be >= 1");
  const auto rows = corpus::load_multimodal_tsv(a.tsv);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back(corpus::feature_key(i, rows[i].image_id));
  const auto store = corpus::synthetic_features(ids, a.regions, a.dim, a.seed);
  ensure_parent(a.out);
  store.save(a.out);
  io.out << "count=" << store.size() << " L=" << a.regions << " D=" << a.dim << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimodal neural machine translation toolkit", "mmt"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Outputs io{out, err};

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Corpus statistics (sentences, tokens, average lengths)");
  s->add_option("--tsv", stats.tsv, "Multimodal TSV")->check(CLI::ExistingFile);
  s->add_option("--parallel", stats.parallel, "Two-column parallel TSV")->check(CLI::ExistingFile);
  s->add_option("--label", stats.label, "Split name shown in the table");

  BpeLearnArgs learn;
  auto* bl = app.add_subcommand("bpe-learn", "Learn a joint BPE model over source and target text");
  bl->add_option("--tsv", learn.tsv, "Multimodal TSV input (repeatable)")->check(CLI::ExistingFile);
  bl->add_option("--parallel", learn.parallel, "Parallel TSV input (repeatable)")->check(CLI::ExistingFile);
  bl->add_option("--text", learn.text, "Plain text input (repeatable)")->check(CLI::ExistingFile);
  bl->add_option("--merges", learn.merges, "Number of merge operations");
  bl->add_option("--out", learn.out, "Output BPE model")->required();

  BpeApplyArgs apply;
  auto* ba = app.add_subcommand("bpe-apply", "Segment a text file with a BPE model");
  ba->add_option("--model", apply.model, "BPE model")->required()->check(CLI::ExistingFile);
  ba->add_option("--in", apply.in, "Input text, one sentence per line")->required()->check(CLI::ExistingFile);
  ba->add_option("--out", apply.out, "Output file")->required();

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train a model (pretrain, finetune or scratch)");
  tr->add_option("--config", train.config, "key = value config file")->check(CLI::ExistingFile);
  tr->add_option("--train-tsv", train.train_tsv, "Training data (multimodal or parallel TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  tr->add_option("--valid-tsv", train.valid_tsv, "Validation data")->check(CLI::ExistingFile);
  tr->add_option("--features", train.features, "Feature file for the training TSV")->check(CLI::ExistingFile);
  tr->add_option("--valid-features", train.valid_features, "Feature file for the validation TSV")
      ->check(CLI::ExistingFile);
  tr->add_option("--vocab-tsv", train.vocab_tsv, "Extra data contributing to the vocabularies (repeatable)")
      ->check(CLI::ExistingFile);
  tr->add_option("--bpe-model", train.bpe_model, "BPE model")->required()->check(CLI::ExistingFile);
  tr->add_option("--out-dir", train.out_dir, "Output directory (model.ckpt, src.vocab, tgt.vocab)")->required();
  tr->add_option("--init", train.init, "Model directory to fine-tune from")->check(CLI::ExistingDirectory);
  tr->add_option("--mode", train.mode, "pretrain | finetune | scratch")
      ->check(CLI::IsMember({"pretrain", "finetune", "scratch"}));
  tr->add_option("--seed", train.seed, "Random seed");
  tr->add_option("--epochs", train.epochs, "Number of epochs");
  tr->add_option("--batch-size", train.batch_size, "Sentences per batch");
  tr->add_option("--max-len", train.max_len, "Drop training pairs longer than this (subwords)");
  tr->add_option("--lr", train.lr, "Adam learning rate");
  tr->add_option("--dropout", train.dropout, "Dropout rate");
  tr->add_option("--clip-norm", train.clip_norm, "Gradient norm cap, 0 disables (5.0 is a common choice)");
  tr->add_option("--set", train.set, "Config override key=value (repeatable)");

  TranslateArgs tl;
  auto* ts = app.add_subcommand("translate", "Beam-search translation with one or two models");
  ts->add_option("--model", tl.models, "Model directory; give twice for two-model selection")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingDirectory);
  ts->add_option("--bpe-model", tl.bpe_model, "BPE model")->required()->check(CLI::ExistingFile);
  ts->add_option("--src", tl.src, "Source text, or a multimodal TSV when --features is given")
      ->required()
      ->check(CLI::ExistingFile);
  ts->add_option("--features", tl.features, "Feature file for the source TSV")->check(CLI::ExistingFile);
  ts->add_option("--out", tl.out, "Output translations")->required();
  ts->add_option("--scores", tl.scores, "Score sidecar (default: <out>.scores)");
  ts->add_option("--beam", tl.beam, "Beam width");
  ts->add_option("--max-len", tl.max_len, "Maximum output length in subwords");
  ts->add_option("--length-penalty", tl.length_penalty, "Length normalization exponent, 0 disables");
  ts->add_option("--threads", tl.threads, "Decoding threads")->check(CLI::PositiveNumber);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Corpus BLEU and RIBES");
  e->add_option("--hyp", ev.hyp, "Hypotheses, one per line")->required()->check(CLI::ExistingFile);
  e->add_option("--ref", ev.ref, "References, one per line")->check(CLI::ExistingFile);
  e->add_option("--ref-tsv", ev.ref_tsv, "References from the target column of a multimodal TSV")
      ->check(CLI::ExistingFile);

  FixtureArgs fx;
  auto* f = app.add_subcommand("gen-features-fixture", "Write seeded synthetic features for every row of a TSV");
  f->add_option("--tsv", fx.tsv, "Multimodal TSV")->required()->check(CLI::ExistingFile);
  f->add_option("--out", fx.out, "Output feature file")->required();
  f->add_option("--regions", fx.regions, "Regions per example (L)");
  f->add_option("--dim", fx.dim, "Feature dimension (D)");
  f->add_option("--seed", fx.seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) cmd_stats(stats, io);
    if (bl->parsed()) cmd_bpe_learn(learn, io);
    if (ba->parsed()) cmd_bpe_apply(apply, io);
    if (tr->parsed()) cmd_train(train, *tr, io);
    if (ts->parsed()) cmd_translate(tl, io);
    if (e->parsed()) cmd_evaluate(ev, io);
    if (f->parsed()) cmd_fixture(fx, io);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return 2;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mmt::cli
