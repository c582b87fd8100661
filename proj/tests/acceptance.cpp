// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mmt/autodiff/grad_check.hpp"
#include "mmt/autodiff/ops.hpp"
#include "mmt/corpus/corpus.hpp"
#include "mmt/inference/beam_search.hpp"
#include "mmt/inference/selection.hpp"
#include "mmt/metrics/bleu.hpp"
#include "mmt/metrics/ribes.hpp"
#include "mmt/subword/bpe.hpp"
#include "mmt/trainer/adam.hpp"
#include "mmt/trainer/checkpoint.hpp"
#include "mmt/trainer/trainer.hpp"

namespace {

using namespace mmt;
using Clock = std::chrono::steady_clock;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Gradient correctness

using ad::Tensor;
using ad::Var;

Tensor<double> random_tensor(ad::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<double> t(std::move(shape));
  for (auto& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

Var<double> weighted(const Var<double>& y, std::uint64_t seed) {
  Rng rng(seed);
  return ad::sum(ad::mul(y, y.tape().constant(random_tensor(y.shape(), rng))));
}

double op_gradient_error(std::size_t seeds) {
  using Case = std::function<double(std::uint64_t, Rng&)>;
  const auto dim = [](Rng& r) { return 1 + r.below(8); };
  const auto unary = [&](std::function<Var<double>(const Var<double>&)> op) -> Case {
    return [=](std::uint64_t seed, Rng& rng) {
      return ad::grad_check([&](Var<double> v) { return weighted(op(v), seed); },
                            random_tensor({dim(rng), dim(rng)}, rng, -2, 2));
    };
  };
  const auto binary = [&](Var<double> (*op)(const Var<double>&, const Var<double>&)) -> Case {
    return [=](std::uint64_t seed, Rng& rng) {
      const auto r = dim(rng), c = dim(rng);
      const auto row = random_tensor({c}, rng);
      const auto full = random_tensor({r, c}, rng);
      return std::max(
          ad::grad_check([&](Var<double> v) { return weighted(op(v, v.tape().constant(row)), seed); }, full),
          ad::grad_check([&](Var<double> v) { return weighted(op(v.tape().constant(full), v), seed); }, row));
    };
  };
  const std::vector<Case> cases{
      [&](std::uint64_t seed, Rng& rng) {
        const auto m = dim(rng), k = dim(rng), n = dim(rng);
        const auto b = random_tensor({k, n}, rng);
        return ad::grad_check([&](Var<double> v) { return weighted(ad::matmul(v, v.tape().constant(b)), seed); },
                              random_tensor({m, k}, rng));
      },
      [&](std::uint64_t seed, Rng& rng) {
        const auto bs = dim(rng), m = dim(rng), k = dim(rng), n = dim(rng);
        const auto a = random_tensor({bs, m, k}, rng);
        return ad::grad_check([&](Var<double> v) { return weighted(ad::matmul(v.tape().constant(a), v), seed); },
                              random_tensor({bs, k, n}, rng));
      },
      binary(&ad::add<double>),
      binary(&ad::sub<double>),
      binary(&ad::mul<double>),
      unary([](const Var<double>& v) { return ad::scale(v, 1.7); }),
      unary([](const Var<double>& v) { return ad::add_scalar(v, -0.3); }),
      unary([](const Var<double>& v) { return ad::tanh(v); }),
      unary([](const Var<double>& v) { return ad::sigmoid(v); }),
      unary([](const Var<double>& v) { return ad::exp(v); }),
      unary([](const Var<double>& v) { return ad::log(ad::add_scalar(ad::mul(v, v), 0.5)); }),
      unary([](const Var<double>& v) { return ad::softmax(v); }),
      unary([](const Var<double>& v) { return ad::log_softmax(v); }),
      unary([](const Var<double>& v) { return ad::repeat_axis(v, 1, 3); }),
      unary([](const Var<double>& v) { return ad::reshape(v, {v.value().size()}); }),
      unary([](const Var<double>& v) { return ad::narrow(v, 1, 0, v.shape()[1]); }),
      unary([](const Var<double>& v) { return ad::concat({v, ad::tanh(v)}, 1); }),
      unary([](const Var<double>& v) {
        Rng mask(5);
        return ad::dropout(v, 0.4, true, mask);
      }),
      [&](std::uint64_t seed, Rng& rng) {
        const auto vocab = dim(rng), width = dim(rng);
        std::vector<std::int32_t> ids(dim(rng));
        for (auto& id : ids) id = static_cast<std::int32_t>(rng.below(vocab));
        return ad::grad_check(
            [&](Var<double> v) { return weighted(ad::embedding(v, std::span<const std::int32_t>(ids)), seed); },
            random_tensor({vocab, width}, rng));
      },
      [&](std::uint64_t, Rng& rng) {
        const auto n = dim(rng), vocab = dim(rng);
        std::vector<std::int32_t> targets(n);
        for (auto& t : targets) t = static_cast<std::int32_t>(rng.below(vocab));
        return ad::grad_check([&](Var<double> v) { return ad::cross_entropy(v, std::span<const std::int32_t>(targets)); },
                              random_tensor({n, vocab}, rng, -3, 3));
      },
      [&](std::uint64_t seed, Rng& rng) {
        const auto r = dim(rng), c = dim(rng);
        std::vector<std::uint8_t> keep(r);
        for (auto& k : keep) k = static_cast<std::uint8_t>(rng.below(2));
        const auto other = random_tensor({r, c}, rng);
        return ad::grad_check(
            [&](Var<double> v) {
              return weighted(ad::select_rows(std::span<const std::uint8_t>(keep), v, v.tape().constant(other)), seed);
            },
            random_tensor({r, c}, rng));
      },
      [&](std::uint64_t, Rng& rng) {
        return ad::grad_check([](Var<double> v) { return ad::sum(v); }, random_tensor({dim(rng), dim(rng)}, rng));
      },
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
      Rng rng(seed * 7919 + 1);
      worst = std::max(worst, c(seed, rng));
    }
  }
  return worst;
}

double model_gradient_error() {
  const auto cfg = mmt::testing::grad_check_config();
  model::NmtModel<double> net(cfg);
  Rng rng(17);
  net.init_uniform(rng, 0.5);
  std::vector<model::SentencePair> pairs{{{4, 5, 6}, {5, 4}, "a"}, {{6}, {4, 6, 6}, "b"}, {{5, 5}, {6}, "c"}};
  const auto features = corpus::synthetic_features({"a", "b", "c"}, cfg.visual_regions, cfg.visual_dim, 3);
  std::vector<const model::SentencePair*> rows;
  for (const auto& p : pairs) rows.push_back(&p);
  const auto batch = model::make_batch<double>(rows, cfg.visual_regions, cfg.visual_dim, &features);
  double worst = 0.0;
  for (const auto& e : ad::grad_check_params(net.params(), [&](ad::Tape<double>& tape) {
         const auto p = net.bind(tape);
         return net.forward_loss(tape, p, batch, false, nullptr);
       })) {
    worst = std::max(worst, e.max_relative_error);
  }
  return worst;
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  const double ops = op_gradient_error(100);
  const double full = model_gradient_error();
  const double elapsed = seconds_since(start);
  const bool ok = ops < 1e-4 && full < 1e-3 && elapsed < 120.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "max op rel err " + fmt("%.2e", ops) + ", model rel err " + fmt("%.2e", full) + ", " + fmt("%.1f", elapsed) + " s"};
}

// Copy task

Outcome copy_task() {
  const auto start = Clock::now();
  auto task = mmt::testing::make_copy_task(32);
  model::NmtModel<float> net(task.model);
  Rng init(~task.train.seed);
  net.init_uniform(init);
  const auto result = trainer::train(task.train, net, trainer::TrainSet{task.pairs, &task.features}, {});
  const auto best = trainer::instantiate(result.best);
  const double accuracy = mmt::testing::copy_accuracy(best, task, true);

  bool handoff = true;
  std::string handoff_error;
  try {
    auto pre = task.train;
    pre.mode = trainer::TrainMode::pretrain;
    pre.max_epochs = 20;
    model::NmtModel<float> text_only(task.model);
    Rng pre_init(5);
    text_only.init_uniform(pre_init);
    const auto pretrained = trainer::train(pre, text_only, trainer::TrainSet{task.pairs, nullptr}, {});
    std::stringstream bytes;
    trainer::write_checkpoint(bytes, pretrained.best);
    auto tuned = trainer::instantiate(trainer::read_checkpoint(bytes));
    auto fine = task.train;
    fine.mode = trainer::TrainMode::finetune;
    fine.max_epochs = 20;
    const auto finetuned = trainer::train(fine, tuned, trainer::TrainSet{task.pairs, &task.features}, {});
    handoff = finetuned.best.params.size() == pretrained.best.params.size();
  } catch (const std::exception& e) {
    handoff = false;
    handoff_error = e.what();
  }
  const double elapsed = seconds_since(start);
  const bool ok = accuracy >= 0.9 && handoff && elapsed < 600.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "exact copies " + fmt("%.1f", 100.0 * accuracy) + "% after " + std::to_string(result.log.size()) +
              " epochs, hand-off " + (handoff ? "ok" : "failed " + handoff_error) + ", " + fmt("%.1f", elapsed) + " s"};
}

// BPE

Outcome bpe_oracle() {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& w : mmt::testing::bpe_fixture_words()) ++counts[w];
  const subword::WordCounts words(counts.begin(), counts.end());
  bool merges_equal = true;
  for (std::size_t n : {1u, 10u, 50u, 200u, 100000u}) {
    const auto model = subword::learn_bpe(words, n);
    std::vector<std::pair<std::string, std::string>> learned;
    for (const auto& r : model.merges()) learned.emplace_back(r.left, r.right);
    merges_equal = merges_equal && learned == mmt::testing::naive_bpe(counts, n);
  }

  const auto model = subword::learn_bpe(words, 200);
  Rng rng(1000);
  const std::vector<std::string> pieces{"lo", "w", "er", "a", "n", "एक", "ी", "the", "x", "@", "é"};
  std::size_t round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    corpus::Tokens tokens;
    const auto n = rng.below(8);
    for (std::uint64_t k = 0; k < n; ++k) {
      std::string w;
      for (std::uint64_t p = 0, parts = 1 + rng.below(4); p < parts; ++p) w += pieces[rng.below(pieces.size())];
      tokens.push_back(w);
    }
    if (subword::decode_bpe(model.apply(tokens)) == tokens) ++round_trips;
  }

  std::ostringstream a, b;
  subword::learn_bpe(words, 200).write(a);
  subword::learn_bpe(words, 200).write(b);
  const bool deterministic = a.str() == b.str();

  const bool ok = merges_equal && round_trips == 1000 && deterministic;
  return {ok ? Verdict::pass : Verdict::fail,
          std::string("oracle merges ") + (merges_equal ? "equal" : "differ") + ", round trips " +
              std::to_string(round_trips) + "/1000, " + (deterministic ? "byte-deterministic" : "nondeterministic")};
}

// Beam search

Outcome beam_oracle() {
  Rng rng(20);
  std::size_t optimal = 0, greedy = 0, monotone = 0;
  constexpr std::size_t kModels = 20;
  for (std::size_t m = 0; m < kModels; ++m) {
    const auto vocab = 2 + rng.below(4);
    const auto max_len = 1 + rng.below(4);
    const mmt::testing::ToyScorer scorer(vocab, rng.next_u64());
    inference::BeamOptions opts;
    opts.max_len = max_len;
    opts.bos = 0;
    opts.eos = static_cast<TokenId>(vocab - 1);
    opts.banned.clear();

    const auto full = mmt::testing::search_space_size(vocab, max_len);
    opts.beam_width = full;
    const auto best = mmt::testing::enumerate_best(scorer, max_len, opts.eos);
    const auto top = inference::beam_search(scorer, opts).front();
    if (top.tokens == best.tokens && std::abs(top.log_likelihood - best.log_likelihood) < 1e-12) ++optimal;

    opts.beam_width = 1;
    const auto g = inference::greedy_decode(scorer, opts);
    if (inference::beam_search(scorer, opts).front().tokens == g.tokens) ++greedy;

    bool mono = true;
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 1; w <= full; ++w) {
      opts.beam_width = w;
      const double score = inference::beam_search(scorer, opts).front().log_likelihood;
      if (score < previous) mono = false;
      previous = std::max(previous, score);
    }
    if (mono) ++monotone;
  }
  const bool ok = optimal == kModels && greedy == kModels && monotone == kModels;
  return {ok ? Verdict::pass : Verdict::fail, "optimal " + std::to_string(optimal) + "/20, beam1=greedy " +
                                                  std::to_string(greedy) + "/20, monotone " + std::to_string(monotone) +
                                                  "/20"};
}

// Metrics and Adam

corpus::Tokens split(const std::string& s) {
  corpus::Tokens out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Outcome metric_oracles() {
  const std::vector<corpus::Tokens> corpus{split("a man is riding a red bike"), split("two dogs play in the snow"),
                                           split("the sky above the tall building is blue")};
  const auto identity = metrics::corpus_bleu(corpus, corpus);
  const auto identity_ribes = metrics::corpus_ribes(corpus, corpus);
  const double p1 = metrics::corpus_bleu({split("the the the the")}, {split("the cat")}).precisions[0];
  const double reversed = metrics::ribes(split("e d c b a"), split("a b c d e"));

  ad::ParamStore<double> store;
  store.add("theta", {1});
  store[0].value[0] = 1.0;
  store[0].grad[0] = 1.0;
  auto state = trainer::AdamState<double>::zeros_like(store);
  trainer::adam_step(store, state, trainer::AdamOptions{});
  const double theta = store[0].value[0];

  const bool ok = identity.bleu == 100.0 && identity_ribes.ribes == 1.0 && std::abs(p1 - 0.25) < 1e-9 &&
                  std::abs(reversed) < 1e-9 && std::abs(theta - 0.999) < 1e-9;
  return {ok ? Verdict::pass : Verdict::fail,
          "identity BLEU " + fmt("%.2f", identity.bleu) + " RIBES " + fmt("%.6f", identity_ribes.ribes) + ", p1 " +
              fmt("%.6f", p1) + ", reversed RIBES " + fmt("%.6f", reversed) + ", Adam step " + fmt("%.10f", theta)};
}

// Selection

Outcome selection_rule() {
  using inference::Hypothesis;
  const auto filtered = inference::select_hypothesis(std::vector<Hypothesis>{{{5, kUnkId}, -1.2, true}},
                                                     std::vector<Hypothesis>{{{5, 6}, -1.5, true}});
  const auto unfiltered = inference::select_hypothesis(std::vector<Hypothesis>{{{5}, -0.7, true}},
                                                       std::vector<Hypothesis>{{{6}, -0.9, true}});
  const auto fallback = inference::select_hypothesis(std::vector<Hypothesis>{{{kUnkId, 5}, -2.0, true}},
                                                     std::vector<Hypothesis>{{{6, kUnkId}, -2.5, true}});
  const bool a = filtered.model == 1 && filtered.hypothesis.log_likelihood == -1.5;
  const bool b = unfiltered.model == 0 && unfiltered.hypothesis.log_likelihood == -0.7;
  const bool c = fallback.model == 0 && fallback.hypothesis.log_likelihood == -2.0;
  return {a && b && c ? Verdict::pass : Verdict::fail, std::string("filtered ") + (a ? "ok" : "wrong") +
                                                           ", unfiltered " + (b ? "ok" : "wrong") + ", fallback " +
                                                           (c ? "ok" : "wrong")};
}

// Corpus statistics on the real training split, when available

Outcome table_statistics() {
  const char* path = std::getenv("MMT_HVG_TRAIN_TSV");
  if (!path || !*path) return {Verdict::skip, "set MMT_HVG_TRAIN_TSV to the Hindi Visual Genome train TSV"};
  try {
    const auto stats = corpus::compute_stats(corpus::load_multimodal_tsv(path));
    const bool ok = stats.n_sentences == 28929 && std::abs(stats.avg_src_len - 4.95) <= 0.2 &&
                    std::abs(stats.avg_tgt_len - 5.02) <= 0.2;
    return {ok ? Verdict::pass : Verdict::fail, "n=" + std::to_string(stats.n_sentences) + " avg_src " +
                                                    fmt("%.2f", stats.avg_src_len) + " avg_tgt " +
                                                    fmt("%.2f", stats.avg_tgt_len)};
  } catch (const std::exception& e) {
    return {Verdict::fail, e.what()};
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient-correctness", gradient_correctness},
      {"copy-task-overfit", copy_task},
      {"bpe-oracle", bpe_oracle},
      {"beam-search-oracle", beam_oracle},
      {"metric-oracles", metric_oracles},
      {"selection-rule", selection_rule},
      {"corpus-statistics", table_statistics},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::fail) ++failed;
    std::cout << tag << "  " << name << "  (" << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
