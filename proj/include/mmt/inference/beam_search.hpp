#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mmt/subword/vocabulary.hpp"

namespace mmt::inference {

/// Target ids without <s> and </s>. finished is set when </s> was emitted,
/// including the forced </s> at the length limit.
struct Hypothesis {
  std::vector<TokenId> tokens;
  double log_likelihood = 0.0;
  bool finished = false;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

struct BeamOptions {
  std::size_t beam_width = 5;
  std::size_t max_len = 50;          // content tokens; </s> is forced afterwards
  TokenId bos = kBosId;
  TokenId eos = kEosId;
  std::vector<TokenId> banned = {kPadId, kBosId};
  double length_penalty = 0.0;       // ranks by ll / len^alpha when > 0; off by default
};

/// Scored next-token distribution plus the successor state.
template <typename State>
struct ScoredStep {
  std::vector<double> log_probs;
  State state;
};

/// Anything that maps (decoder state, previous token) to log-probabilities
/// over the target vocabulary.
template <typename S>
concept StepScorer = requires(const S& s, const typename S::State& state, TokenId prev) {
  typename S::State;
  { s.initial_state() } -> std::convertible_to<typename S::State>;
  { s.step(state, prev) } -> std::same_as<ScoredStep<typename S::State>>;
};

double ranking_score(const Hypothesis& h, double length_penalty);

/// N-best list in descending ranking order (raw log-likelihood unless a
/// length penalty is set). At each step every live hypothesis is extended by
/// every non-banned token and the beam_width best candidates survive; those
/// ending in </s> move to the completed pool. After max_len content tokens
/// only </s> is allowed. The search stops once no live hypothesis can enter
/// the top beam_width of the completed pool.
template <StepScorer Scorer>
std::vector<Hypothesis> beam_search(const Scorer& scorer, const BeamOptions& options) {
  using State = typename Scorer::State;
  if (options.beam_width < 1) throw std::invalid_argument("beam_search: beam width must be >= 1");

  struct Live {
    Hypothesis hyp;
    State state;
    TokenId last;
  };
  struct Candidate {
    double score;
    std::size_t parent;
    TokenId token;
    double ll;
  };

  const auto rank = [&](const Hypothesis& h) { return ranking_score(h, options.length_penalty); };
  const auto better = [&](const Hypothesis& a, const Hypothesis& b) { return rank(a) > rank(b); };

  std::vector<Live> live;
  live.push_back({Hypothesis{}, scorer.initial_state(), options.bos});
  std::vector<Hypothesis> completed;

  for (std::size_t t = 0; t <= options.max_len && !live.empty(); ++t) {
    const bool at_limit = t == options.max_len;
    std::vector<ScoredStep<State>> steps;
    steps.reserve(live.size());
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < live.size(); ++i) {
      steps.push_back(scorer.step(live[i].state, live[i].last));
      const auto& lp = steps.back().log_probs;
      for (std::size_t w = 0; w < lp.size(); ++w) {
        const auto token = static_cast<TokenId>(w);
        if (at_limit && token != options.eos) continue;
        if (std::ranges::find(options.banned, token) != options.banned.end()) continue;
        if (std::isnan(lp[w]) || lp[w] == -std::numeric_limits<double>::infinity()) continue;
        const double ll = live[i].hyp.log_likelihood + lp[w];
        Hypothesis probe;
        probe.log_likelihood = ll;
        probe.tokens.resize(live[i].hyp.tokens.size() + (token == options.eos ? 0 : 1));
        cands.push_back({rank(probe), i, token, ll});
      }
    }
    std::ranges::stable_sort(cands, [](const Candidate& a, const Candidate& b) {
      return std::tie(b.score, a.parent, a.token) < std::tie(a.score, b.parent, b.token);
    });
    if (cands.size() > options.beam_width) cands.resize(options.beam_width);

    std::vector<Live> next;
    for (const auto& c : cands) {
      Hypothesis h = live[c.parent].hyp;
      h.log_likelihood = c.ll;
      if (c.token == options.eos) {
        h.finished = true;
        completed.push_back(std::move(h));
      } else {
        h.tokens.push_back(c.token);
        next.push_back({std::move(h), steps[c.parent].state, c.token});
      }
    }
    live = std::move(next);

    if (completed.size() >= options.beam_width && !live.empty() && options.length_penalty == 0.0) {
      std::ranges::stable_sort(completed, better);
      const double threshold = completed[options.beam_width - 1].log_likelihood;
      const bool hopeless = std::ranges::all_of(live, [&](const Live& l) { return l.hyp.log_likelihood <= threshold; });
      if (hopeless) live.clear();
    }
  }

  std::ranges::stable_sort(completed, better);
  if (completed.size() < options.beam_width) {
    std::vector<Hypothesis> rest;
    for (auto& l : live) rest.push_back(std::move(l.hyp));
    std::ranges::stable_sort(rest, better);
    for (auto& h : rest) {
      if (completed.size() >= options.beam_width) break;
      completed.push_back(std::move(h));
    }
  }
  if (completed.size() > options.beam_width) completed.resize(options.beam_width);
  return completed;
}

/// Argmax decoding: picks the most probable non-banned token at each step.
template <StepScorer Scorer>
Hypothesis greedy_decode(const Scorer& scorer, const BeamOptions& options) {
  Hypothesis h;
  auto state = scorer.initial_state();
  TokenId prev = options.bos;
  for (std::size_t t = 0; t <= options.max_len; ++t) {
    auto step = scorer.step(state, prev);
    const bool at_limit = t == options.max_len;
    TokenId best = -1;
    double best_lp = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < step.log_probs.size(); ++w) {
      const auto token = static_cast<TokenId>(w);
      if (at_limit && token != options.eos) continue;
      if (std::ranges::find(options.banned, token) != options.banned.end()) continue;
      if (step.log_probs[w] > best_lp) {
        best_lp = step.log_probs[w];
        best = token;
      }
    }
    if (best < 0) break;
    h.log_likelihood += best_lp;
    if (best == options.eos) {
      h.finished = true;
      break;
    }
    h.tokens.push_back(best);
    state = std::move(step.state);
    prev = best;
  }
  return h;
}

}  // namespace mmt::inference
