#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Words = std::vector<std::string>;

inline std::map<Words, int> ngrams(const Words& w, std::size_t n) {
  std::map<Words, int> out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) ++out[Words(w.begin() + i, w.begin() + i + n)];
  return out;
}

struct Counts {
  double match[4] = {0, 0, 0, 0};
  double total[4] = {0, 0, 0, 0};
  double c = 0, r = 0;
};

inline Counts count(const Words& ref, const Words& hyp) {
  Counts k;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto h = ngrams(hyp, n), rr = ngrams(ref, n);
    for (const auto& [g, cnt] : h) {
      const auto it = rr.find(g);
      k.match[n - 1] += std::min(cnt, it == rr.end() ? 0 : it->second);
      k.total[n - 1] += cnt;
    }
  }
  k.c = static_cast<double>(hyp.size());
  k.r = static_cast<double>(ref.size());
  return k;
}

/// Unsmoothed BLEU-4 over pooled counts.
inline double corpus_bleu(const std::vector<std::pair<Words, Words>>& pairs) {
  Counts all;
  for (const auto& [ref, hyp] : pairs) {
    const Counts k = count(ref, hyp);
    for (int n = 0; n < 4; ++n) {
      all.match[n] += k.match[n];
      all.total[n] += k.total[n];
    }
    all.c += k.c;
    all.r += k.r;
  }
  if (all.c == 0) return 0.0;
  double log_sum = 0;
  for (int n = 0; n < 4; ++n) {
    if (all.total[n] == 0 || all.match[n] == 0) return 0.0;
    log_sum += std::log(all.match[n] / all.total[n]);
  }
  const double bp = all.c < all.r ? std::exp(1.0 - all.r / all.c) : 1.0;
  return bp * std::exp(log_sum / 4);
}

/// Sentence BLEU over the first min(4, c) orders with epsilon smoothing of
/// zero matches.
inline double sentence_bleu(const Words& ref, const Words& hyp, double eps = 1e-9) {
  if (hyp.empty()) return ref.empty() ? 1.0 : 0.0;
  const Counts k = count(ref, hyp);
  const std::size_t order = std::min<std::size_t>(4, hyp.size());
  double log_sum = 0;
  for (std::size_t n = 0; n < order; ++n) {
    const double m = k.match[n] > 0 ? k.match[n] : eps;
    log_sum += std::log(m / k.total[n]);
  }
  const double bp = k.c < k.r ? std::exp(1.0 - k.r / k.c) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(order));
}

}  // namespace oracle
