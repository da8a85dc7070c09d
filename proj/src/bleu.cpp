#include <algorithm>
#include <cmath>

#include "qforge/metrics.hpp"

namespace qforge {

namespace {

using Gram = std::array<std::uint32_t, 4>;

std::vector<Gram> ngrams(std::span<const std::uint32_t> tokens, std::size_t n) {
  std::vector<Gram> out;
  if (tokens.size() < n) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    Gram g;
    g.fill(UINT32_MAX);
    std::copy_n(tokens.begin() + static_cast<std::ptrdiff_t>(i), n, g.begin());
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Sum over distinct n-grams of min(count in hyp, count in ref), walking
// both sorted lists once.
std::uint64_t clipped_matches(const std::vector<Gram>& ref, const std::vector<Gram>& hyp) {
  std::uint64_t matches = 0;
  std::size_t i = 0, j = 0;
  while (i < ref.size() && j < hyp.size()) {
    if (ref[i] < hyp[j]) {
      ++i;
    } else if (hyp[j] < ref[i]) {
      ++j;
    } else {
      const Gram g = ref[i];
      std::uint64_t rc = 0, hc = 0;
      while (i < ref.size() && ref[i] == g) ++i, ++rc;
      while (j < hyp.size() && hyp[j] == g) ++j, ++hc;
      matches += std::min(rc, hc);
    }
  }
  return matches;
}

double brevity_penalty(const BleuStats& s) {
  if (s.hyp_len >= s.ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.hyp_len));
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (std::size_t n = 0; n < 4; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  return *this;
}

BleuStats bleu_stats(std::span<const std::uint32_t> ref, std::span<const std::uint32_t> hyp,
                     int max_n) {
  BleuStats s;
  s.hyp_len = hyp.size();
  s.ref_len = ref.size();
  const auto orders = static_cast<std::size_t>(std::clamp(max_n, 1, 4));
  for (std::size_t n = 1; n <= orders; ++n) {
    s.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    if (s.totals[n - 1] == 0) continue;
    s.matches[n - 1] = clipped_matches(ngrams(ref, n), ngrams(hyp, n));
  }
  return s;
}

double corpus_bleu_from_stats(const BleuStats& s, int max_n) {
  if (s.hyp_len == 0) return 0.0;
  const auto orders = static_cast<std::size_t>(std::clamp(max_n, 1, 4));
  double log_sum = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    if (s.totals[n] == 0 || s.matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(s.matches[n]) / static_cast<double>(s.totals[n]));
  }
  return brevity_penalty(s) * std::exp(log_sum / static_cast<double>(orders));
}

double sentence_bleu_from_stats(const BleuStats& s, int max_n, double epsilon) {
  if (s.hyp_len == 0) return s.ref_len == 0 ? 1.0 : 0.0;
  const auto orders = std::min<std::size_t>(static_cast<std::size_t>(std::clamp(max_n, 1, 4)),
                                            static_cast<std::size_t>(s.hyp_len));
  double log_sum = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    const double m = s.matches[n] > 0 ? static_cast<double>(s.matches[n]) : epsilon;
    log_sum += std::log(m / static_cast<double>(s.totals[n]));
  }
  return brevity_penalty(s) * std::exp(log_sum / static_cast<double>(orders));
}

}  // namespace qforge
