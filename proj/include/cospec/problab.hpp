#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cospec/exact.hpp"
#include "cospec/graph.hpp"

namespace cospec {

// Erdos-Renyi sampling spec. Edges are drawn from the standard mt19937_64
// engine, so (n, p, seed) fully determines the sampled graph on any platform.
struct GnpSpec {
  int n = 0;
  Rat p;             // edge probability, exact rational strictly inside (0, 1)
  uint64_t seed = 0;
};

// Monte-Carlo estimate of Pr(q^T A q is an integer matrix) for A ~ G(n, p).
struct IntegralityEstimate {
  uint64_t trials = 0;
  uint64_t successes = 0;
  double point_estimate = 0.0;
  double wilson_lo = 0.0;  // 95% Wilson score interval
  double wilson_hi = 0.0;
  double bound = 1.0;      // lemma_bound at q's canonical (s, h); 1 when s = 0
  double log_bound = 0.0;
};

// Log-space evaluation of the tail sum  sum_{s=2}^{n} a_{n,s}  with
//   a_{n,s} = exp(2 s ln n + s h^2 ln(2 s h^2) - lambda s (n-1) / (4 h^8))
// and lambda = -ln(max{p, 1-p}).
struct TailResult {
  double log_tail = 0.0;
  double b_n = 0.0;             // per-s exponent bound: a_{n,s} <= exp(s b_n)
  double log_r = 0.0;           // ln r_n with r_n = exp(-lambda n / (8 h^8))
  bool geometric_valid = false; // b_n <= ln r_n, enabling the closed form
  double log_geometric = 0.0;   // ln(r_n^2 / (1 - r_n)) when valid, else 0
};

// Sub-seed for trial index `trial` of a run seeded with `seed`: output number
// `trial` of the splitmix64 stream started at `seed`. Monte-Carlo totals are
// sums over per-trial substreams and therefore independent of scheduling.
uint64_t derive_trial_seed(uint64_t seed, uint64_t trial);

// One G(n, p) draw: each of the C(n,2) vertex pairs, visited in lexicographic
// order, becomes an edge iff the next engine output is < floor(p * 2^64).
Graph sample_gnp(const GnpSpec& spec);

// ln of phat^{(s/2h^4)(s/2h^4 + n - s - 1)} with phat = max{p, 1-p}.
// Requires 1 <= s <= n, h >= 2, 0 < p < 1.
double lemma_log_bound(int n, int s, int h, double p);
double lemma_bound(int n, int s, int h, double p);

// Exact Pr(every listed entry of q^T A q is integral) for A ~ G(n, p), by
// exhaustive enumeration of the relevant edge variables. Entries (i, j) and
// (j, i) name the same event; duplicates are ignored. Throws DomainError when
// more than 20 edge variables are relevant (enumeration guard) or when q is
// not orthogonal. The independence of entries with disjoint edge supports is
// exploited: the result is the product over dependency components, each
// enumerated separately.
Rat integrality_probability_exact(
    const RatMatrix& q, const Rat& p,
    const std::vector<std::pair<int, int>>& entries);

// The all-entries event Pr(q^T A q is an integer matrix).
Rat integrality_probability_exact(const RatMatrix& q, const Rat& p);

// Seeded Monte-Carlo estimate of the all-entries event; the per-trial
// integrality test is exact. `jobs` only affects scheduling, never results.
IntegralityEstimate integrality_probability_mc(const RatMatrix& q, const Rat& p,
                                               uint64_t trials, uint64_t seed,
                                               int jobs = 1);

// Requires n >= 2, h >= 2, 0 < p < 1.
TailResult theorem_tail(long long n, int h, double p);

// Natural log of a positive rational, robust to operands far outside double
// range. Returns -infinity for zero; throws DomainError for negative input.
double log_of_rat(const Rat& value);

}  // namespace cospec
