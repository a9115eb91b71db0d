#include "cospec/problab.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cospec/ortho.hpp"

namespace cospec {
namespace {

constexpr double kWilsonZ = 1.959963984540054;  // 97.5% standard normal quantile
constexpr long kMaxLevel = 32768;          // keeps all int64 congruences exact
constexpr int kMaxRelevantEdges = 20;      // exhaustive-enumeration guard
constexpr long long kDirectSumLimit = 4000000;  // tail terms summed one by one

void require_probability(const Rat& p) {
  if (!(p > 0 && p < 1))
    throw DomainError("edge probability must lie strictly inside (0, 1)");
}

void require_orthogonal(const RatMatrix& q) {
  if (!rat_is_identity(rat_mul(rat_transpose(q), q)))
    throw DomainError("matrix is not orthogonal");
}

// floor(p * 2^64): an engine output below this value marks the edge present.
uint64_t edge_threshold(const Rat& p) {
  mpz_class scaled = p.get_num() << 64;
  mpz_class t;
  const mpz_class den = p.get_den();
  mpz_fdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  return mpz_get_ui(t.get_mpz_t());
}

uint64_t splitmix64_mix(uint64_t state) {
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// level of q together with the integer matrix level * q, row-major.
std::pair<long, std::vector<long>> scaled_integer_matrix(const RatMatrix& q) {
  const Int level = level_and_height(q).first;
  if (!level.fits_slong_p() || level.get_si() > kMaxLevel)
    throw DomainError("matrix level exceeds the supported range (32768)");
  const long l = level.get_si();
  std::vector<long> m(static_cast<size_t>(q.n) * static_cast<size_t>(q.n));
  for (int i = 0; i < q.n; ++i) {
    for (int j = 0; j < q.n; ++j) {
      const Rat v = q.at(i, j) * Int(l);
      const Int num = v.get_num();
      m[static_cast<size_t>(i) * q.n + j] = num.get_si();
    }
  }
  return {l, std::move(m)};
}

// One Monte-Carlo trial: sample A ~ G(n, p) from the trial substream and test
// m^T A m == 0 (mod L) where m = level * q and L = level^2.
bool trial_success(int n, long L, const long* m, uint64_t threshold,
                   uint64_t trial_seed) {
  std::mt19937_64 engine(trial_seed);
  std::array<uint32_t, kMaxVertices> rows{};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (engine() < threshold) {
        rows[static_cast<size_t>(u)] |= 1u << v;
        rows[static_cast<size_t>(v)] |= 1u << u;
      }
    }
  }
  if (L == 1) return true;  // q is a signed permutation
  std::array<long, kMaxVertices * kMaxVertices> am;
  for (int k = 0; k < n * n; ++k) am[static_cast<size_t>(k)] = 0;
  for (int u = 0; u < n; ++u) {
    uint32_t r = rows[static_cast<size_t>(u)];
    long* out = am.data() + static_cast<size_t>(u) * n;
    while (r != 0) {
      const int v = std::countr_zero(r);
      r &= r - 1;
      const long* mv = m + static_cast<size_t>(v) * n;
      for (int j = 0; j < n; ++j) out[j] += mv[j];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      long s = 0;
      for (int u = 0; u < n; ++u)
        s += m[static_cast<size_t>(u) * n + i] * am[static_cast<size_t>(u) * n + j];
      if (s % L != 0) return false;
    }
  }
  return true;
}

}  // namespace

uint64_t derive_trial_seed(uint64_t seed, uint64_t trial) {
  return splitmix64_mix(seed + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

Graph sample_gnp(const GnpSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxVertices)
    throw DomainError("sample_gnp needs 1 <= n <= 32");
  require_probability(spec.p);
  const uint64_t threshold = edge_threshold(spec.p);
  std::mt19937_64 engine(spec.seed);
  Graph g(spec.n);
  for (int u = 0; u < spec.n; ++u)
    for (int v = u + 1; v < spec.n; ++v)
      if (engine() < threshold) g.add_edge(u, v);
  return g;
}

double lemma_log_bound(int n, int s, int h, double p) {
  if (s < 1 || s > n) throw DomainError("lemma bound needs 1 <= s <= n");
  if (h < 2) throw DomainError("lemma bound needs h >= 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("lemma bound needs 0 < p < 1");
  const double phat = std::max(p, 1.0 - p);
  const double h4 = std::pow(static_cast<double>(h), 4);
  const double x = s / (2.0 * h4);
  return x * (x + n - s - 1) * std::log(phat);
}

double lemma_bound(int n, int s, int h, double p) {
  return std::exp(lemma_log_bound(n, s, h, p));
}

Rat integrality_probability_exact(
    const RatMatrix& q, const Rat& p,
    const std::vector<std::pair<int, int>>& entries_in) {
  require_orthogonal(q);
  require_probability(p);
  const int n = q.n;
  const auto [level, m] = scaled_integer_matrix(q);
  const long L = level * level;
  const auto mat = [&](int i, int j) {
    return m[static_cast<size_t>(i) * n + j];
  };

  std::vector<std::pair<int, int>> entries;
  entries.reserve(entries_in.size());
  for (const auto& [i, j] : entries_in) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw DomainError("entry index out of range");
    entries.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  // Edge (u, v) is relevant to entry (i, j) iff the coefficient of a_{u,v}
  // in level^2 * (q^T A q)_{i,j} is nonzero mod level^2.
  struct Dependence {
    std::vector<int> edge;    // indices into the union of relevant edges
    std::vector<long> coeff;  // coefficients reduced into [1, L)
  };
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<Dependence> deps;
  for (const auto& [i, j] : entries) {
    Dependence d;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        long c = (mat(u, i) * mat(v, j) + mat(v, i) * mat(u, j)) % L;
        if (c == 0) continue;
        if (c < 0) c += L;
        const auto [it, fresh] =
            edge_id.try_emplace({u, v}, static_cast<int>(edges.size()));
        if (fresh) edges.emplace_back(u, v);
        d.edge.push_back(it->second);
        d.coeff.push_back(c);
      }
    }
    if (!d.edge.empty()) deps.push_back(std::move(d));
  }
  if (static_cast<int>(edges.size()) > kMaxRelevantEdges)
    throw DomainError("more than 20 relevant edge variables (enumeration guard)");

  // Entries touching a common edge share a dependency component; disjoint
  // components are statistically independent, so probabilities multiply.
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  for (const Dependence& d : deps)
    for (size_t k = 1; k < d.edge.size(); ++k)
      parent[static_cast<size_t>(find(d.edge[k]))] = find(d.edge[0]);

  std::map<int, std::vector<int>> comp_edges;
  std::map<int, std::vector<const Dependence*>> comp_deps;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    comp_edges[find(e)].push_back(e);
  for (const Dependence& d : deps)
    comp_deps[find(d.edge[0])].push_back(&d);

  std::vector<Rat> pow_p(edges.size() + 1), pow_np(edges.size() + 1);
  pow_p[0] = 1;
  pow_np[0] = 1;
  const Rat np = Rat(1) - p;
  for (size_t k = 1; k <= edges.size(); ++k) {
    pow_p[k] = pow_p[k - 1] * p;
    pow_np[k] = pow_np[k - 1] * np;
  }

  Rat total = 1;
  for (const auto& [root, eids] : comp_edges) {
    const int bits = static_cast<int>(eids.size());
    std::vector<int> local(edges.size(), -1);
    for (int k = 0; k < bits; ++k) local[static_cast<size_t>(eids[k])] = k;

    struct LocalDep {
      std::vector<int> bit;
      std::vector<long> coeff;
    };
    std::vector<LocalDep> lds;
    for (const Dependence* d : comp_deps[root]) {
      LocalDep ld;
      for (size_t k = 0; k < d->edge.size(); ++k) {
        ld.bit.push_back(local[static_cast<size_t>(d->edge[k])]);
        ld.coeff.push_back(d->coeff[k]);
      }
      lds.push_back(std::move(ld));
    }
    const auto residue = [&](const LocalDep& ld, uint32_t mask) {
      long sum = 0;
      for (size_t k = 0; k < ld.bit.size(); ++k)
        if ((mask >> ld.bit[k]) & 1u) sum += ld.coeff[k];
      return sum % L;
    };

    const uint32_t lim = 1u << bits;
    Rat comp_prob = 0;
    for (uint32_t mask = 0; mask < lim; ++mask) {
      bool good = true;
      for (const LocalDep& ld : lds) {
        if (residue(ld, mask) != 0) {
          good = false;
          break;
        }
      }
      if (good) {
        const int ones = std::popcount(mask);
        comp_prob += pow_p[static_cast<size_t>(ones)] *
                     pow_np[static_cast<size_t>(bits - ones)];
      }
    }
    // Exhaustive involution check: flipping an entry's first relevant edge
    // can never preserve that entry's integrality, whatever the other edges.
    for (const LocalDep& ld : lds) {
      const uint32_t pivot = 1u << ld.bit[0];
      for (uint32_t mask = 0; mask < lim; ++mask) {
        if (mask & pivot) continue;
        if (residue(ld, mask) == 0 && residue(ld, mask | pivot) == 0)
          throw std::logic_error("involution property violated");
      }
    }
    total *= comp_prob;
  }
  return total;
}

Rat integrality_probability_exact(const RatMatrix& q, const Rat& p) {
  std::vector<std::pair<int, int>> entries;
  entries.reserve(static_cast<size_t>(q.n) * (q.n + 1) / 2);
  for (int i = 0; i < q.n; ++i)
    for (int j = i; j < q.n; ++j) entries.emplace_back(i, j);
  return integrality_probability_exact(q, p, entries);
}

IntegralityEstimate integrality_probability_mc(const RatMatrix& q, const Rat& p,
                                               uint64_t trials, uint64_t seed,
                                               int jobs) {
  require_orthogonal(q);
  require_probability(p);
  if (trials < 1) throw DomainError("at least one trial is required");
  if (q.n < 1 || q.n > kMaxVertices)
    throw DomainError("Monte-Carlo sampling needs 1 <= n <= 32");
  const auto [level, m] = scaled_integer_matrix(q);
  const long L = level * level;
  const uint64_t threshold = edge_threshold(p);
  const int n = q.n;

  uint64_t successes = 0;
  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(std::min<uint64_t>(
                                          trials, 64))));
  if (workers == 1) {
    for (uint64_t t = 0; t < trials; ++t)
      if (trial_success(n, L, m.data(), threshold, derive_trial_seed(seed, t)))
        ++successes;
  } else {
    std::vector<uint64_t> partial(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        uint64_t local = 0;
        for (uint64_t t = static_cast<uint64_t>(w); t < trials;
             t += static_cast<uint64_t>(workers))
          if (trial_success(n, L, m.data(), threshold,
                            derive_trial_seed(seed, t)))
            ++local;
        partial[static_cast<size_t>(w)] = local;
      });
    }
    for (std::thread& th : pool) th.join();
    successes = std::accumulate(partial.begin(), partial.end(), uint64_t{0});
  }

  IntegralityEstimate est;
  est.trials = trials;
  est.successes = successes;
  const double nt = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nt;
  est.point_estimate = ph;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / nt;
  const double center = (ph + z2 / (2.0 * nt)) / denom;
  const double radius =
      kWilsonZ * std::sqrt(ph * (1.0 - ph) / nt + z2 / (4.0 * nt * nt)) / denom;
  est.wilson_lo = std::max(0.0, center - radius);
  est.wilson_hi = std::min(1.0, center + radius);

  const CanonicalForm cf = canonicalize(q);
  if (cf.s > 0) {
    est.log_bound =
        lemma_log_bound(n, cf.s, static_cast<int>(cf.h.get_si()),
                        mpq_get_d(p.get_mpq_t()));
    est.bound = std::exp(est.log_bound);
  }
  return est;
}

TailResult theorem_tail(long long n, int h, double p) {
  if (n < 2) throw DomainError("theorem_tail needs n >= 2");
  if (h < 2) throw DomainError("theorem_tail needs h >= 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("theorem_tail needs 0 < p < 1");
  const double phat = std::max(p, 1.0 - p);
  const double lambda = -std::log(phat);
  const double ln_n = std::log(static_cast<double>(n));
  const double h2 = static_cast<double>(h) * h;
  const double h8 = std::pow(static_cast<double>(h), 8);
  const double slope = lambda * static_cast<double>(n - 1) / (4.0 * h8);
  const auto f = [&](long long s) {
    const double sd = static_cast<double>(s);
    return 2.0 * sd * ln_n + sd * h2 * std::log(2.0 * sd * h2) - sd * slope;
  };

  // Streaming log-sum-exp: the running sum equals acc * exp(run_max).
  double run_max = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  const auto add = [&](double lf) {
    if (lf <= run_max) {
      acc += std::exp(lf - run_max);
    } else {
      acc = acc * std::exp(run_max - lf) + 1.0;
      run_max = lf;
    }
  };

  if (n <= kDirectSumLimit) {
    for (long long s = 2; s <= n; ++s) add(f(s));
  } else {
    // f is convex in s, so its maximum over [2, n] sits at an endpoint and
    // everything more than `window` nats below it is negligible in double
    // precision (the skipped mass is < n * exp(max - window)).
    const double window = 120.0;
    const double cutoff = std::max(f(2), f(n)) - window;
    long long lo = 2;
    while (lo <= n && f(lo) > cutoff) {
      add(f(lo));
      ++lo;
    }
    long long hi = n;
    while (hi >= lo && f(hi) > cutoff) {
      add(f(hi));
      --hi;
    }
  }

  TailResult out;
  out.log_tail = run_max + std::log(acc);
  out.b_n = (2.0 + h2) * ln_n + h2 * std::log(2.0 * h2) - slope;
  out.log_r = -lambda * static_cast<double>(n) / (8.0 * h8);
  out.geometric_valid = out.b_n <= out.log_r;
  if (out.geometric_valid)
    out.log_geometric = 2.0 * out.log_r - std::log(-std::expm1(out.log_r));
  return out;
}

double log_of_rat(const Rat& value) {
  if (value < 0) throw DomainError("log of a negative rational");
  if (value == 0) return -std::numeric_limits<double>::infinity();
  long exp_num = 0;
  long exp_den = 0;
  const Int num = value.get_num();
  const Int den = value.get_den();
  const double d_num = mpz_get_d_2exp(&exp_num, num.get_mpz_t());
  const double d_den = mpz_get_d_2exp(&exp_den, den.get_mpz_t());
  return std::log(d_num) - std::log(d_den) +
         static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

}  // namespace cospec
