// Acceptance gate: one PASS/FAIL/SKIPPED line per criterion, exit 1 when any
// criterion fails. Detail lines are indented; verdict lines start with the
// criterion id. A10 checks a monotonicity property that the implemented
// quantity measurably does not have; it is reported honestly (see below).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cospec/census.hpp"
#include "cospec/exact.hpp"
#include "cospec/gm.hpp"
#include "cospec/graph.hpp"
#include "cospec/ortho.hpp"
#include "cospec/problab.hpp"
#include "form_fixtures.hpp"

using namespace cospec;

namespace {

int g_fail = 0;
int g_pass = 0;
int g_skip = 0;

void verdict(const std::string& id, bool pass, const std::string& text) {
  (pass ? g_pass : g_fail) += 1;
  std::printf("%s %s %s\n", id.c_str(), pass ? "PASS" : "FAIL", text.c_str());
  std::fflush(stdout);
}

void skipped(const std::string& id, const std::string& text) {
  ++g_skip;
  std::printf("%s SKIPPED %s\n", id.c_str(), text.c_str());
  std::fflush(stdout);
}

void detail(const std::string& text) {
  std::printf("  %s\n", text.c_str());
  std::fflush(stdout);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int census_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

bool maxima_are(const CensusReport& r, long l, long h) {
  return r.l_max.has_value() && r.h_max.has_value() && *r.l_max == l &&
         *r.h_max == h;
}

// --- A1 / A2 / A3: census maxima ------------------------------------------

CensusReport a1(std::vector<std::string>& problems) {
  const Stopwatch watch;
  CensusReport r8;
  for (int n = 1; n <= 8; ++n) {
    const CensusReport r = run_census(n, census_jobs());
    if (n <= 7 && (r.l_max.has_value() || r.h_max.has_value()))
      problems.push_back("n=" + std::to_string(n) +
                         ": expected no maxima (NaN), got a value");
    if (n == 8) {
      if (!maxima_are(r, 3, 3))
        problems.push_back("n=8: expected l_max=h_max=3");
      r8 = r;
    }
    if (!r.anomalies.empty())
      problems.push_back("n=" + std::to_string(n) + ": anomalies logged");
  }
  const double t = watch.seconds();
  if (t >= 300.0) problems.push_back("exceeded the 300 s budget");
  verdict("A1", problems.empty(),
          "census maxima n=1..8: NaN for n<=7, then 3,3 at n=8 (" +
              fmt("%.1f", t) + " s, limit 300 s)");
  for (const std::string& p : problems) detail(p);
  return r8;
}

CensusReport a2(std::vector<std::string>& problems) {
  const Stopwatch watch;
  const CensusReport r = run_census(9, census_jobs());
  const double t = watch.seconds();
  if (r.class_count != 274668)
    problems.push_back("expected 274668 classes, got " +
                       std::to_string(r.class_count));
  if (!maxima_are(r, 37, 37)) problems.push_back("expected l_max=h_max=37");
  if (!r.anomalies.empty()) problems.push_back("anomalies logged");
  if (t >= 1800.0) problems.push_back("exceeded the 1800 s budget");
  verdict("A2", problems.empty(),
          "census maxima n=9: l_max=h_max=37 over 274668 classes (" +
              fmt("%.1f", t) + " s, limit 1800 s)");
  for (const std::string& p : problems) detail(p);
  return r;
}

// Reduce partition of a record: pairs only form inside equal-key buckets, so
// any function of the key may split the reduce into independently censused
// partitions whose reports combine by sum (counts) and max (maxima). FNV-1a
// keeps the split deterministic across platforms.
uint32_t key_partition(const CensusRecord& r) {
  uint32_t h = 2166136261u;
  for (const int32_t v : r.key) {
    h ^= static_cast<uint32_t>(v);
    h *= 16777619u;
  }
  return h;
}

void a3() {
  const char* env = std::getenv("COSPEC_ACCEPT_N10");
  if (env == nullptr || std::string(env) != "1") {
    skipped("A3",
            "census maxima n=10 (multi-hour); set COSPEC_ACCEPT_N10=1 to run");
    return;
  }
  std::vector<std::string> problems;
  const Stopwatch watch;
  // n=10 is run the way the tooling is meant to scale: enumerate into sharded
  // graph6 slice files, map each slice on its own, then reduce in key
  // partitions. A single resident reduce is out of reach on small machines:
  // the 12,005,168 records take ~1.2 GB, and every verified pair carries its
  // rational Q (~10 KB of bignum heap), which at n=10 adds up to several GB.
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "cospec_acceptance_n10";
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  std::filesystem::create_directories(dir);
  constexpr int kSlices = 16;
  constexpr uint32_t kPartitions = 8;
  const auto slice_path = [&dir](int s) {
    char name[32];
    std::snprintf(name, sizeof name, "slice-%02d.g6", s);
    return dir / name;
  };
  const std::filesystem::path cache_path = dir / "records.bin";

  uint64_t enumerated = 0;
  uint64_t mapped = 0;
  uint64_t classes = 0, controllable = 0, pairs = 0;
  std::optional<Int> l_max, h_max;
  double t_enum = 0.0, t_map = 0.0, t_reduce = 0.0;
  try {
    // Phase 1: enumerate to round-robin graph6 slices.
    Stopwatch phase;
    {
      std::vector<std::ofstream> slices;
      slices.reserve(kSlices);
      for (int s = 0; s < kSlices; ++s) slices.emplace_back(slice_path(s));
      enumerate_graphs(10, [&](const Graph& g) {
        slices[enumerated % kSlices] << to_graph6(g) << '\n';
        ++enumerated;
      });
      for (int s = 0; s < kSlices; ++s) {
        if (!slices[s]) problems.push_back("failed writing a graph6 slice");
      }
    }
    t_enum = phase.seconds();

    // Phase 2: map each slice independently; the flat record cache stands in
    // for the shard files a distributed run would collect.
    phase = Stopwatch();
    {
      std::ofstream cache(cache_path, std::ios::binary);
      for (int s = 0; s < kSlices; ++s) {
        std::vector<Graph> graphs;
        graphs.reserve(enumerated / kSlices + 1);
        std::ifstream in(slice_path(s));
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty()) graphs.push_back(parse_graph6(line));
        }
        const std::vector<CensusRecord> part =
            census_map(10, graphs, census_jobs());
        cache.write(
            reinterpret_cast<const char*>(part.data()),
            static_cast<std::streamsize>(part.size() * sizeof(CensusRecord)));
        mapped += part.size();
      }
      if (!cache) problems.push_back("failed writing the record cache");
    }
    t_map = phase.seconds();

    // Phase 3: associative reduce, one key partition resident at a time.
    phase = Stopwatch();
    for (uint32_t p = 0; p < kPartitions; ++p) {
      std::vector<CensusRecord> mine;
      mine.reserve(mapped / kPartitions + mapped / 32);
      std::ifstream cache(cache_path, std::ios::binary);
      std::vector<CensusRecord> buf(size_t{1} << 15);
      for (;;) {
        cache.read(
            reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(CensusRecord)));
        const auto got = static_cast<size_t>(cache.gcount());
        if (got % sizeof(CensusRecord) != 0) {
          problems.push_back("record cache is torn");
          break;
        }
        for (size_t i = 0; i < got / sizeof(CensusRecord); ++i) {
          if (key_partition(buf[i]) % kPartitions == p) mine.push_back(buf[i]);
        }
        if (got < buf.size() * sizeof(CensusRecord)) break;
      }
      const CensusReport r = census_from_records(10, std::move(mine));
      classes += r.class_count;
      controllable += r.controllable_count;
      pairs += r.pair_count;
      if (r.l_max && (!l_max || *r.l_max > *l_max)) l_max = *r.l_max;
      if (r.h_max && (!h_max || *r.h_max > *h_max)) h_max = *r.h_max;
      if (!r.anomalies.empty())
        problems.push_back("anomalies logged in partition " +
                           std::to_string(p));
    }
    t_reduce = phase.seconds();
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  std::filesystem::remove_all(dir, ec);

  if (enumerated != 12005168 || mapped != enumerated || classes != enumerated)
    problems.push_back(
        "expected 12005168 classes through every phase, got enumerated=" +
        std::to_string(enumerated) + " mapped=" + std::to_string(mapped) +
        " reduced=" + std::to_string(classes));
  if (!l_max || !h_max || *l_max != 253 || *h_max != 253)
    problems.push_back("expected l_max=h_max=253");
  const double t = watch.seconds();
  detail("n=10: classes=" + std::to_string(classes) +
         " controllable=" + std::to_string(controllable) +
         " pairs=" + std::to_string(pairs));
  detail("sharded run: " + std::to_string(kSlices) + " graph6 slices, " +
         std::to_string(kPartitions) + " reduce partitions; enumerate=" +
         fmt("%.0f", t_enum) + " s map=" + fmt("%.0f", t_map) +
         " s reduce=" + fmt("%.0f", t_reduce) + " s");
  verdict("A3", problems.empty(),
          "census maxima n=10: l_max=h_max=253 via sharded graph6 slices (" +
              fmt("%.1f", t) + " s)");
  for (const std::string& p : problems) detail(p);
}

// --- A4: every emitted pair re-verifies exactly ----------------------------

void a4(const CensusReport& r8, const CensusReport& r9) {
  std::vector<std::string> problems;
  uint64_t checked = 0;
  for (const CensusReport* r : {&r8, &r9}) {
    for (const MatePair& pair : r->pairs) {
      ++checked;
      const IntMatrix a = adjacency_matrix(pair.g);
      const IntMatrix b = adjacency_matrix(pair.h);
      if (!verify_transition(pair.q, a, b))
        problems.push_back("pair " + to_graph6(pair.g) + "/" +
                           to_graph6(pair.h) + ": Q fails Q'Q=I or Q'AQ=B");
      if (!fixes_ones_vector(pair.q))
        problems.push_back("pair " + to_graph6(pair.g) + "/" +
                           to_graph6(pair.h) + ": Qe != e");
      if (certificate(pair.g) == certificate(pair.h))
        problems.push_back("pair " + to_graph6(pair.g) + "/" +
                           to_graph6(pair.h) + ": members are isomorphic");
      const auto [level, height] = level_and_height(pair.q);
      if (level != pair.level || height != pair.height)
        problems.push_back("pair " + to_graph6(pair.g) + "/" +
                           to_graph6(pair.h) + ": recorded level/height drift");
    }
  }
  verdict("A4", problems.empty() && checked == r8.pair_count + r9.pair_count,
          "pair soundness: all " + std::to_string(checked) +
              " pairs at n=8,9 re-verify exactly (Q'Q=I, Q'AQ=B, Qe=e, "
              "non-isomorphic)");
  for (const std::string& p : problems) detail(p);
}

// --- A5: the (2,5) block enumeration and its counting bound ----------------

void a5() {
  std::vector<std::string> problems;
  const std::vector<RatMatrix> blocks = enumerate_canonical_blocks(2, 5);
  if (blocks.size() != 16)
    problems.push_back("expected 16 blocks at (s,h)=(2,5), got " +
                       std::to_string(blocks.size()));
  for (const RatMatrix& q : blocks) {
    const auto [level, height] = level_and_height(q);
    if (height != 5) problems.push_back("a (2,5) block has height != 5");
    if (canonicalize(q).s != 2)
      problems.push_back("a (2,5) block has an integral column");
  }
  if (!(Int(16) <= counting_bound(2, 5)))
    problems.push_back("count exceeds the (2sh^2)^(sh^2) bound");
  if (!enumerate_canonical_blocks(2, 4).empty())
    problems.push_back("expected no fully-fractional 2x2 blocks of height <= 4");
  verdict("A5", problems.empty(),
          "block enumeration: (2,5) yields 16 blocks, all height 5, within "
          "the counting bound; (2,4) yields none");
  for (const std::string& p : problems) detail(p);
}

// --- A6: exact integrality probability never exceeds the lemma bound -------

void a6() {
  std::vector<std::string> problems;
  std::vector<std::pair<std::string, RatMatrix>> fixtures;
  for (int n = 1; n <= 7; ++n)
    fixtures.emplace_back("I_" + std::to_string(n),
                          fixtures::diag_compose({}, n));
  std::mt19937_64 rng(20260815);
  fixtures.emplace_back("signed_perm_5", fixtures::random_signed_perm(5, rng));
  fixtures.emplace_back("signed_perm_7", fixtures::random_signed_perm(7, rng));
  for (int extra = 0; extra <= 5; ++extra)
    fixtures.emplace_back("rot345+I_" + std::to_string(extra),
                          fixtures::diag_compose({fixtures::rot345()}, extra));
  for (int extra = 0; extra <= 3; ++extra)
    fixtures.emplace_back("gm4+I_" + std::to_string(extra),
                          fixtures::diag_compose({fixtures::gm_block(4)}, extra));
  for (int extra = 0; extra <= 1; ++extra)
    fixtures.emplace_back("gm6+I_" + std::to_string(extra),
                          fixtures::diag_compose({fixtures::gm_block(6)}, extra));

  const Rat ps[] = {Rat(3, 10), Rat(1, 2), Rat(7, 10)};
  int checked = 0, excluded = 0;
  for (const auto& [name, q] : fixtures) {
    const CanonicalForm cf = canonicalize(q);
    for (const Rat& p : ps) {
      Rat exact;
      try {
        exact = integrality_probability_exact(q, p);
      } catch (const DomainError&) {
        ++excluded;  // beyond the exact-enumeration guard: not in scope
        break;
      }
      const double log_exact = log_of_rat(exact);
      const double log_bound =
          cf.s > 0 ? lemma_log_bound(q.n, cf.s,
                                     static_cast<int>(cf.h.get_si()),
                                     p.get_d())
                   : 0.0;
      if (!(log_exact <= log_bound + 1e-12))
        problems.push_back(name + " at p=" + rat_to_string(p) +
                           ": log exact " + fmt("%.6f", log_exact) +
                           " > log bound " + fmt("%.6f", log_bound));
      ++checked;
    }
  }
  verdict("A6", problems.empty(),
          "lemma-bound domination: exact <= bound (log tolerance 1e-12) on " +
              std::to_string(checked) + " fixture/p combinations (" +
              std::to_string(excluded) +
              " fixture beyond the exact-enumeration guard excluded)");
  for (const std::string& p : problems) detail(p);
}

// --- A7: Wilson interval coverage of the exact value ------------------------

void a7() {
  std::vector<std::string> problems;
  const Stopwatch watch;
  GMPartition part;
  part.blocks.push_back({0, 1, 2, 3});
  const RatMatrix q = gm_matrix(part, 6);
  const Rat exact = integrality_probability_exact(q, Rat(1, 2));
  const double target = exact.get_d();  // 1/32
  int covered = 0;
  for (int i = 0; i < 100; ++i) {
    const IntegralityEstimate est = integrality_probability_mc(
        q, Rat(1, 2), 100000, 424242 + static_cast<uint64_t>(i), 1);
    if (est.wilson_lo <= target && target <= est.wilson_hi) ++covered;
  }
  const double t = watch.seconds();
  if (covered < 93)
    problems.push_back("covered only " + std::to_string(covered) + "/100");
  if (t >= 120.0) problems.push_back("exceeded the 120 s budget");
  verdict("A7", problems.empty(),
          "Wilson 95% interval covers the exact 1/32 in " +
              std::to_string(covered) +
              "/100 seeded replications at 1e5 trials (need >= 93; " +
              fmt("%.1f", t) + " s, limit 120 s)");
  for (const std::string& p : problems) detail(p);
}

// --- A8: greedy selection invariants on randomized canonical forms ---------

void a8() {
  std::vector<std::string> problems;
  std::vector<RatMatrix> pool;
  for (const auto& [s, h] : {std::pair{2, 5}, std::pair{3, 3}, std::pair{4, 2}})
    for (const RatMatrix& b : enumerate_canonical_blocks(s, h))
      pool.push_back(b);

  std::mt19937_64 rng(424242);
  int failures = 0;
  for (int it = 0; it < 1000; ++it) {
    const int nblocks = 1 + static_cast<int>(rng() % 3);
    std::vector<RatMatrix> blocks;
    for (int b = 0; b < nblocks; ++b)
      blocks.push_back(pool[rng() % pool.size()]);
    const int extra = static_cast<int>(rng() % 5);
    const RatMatrix q = fixtures::scrambled(blocks, extra, rng);
    const CanonicalForm cf = canonicalize(q);
    const SelectionResult sel = greedy_select(cf, q.n);

    const long h4 = [&] {
      const Int h = cf.h;
      const Int p4 = h * h * h * h;
      return p4.get_si();
    }();
    const long ceil_s = (cf.s + h4 - 1) / h4;
    const long need_i = (ceil_s + 1) / 2;
    const long need_j = ceil_s / 2 + q.n - cf.s;
    bool ok = static_cast<long>(sel.i_set.size()) >= need_i &&
              static_cast<long>(sel.j_set.size()) >= need_j;

    // Chosen columns must not repeat, and their supports (hence the pairwise
    // support products) must be disjoint.
    std::vector<int> chosen = sel.i_set;
    chosen.insert(chosen.end(), sel.j_set.begin(), sel.j_set.end());
    std::set<int> unique_cols(chosen.begin(), chosen.end());
    if (unique_cols.size() != chosen.size()) ok = false;
    std::set<int> seen_rows;
    for (int col : chosen) {
      for (int row : sel.supports.at(col)) {
        if (!seen_rows.insert(row).second) ok = false;
      }
    }
    if (!ok) {
      ++failures;
      if (failures <= 3)
        problems.push_back("iteration " + std::to_string(it) +
                           ": invariant violated (s=" + std::to_string(cf.s) +
                           ", h=" + cf.h.get_str() + ")");
    }
  }
  verdict("A8", failures == 0,
          "greedy selection invariants hold on 1000 randomized block-diagonal "
          "canonical forms (failures: " +
              std::to_string(failures) + ")");
  for (const std::string& p : problems) detail(p);
}

// --- A9: switching-matrix analytics and switch algebra ----------------------

void a9() {
  std::vector<std::string> problems;
  GMPartition primes;
  int v = 0;
  for (int p : {2, 3, 5, 7}) {
    std::vector<int> block;
    for (int k = 0; k < 2 * p; ++k) block.push_back(v++);
    primes.blocks.push_back(std::move(block));
  }
  const auto [level, height] = level_and_height(gm_matrix(primes, v));
  if (level != 210 || height != 7)
    problems.push_back("prime-block matrix: expected level 210 / height 7, got " +
                       level.get_str() + "/" + height.get_str());

  uint64_t switches = 0;
  const auto check_graph = [&](const Graph& g, int cap) {
    for (const GMPartition& part : find_gm_partitions(g, cap)) {
      ++switches;
      const Graph h = gm_switch(g, part);
      if (gm_switch(h, part) != g) {
        problems.push_back(to_graph6(g) + ": switch is not an involution");
        continue;
      }
      const IntPoly pg = charpoly(adjacency_matrix(g));
      const IntPoly ph = charpoly(adjacency_matrix(h));
      const IntPoly pgc = charpoly(adjacency_matrix(g.complement()));
      const IntPoly phc = charpoly(adjacency_matrix(h.complement()));
      if (pg != ph || pgc != phc)
        problems.push_back(to_graph6(g) + ": switch changed a charpoly");
    }
  };
  for (const Graph& g : enumerate_graphs(6)) check_graph(g, 6);
  check_graph(parse_graph6("G??XP_"), 8);

  verdict("A9", problems.empty(),
          "switching analytics: prime-block matrix has level 210 / height 7; "
          "all " + std::to_string(switches) +
              " fixture switches are involutions and preserve both charpolys");
  for (const std::string& p : problems) detail(p);
}

// --- A10: tail behaviour on the half-decade grid ----------------------------

void a10() {
  std::vector<std::string> problems;
  const long long grid[] = {10000,   31623,   100000,  316228,
                            1000000, 3162278, 10000000};
  std::vector<double> logs;
  for (long long n : grid) {
    logs.push_back(theorem_tail(n, 2, 0.5).log_tail);
    detail("n=" + std::to_string(n) +
           "  log_tail=" + fmt("%.6f", logs.back()));
  }
  bool monotone = true;
  for (size_t k = 1; k < logs.size(); ++k)
    if (logs[k] >= logs[k - 1]) monotone = false;
  const bool small_at_top = logs.back() <= -1.0;

  if (!monotone)
    problems.push_back(
        "not monotone: the sum rises from log " + fmt("%.0f", logs[0]) +
        " at n=10^4 to a peak of log " + fmt("%.0f", logs[1]) +
        " at n=10^4.5 before collapsing. The largest summand grows like "
        "n log n until the quadratic exponent term overtakes it near "
        "n ~ 10^4.5-10^5, so no grid containing the half-decades can be "
        "monotone from 10^4 on. The values above are the measured curve "
        "(they match the frozen unit-test fixtures); the criterion is "
        "reported red rather than met by thinning the grid.");
  if (!small_at_top)
    problems.push_back("log at n=10^7 is " + fmt("%.2f", logs.back()) +
                       " > -1");
  verdict("A10", monotone && small_at_top,
          std::string("tail decreasing on the 10^4..10^7 half-decade grid: ") +
              (monotone ? "yes" : "NO") +
              "; log <= -1 at n=10^7: " + (small_at_top ? "yes" : "no"));
  for (const std::string& p : problems) detail(p);
}

}  // namespace

int main() {
  std::vector<std::string> p1, p2;
  const CensusReport r8 = a1(p1);
  const CensusReport r9 = a2(p2);
  a3();
  a4(r8, r9);
  a5();
  a6();
  a7();
  a8();
  a9();
  a10();
  std::printf("summary: %d pass, %d fail, %d skipped\n", g_pass, g_fail,
              g_skip);
  return g_fail > 0 ? 1 : 0;
}
