#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cospec/exact.hpp"
#include "cospec/graph.hpp"

namespace cospec {

// Bucketing key: characteristic polynomials of the graph and its complement.
struct GenSpectrumKey {
  IntPoly p_a, p_comp;
  friend bool operator==(const GenSpectrumKey&, const GenSpectrumKey&) = default;
};

GenSpectrumKey gen_spectrum_key(const Graph& g);

// One graph class boiled down for bucketing: both charpolys packed into
// int32 coefficients (exact for n <= 10), the 64-bit canonical certificate,
// and the controllability flag.
struct CensusRecord {
  std::array<int32_t, 22> key{};  // coeffs of charpoly(A), then charpoly(A-bar)
  uint64_t cert = 0;
  bool controllable = false;
  friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

CensusRecord census_record(const Graph& g);

// A verified controllable generalized-cospectral pair with its unique
// transition matrix (level >= height >= 2 always holds for non-isomorphic
// mates; violation would mean an isomorphism slipped through).
struct MatePair {
  Graph g, h;
  RatMatrix q;
  Int level, height;
  bool controllable_both = true;
};

struct CensusReport {
  int n = 0;
  uint64_t class_count = 0;
  uint64_t controllable_count = 0;
  uint64_t pair_count = 0;
  std::optional<Int> l_max, h_max;  // absent iff pair_count == 0
  std::vector<MatePair> pairs;
  std::vector<std::string> anomalies;  // observations the theory says cannot occur
};

// Solves Q^T W(g) = W(h) for the unique candidate Q, then verifies
// Q^T Q = I, Q^T A_g Q = A_h and Q e = e exactly. Returns nullopt when any
// verification fails; throws SingularMatrixError when W(g) is singular
// (i.e. the controllability precondition was violated).
std::optional<RatMatrix> transition_matrix(const Graph& g, const Graph& h);

// Map phase: one record per graph; `jobs` worker threads (<=1 runs inline).
std::vector<CensusRecord> census_map(int n, const std::vector<Graph>& graphs, int jobs);

// Reduce phase: sorts and deduplicates records, buckets by key, pairs up
// controllable members with distinct certificates, and verifies every pair.
CensusReport census_from_records(int n, std::vector<CensusRecord> records);

// Full pipeline over the built-in enumeration (1 <= n <= 10) or a caller-
// provided list of graphs of order n.
CensusReport run_census(int n, int jobs = 1);
CensusReport run_census(int n, const std::vector<Graph>& graphs, int jobs = 1);

// n,classes,controllable,pairs,l_max,h_max with literal NaN for absent maxima.
void write_census_csv(const CensusReport& report, std::ostream& out);
// JSON pair dump: graph6 strings, Q as reduced-fraction strings, level, height.
void write_pairs_json(const CensusReport& report, std::ostream& out);

// Shard files: JSON record dumps that merge associatively.
void write_shard(int n, const std::vector<CensusRecord>& records, std::ostream& out);
std::vector<CensusRecord> read_shard(int n, std::istream& in);

}  // namespace cospec
