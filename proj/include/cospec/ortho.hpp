#pragma once

#include <vector>

#include "cospec/exact.hpp"

namespace cospec {

// Partition of the rows/columns of a rational orthogonal matrix by whether
// they contain a fractional (non-integer) entry.
struct OrthoProfile {
  std::vector<int> fri, fci;  // rows / columns with a fractional entry
  std::vector<int> iri, ici;  // rows / columns that are entirely integral
  int s = 0;                  // |fri| == |fci|
};

// Decomposition p_r^T * q * p_c = diag(q_s, I_{n-s}) where p_r is a
// permutation matrix, p_c a signed permutation matrix, and every column of
// q_s contains a fractional entry. height(q_s) == height(q).
struct CanonicalForm {
  RatMatrix p_r, p_c;
  RatMatrix q_s;
  int n = 0;
  int s = 0;
  Int h;  // height of q
};

// K(j) per column of diag(q_s, I_{n-s}) and the overlap sets N(i) for the
// fractional columns i < s.
struct SupportMaps {
  std::vector<std::vector<int>> k;        // k[j]: rows of nonzero entries, j < n
  std::vector<std::vector<int>> overlap;  // overlap[i] = N(i), i < s
};

// Output of the greedy alternating selection: disjoint column index sets
// whose supports are pairwise disjoint (hence the K(i) x K(j) products are
// pairwise disjoint too).
struct SelectionResult {
  std::vector<int> i_set, j_set;
  std::vector<std::vector<int>> supports;  // supports[j] = K(j) for all columns
};

// Throws DomainError unless q^T q = I exactly.
OrthoProfile fractional_profile(const RatMatrix& q);

// Deterministic canonical decomposition: fractional rows/columns move to the
// front in ascending original order; integral columns are placed and
// sign-normalized so the trailing block becomes +I exactly.
// Throws DomainError unless q is orthogonal.
CanonicalForm canonicalize(const RatMatrix& q);

// Column supports and overlap sets of a canonical form; requires s >= 1.
// Verifies |K(j)| <= h^2 and |N(i)| <= h^4 (violations throw logic_error:
// both bounds are theorems, so a violation is an implementation bug).
SupportMaps supports_and_overlaps(const CanonicalForm& cf);

// Alternating greedy over the fractional columns (smallest remaining index
// first, removing N(pick) each round), then every integral column joins
// j_set. Guarantees |i_set| >= ceil(ceil(s/h^4)/2) and
// |j_set| >= floor(ceil(s/h^4)/2) + n - s.
SelectionResult greedy_select(const CanonicalForm& cf, int n);

// All rational orthogonal matrices of order s whose every column contains a
// fractional entry and whose entries have denominator <= h, in a fixed
// deterministic order. Guarded: requires 1 <= s <= 4 and 1 <= h <= 6.
std::vector<RatMatrix> enumerate_canonical_blocks(int s, int h);

// (2 s h^2)^(s h^2), exactly. Requires s, h >= 1.
Int counting_bound(int s, int h);

}  // namespace cospec
