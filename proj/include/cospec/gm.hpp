#pragma once

#include <vector>

#include "cospec/exact.hpp"
#include "cospec/graph.hpp"

namespace cospec {

// Switching partition: blocks C_1..C_k (each of even size) plus the rest D.
struct GMPartition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> rest;
};

// True iff both switching conditions hold: the blocks are equitable among
// themselves (any two vertices of C_i have the same number of neighbors in
// C_j) and every vertex of D sees 0, half, or all of each block. Throws
// DomainError when blocks + rest fail to partition the vertex set.
bool is_gm_partition(const Graph& g, const GMPartition& part);

// Complements, for each D-vertex with exactly half of a block as neighbors,
// its neighborhood inside that block. Throws DomainError on an invalid
// partition; the exact charpoly equality of input and output is asserted.
Graph gm_switch(const Graph& g, const GMPartition& part);

// Switching matrix in the original vertex labeling: (2/m_i) J - I on each
// block, identity elsewhere. Symmetric orthogonal involution.
RatMatrix gm_matrix(const GMPartition& part, int n);

// All valid single-block partitions with even 2 <= |C| <= max_block, in
// ascending order of the block's bitmask. Guarded to n <= 12.
std::vector<GMPartition> find_gm_partitions(const Graph& g, int max_block);

}  // namespace cospec
