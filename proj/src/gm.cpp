#include "cospec/gm.hpp"

#include <bit>
#include <stdexcept>

namespace cospec {

namespace {

uint32_t vertex_mask(const std::vector<int>& vs) {
  uint32_t m = 0;
  for (int v : vs) m |= 1u << v;
  return m;
}

uint32_t full_mask(int n) {
  return n == 32 ? ~0u : ((1u << n) - 1);
}

}  // namespace

bool is_gm_partition(const Graph& g, const GMPartition& part) {
  int n = g.n();
  uint32_t seen = 0;
  auto absorb = [&seen, n](const std::vector<int>& vs) {
    for (int v : vs) {
      if (v < 0 || v >= n || ((seen >> v) & 1u))
        throw DomainError("is_gm_partition: blocks and rest must partition the vertices");
      seen |= 1u << v;
    }
  };
  for (const auto& b : part.blocks) absorb(b);
  absorb(part.rest);
  if (seen != full_mask(n))
    throw DomainError("is_gm_partition: blocks and rest must partition the vertices");

  for (const auto& b : part.blocks) {
    if (b.size() % 2) return false;
  }
  for (const auto& bi : part.blocks) {
    for (const auto& bj : part.blocks) {
      uint32_t mj = vertex_mask(bj);
      int expected = -1;
      for (int v : bi) {
        int d = std::popcount(g.row(v) & mj);
        if (expected < 0) expected = d;
        if (d != expected) return false;
      }
    }
  }
  for (int dv : part.rest) {
    for (const auto& bi : part.blocks) {
      int m = static_cast<int>(bi.size());
      int d = std::popcount(g.row(dv) & vertex_mask(bi));
      if (d != 0 && d != m && 2 * d != m) return false;
    }
  }
  return true;
}

Graph gm_switch(const Graph& g, const GMPartition& part) {
  if (!is_gm_partition(g, part)) throw DomainError("gm_switch: invalid partition");
  Graph h = g;
  for (int dv : part.rest) {
    for (const auto& bi : part.blocks) {
      int m = static_cast<int>(bi.size());
      int d = std::popcount(g.row(dv) & vertex_mask(bi));
      if (d != 0 && 2 * d == m) {
        for (int v : bi) h.set_edge(dv, v, !g.edge(dv, v));
      }
    }
  }
  if (!(charpoly(adjacency_matrix(h)) == charpoly(adjacency_matrix(g))))
    throw std::logic_error("gm_switch: output spectrum differs from input");
  return h;
}

RatMatrix gm_matrix(const GMPartition& part, int n) {
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (const auto& b : part.blocks) {
    if (b.size() % 2)
      throw DomainError("gm_matrix: blocks must have even size");
    for (int v : b) {
      if (v < 0 || v >= n || used[static_cast<size_t>(v)])
        throw DomainError("gm_matrix: malformed blocks");
      used[static_cast<size_t>(v)] = true;
    }
  }
  RatMatrix q(n);
  for (int i = 0; i < n; ++i) q.at(i, i) = 1;
  for (const auto& b : part.blocks) {
    int m = static_cast<int>(b.size());
    if (m == 0) continue;
    for (int u : b) {
      for (int v : b) {
        q.at(u, v) = Rat(2, m);
        if (u == v) q.at(u, v) -= 1;
        q.at(u, v).canonicalize();
      }
    }
  }
  return q;
}

std::vector<GMPartition> find_gm_partitions(const Graph& g, int max_block) {
  int n = g.n();
  if (n > 12) throw DomainError("find_gm_partitions: order above the n <= 12 search guard");
  std::vector<GMPartition> out;
  if (max_block < 2 || n < 2) return out;
  for (uint32_t mask = 1; mask <= full_mask(n); ++mask) {
    int m = std::popcount(mask);
    if (m < 2 || m % 2 || m > max_block) continue;
    GMPartition part;
    part.blocks.emplace_back();
    for (int v = 0; v < n; ++v) {
      if ((mask >> v) & 1u)
        part.blocks[0].push_back(v);
      else
        part.rest.push_back(v);
    }
    if (is_gm_partition(g, part)) out.push_back(std::move(part));
    if (mask == full_mask(n)) break;  // avoid wrap at n = 32
  }
  return out;
}

}  // namespace cospec
