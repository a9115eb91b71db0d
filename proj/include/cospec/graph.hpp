#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cospec/error.hpp"

namespace cospec {

inline constexpr int kMaxVertices = 32;

// Undirected simple graph on up to 32 vertices, one bitset row per vertex.
// Rows are kept symmetric and loop-free; bits at positions >= n() are zero,
// so whole-object equality is plain member equality.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  bool edge(int u, int v) const { return (adj_[u] >> v) & 1u; }
  void set_edge(int u, int v, bool present);
  void add_edge(int u, int v) { set_edge(u, v, true); }
  void toggle_edge(int u, int v);
  uint32_t row(int v) const { return adj_[v]; }
  int degree(int v) const { return std::popcount(adj_[v]); }
  int edge_count() const;

  Graph complement() const;
  // Returns the graph with vertex u renamed to new_label[u].
  Graph relabel(const std::vector<int>& new_label) const;
  // Returns a copy with one extra vertex (index n()) adjacent to the set
  // given by `neighbors` (a bitmask over the existing vertices).
  Graph extended(uint32_t neighbors) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::array<uint32_t, kMaxVertices> adj_{};
};

// ---------------------------------------------------------------------------
// graph6 codec (de-facto standard: 6-bit big-endian packing of the upper
// triangle in column order, bytes offset by 63; one graph per LF line).
// ---------------------------------------------------------------------------

enum class Graph6ErrorKind {
  kEmptyInput,       // no bytes at all
  kUnsupportedOrder, // n = 0, n > 32, or a multi-byte order header
  kBadByte,          // byte outside the graph6 alphabet [63, 126]
  kTruncated,        // bit field shorter than C(n,2) bits
  kTrailingGarbage,  // extra bytes after the bit field
  kNonzeroPadding,   // pad bits beyond C(n,2) are not all zero
};

class Graph6Error : public DomainError {
 public:
  Graph6Error(Graph6ErrorKind kind, const std::string& what)
      : DomainError(what), kind_(kind) {}
  Graph6ErrorKind kind() const { return kind_; }

 private:
  Graph6ErrorKind kind_;
};

// Parses one graph6 line (an optional trailing LF/CRLF is tolerated).
Graph parse_graph6(std::string_view line);
// Minimal-length graph6 encoding; parse_graph6(to_graph6(g)) == g bit-exactly.
std::string to_graph6(const Graph& g);

// ---------------------------------------------------------------------------
// Canonical labeling. certificate(g) == certificate(h) iff g and h are
// isomorphic. The canonical labeling maximizes the upper-triangle bit string
// (column-major pair order, the same order graph6 uses), searched with
// equitable-partition refinement plus individualization and pruned by
// discovered automorphisms and prefix comparisons.
// ---------------------------------------------------------------------------

struct Certificate {
  std::string bytes;
  friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

// pos[v] = position of vertex v in the canonical labeling.
std::vector<int> canonical_labeling(const Graph& g);
Graph canonical_form(const Graph& g);
Certificate certificate(const Graph& g);

// The canonical upper-triangle bits packed into the low C(n,2) bits of a
// uint64_t (bit for pair index 0 is the most significant of the field).
// Only valid for n <= 11 (C(11,2) = 55 bits).
uint64_t certificate_bits64(const Graph& g);
// Rebuilds the graph encoded by certificate_bits64.
Graph graph_from_bits64(int n, uint64_t bits);

// ---------------------------------------------------------------------------
// Isomorph-free exhaustive enumeration, 1 <= n <= 10. Yields exactly one
// representative (in canonical form) per isomorphism class, in a fixed
// deterministic order: graphs are grown one vertex at a time and deduplicated
// by canonical certificate.
// ---------------------------------------------------------------------------

void enumerate_graphs(int n, const std::function<void(const Graph&)>& sink);
std::vector<Graph> enumerate_graphs(int n);

}  // namespace cospec
