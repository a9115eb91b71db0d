#include "cospec/graph.hpp"

#include <algorithm>
#include <cstring>

namespace cospec {

namespace {

void check_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.n()) throw DomainError("Graph: vertex index out of range");
}

// Column-major upper-triangle pair order: index C(j,2)+i <-> pair (i, j), i<j.
std::pair<int, int> pair_from_index(int idx) {
  int j = 1;
  while (j * (j + 1) / 2 <= idx) ++j;
  return {idx - j * (j - 1) / 2, j};
}

}  // namespace

Graph::Graph(int n) : n_(n) {
  if (n < 1 || n > kMaxVertices)
    throw DomainError("Graph: vertex count must be in [1, 32]");
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.set_edge(u, v, true);
  return g;
}

void Graph::set_edge(int u, int v, bool present) {
  check_vertex(*this, u);
  check_vertex(*this, v);
  if (u == v) throw DomainError("Graph: self-loops are not allowed");
  uint32_t bu = 1u << u, bv = 1u << v;
  if (present) {
    adj_[u] |= bv;
    adj_[v] |= bu;
  } else {
    adj_[u] &= ~bv;
    adj_[v] &= ~bu;
  }
}

void Graph::toggle_edge(int u, int v) { set_edge(u, v, !edge(u, v)); }

int Graph::edge_count() const {
  int total = 0;
  for (int v = 0; v < n_; ++v) total += degree(v);
  return total / 2;
}

Graph Graph::complement() const {
  Graph g(n_);
  uint32_t all = (n_ == 32) ? ~0u : ((1u << n_) - 1);
  for (int v = 0; v < n_; ++v) g.adj_[v] = (~adj_[v] & all) & ~(1u << v);
  return g;
}

Graph Graph::relabel(const std::vector<int>& new_label) const {
  if (static_cast<int>(new_label.size()) != n_)
    throw DomainError("relabel: permutation size must equal vertex count");
  std::vector<bool> seen(n_, false);
  for (int v = 0; v < n_; ++v) {
    if (new_label[v] < 0 || new_label[v] >= n_ || seen[new_label[v]])
      throw DomainError("relabel: not a permutation of 0..n-1");
    seen[new_label[v]] = true;
  }
  Graph g(n_);
  for (int u = 0; u < n_; ++u) {
    uint32_t r = adj_[u];
    uint32_t out = 0;
    while (r) {
      int v = std::countr_zero(r);
      r &= r - 1;
      out |= 1u << new_label[v];
    }
    g.adj_[new_label[u]] = out;
  }
  return g;
}

Graph Graph::extended(uint32_t neighbors) const {
  if (n_ >= kMaxVertices) throw DomainError("extended: graph already has 32 vertices");
  if (n_ < 32 && (neighbors >> n_) != 0)
    throw DomainError("extended: neighbor mask mentions nonexistent vertices");
  Graph g = *this;
  g.n_ = n_ + 1;
  g.adj_[n_] = neighbors;
  uint32_t bit = 1u << n_;
  while (neighbors) {
    int v = std::countr_zero(neighbors);
    neighbors &= neighbors - 1;
    g.adj_[v] |= bit;
  }
  return g;
}

// ---------------------------------------------------------------------------
// graph6
// ---------------------------------------------------------------------------

Graph parse_graph6(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
    line.remove_suffix(1);
  if (line.empty())
    throw Graph6Error(Graph6ErrorKind::kEmptyInput, "graph6: empty input");

  unsigned header = static_cast<unsigned char>(line[0]);
  if (header == 126)
    throw Graph6Error(Graph6ErrorKind::kUnsupportedOrder,
                      "graph6: multi-byte order header (n > 62) is unsupported");
  if (header < 63 || header > 126)
    throw Graph6Error(Graph6ErrorKind::kBadByte,
                      "graph6: header byte outside the graph6 alphabet");
  int n = static_cast<int>(header) - 63;
  if (n < 1 || n > kMaxVertices)
    throw Graph6Error(Graph6ErrorKind::kUnsupportedOrder,
                      "graph6: order " + std::to_string(n) +
                          " outside the supported range [1, 32]");

  int m = n * (n - 1) / 2;
  int nbytes = (m + 5) / 6;
  if (static_cast<int>(line.size()) < 1 + nbytes)
    throw Graph6Error(Graph6ErrorKind::kTruncated,
                      "graph6: bit field truncated (need " +
                          std::to_string(nbytes) + " body bytes)");
  if (static_cast<int>(line.size()) > 1 + nbytes)
    throw Graph6Error(Graph6ErrorKind::kTrailingGarbage,
                      "graph6: trailing bytes after the bit field");

  Graph g(n);
  int idx = 0;
  for (int b = 0; b < nbytes; ++b) {
    unsigned byte = static_cast<unsigned char>(line[1 + b]);
    if (byte < 63 || byte > 126)
      throw Graph6Error(Graph6ErrorKind::kBadByte,
                        "graph6: body byte outside the graph6 alphabet");
    unsigned bits = byte - 63;
    for (int k = 5; k >= 0; --k, ++idx) {
      unsigned bit = (bits >> k) & 1u;
      if (idx < m) {
        if (bit) {
          auto [i, j] = pair_from_index(idx);
          g.set_edge(i, j, true);
        }
      } else if (bit) {
        throw Graph6Error(Graph6ErrorKind::kNonzeroPadding,
                          "graph6: nonzero padding bits");
      }
    }
  }
  return g;
}

std::string to_graph6(const Graph& g) {
  int n = g.n();
  int m = n * (n - 1) / 2;
  std::string out;
  out.reserve(1 + (m + 5) / 6);
  out.push_back(static_cast<char>(63 + n));
  unsigned acc = 0;
  int nbits = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.edge(i, j) ? 1u : 0u);
      if (++nbits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - nbits))));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical labeling
// ---------------------------------------------------------------------------

namespace {

// Ordered partition of {0..n-1}: `order` lists the vertices, cell c spans
// order[cstart[c] .. cstart[c+1]). Plain arrays so node copies are cheap.
struct Part {
  int n = 0;
  int ncells = 0;
  std::array<int8_t, 32> order{};
  std::array<int8_t, 33> cstart{};
};

using Words = std::array<uint64_t, 8>;  // up to C(32,2) = 496 bits, MSB-first

struct CanonCtx {
  const Graph* g = nullptr;
  int n = 0;
  int m = 0;  // C(n,2)
  bool have_best = false;
  Words best{};
  std::array<int8_t, 32> best_pos{};
  std::vector<std::array<int8_t, 32>> gens;  // automorphism generators
  std::array<int8_t, 32> indiv{};            // individualized vertices (root..)
  int indiv_n = 0;
};

// Equitable refinement: repeatedly split every cell by neighbor counts into
// each pending splitter set, subcells ordered by ascending count. All
// decisions depend only on isomorphism-invariant data, so isomorphic graphs
// subjected to corresponding partitions refine identically.
void refine(const Graph& g, Part& p, uint32_t* work, int head, int tail) {
  while (head < tail && p.ncells < p.n) {
    uint32_t splitter = work[head++];
    for (int c = 0; c < p.ncells;) {
      int st = p.cstart[c], en = p.cstart[c + 1], len = en - st;
      if (len == 1) {
        ++c;
        continue;
      }
      int keys[32];
      int cnt[33] = {0};
      bool differ = false;
      for (int t = 0; t < len; ++t) {
        int k = std::popcount(g.row(p.order[st + t]) & splitter);
        keys[t] = k;
        ++cnt[k];
        if (k != keys[0]) differ = true;
      }
      if (!differ) {
        ++c;
        continue;
      }
      // Stable counting sort of the segment, ascending by key.
      int pos[33];
      int acc = st;
      int parts = 0;
      int bounds[33];
      for (int k = 0; k <= p.n; ++k) {
        if (cnt[k]) {
          pos[k] = acc;
          bounds[parts++] = acc;
          acc += cnt[k];
        }
      }
      int8_t seg[32];
      std::memcpy(seg, &p.order[st], len);
      for (int t = 0; t < len; ++t) p.order[pos[keys[t]]++] = seg[t];
      // Insert the new cell boundaries after cstart[c].
      std::memmove(&p.cstart[c + parts], &p.cstart[c + 1],
                   static_cast<size_t>(p.ncells - c) * sizeof(int8_t));
      for (int t = 1; t < parts; ++t) p.cstart[c + t] = static_cast<int8_t>(bounds[t]);
      p.ncells += parts - 1;
      // Each subcell becomes a pending splitter (a stale splitter is always a
      // union of current cells, so later splits against it remain valid).
      for (int t = 0; t < parts; ++t) {
        int b = bounds[t];
        int e = (t + 1 < parts) ? bounds[t + 1] : en;
        uint32_t mask = 0;
        for (int x = b; x < e; ++x) mask |= 1u << p.order[x];
        work[tail++] = mask;
      }
      c += parts;
    }
  }
}

// Packs the C(p,2) bits among the first p positions (column-major pair
// order), MSB-first. Returns the bit count.
int partial_bits(const Graph& g, const Part& p, int prefix, Words& w) {
  w.fill(0);
  int idx = 0;
  for (int j = 1; j < prefix; ++j) {
    uint32_t rowj = g.row(p.order[j]);
    for (int i = 0; i < j; ++i, ++idx) {
      if ((rowj >> p.order[i]) & 1u) w[idx >> 6] |= 1ull << (63 - (idx & 63));
    }
  }
  return idx;
}

// Lexicographic comparison of the first `nbits` bits of a vs b.
int compare_bits(const Words& a, const Words& b, int nbits) {
  int full = nbits >> 6;
  for (int i = 0; i < full; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  int rem = nbits & 63;
  if (rem) {
    uint64_t mask = ~0ull << (64 - rem);
    uint64_t x = a[full] & mask, y = b[full] & mask;
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

// Is v in the orbit of an already-explored sibling under the automorphisms
// found so far that fix every individualized vertex pointwise?
bool in_explored_orbit(const CanonCtx& ctx, int v, const int8_t* explored,
                       int nexplored) {
  if (ctx.gens.empty() || nexplored == 0) return false;
  int8_t uf[32];
  for (int i = 0; i < ctx.n; ++i) uf[i] = static_cast<int8_t>(i);
  auto find = [&uf](int x) {
    while (uf[x] != x) {
      uf[x] = uf[uf[x]];
      x = uf[x];
    }
    return x;
  };
  bool merged_any = false;
  for (const auto& gen : ctx.gens) {
    bool applies = true;
    for (int k = 0; k < ctx.indiv_n; ++k) {
      if (gen[ctx.indiv[k]] != ctx.indiv[k]) {
        applies = false;
        break;
      }
    }
    if (!applies) continue;
    for (int u = 0; u < ctx.n; ++u) {
      int a = find(u), b = find(gen[u]);
      if (a != b) {
        uf[a] = static_cast<int8_t>(b);
        merged_any = true;
      }
    }
  }
  if (!merged_any) return false;
  int rv = find(v);
  for (int t = 0; t < nexplored; ++t) {
    if (find(explored[t]) == rv) return true;
  }
  return false;
}

void handle_leaf(CanonCtx& ctx, const Part& p) {
  Words w;
  partial_bits(*ctx.g, p, ctx.n, w);
  auto record_best = [&] {
    ctx.best = w;
    for (int i = 0; i < ctx.n; ++i) ctx.best_pos[p.order[i]] = static_cast<int8_t>(i);
    ctx.have_best = true;
  };
  if (!ctx.have_best) {
    record_best();
    return;
  }
  int cmp = compare_bits(w, ctx.best, ctx.m);
  if (cmp > 0) {
    record_best();
  } else if (cmp == 0) {
    // Two labelings producing the same string yield an automorphism.
    std::array<int8_t, 32> gen{};
    bool identity = true;
    for (int u = 0; u < ctx.n; ++u) {
      gen[u] = p.order[ctx.best_pos[u]];
      if (gen[u] != u) identity = false;
    }
    if (!identity && ctx.gens.size() < 64) ctx.gens.push_back(gen);
  }
}

void descend(CanonCtx& ctx, Part p, uint32_t* work, int head, int tail) {
  refine(*ctx.g, p, work, head, tail);

  int prefix = 0;
  while (prefix < ctx.n && p.cstart[prefix + 1] - p.cstart[prefix] == 1) ++prefix;
  if (ctx.have_best && prefix > 1) {
    Words w;
    int nbits = partial_bits(*ctx.g, p, prefix, w);
    if (compare_bits(w, ctx.best, nbits) < 0) return;  // whole subtree is worse
  }
  if (p.ncells == ctx.n) {
    handle_leaf(ctx, p);
    return;
  }

  // Branch on the first non-singleton cell.
  int cell = prefix;
  int st = p.cstart[cell], en = p.cstart[cell + 1], len = en - st;
  int8_t cand[32];
  std::memcpy(cand, &p.order[st], len);
  int8_t explored[32];
  int nexplored = 0;
  for (int t = 0; t < len; ++t) {
    int v = cand[t];
    if (in_explored_orbit(ctx, v, explored, nexplored)) continue;
    Part child = p;
    // Cell becomes [{v}, rest], preserving the order of the rest.
    int at = st;
    while (child.order[at] != v) ++at;
    std::memmove(&child.order[st + 1], &child.order[st],
                 static_cast<size_t>(at - st) * sizeof(int8_t));
    child.order[st] = static_cast<int8_t>(v);
    std::memmove(&child.cstart[cell + 2], &child.cstart[cell + 1],
                 static_cast<size_t>(child.ncells - cell) * sizeof(int8_t));
    child.cstart[cell + 1] = static_cast<int8_t>(st + 1);
    child.ncells += 1;

    uint32_t child_work[96];
    uint32_t rest = 0;
    for (int x = st + 1; x <= en - 1; ++x) rest |= 1u << child.order[x];
    child_work[0] = 1u << v;
    child_work[1] = rest;
    ctx.indiv[ctx.indiv_n++] = static_cast<int8_t>(v);
    descend(ctx, child, child_work, 0, 2);
    --ctx.indiv_n;
    explored[nexplored++] = static_cast<int8_t>(v);
  }
}

CanonCtx run_canon(const Graph& g) {
  if (g.n() < 1) throw DomainError("canonical labeling: empty graph");
  CanonCtx ctx;
  ctx.g = &g;
  ctx.n = g.n();
  ctx.m = ctx.n * (ctx.n - 1) / 2;
  Part root;
  root.n = ctx.n;
  root.ncells = 1;
  for (int i = 0; i < ctx.n; ++i) root.order[i] = static_cast<int8_t>(i);
  root.cstart[0] = 0;
  root.cstart[1] = static_cast<int8_t>(ctx.n);
  uint32_t work[96];
  work[0] = (ctx.n == 32) ? ~0u : ((1u << ctx.n) - 1);
  descend(ctx, root, work, 0, 1);
  return ctx;
}

}  // namespace

std::vector<int> canonical_labeling(const Graph& g) {
  CanonCtx ctx = run_canon(g);
  std::vector<int> pos(g.n());
  for (int v = 0; v < g.n(); ++v) pos[v] = ctx.best_pos[v];
  return pos;
}

Graph canonical_form(const Graph& g) { return g.relabel(canonical_labeling(g)); }

Certificate certificate(const Graph& g) {
  CanonCtx ctx = run_canon(g);
  std::string bytes;
  int nbytes = (ctx.m + 7) / 8;
  bytes.reserve(1 + nbytes);
  bytes.push_back(static_cast<char>(g.n()));
  for (int b = 0; b < nbytes; ++b) {
    bytes.push_back(static_cast<char>((ctx.best[b >> 3] >> (56 - 8 * (b & 7))) & 0xFF));
  }
  return Certificate{std::move(bytes)};
}

uint64_t certificate_bits64(const Graph& g) {
  if (g.n() > 11) throw DomainError("certificate_bits64: needs n <= 11");
  CanonCtx ctx = run_canon(g);
  if (ctx.m == 0) return 0;
  return ctx.best[0] >> (64 - ctx.m);
}

Graph graph_from_bits64(int n, uint64_t bits) {
  if (n < 1 || n > 11) throw DomainError("graph_from_bits64: needs 1 <= n <= 11");
  Graph g(n);
  int m = n * (n - 1) / 2;
  int idx = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++idx) {
      if ((bits >> (m - 1 - idx)) & 1ull) g.set_edge(i, j, true);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

// Open-addressing set of u64 certificates (all certificates are < 2^55, so
// ~0 is a safe empty sentinel).
class CertSet {
 public:
  explicit CertSet(size_t expected) {
    size_t cap = 64;
    while (cap * 5 < expected * 8) cap <<= 1;  // load factor <= 0.625
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
    limit_ = cap * 5 / 8;
  }

  bool insert(uint64_t x) {
    if (count_ >= limit_) grow();
    size_t i = mix(x) & mask_;
    while (slots_[i] != kEmpty) {
      if (slots_[i] == x) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = x;
    ++count_;
    return true;
  }

 private:
  static constexpr uint64_t kEmpty = ~0ull;

  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  void grow() {
    std::vector<uint64_t> old = std::move(slots_);
    slots_.assign(old.size() * 2, kEmpty);
    mask_ = slots_.size() - 1;
    limit_ = slots_.size() * 5 / 8;
    for (uint64_t x : old) {
      if (x == kEmpty) continue;
      size_t i = mix(x) & mask_;
      while (slots_[i] != kEmpty) i = (i + 1) & mask_;
      slots_[i] = x;
    }
  }

  std::vector<uint64_t> slots_;
  size_t mask_ = 0;
  size_t count_ = 0;
  size_t limit_ = 0;
};

// Known isomorphism class counts for n = 1..10, used only as capacity hints.
constexpr uint64_t kClassCountHint[11] = {0, 1,  2,   4,    11,   34,
                                          156, 1044, 12346, 274668, 12005168};

uint64_t bits64_of_labeling(const Graph& g, const std::array<int8_t, 32>& at_pos,
                            int n) {
  uint64_t bits = 0;
  for (int j = 1; j < n; ++j) {
    uint32_t rowj = g.row(at_pos[j]);
    for (int i = 0; i < j; ++i) {
      bits = (bits << 1) | ((rowj >> at_pos[i]) & 1u);
    }
  }
  return bits;
}

}  // namespace

void enumerate_graphs(int n, const std::function<void(const Graph&)>& sink) {
  if (n < 1 || n > 10)
    throw DomainError("enumerate_graphs: n must be in [1, 10]");
  Graph seed(1);
  if (n == 1) {
    sink(seed);
    return;
  }
  std::vector<Graph> level{seed};
  for (int k = 1; k < n; ++k) {
    bool last = (k + 1 == n);
    CertSet seen(kClassCountHint[k + 1]);
    std::vector<Graph> next;
    if (!last) next.reserve(kClassCountHint[k + 1]);
    for (const Graph& parent : level) {
      uint32_t top = 1u << k;
      for (uint32_t mask = 0; mask < top; ++mask) {
        Graph child = parent.extended(mask);
        std::vector<int> pos = canonical_labeling(child);
        std::array<int8_t, 32> at_pos{};
        for (int v = 0; v <= k; ++v) at_pos[pos[v]] = static_cast<int8_t>(v);
        uint64_t cert = bits64_of_labeling(child, at_pos, k + 1);
        if (seen.insert(cert)) {
          Graph canon = child.relabel(pos);
          if (last) {
            sink(canon);
          } else {
            next.push_back(canon);
          }
        }
      }
    }
    level = std::move(next);
  }
}

std::vector<Graph> enumerate_graphs(int n) {
  std::vector<Graph> out;
  enumerate_graphs(n, [&out](const Graph& g) { out.push_back(g); });
  return out;
}

}  // namespace cospec
