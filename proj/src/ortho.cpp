#include "cospec/ortho.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cospec {

namespace {

bool is_fractional(const Rat& q) { return q.get_den() != 1; }

void require_orthogonal(const RatMatrix& q) {
  if (!rat_is_identity(rat_mul(rat_transpose(q), q)))
    throw DomainError("matrix is not orthogonal");
}

bool sorted_intersects(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

}  // namespace

OrthoProfile fractional_profile(const RatMatrix& q) {
  require_orthogonal(q);
  int n = q.n;
  std::vector<bool> frow(n, false), fcol(n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (is_fractional(q.at(i, j))) {
        frow[i] = true;
        fcol[j] = true;
      }
    }
  }
  OrthoProfile p;
  for (int i = 0; i < n; ++i) (frow[i] ? p.fri : p.iri).push_back(i);
  for (int j = 0; j < n; ++j) (fcol[j] ? p.fci : p.ici).push_back(j);
  if (p.fri.size() != p.fci.size())
    throw std::logic_error("orthogonal matrix with |FRI| != |FCI|");
  p.s = static_cast<int>(p.fri.size());
  return p;
}

CanonicalForm canonicalize(const RatMatrix& q) {
  OrthoProfile prof = fractional_profile(q);  // also verifies orthogonality
  int n = q.n;
  int s = prof.s;
  std::vector<int> row_pos(n, -1), col_pos(n, -1), col_sign(n, 1);
  for (int k = 0; k < s; ++k) row_pos[prof.fri[k]] = k;
  for (size_t k = 0; k < prof.iri.size(); ++k)
    row_pos[prof.iri[k]] = s + static_cast<int>(k);
  for (int k = 0; k < s; ++k) col_pos[prof.fci[k]] = k;
  // An integral column of an orthogonal matrix is +-e_r with r an integral
  // row; it must land at row r's new position (sign-normalized to +1) for
  // the trailing block to become the identity.
  for (int c : prof.ici) {
    int r = -1, sg = 0;
    for (int i = 0; i < n; ++i) {
      if (q.at(i, c) != 0) {
        r = i;
        sg = (q.at(i, c) > 0) ? 1 : -1;
        break;
      }
    }
    if (r < 0 || row_pos[r] < s)
      throw std::logic_error("integral column without a matching integral row");
    col_pos[c] = row_pos[r];
    col_sign[c] = sg;
  }
  CanonicalForm cf;
  cf.n = n;
  cf.s = s;
  cf.p_r = RatMatrix(n);
  cf.p_c = RatMatrix(n);
  for (int r = 0; r < n; ++r) cf.p_r.at(r, row_pos[r]) = 1;
  for (int c = 0; c < n; ++c) cf.p_c.at(c, col_pos[c]) = col_sign[c];
  cf.q_s = RatMatrix(s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) cf.q_s.at(i, j) = q.at(prof.fri[i], prof.fci[j]);
  }
  cf.h = level_and_height(q).second;
  return cf;
}

SupportMaps supports_and_overlaps(const CanonicalForm& cf) {
  if (cf.s < 1) throw DomainError("supports_and_overlaps: needs s >= 1");
  int n = cf.n, s = cf.s;
  SupportMaps m;
  m.k.resize(n);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      if (cf.q_s.at(i, j) != 0) m.k[j].push_back(i);
    }
  }
  for (int j = s; j < n; ++j) m.k[j] = {j};
  const Int h2 = cf.h * cf.h;
  const Int h4 = h2 * h2;
  for (int j = 0; j < n; ++j) {
    if (Int(static_cast<long>(m.k[j].size())) > h2)
      throw std::logic_error("support bound violated: |K(j)| > h^2");
  }
  m.overlap.resize(s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (sorted_intersects(m.k[i], m.k[j])) m.overlap[i].push_back(j);
    }
    if (Int(static_cast<long>(m.overlap[i].size())) > h4)
      throw std::logic_error("overlap bound violated: |N(i)| > h^4");
  }
  return m;
}

SelectionResult greedy_select(const CanonicalForm& cf, int n) {
  if (n < cf.s) throw DomainError("greedy_select: total order smaller than s");
  SupportMaps maps = supports_and_overlaps(cf);
  int s = cf.s;
  std::vector<bool> alive(s, true);
  int remaining = s;
  int cursor = 0;
  bool into_i = true;
  SelectionResult res;
  while (remaining > 0) {
    while (!alive[cursor]) ++cursor;
    int pick = cursor;
    (into_i ? res.i_set : res.j_set).push_back(pick);
    for (int j : maps.overlap[pick]) {
      if (alive[j]) {
        alive[j] = false;
        --remaining;
      }
    }
    if (alive[pick]) {  // N(pick) always contains pick; belt and braces
      alive[pick] = false;
      --remaining;
    }
    into_i = !into_i;
  }
  for (int j = s; j < n; ++j) res.j_set.push_back(j);
  res.supports.resize(n);
  for (int j = 0; j < s; ++j) res.supports[j] = maps.k[j];
  for (int j = s; j < n; ++j) res.supports[j] = {j};

  // The two cardinality guarantees are theorems; check them on every call.
  Int h4 = cf.h * cf.h * cf.h * cf.h;
  Int rounds;  // ceil(s / h^4)
  mpz_cdiv_q(rounds.get_mpz_t(), Int(s).get_mpz_t(), h4.get_mpz_t());
  Int i_min = (rounds + 1) / 2;  // ceil(rounds / 2)
  Int j_min = rounds / 2 + (n - s);
  if (Int(static_cast<long>(res.i_set.size())) < i_min ||
      Int(static_cast<long>(res.j_set.size())) < j_min)
    throw std::logic_error("greedy_select: cardinality lower bound violated");
  return res;
}

std::vector<RatMatrix> enumerate_canonical_blocks(int s, int h) {
  if (s < 1 || s > 4 || h < 1 || h > 6)
    throw DomainError("enumerate_canonical_blocks: requires 1 <= s <= 4 and 1 <= h <= 6");
  // A column with a +-1 entry has zero for every other entry (unit norm) and
  // is therefore integral, so fractional columns draw their entries from
  // zero and reduced +-p/q with 2 <= q <= h.
  std::vector<Rat> entries{Rat(0)};
  for (int den = 2; den <= h; ++den) {
    for (int num = 1; num < den; ++num) {
      if (std::gcd(num, den) != 1) continue;
      entries.emplace_back(num, den);
      entries.emplace_back(-num, den);
    }
  }
  std::sort(entries.begin(), entries.end());

  std::vector<std::vector<Rat>> cols;
  std::vector<Rat> cur(s);
  auto gen = [&](auto&& self, int pos, const Rat& acc) -> void {
    if (pos == s) {
      if (acc == 1) cols.push_back(cur);  // all-zero fails acc == 1, so every
      return;                             // kept column has a fractional entry
    }
    for (const Rat& e : entries) {
      Rat next = acc + e * e;
      if (next > 1) continue;
      cur[pos] = e;
      self(self, pos + 1, next);
    }
  };
  gen(gen, 0, Rat(0));

  int m = static_cast<int>(cols.size());
  std::vector<std::vector<char>> ortho(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      Rat dot(0);
      for (int i = 0; i < s; ++i) dot += cols[a][i] * cols[b][i];
      ortho[a][b] = ortho[b][a] = (dot == 0);
    }
  }

  // Distinct column tuples produce distinct matrices, so the lexicographic
  // tuple walk is automatically duplicate-free and deterministically ordered.
  std::vector<RatMatrix> out;
  std::vector<int> chosen;
  auto build = [&](auto&& self) -> void {
    if (static_cast<int>(chosen.size()) == s) {
      RatMatrix q(s);
      for (int j = 0; j < s; ++j) {
        for (int i = 0; i < s; ++i) q.at(i, j) = cols[chosen[j]][i];
      }
      out.push_back(std::move(q));
      return;
    }
    for (int c = 0; c < m; ++c) {
      bool ok = true;
      for (int prev : chosen) {
        if (!ortho[prev][c]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(c);
      self(self);
      chosen.pop_back();
    }
  };
  build(build);
  return out;
}

Int counting_bound(int s, int h) {
  if (s < 1 || h < 1) throw DomainError("counting_bound: requires s, h >= 1");
  unsigned long base = 2ul * static_cast<unsigned long>(s) *
                       static_cast<unsigned long>(h) * static_cast<unsigned long>(h);
  unsigned long exp = static_cast<unsigned long>(s) * static_cast<unsigned long>(h) *
                      static_cast<unsigned long>(h);
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace cospec
