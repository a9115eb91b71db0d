#include "cospec/exact.hpp"

#include <algorithm>
#include <cctype>

namespace cospec {

namespace {

// Berkowitz division-free characteristic polynomial. Returns det(xI - M) in
// descending-power order: out[0] = 1 (coefficient of x^n), ..., out[n].
// Works over any exact signed integer type.
template <typename T>
std::vector<T> berkowitz_impl(const T* m, int n) {
  std::vector<T> p{T(1)};
  std::vector<T> t, w, pnew;
  for (int r = 0; r < n; ++r) {
    // Toeplitz column for the r-th principal extension:
    // t[0] = 1, t[1] = -m[r][r], t[k] = -(row_r . M^{k-2} . col_r).
    t.assign(r + 2, T(0));
    t[0] = T(1);
    t[1] = -m[static_cast<size_t>(r) * n + r];
    if (r > 0) {
      w.resize(r);
      for (int i = 0; i < r; ++i) w[i] = m[static_cast<size_t>(i) * n + r];
      for (int k = 2; k <= r + 1; ++k) {
        T dot(0);
        for (int j = 0; j < r; ++j) dot += m[static_cast<size_t>(r) * n + j] * w[j];
        t[k] = -dot;
        if (k <= r) {
          std::vector<T> nw(r, T(0));
          for (int i = 0; i < r; ++i) {
            T acc(0);
            for (int j = 0; j < r; ++j) acc += m[static_cast<size_t>(i) * n + j] * w[j];
            nw[i] = acc;
          }
          w.swap(nw);
        }
      }
    }
    pnew.assign(r + 2, T(0));
    int plen = static_cast<int>(p.size());
    for (int i = 0; i <= r + 1; ++i) {
      T acc(0);
      int jlo = std::max(0, i - (r + 1));
      int jhi = std::min(i, plen - 1);
      for (int j = jlo; j <= jhi; ++j) acc += t[i - j] * p[j];
      pnew[i] = acc;
    }
    p.swap(pnew);
  }
  return p;
}

constexpr uint64_t kMersenne61 = (1ull << 61) - 1;

uint64_t mulmod61(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % kMersenne61);
}

}  // namespace

IntMatrix IntMatrix::identity(int order) {
  IntMatrix m(order);
  for (int i = 0; i < order; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::identity(int order) {
  RatMatrix m(order);
  for (int i = 0; i < order; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix adjacency_matrix(const Graph& g) {
  IntMatrix m(g.n());
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      if (g.edge(i, j)) m.at(i, j) = 1;
    }
  }
  return m;
}

IntPoly charpoly(const IntMatrix& m) {
  std::vector<Int> desc = berkowitz_impl<Int>(m.a.data(), m.n);
  IntPoly poly;
  poly.c.assign(desc.rbegin(), desc.rend());
  return poly;
}

std::vector<int64_t> charpoly_adjacency_i64(const Graph& g) {
  int n = g.n();
  if (n > 10)
    throw DomainError("charpoly_adjacency_i64: int64 bound argument covers n <= 10");
  int64_t m[100];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i * n + j] = g.edge(i, j) ? 1 : 0;
  }
  std::vector<int64_t> desc = berkowitz_impl<int64_t>(m, n);
  return std::vector<int64_t>(desc.rbegin(), desc.rend());
}

Int det(const IntMatrix& m) {
  int n = m.n;
  if (n == 0) return Int(1);
  IntMatrix w = m;
  Int prev(1);
  Int num;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i) {
      if (w.at(i, k) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return Int(0);
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(w.at(k, j), w.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
        mpz_divexact(w.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      w.at(i, k) = 0;
    }
    prev = w.at(k, k);
  }
  Int d = w.at(n - 1, n - 1);
  if (sign < 0) mpz_neg(d.get_mpz_t(), d.get_mpz_t());
  return d;
}

IntMatrix walk_matrix(const Graph& g) {
  int n = g.n();
  IntMatrix w(n);
  std::vector<Int> v(n, Int(1)), nv(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) w.at(i, k) = v[i];
    if (k + 1 < n) {
      for (int i = 0; i < n; ++i) {
        Int acc(0);
        uint32_t r = g.row(i);
        while (r) {
          int j = std::countr_zero(r);
          r &= r - 1;
          acc += v[j];
        }
        nv[i] = acc;
      }
      v.swap(nv);
    }
  }
  return w;
}

bool is_controllable(const Graph& g) {
  int n = g.n();
  // Walk matrix modulo the Mersenne prime 2^61 - 1; a nonzero modular
  // determinant proves det != 0 without big-integer work.
  uint64_t w[32][32];
  uint64_t v[32], nv[32];
  for (int i = 0; i < n; ++i) v[i] = 1;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) w[i][k] = v[i];
    if (k + 1 < n) {
      for (int i = 0; i < n; ++i) {
        unsigned __int128 acc = 0;
        uint32_t r = g.row(i);
        while (r) {
          int j = std::countr_zero(r);
          r &= r - 1;
          acc += v[j];
        }
        nv[i] = static_cast<uint64_t>(acc % kMersenne61);
      }
      for (int i = 0; i < n; ++i) v[i] = nv[i];
    }
  }
  bool full_rank = true;
  for (int k = 0; k < n && full_rank; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i) {
      if (w[i][k] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) {
      full_rank = false;
      break;
    }
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(w[k][j], w[piv][j]);
    }
    for (int i = k + 1; i < n; ++i) {
      if (w[i][k] == 0) continue;
      // Fraction-free row update preserves (non)vanishing of the determinant.
      uint64_t f = w[i][k];
      for (int j = k; j < n; ++j) {
        uint64_t x = mulmod61(w[i][j], w[k][k]);
        uint64_t y = mulmod61(f, w[k][j]);
        w[i][j] = (x >= y) ? x - y : x + kMersenne61 - y;
      }
    }
  }
  if (full_rank) return true;  // det != 0 mod p => det != 0
  return det(walk_matrix(g)) != 0;
}

RatMatrix solve_int(const IntMatrix& a, const IntMatrix& b) {
  if (a.n != b.n) throw DomainError("solve_int: dimension mismatch");
  int n = a.n;
  int width = 2 * n;
  std::vector<Int> aug(static_cast<size_t>(n) * width);
  auto at = [&aug, width](int i, int j) -> Int& {
    return aug[static_cast<size_t>(i) * width + j];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      at(i, j) = a.at(i, j);
      at(i, n + j) = b.at(i, j);
    }
  }
  Int prev(1), num;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i) {
      if (at(i, k) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) throw SingularMatrixError("solve_int: singular matrix");
    if (piv != k) {
      for (int j = k; j < width; ++j) std::swap(at(k, j), at(piv, j));
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < width; ++j) {
        num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  RatMatrix x(n);
  for (int c = 0; c < n; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      Rat s(at(i, n + c));
      for (int j = i + 1; j < n; ++j) s -= Rat(at(i, j)) * x.at(j, c);
      s /= Rat(at(i, i));
      s.canonicalize();
      x.at(i, c) = s;
    }
  }
  return x;
}

RatMatrix rat_inverse(const RatMatrix& m) {
  int n = m.n;
  Int lcm(1);
  for (const Rat& q : m.a) {
    const mpz_class den = q.get_den();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
  }
  IntMatrix a(n), b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rat scaled = m.at(i, j) * Rat(lcm);
      a.at(i, j) = scaled.get_num();  // den = 1 after scaling by the lcm
    }
    b.at(i, i) = lcm;
  }
  try {
    return solve_int(a, b);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("rat_inverse: singular matrix");
  }
}

std::pair<Int, Int> level_and_height(const RatMatrix& q) {
  Int level(1), height(1);
  for (const Rat& e : q.a) {
    const mpz_class den = e.get_den();
    mpz_lcm(level.get_mpz_t(), level.get_mpz_t(), den.get_mpz_t());
    if (den > height) height = den;
  }
  return {level, height};
}

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.n);
  for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

RatMatrix rat_mul(const RatMatrix& x, const RatMatrix& y) {
  if (x.n != y.n) throw DomainError("rat_mul: dimension mismatch");
  int n = x.n;
  RatMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rat acc(0);
      for (int k = 0; k < n; ++k) {
        if (x.at(i, k) != 0 && y.at(k, j) != 0) acc += x.at(i, k) * y.at(k, j);
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

RatMatrix rat_transpose(const RatMatrix& x) {
  RatMatrix out(x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.n; ++j) out.at(j, i) = x.at(i, j);
  }
  return out;
}

bool rat_is_identity(const RatMatrix& x) {
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.n; ++j) {
      if (x.at(i, j) != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool fixes_ones_vector(const RatMatrix& q) {
  for (int i = 0; i < q.n; ++i) {
    Rat s(0);
    for (int j = 0; j < q.n; ++j) s += q.at(i, j);
    if (s != 1) return false;
  }
  return true;
}

bool verify_transition(const RatMatrix& q, const IntMatrix& a, const IntMatrix& b) {
  if (q.n != a.n || q.n != b.n)
    throw DomainError("verify_transition: dimension mismatch");
  RatMatrix qt = rat_transpose(q);
  if (!rat_is_identity(rat_mul(qt, q))) return false;
  return rat_mul(qt, rat_mul(to_rat(a), q)) == to_rat(b);
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw DomainError("parse_rat: empty string");
  if (s.find('/') != std::string::npos) {
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
      throw DomainError("parse_rat: malformed fraction '" + s + "'");
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
      throw DomainError("parse_rat: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = (s[pos] == '-');
    ++pos;
  }
  std::string digits;
  size_t frac_len = 0;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.') {
      if (seen_dot) throw DomainError("parse_rat: malformed number '" + s + "'");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_len;
    } else {
      throw DomainError("parse_rat: malformed number '" + s + "'");
    }
  }
  if (digits.empty()) throw DomainError("parse_rat: malformed number '" + s + "'");
  Int num(digits, 10);
  if (negative) mpz_neg(num.get_mpz_t(), num.get_mpz_t());
  Int den(1);
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

}  // namespace cospec
