#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cospec/error.hpp"
#include "cospec/graph.hpp"

namespace cospec {

using Int = mpz_class;
using Rat = mpq_class;

class SingularMatrixError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Dense square matrix over arbitrary-precision integers. No floating point
// anywhere in this module.
struct IntMatrix {
  int n = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  explicit IntMatrix(int order) : n(order), a(static_cast<size_t>(order) * order) {}
  Int& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  static IntMatrix identity(int order);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

// Dense square matrix over rationals; mpq_class keeps every entry reduced
// with positive denominator (the type invariant).
struct RatMatrix {
  int n = 0;
  std::vector<Rat> a;  // row-major

  RatMatrix() = default;
  explicit RatMatrix(int order) : n(order), a(static_cast<size_t>(order) * order) {}
  Rat& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  static RatMatrix identity(int order);
  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;
};

// Polynomial with big-integer coefficients; c[k] is the coefficient of x^k.
// charpoly always returns a monic polynomial of degree n.
struct IntPoly {
  std::vector<Int> c;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  friend bool operator==(const IntPoly&, const IntPoly&) = default;
};

IntMatrix adjacency_matrix(const Graph& g);

// det(xI - m) via the Berkowitz division-free algorithm (exact, no fractions).
IntPoly charpoly(const IntMatrix& m);

// Exact determinant via Bareiss fraction-free elimination.
Int det(const IntMatrix& m);

// Column k equals A^k * e (e the all-ones vector).
IntMatrix walk_matrix(const Graph& g);

// true iff det(walk_matrix(g)) != 0. Uses a modular pre-test (nonzero mod p
// implies nonzero exactly); the exact determinant decides the rest.
bool is_controllable(const Graph& g);

// Exact inverse; throws SingularMatrixError when det = 0.
RatMatrix rat_inverse(const RatMatrix& m);

// (level, height): lcm respectively max of all reduced entry denominators.
std::pair<Int, Int> level_and_height(const RatMatrix& q);

// true iff q^T q = I and q^T a q = b, all exactly.
// Throws DomainError on dimension mismatch.
bool verify_transition(const RatMatrix& q, const IntMatrix& a, const IntMatrix& b);

// --- helpers shared by the higher modules ---

RatMatrix to_rat(const IntMatrix& m);
RatMatrix rat_mul(const RatMatrix& x, const RatMatrix& y);
RatMatrix rat_transpose(const RatMatrix& x);
bool rat_is_identity(const RatMatrix& x);
// Multiplies q by the all-ones vector; true iff the result is all-ones.
bool fixes_ones_vector(const RatMatrix& q);

// Solves a x = b exactly (a square integer, b integer with n rows); Bareiss
// forward elimination plus rational back-substitution.
// Throws SingularMatrixError when a is singular.
RatMatrix solve_int(const IntMatrix& a, const IntMatrix& b);

// Characteristic polynomial of the adjacency matrix in int64 arithmetic.
// Valid for n <= 10: all Berkowitz intermediates of a 0/1 symmetric matrix of
// that order stay below 2^62. Returns coefficients c[0..n] like IntPoly.
std::vector<int64_t> charpoly_adjacency_i64(const Graph& g);

// Parses "num/den", plain integers, and decimal strings ("0.3" -> 3/10),
// always into canonical reduced form. Throws DomainError on junk.
Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& q);  // canonical GMP form, e.g. "-2/3"

}  // namespace cospec
