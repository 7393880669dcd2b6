#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sumrank/enumerate.hpp"
#include "sumrank/gf.hpp"

namespace sumrank {

/// q-cyclotomic coset of i modulo n, sorted.
std::vector<std::uint64_t> coset(std::uint64_t n, std::uint64_t q, std::uint64_t i);

struct CosetTable {
  std::uint64_t n = 0;
  std::uint64_t q = 0;
  std::vector<std::vector<std::uint64_t>> cosets;  // ordered by minimal representative
};

CosetTable coset_table(std::uint64_t n, std::uint64_t q);

/// Linear code over F_Q given by a full-rank parity check in reduced row echelon form.
struct LinearCode {
  FieldPtr field;
  std::size_t length = 0;
  Matrix parity_check;  // codim x length
  Matrix generator;     // dim x length

  std::size_t codimension() const { return parity_check.rows; }
  std::size_t dimension() const { return length - parity_check.rows; }
  std::vector<Elem> syndrome(std::span<const Elem> word) const;
  bool member(std::span<const Elem> word) const;
  /// Generator combination sum_i coeffs[i] * G_i.
  std::vector<Elem> encode(std::span<const Elem> coeffs) const;
};

LinearCode code_from_parity_check(const Matrix& h, std::size_t length);
LinearCode code_from_generator(const Matrix& g);
/// The whole space F_Q^t.
LinearCode trivial_code(const FieldPtr& field, std::size_t t);
/// [t, t-1, 2] code of words with zero coordinate sum.
LinearCode parity_code(const FieldPtr& field, std::size_t t);
LinearCode zero_code(const FieldPtr& field, std::size_t t);
/// Hamming code of codimension u: columns are the projective points of F_Q^u,
/// each scaled so its first nonzero coordinate is 1, listed in index order.
LinearCode hamming_code_make(const FieldPtr& field, int u);

struct CyclicCode {
  std::uint64_t n = 0;
  FieldPtr field;
  std::vector<std::uint64_t> defining_set;
  FieldPtr splitting;
  Elem beta = 0;
  Matrix splitting_check;  // |T| x n over the splitting field
  LinearCode code;         // same code with its parity check projected to F_Q

  std::size_t dimension() const { return n - defining_set.size(); }
  /// c(beta^i) = 0 for all i in T.
  bool member_by_roots(std::span<const Elem> word) const;
};

CyclicCode cyclic_make(std::uint64_t n, const FieldPtr& field, const std::vector<std::uint64_t>& representatives);
/// T must be a union of cosets; throws BadRepresentative otherwise.
CyclicCode cyclic_from_defining_set(std::uint64_t n, const FieldPtr& field, std::vector<std::uint64_t> defining_set);

int bch_designed_distance(const std::vector<std::uint64_t>& T, std::uint64_t n);
int ht_bound(const std::vector<std::uint64_t>& T, std::uint64_t n);
bool boston_check(const std::vector<std::uint64_t>& T);

/// Enumeration problem over the 1x1 alphabet of F_Q with the code's syndromes.
struct HammingProblem {
  std::vector<std::vector<std::uint64_t>> tables;
  EnumProblem problem;
};
std::unique_ptr<HammingProblem> hamming_problem(const LinearCode& code);

struct HammingDistanceCertificate {
  bool exact = false;  // witness found after emptiness below it
  int distance = 0;    // exact value, or w_max + 1 as lower bound
  int w_max = 0;
  std::vector<Elem> witness;
  BigInt examined;
};

HammingDistanceCertificate min_distance_hamming(const LinearCode& code, int w_max, std::uint64_t budget,
                                                unsigned workers = 1);
int covering_radius_hamming(const LinearCode& code, int cap, std::uint64_t budget, unsigned workers = 1);

}  // namespace sumrank
