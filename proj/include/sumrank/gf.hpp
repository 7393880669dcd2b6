#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sumrank/error.hpp"

namespace sumrank {

/// Canonical element index in [0, q). Digit i of the base-p expansion is the
/// coefficient of alpha^i in the polynomial basis.
using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

/// Finite field F_{p^e} with log/antilog tables. Immutable after construction;
/// obtain instances through field_make so equal parameters share one object.
class Field {
 public:
  struct Key {};
  Field(Key, int p, std::vector<int> modulus);

  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return e_; }
  Elem size() const noexcept { return q_; }
  /// Monic modulus, low-degree coefficient first (length degree()+1).
  const std::vector<int>& modulus() const noexcept { return modulus_; }
  bool modulus_is_primitive() const noexcept { return modulus_primitive_; }
  /// Generator of the multiplicative group used for the log tables.
  Elem primitive() const noexcept { return generator_; }
  /// The polynomial variable alpha (the prime field's 1 when degree() == 1).
  Elem alpha() const noexcept { return e_ == 1 ? 1 : static_cast<Elem>(p_); }
  std::string name() const;

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[std::size_t{a} * q_ + b];
    return add_slow(a, b);
  }
  Elem neg(Elem a) const noexcept;
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[static_cast<std::size_t>(log_[a]) + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const noexcept;
  /// Discrete log to base primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const noexcept { return log_[a]; }
  Elem exp(std::uint64_t k) const noexcept { return exp_[k % (q_ - 1)]; }
  /// Multiplicative order of a nonzero element.
  std::uint64_t order(Elem a) const;
  /// Multiplication by a prime-field scalar.
  Elem scale(Elem a, int c) const noexcept;

  std::vector<int> coords(Elem a) const;
  Elem from_coords(std::span<const int> coords) const;

 private:
  Elem add_slow(Elem a, Elem b) const noexcept;

  int p_;
  int e_;
  Elem q_;
  std::vector<int> modulus_;
  bool modulus_primitive_ = false;
  Elem generator_ = 1;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> add_table_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Canonical field for (p, e): modulus is the lexicographically smallest
/// primitive polynomial (coefficients compared low-degree first); e == 1 uses x.
FieldPtr field_make(int p, int e, std::uint64_t cap = kDefaultFieldCap);
/// Field with an explicit monic modulus; irreducibility is verified.
FieldPtr field_make_with_modulus(int p, std::vector<int> modulus,
                                 std::uint64_t cap = kDefaultFieldCap);
/// Parses "p^e" (or a bare prime "p").
FieldPtr parse_field(std::string_view name);
/// Canonical field with q elements; q must be a prime power.
FieldPtr field_of_size(std::uint64_t q);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
bool poly_is_irreducible(int p, const std::vector<int>& monic);
bool poly_is_primitive(int p, const std::vector<int>& monic);

class Felt {
 public:
  Felt() = default;
  Felt(FieldPtr field, Elem value);

  const FieldPtr& field() const noexcept { return field_; }
  Elem index() const noexcept { return value_; }
  std::vector<int> coords() const { return field_->coords(value_); }
  bool is_zero() const noexcept { return value_ == 0; }
  Felt inverse() const { return {field_, field_->inv(value_)}; }
  Felt pow(std::uint64_t k) const { return {field_, field_->pow(value_, k)}; }

  friend Felt operator+(const Felt& a, const Felt& b);
  friend Felt operator-(const Felt& a, const Felt& b);
  friend Felt operator*(const Felt& a, const Felt& b);
  friend Felt operator/(const Felt& a, const Felt& b);
  friend Felt operator-(const Felt& a) { return {a.field_, a.field_->neg(a.value_)}; }
  friend bool operator==(const Felt& a, const Felt& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  FieldPtr field_;
  Elem value_ = 0;
};

/// True if q = p^f with f dividing the degree of the field.
bool is_subfield_size(const Field& field, std::uint64_t q);
/// x^{q^i}; q must be a subfield size.
Elem frobenius(const Field& field, Elem x, std::uint64_t i, std::uint64_t q);
Felt frobenius(const Felt& x, std::uint64_t i, std::uint64_t q);

/// Registered field homomorphism F_{p^a} -> F_{p^b} (a | b): the generator of
/// the subfield maps to the smallest-index root of its modulus.
class SubfieldInclusion {
 public:
  SubfieldInclusion(FieldPtr sub, FieldPtr sup);

  const FieldPtr& sub() const noexcept { return sub_; }
  const FieldPtr& sup() const noexcept { return sup_; }
  Elem operator()(Elem x) const noexcept { return table_[x]; }
  std::optional<Elem> preimage(Elem y) const;

 private:
  FieldPtr sub_;
  FieldPtr sup_;
  std::vector<Elem> table_;
  std::unordered_map<Elem, Elem> inverse_;
};

/// Cached canonical inclusion; throws NotASubfield when degrees do not divide.
std::shared_ptr<const SubfieldInclusion> inclusion(const FieldPtr& sub, const FieldPtr& sup);

/// F_{q^n} viewed as an n-dimensional F_q-space with basis 1, alpha, ..., alpha^{n-1}.
class RelativeBasis {
 public:
  RelativeBasis(FieldPtr big, FieldPtr base);

  const FieldPtr& big() const noexcept { return big_; }
  const FieldPtr& base() const noexcept { return base_; }
  int dimension() const noexcept { return n_; }
  Elem basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  Elem lift(Elem base_elem) const { return (*incl_)(base_elem); }
  /// Coordinates over F_q (F_q canonical indices).
  std::vector<Elem> coords(Elem x) const;
  void coords_into(Elem x, std::span<Elem> out) const;
  Elem combine(std::span<const Elem> coords) const;

 private:
  FieldPtr big_;
  FieldPtr base_;
  int n_;
  int f_;
  std::shared_ptr<const SubfieldInclusion> incl_;
  std::vector<Elem> basis_;
  std::vector<int> inverse_;  // (f*n)x(f*n) over F_p, row-major
  std::vector<Elem> table_;   // n coords per element when the field is small
};

std::shared_ptr<const RelativeBasis> relative_basis(const FieldPtr& big, const FieldPtr& base);

/// Dense matrix over a finite field.
struct Matrix {
  FieldPtr field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> entries;

  Matrix() = default;
  Matrix(FieldPtr f, std::size_t r, std::size_t c)
      : field(std::move(f)), rows(r), cols(c), entries(r * c, 0) {}

  Elem& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries;
  }
};

Matrix identity_matrix(FieldPtr field, std::size_t n);
std::size_t rank(const Matrix& m);
/// Reduced row echelon form with zero rows dropped.
Matrix rref(Matrix m, std::vector<std::size_t>* pivots = nullptr);
/// Rows form a basis of { x : m x = 0 }.
Matrix nullspace(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<Elem> matvec(const Matrix& m, std::span<const Elem> x);

enum class EmbeddingKind { Identity, Inclusion, Prefix, Explicit };

/// F_q-linear injective map phi: F_{q^n} -> F_{q^m}.
class TowerMap {
 public:
  TowerMap(FieldPtr base, FieldPtr sub, FieldPtr sup, EmbeddingKind kind, std::vector<Elem> images);

  const FieldPtr& base() const noexcept { return base_; }
  const FieldPtr& sub() const noexcept { return sub_; }
  const FieldPtr& sup() const noexcept { return sup_; }
  EmbeddingKind kind() const noexcept { return kind_; }
  /// n x m over F_q; row i holds the coordinates of phi(alpha^i).
  const Matrix& matrix() const noexcept { return matrix_; }
  Elem image_of_basis(int i) const { return images_[static_cast<std::size_t>(i)]; }
  Elem operator()(Elem x) const;

 private:
  FieldPtr base_;
  FieldPtr sub_;
  FieldPtr sup_;
  EmbeddingKind kind_;
  std::vector<Elem> images_;
  Matrix matrix_;
  std::vector<Elem> table_;
};

TowerMap embedding_make(const FieldPtr& sub, const FieldPtr& sup, const FieldPtr& base);
/// Map given by an explicit n x m matrix over F_q (rows = images of the basis).
TowerMap embedding_from_matrix(const FieldPtr& sub, const FieldPtr& sup, const Matrix& rows);
Felt embed(const TowerMap& map, const Felt& x);

}  // namespace sumrank
