#include "sumrank/gf.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

namespace sumrank {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::NotASubfield: return "NotASubfield";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::WrongField: return "WrongField";
    case Errc::RankOutOfRange: return "RankOutOfRange";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::BadRepresentative: return "BadRepresentative";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::CapReached: return "CapReached";
    case Errc::DegenerateCodec: return "DegenerateCodec";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadDivisor: return "BadDivisor";
    case Errc::UnsupportedAlphabet: return "UnsupportedAlphabet";
    case Errc::InputNotVerified: return "InputNotVerified";
    case Errc::NonIntegralLog: return "NonIntegralLog";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Integer and F_p[x] helpers.

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

using Poly = std::vector<int>;  // low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2, b = a % p; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

// a mod m over F_p (m monic or not; leading coefficient nonzero).
Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int c = a.back() * lead_inv % p;
    for (int i = 0; i <= dm; ++i) {
      int& x = a[static_cast<std::size_t>(shift + i)];
      x = ((x - c * m[static_cast<std::size_t>(i)]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t k, const Poly& m, int p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (k > 0) {
    if (k & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    k >>= 1;
  }
  return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::uint64_t checked_size(int p, int e, std::uint64_t cap) {
  std::uint64_t q = 1;
  for (int i = 0; i < e; ++i) {
    if (q > cap / static_cast<std::uint64_t>(p))
      throw Error(Errc::FieldTooLarge, std::to_string(p) + "^" + std::to_string(e));
    q *= static_cast<std::uint64_t>(p);
  }
  if (q > cap) throw Error(Errc::FieldTooLarge, std::to_string(p) + "^" + std::to_string(e));
  return q;
}

int smallest_primitive_root(int p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(static_cast<std::uint64_t>(p - 1));
  for (int g = 2; g < p; ++g) {
    bool ok = true;
    for (auto r : factors) {
      std::uint64_t x = 1;
      for (std::uint64_t k = 0; k < (static_cast<std::uint64_t>(p) - 1) / r; ++k)
        x = x * static_cast<std::uint64_t>(g) % static_cast<std::uint64_t>(p);
      if (x == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;
}

}  // namespace

bool poly_is_irreducible(int p, const std::vector<int>& monic) {
  Poly f = monic;
  trim(f);
  const int e = static_cast<int>(f.size()) - 1;
  if (e < 1) return false;
  if (e == 1) return true;
  // Trial division by every monic polynomial of degree 1..e/2.
  for (int d = 1; d <= e / 2; ++d) {
    const std::uint64_t count = ipow(static_cast<std::uint64_t>(p), d);
    for (std::uint64_t n = 0; n < count; ++n) {
      Poly g(static_cast<std::size_t>(d + 1), 0);
      std::uint64_t x = n;
      for (int i = 0; i < d; ++i, x /= static_cast<std::uint64_t>(p))
        g[static_cast<std::size_t>(i)] = static_cast<int>(x % static_cast<std::uint64_t>(p));
      g[static_cast<std::size_t>(d)] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

bool poly_is_primitive(int p, const std::vector<int>& monic) {
  Poly f = monic;
  trim(f);
  const int e = static_cast<int>(f.size()) - 1;
  if (e < 1 || f[0] == 0) return false;
  const std::uint64_t order = ipow(static_cast<std::uint64_t>(p), e) - 1;
  const Poly x{0, 1};
  if (poly_powmod(x, order, f, p) != Poly{1}) return false;
  for (auto r : prime_factors(order))
    if (poly_powmod(x, order / r, f, p) == Poly{1}) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(Key, int p, std::vector<int> modulus) : p_(p), modulus_(std::move(modulus)) {
  e_ = static_cast<int>(modulus_.size()) - 1;
  q_ = static_cast<Elem>(ipow(static_cast<std::uint64_t>(p), e_));
  if (p_ != 2 && q_ <= 256) {
    add_table_.resize(std::size_t{q_} * q_);
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b) add_table_[std::size_t{a} * q_ + b] = add_slow(a, b);
  }

  // Multiplication by an arbitrary element via polynomial arithmetic; only used
  // while building the tables.
  auto slow_mul = [this](Elem a, Elem b) {
    Poly pa = coords(a), pb = coords(b);
    trim(pa);
    trim(pb);
    Poly r = poly_mulmod(pa, pb, modulus_, p_);
    r.resize(static_cast<std::size_t>(e_), 0);
    return from_coords(r);
  };

  if (e_ == 1) {
    generator_ = static_cast<Elem>(smallest_primitive_root(p_));
  } else if (poly_is_primitive(p_, modulus_)) {
    modulus_primitive_ = true;
    generator_ = static_cast<Elem>(p_);
  } else {
    const auto factors = prime_factors(q_ - 1);
    for (Elem g = 2; g < q_; ++g) {
      Poly pg = coords(g);
      trim(pg);
      bool ok = poly_powmod(pg, q_ - 1, modulus_, p_) == Poly{1};
      for (auto r : factors) {
        if (!ok) break;
        if (poly_powmod(pg, (q_ - 1) / r, modulus_, p_) == Poly{1}) ok = false;
      }
      if (ok) {
        generator_ = g;
        break;
      }
    }
  }

  exp_.assign(2 * std::size_t{q_ - 1} + 1, 0);
  log_.assign(q_, 0);
  Elem x = 1;
  for (std::uint32_t k = 0; k < q_ - 1; ++k) {
    exp_[k] = x;
    log_[x] = k;
    if (e_ > 1 && generator_ == static_cast<Elem>(p_)) {
      // Multiply by alpha: shift digits, reduce the overflowing coefficient.
      const Elem top_unit = q_ / static_cast<Elem>(p_);
      const int top = static_cast<int>(x / top_unit);
      Elem shifted = (x % top_unit) * static_cast<Elem>(p_);
      if (top != 0) {
        std::vector<int> c = coords(shifted);
        for (int i = 0; i < e_; ++i)
          c[static_cast<std::size_t>(i)] =
              ((c[static_cast<std::size_t>(i)] - top * modulus_[static_cast<std::size_t>(i)]) % p_ + p_) % p_;
        shifted = from_coords(c);
      }
      x = shifted;
    } else {
      x = slow_mul(x, generator_);
    }
  }
  if (x != 1) throw Error(Errc::NotIrreducible, "generator does not have full order");
  for (std::uint32_t k = q_ - 1; k < exp_.size(); ++k) exp_[k] = exp_[k - (q_ - 1)];
}

std::string Field::name() const { return std::to_string(p_) + "^" + std::to_string(e_); }

Elem Field::add_slow(Elem a, Elem b) const noexcept {
  Elem r = 0, pw = 1;
  for (int i = 0; i < e_; ++i) {
    const Elem da = a % p_, db = b % p_;
    r += ((da + db) % p_) * pw;
    a /= p_;
    b /= p_;
    pw *= p_;
  }
  return r;
}

Elem Field::neg(Elem a) const noexcept {
  if (p_ == 2) return a;
  Elem r = 0, pw = 1;
  for (int i = 0; i < e_; ++i) {
    const Elem d = a % p_;
    r += ((p_ - d) % p_) * pw;
    a /= p_;
    pw *= p_;
  }
  return r;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::pow(Elem a, std::uint64_t k) const noexcept {
  if (k == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t l = (static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

std::uint64_t Field::order(Elem a) const {
  if (a == 0) throw std::domain_error("order of zero");
  const std::uint64_t n = q_ - 1;
  return n / std::gcd<std::uint64_t>(log_[a], n);
}

Elem Field::scale(Elem a, int c) const noexcept {
  c %= p_;
  if (c < 0) c += p_;
  return mul(a, static_cast<Elem>(c));
}

std::vector<int> Field::coords(Elem a) const {
  std::vector<int> c(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

Elem Field::from_coords(std::span<const int> coords) const {
  Elem r = 0, pw = 1;
  for (std::size_t i = 0; i < coords.size() && i < static_cast<std::size_t>(e_); ++i) {
    r += static_cast<Elem>(((coords[i] % p_) + p_) % p_) * pw;
    pw *= p_;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::pair<int, int>, FieldPtr> canonical;
  std::map<std::pair<int, std::vector<int>>, FieldPtr> by_modulus;
  std::map<std::pair<const Field*, const Field*>, std::shared_ptr<const SubfieldInclusion>> inclusions;
  std::map<std::pair<const Field*, const Field*>, std::shared_ptr<const RelativeBasis>> bases;
};

Registry& registry() {
  static Registry r;
  return r;
}

FieldPtr intern(int p, std::vector<int> modulus) {
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.by_modulus.find({p, modulus});
    if (it != reg.by_modulus.end()) return it->second;
  }
  auto f = std::make_shared<const Field>(Field::Key{}, p, modulus);
  std::lock_guard lock(reg.mu);
  auto [it, inserted] = reg.by_modulus.emplace(std::make_pair(p, std::move(modulus)), f);
  return it->second;
}

}  // namespace

FieldPtr field_make(int p, int e, std::uint64_t cap) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw Error(Errc::NonPrimeCharacteristic, std::to_string(p));
  if (e < 1) throw Error(Errc::DimensionMismatch, "field degree must be positive");
  checked_size(p, e, cap);
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.canonical.find({p, e});
    if (it != reg.canonical.end()) return it->second;
  }
  std::vector<int> modulus;
  if (e == 1) {
    modulus = {0, 1};
  } else {
    // Lexicographic order with c_0 most significant.
    const std::uint64_t count = ipow(static_cast<std::uint64_t>(p), e);
    for (std::uint64_t n = 0; n < count; ++n) {
      std::vector<int> c(static_cast<std::size_t>(e + 1), 0);
      std::uint64_t x = n;
      for (int k = e - 1; k >= 0; --k, x /= static_cast<std::uint64_t>(p))
        c[static_cast<std::size_t>(k)] = static_cast<int>(x % static_cast<std::uint64_t>(p));
      c[static_cast<std::size_t>(e)] = 1;
      if (poly_is_primitive(p, c)) {
        modulus = std::move(c);
        break;
      }
    }
  }
  auto f = intern(p, std::move(modulus));
  std::lock_guard lock(reg.mu);
  reg.canonical.emplace(std::make_pair(p, e), f);
  return f;
}

FieldPtr field_make_with_modulus(int p, std::vector<int> modulus, std::uint64_t cap) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw Error(Errc::NonPrimeCharacteristic, std::to_string(p));
  for (auto& c : modulus) c = ((c % p) + p) % p;
  trim(modulus);
  if (modulus.size() < 2 || modulus.back() != 1)
    throw Error(Errc::NotIrreducible, "modulus must be monic of positive degree");
  const int e = static_cast<int>(modulus.size()) - 1;
  checked_size(p, e, cap);
  if (!poly_is_irreducible(p, modulus)) throw Error(Errc::NotIrreducible, "modulus is reducible");
  if (e == 1) return field_make(p, 1, cap);
  return intern(p, std::move(modulus));
}

FieldPtr parse_field(std::string_view name) {
  const auto caret = name.find('^');
  int p = 0, e = 1;
  auto parse_int = [&](std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw Error(Errc::ConfigError, "bad field name '" + std::string(name) + "'");
  };
  if (caret == std::string_view::npos) {
    parse_int(name, p);
  } else {
    parse_int(name.substr(0, caret), p);
    parse_int(name.substr(caret + 1), e);
  }
  return field_make(p, e);
}

FieldPtr field_of_size(std::uint64_t q) {
  if (q < 2) throw Error(Errc::NonPrimeCharacteristic, std::to_string(q));
  const auto factors = prime_factors(q);
  if (factors.size() != 1) throw Error(Errc::NonPrimeCharacteristic, std::to_string(q) + " is not a prime power");
  int e = 0;
  for (std::uint64_t x = q; x > 1; x /= factors[0]) ++e;
  return field_make(static_cast<int>(factors[0]), e);
}

// ---------------------------------------------------------------------------
// Felt

Felt::Felt(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
  if (!field_ || value_ >= field_->size()) throw Error(Errc::WrongField, "element out of range");
}

namespace {
const Field& common(const Felt& a, const Felt& b) {
  if (a.field() != b.field()) throw Error(Errc::WrongField, "operands from different fields");
  return *a.field();
}
}  // namespace

Felt operator+(const Felt& a, const Felt& b) { return {a.field(), common(a, b).add(a.index(), b.index())}; }
Felt operator-(const Felt& a, const Felt& b) { return {a.field(), common(a, b).sub(a.index(), b.index())}; }
Felt operator*(const Felt& a, const Felt& b) { return {a.field(), common(a, b).mul(a.index(), b.index())}; }
Felt operator/(const Felt& a, const Felt& b) { return {a.field(), common(a, b).div(a.index(), b.index())}; }

// ---------------------------------------------------------------------------
// Frobenius

bool is_subfield_size(const Field& field, std::uint64_t q) {
  const auto p = static_cast<std::uint64_t>(field.characteristic());
  int f = 0;
  while (q > 1 && q % p == 0) {
    q /= p;
    ++f;
  }
  return q == 1 && f >= 1 && field.degree() % f == 0;
}

Elem frobenius(const Field& field, Elem x, std::uint64_t i, std::uint64_t q) {
  if (!is_subfield_size(field, q))
    throw Error(Errc::NotASubfield, std::to_string(q) + " is not a subfield size of " + field.name());
  const std::uint64_t n = field.size() - 1;
  if (x == 0 || n == 1) return x;
  std::uint64_t k = 1;
  for (std::uint64_t j = 0; j < i; ++j) k = k * (q % n) % n;
  return field.pow(x, k);
}

Felt frobenius(const Felt& x, std::uint64_t i, std::uint64_t q) {
  return {x.field(), frobenius(*x.field(), x.index(), i, q)};
}

// ---------------------------------------------------------------------------
// Subfields

namespace {

Elem eval_fp_poly(const Field& f, const std::vector<int>& poly, Elem x) {
  Elem r = 0;
  for (std::size_t i = poly.size(); i-- > 0;) r = f.add(f.mul(r, x), static_cast<Elem>(poly[i]));
  return r;
}

std::vector<Elem> roots_in(const std::vector<int>& poly, const Field& f) {
  std::vector<Elem> out;
  for (Elem x = 0; x < f.size(); ++x)
    if (eval_fp_poly(f, poly, x) == 0) out.push_back(x);
  return out;
}

// Ring map sum d_k alpha^k -> sum d_k gamma^k.
Elem map_by_root(const Field& sub, const Field& sup, Elem gamma, Elem x) {
  const auto d = sub.coords(x);
  Elem r = 0, g = 1;
  for (int k = 0; k < sub.degree(); ++k) {
    r = sup.add(r, sup.scale(g, d[static_cast<std::size_t>(k)]));
    g = sup.mul(g, gamma);
  }
  return r;
}

void require_divides(const Field& sub, const Field& sup) {
  if (sub.characteristic() != sup.characteristic() || sup.degree() % sub.degree() != 0)
    throw Error(Errc::NotASubfield, sub.name() + " is not a subfield of " + sup.name());
}

}  // namespace

SubfieldInclusion::SubfieldInclusion(FieldPtr sub, FieldPtr sup) : sub_(std::move(sub)), sup_(std::move(sup)) {
  require_divides(*sub_, *sup_);
  table_.resize(sub_->size());
  if (sub_ == sup_ || sub_->degree() == 1) {
    for (Elem x = 0; x < sub_->size(); ++x) table_[x] = x;
  } else {
    const auto roots = roots_in(sub_->modulus(), *sup_);
    if (roots.empty()) throw Error(Errc::NotASubfield, "modulus has no root");
    for (Elem x = 0; x < sub_->size(); ++x) table_[x] = map_by_root(*sub_, *sup_, roots.front(), x);
  }
  for (Elem x = 0; x < sub_->size(); ++x) inverse_.emplace(table_[x], x);
}

std::optional<Elem> SubfieldInclusion::preimage(Elem y) const {
  auto it = inverse_.find(y);
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const SubfieldInclusion> inclusion(const FieldPtr& sub, const FieldPtr& sup) {
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.inclusions.find({sub.get(), sup.get()});
    if (it != reg.inclusions.end()) return it->second;
  }
  auto inc = std::make_shared<const SubfieldInclusion>(sub, sup);
  std::lock_guard lock(reg.mu);
  return reg.inclusions.emplace(std::make_pair(sub.get(), sup.get()), inc).first->second;
}

// ---------------------------------------------------------------------------
// RelativeBasis

namespace {

// Inverse of a square matrix over F_p (row-major); throws if singular.
std::vector<int> invert_mod_p(std::vector<int> a, int n, int p) {
  std::vector<int> inv(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1;
  auto at = [n](std::vector<int>& m, int r, int c) -> int& { return m[static_cast<std::size_t>(r * n + c)]; };
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (at(a, r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(Errc::DegenerateCodec, "singular basis matrix");
    for (int c = 0; c < n; ++c) {
      std::swap(at(a, col, c), at(a, piv, c));
      std::swap(at(inv, col, c), at(inv, piv, c));
    }
    const int s = inv_mod(at(a, col, col), p);
    for (int c = 0; c < n; ++c) {
      at(a, col, c) = at(a, col, c) * s % p;
      at(inv, col, c) = at(inv, col, c) * s % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || at(a, r, col) == 0) continue;
      const int k = at(a, r, col);
      for (int c = 0; c < n; ++c) {
        at(a, r, c) = ((at(a, r, c) - k * at(a, col, c)) % p + p) % p;
        at(inv, r, c) = ((at(inv, r, c) - k * at(inv, col, c)) % p + p) % p;
      }
    }
  }
  return inv;
}

}  // namespace

RelativeBasis::RelativeBasis(FieldPtr big, FieldPtr base) : big_(std::move(big)), base_(std::move(base)) {
  require_divides(*base_, *big_);
  f_ = base_->degree();
  n_ = big_->degree() / f_;
  incl_ = inclusion(base_, big_);
  const int p = big_->characteristic();
  const int N = big_->degree();
  basis_.resize(static_cast<std::size_t>(n_));
  Elem a = 1;
  for (int c = 0; c < n_; ++c) {
    basis_[static_cast<std::size_t>(c)] = a;
    a = big_->mul(a, big_->alpha());
  }
  // Column c*f + j holds the F_p digits of lift(beta^j) * alpha^c.
  std::vector<int> mat(static_cast<std::size_t>(N * N), 0);
  Elem pj = 1;
  for (int j = 0; j < f_; ++j, pj *= static_cast<Elem>(p)) {
    const Elem lifted = (*incl_)(f_ == 1 ? 1 : pj);
    for (int c = 0; c < n_; ++c) {
      const auto d = big_->coords(big_->mul(lifted, basis_[static_cast<std::size_t>(c)]));
      for (int r = 0; r < N; ++r) mat[static_cast<std::size_t>(r * N + c * f_ + j)] = d[static_cast<std::size_t>(r)];
    }
  }
  inverse_ = invert_mod_p(std::move(mat), N, p);
  if (big_->size() <= (1u << 16)) {
    std::vector<Elem> table(std::size_t{big_->size()} * static_cast<std::size_t>(n_));
    for (Elem x = 0; x < big_->size(); ++x)
      coords_into(x, std::span<Elem>(table.data() + std::size_t{x} * static_cast<std::size_t>(n_),
                                     static_cast<std::size_t>(n_)));
    table_ = std::move(table);
  }
}

void RelativeBasis::coords_into(Elem x, std::span<Elem> out) const {
  if (!table_.empty()) {
    const auto* src = table_.data() + std::size_t{x} * static_cast<std::size_t>(n_);
    std::copy(src, src + n_, out.begin());
    return;
  }
  const int p = big_->characteristic();
  const int N = big_->degree();
  const auto d = big_->coords(x);
  for (int c = 0; c < n_; ++c) {
    Elem v = 0, pw = 1;
    for (int j = 0; j < f_; ++j, pw *= static_cast<Elem>(p)) {
      int s = 0;
      const int row = c * f_ + j;
      for (int k = 0; k < N; ++k) s += inverse_[static_cast<std::size_t>(row * N + k)] * d[static_cast<std::size_t>(k)];
      v += static_cast<Elem>(s % p) * pw;
    }
    out[static_cast<std::size_t>(c)] = v;
  }
}

std::vector<Elem> RelativeBasis::coords(Elem x) const {
  std::vector<Elem> out(static_cast<std::size_t>(n_));
  coords_into(x, out);
  return out;
}

Elem RelativeBasis::combine(std::span<const Elem> coords) const {
  Elem r = 0;
  for (int c = 0; c < n_ && static_cast<std::size_t>(c) < coords.size(); ++c)
    r = big_->add(r, big_->mul((*incl_)(coords[static_cast<std::size_t>(c)]), basis_[static_cast<std::size_t>(c)]));
  return r;
}

std::shared_ptr<const RelativeBasis> relative_basis(const FieldPtr& big, const FieldPtr& base) {
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.bases.find({big.get(), base.get()});
    if (it != reg.bases.end()) return it->second;
  }
  auto rb = std::make_shared<const RelativeBasis>(big, base);
  std::lock_guard lock(reg.mu);
  return reg.bases.emplace(std::make_pair(big.get(), base.get()), rb).first->second;
}

// ---------------------------------------------------------------------------
// Linear algebra

Matrix identity_matrix(FieldPtr field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix rref(Matrix m, std::vector<std::size_t>* pivots) {
  const Field& f = *m.field;
  std::size_t r = 0;
  if (pivots) pivots->clear();
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t k = 0; k < m.cols; ++k) std::swap(m(r, k), m(piv, k));
    const Elem s = f.inv(m(r, c));
    for (std::size_t k = 0; k < m.cols; ++k) m(r, k) = f.mul(m(r, k), s);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Elem factor = m(i, c);
      for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  m.entries.resize(r * m.cols);
  m.rows = r;
  return m;
}

std::size_t rank(const Matrix& m) { return rref(m).rows; }

Matrix nullspace(const Matrix& m) {
  std::vector<std::size_t> pivots;
  const Matrix red = rref(m, &pivots);
  const Field& f = *m.field;
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix out(m.field, m.cols - pivots.size(), m.cols);
  std::size_t row = 0;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    out(row, free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) out(row, pivots[i]) = f.neg(red(i, free));
    ++row;
  }
  return out;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows != m.cols) return std::nullopt;
  const std::size_t n = m.rows;
  Matrix aug(m.field, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> pivots;
  const Matrix red = rref(aug, &pivots);
  if (red.rows < n || pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix out(m.field, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = red(i, n + j);
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw Error(Errc::DimensionMismatch, "matrix product shape");
  const Field& f = *a.field;
  Matrix out(a.field, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Elem x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
    }
  return out;
}

std::vector<Elem> matvec(const Matrix& m, std::span<const Elem> x) {
  const Field& f = *m.field;
  std::vector<Elem> out(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Elem s = 0;
    for (std::size_t j = 0; j < m.cols; ++j) s = f.add(s, f.mul(m(i, j), x[j]));
    out[i] = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tower embeddings

TowerMap::TowerMap(FieldPtr base, FieldPtr sub, FieldPtr sup, EmbeddingKind kind, std::vector<Elem> images)
    : base_(std::move(base)), sub_(std::move(sub)), sup_(std::move(sup)), kind_(kind), images_(std::move(images)) {
  const auto rb_sup = relative_basis(sup_, base_);
  matrix_ = Matrix(base_, images_.size(), static_cast<std::size_t>(rb_sup->dimension()));
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const auto c = rb_sup->coords(images_[i]);
    for (std::size_t j = 0; j < c.size(); ++j) matrix_(i, j) = c[j];
  }
  if (rank(matrix_) != images_.size()) throw Error(Errc::DegenerateCodec, "embedding is not injective");
  if (sub_->size() <= (1u << 16)) {
    table_.resize(sub_->size());
    const auto rb_sub = relative_basis(sub_, base_);
    for (Elem x = 0; x < sub_->size(); ++x) {
      const auto c = rb_sub->coords(x);
      Elem r = 0;
      for (std::size_t i = 0; i < c.size(); ++i) r = sup_->add(r, sup_->mul(rb_sup->lift(c[i]), images_[i]));
      table_[x] = r;
    }
  }
}

Elem TowerMap::operator()(Elem x) const {
  if (!table_.empty()) return table_[x];
  const auto rb_sub = relative_basis(sub_, base_);
  const auto rb_sup = relative_basis(sup_, base_);
  const auto c = rb_sub->coords(x);
  Elem r = 0;
  for (std::size_t i = 0; i < c.size(); ++i) r = sup_->add(r, sup_->mul(rb_sup->lift(c[i]), images_[i]));
  return r;
}

TowerMap embedding_make(const FieldPtr& sub, const FieldPtr& sup, const FieldPtr& base) {
  require_divides(*base, *sub);
  require_divides(*base, *sup);
  const int f = base->degree();
  const int n = sub->degree() / f;
  const int m = sup->degree() / f;
  if (n > m) throw Error(Errc::DimensionMismatch, "domain degree exceeds codomain degree");
  const auto rb_sub = relative_basis(sub, base);
  const auto rb_sup = relative_basis(sup, base);
  std::vector<Elem> images(static_cast<std::size_t>(n));
  if (sub == sup) {
    for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = rb_sub->basis(i);
    return TowerMap(base, sub, sup, EmbeddingKind::Identity, std::move(images));
  }
  if (m % n == 0) {
    if (sub->degree() == 1) {
      images[0] = 1;
      return TowerMap(base, sub, sup, EmbeddingKind::Inclusion, std::move(images));
    }
    // The base field generator must land on its registered image in sup.
    const Elem base_gen = base->degree() == 1 ? 1 : static_cast<Elem>(base->characteristic());
    for (Elem gamma : roots_in(sub->modulus(), *sup)) {
      if (map_by_root(*sub, *sup, gamma, rb_sub->lift(base_gen)) != rb_sup->lift(base_gen)) continue;
      for (int i = 0; i < n; ++i)
        images[static_cast<std::size_t>(i)] = map_by_root(*sub, *sup, gamma, rb_sub->basis(i));
      return TowerMap(base, sub, sup, EmbeddingKind::Inclusion, std::move(images));
    }
    throw Error(Errc::NotASubfield, "no compatible subfield embedding");
  }
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = rb_sup->basis(i);
  return TowerMap(base, sub, sup, EmbeddingKind::Prefix, std::move(images));
}

TowerMap embedding_from_matrix(const FieldPtr& sub, const FieldPtr& sup, const Matrix& rows) {
  const FieldPtr& base = rows.field;
  require_divides(*base, *sub);
  require_divides(*base, *sup);
  const auto rb_sup = relative_basis(sup, base);
  if (rows.rows != static_cast<std::size_t>(sub->degree() / base->degree()) ||
      rows.cols != static_cast<std::size_t>(rb_sup->dimension()))
    throw Error(Errc::DimensionMismatch, "embedding matrix shape");
  std::vector<Elem> images(rows.rows);
  for (std::size_t i = 0; i < rows.rows; ++i)
    images[i] = rb_sup->combine(std::span<const Elem>(rows.entries.data() + i * rows.cols, rows.cols));
  return TowerMap(base, sub, sup, EmbeddingKind::Explicit, std::move(images));
}

Felt embed(const TowerMap& map, const Felt& x) {
  if (x.field() != map.sub()) throw Error(Errc::WrongField, "element is not in the domain field");
  return {map.sup(), map(x.index())};
}

}  // namespace sumrank
