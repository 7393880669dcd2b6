#include "sumrank/cyclic.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sumrank {

std::vector<std::uint64_t> coset(std::uint64_t n, std::uint64_t q, std::uint64_t i) {
  if (n == 0 || std::gcd(n, q) != 1) throw Error(Errc::NotCoprime, "gcd(" + std::to_string(n) + ", " + std::to_string(q) + ") != 1");
  if (i >= n) throw Error(Errc::BadRepresentative, std::to_string(i) + " not in Z_" + std::to_string(n));
  std::vector<std::uint64_t> out;
  std::uint64_t x = i;
  do {
    out.push_back(x);
    x = x * (q % n) % n;
  } while (x != i);
  std::sort(out.begin(), out.end());
  return out;
}

CosetTable coset_table(std::uint64_t n, std::uint64_t q) {
  CosetTable t{n, q, {}};
  std::vector<bool> seen(n, false);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    auto c = coset(n, q, i);
    for (auto x : c) seen[x] = true;
    t.cosets.push_back(std::move(c));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Linear codes

std::vector<Elem> LinearCode::syndrome(std::span<const Elem> word) const {
  if (word.size() != length) throw Error(Errc::LengthMismatch, "word length");
  return matvec(parity_check, word);
}

bool LinearCode::member(std::span<const Elem> word) const {
  const auto s = syndrome(word);
  return std::all_of(s.begin(), s.end(), [](Elem x) { return x == 0; });
}

std::vector<Elem> LinearCode::encode(std::span<const Elem> coeffs) const {
  const Field& f = *field;
  std::vector<Elem> out(length, 0);
  for (std::size_t i = 0; i < generator.rows && i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < length; ++j) out[j] = f.add(out[j], f.mul(coeffs[i], generator(i, j)));
  }
  return out;
}

LinearCode code_from_parity_check(const Matrix& h, std::size_t length) {
  if (h.rows > 0 && h.cols != length) throw Error(Errc::LengthMismatch, "parity check width");
  LinearCode c;
  c.field = h.field;
  c.length = length;
  c.parity_check = h.rows == 0 ? Matrix(h.field, 0, length) : rref(h);
  c.generator = c.parity_check.rows == 0 ? identity_matrix(h.field, length) : nullspace(c.parity_check);
  return c;
}

LinearCode code_from_generator(const Matrix& g) {
  LinearCode c;
  c.field = g.field;
  c.length = g.cols;
  Matrix red = rref(g);
  c.parity_check = red.rows == 0 ? identity_matrix(g.field, g.cols) : nullspace(red);
  if (c.parity_check.rows > 0) c.parity_check = rref(c.parity_check);
  c.generator = red.rows == 0 ? Matrix(g.field, 0, g.cols) : red;
  return c;
}

LinearCode trivial_code(const FieldPtr& field, std::size_t t) { return code_from_parity_check(Matrix(field, 0, t), t); }

LinearCode parity_code(const FieldPtr& field, std::size_t t) {
  Matrix h(field, 1, t);
  std::fill(h.entries.begin(), h.entries.end(), 1);
  return code_from_parity_check(h, t);
}

LinearCode zero_code(const FieldPtr& field, std::size_t t) { return code_from_parity_check(identity_matrix(field, t), t); }

LinearCode hamming_code_make(const FieldPtr& field, int u) {
  if (u < 2) throw Error(Errc::DimensionMismatch, "Hamming codimension must be at least 2");
  const Elem Q = field->size();
  std::uint64_t total = 1;
  for (int i = 0; i < u; ++i) total *= Q;
  std::vector<std::vector<Elem>> cols;
  for (std::uint64_t v = 1; v < total; ++v) {
    std::vector<Elem> col(static_cast<std::size_t>(u));
    std::uint64_t x = v;
    for (int i = 0; i < u; ++i, x /= Q) col[static_cast<std::size_t>(i)] = static_cast<Elem>(x % Q);
    const auto first = std::find_if(col.begin(), col.end(), [](Elem e) { return e != 0; });
    if (*first == 1) cols.push_back(std::move(col));
  }
  Matrix h(field, static_cast<std::size_t>(u), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < u; ++i) h(static_cast<std::size_t>(i), j) = cols[j][static_cast<std::size_t>(i)];
  return code_from_parity_check(h, cols.size());
}

// ---------------------------------------------------------------------------
// Cyclic codes

bool CyclicCode::member_by_roots(std::span<const Elem> word) const {
  if (word.size() != n) throw Error(Errc::LengthMismatch, "word length");
  const auto inc = inclusion(field, splitting);
  const Field& s = *splitting;
  for (auto i : defining_set) {
    Elem acc = 0;
    const Elem bi = s.pow(beta, i);
    Elem x = 1;
    for (std::size_t j = 0; j < n; ++j) {
      acc = s.add(acc, s.mul((*inc)(word[j]), x));
      x = s.mul(x, bi);
    }
    if (acc != 0) return false;
  }
  return true;
}

CyclicCode cyclic_from_defining_set(std::uint64_t n, const FieldPtr& field, std::vector<std::uint64_t> T) {
  const std::uint64_t Q = field->size();
  if (std::gcd(n, Q) != 1) throw Error(Errc::NotCoprime, "length and alphabet size");
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  const std::set<std::uint64_t> tset(T.begin(), T.end());
  for (auto i : T) {
    if (i >= n) throw Error(Errc::BadRepresentative, std::to_string(i) + " not in Z_" + std::to_string(n));
    if (!tset.count(i * (Q % n) % n)) throw Error(Errc::BadRepresentative, "defining set is not a union of cosets");
  }

  CyclicCode c;
  c.n = n;
  c.field = field;
  c.defining_set = T;
  int ord = 1;
  std::uint64_t x = Q % n;
  while (n > 1 && x != 1) {
    x = x * (Q % n) % n;
    ++ord;
  }
  c.splitting = field_make(field->characteristic(), field->degree() * ord);
  const Field& s = *c.splitting;
  c.beta = s.pow(s.primitive(), (s.size() - 1) / n);

  c.splitting_check = Matrix(c.splitting, T.size(), n);
  for (std::size_t r = 0; r < T.size(); ++r) {
    const Elem bi = s.pow(c.beta, T[r]);
    Elem y = 1;
    for (std::size_t j = 0; j < n; ++j) {
      c.splitting_check(r, j) = y;
      y = s.mul(y, bi);
    }
  }
  // Project onto F_Q: each splitting-field row becomes ord rows of coordinates.
  const auto rb = relative_basis(c.splitting, field);
  Matrix big(field, T.size() * static_cast<std::size_t>(ord), n);
  for (std::size_t r = 0; r < T.size(); ++r)
    for (std::size_t j = 0; j < n; ++j) {
      const auto co = rb->coords(c.splitting_check(r, j));
      for (int k = 0; k < ord; ++k) big(r * static_cast<std::size_t>(ord) + static_cast<std::size_t>(k), j) = co[static_cast<std::size_t>(k)];
    }
  c.code = code_from_parity_check(rref(big), n);
  if (c.code.codimension() != T.size())
    throw Error(Errc::DimensionMismatch, "projected parity check has unexpected rank");
  return c;
}

CyclicCode cyclic_make(std::uint64_t n, const FieldPtr& field, const std::vector<std::uint64_t>& reps) {
  const std::uint64_t Q = field->size();
  if (std::gcd(n, Q) != 1) throw Error(Errc::NotCoprime, "gcd(" + std::to_string(n) + ", " + std::to_string(Q) + ") != 1");
  std::vector<std::uint64_t> T;
  for (auto r : reps) {
    const auto c = coset(n, Q, r);
    T.insert(T.end(), c.begin(), c.end());
  }
  return cyclic_from_defining_set(n, field, std::move(T));
}

// ---------------------------------------------------------------------------
// Analytic bounds

int bch_designed_distance(const std::vector<std::uint64_t>& T, std::uint64_t n) {
  if (T.empty() || n == 0) return 1;
  std::vector<bool> in(n, false);
  for (auto i : T) in[i % n] = true;
  if (static_cast<std::uint64_t>(std::count(in.begin(), in.end(), true)) == n) return static_cast<int>(n) + 1;
  int best = 0;
  for (std::uint64_t start = 0; start < n; ++start) {
    if (!in[start] || in[(start + n - 1) % n]) continue;
    int run = 0;
    while (in[(start + static_cast<std::uint64_t>(run)) % n]) ++run;
    best = std::max(best, run);
  }
  return best + 1;
}

int ht_bound(const std::vector<std::uint64_t>& T, std::uint64_t n) {
  if (T.empty() || n == 0) return 1;
  std::vector<bool> in(n, false);
  for (auto i : T) in[i % n] = true;
  std::vector<std::uint64_t> units;
  for (std::uint64_t a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) units.push_back(a);
  if (n == 1) units.push_back(0);
  int best = 1;
  for (std::uint64_t b = 0; b < n; ++b) {
    if (!in[b]) continue;
    best = std::max(best, 2);
    for (auto a1 : units) {
      // Longest progression b, b+a1, ... inside T (capped at n).
      std::uint64_t run = 0;
      while (run < n && in[(b + run * a1) % n]) ++run;
      for (std::uint64_t len = 1; len <= run; ++len) {
        const int delta = static_cast<int>(len) + 1;
        best = std::max(best, delta);
        for (auto a2 : units) {
          int s = 0;
          while (s < static_cast<int>(n)) {
            const std::uint64_t shift = (static_cast<std::uint64_t>(s + 1) * a2) % n;
            bool ok = true;
            for (std::uint64_t i = 0; i < len && ok; ++i) ok = in[(b + i * a1 + shift) % n];
            if (!ok) break;
            ++s;
          }
          best = std::max(best, delta + s);
        }
      }
    }
  }
  return std::min<int>(best, static_cast<int>(n) + 1);
}

bool boston_check(const std::vector<std::uint64_t>& T) {
  const std::set<std::uint64_t> s(T.begin(), T.end());
  return s.count(0) && s.count(1) && s.count(3) && s.count(5);
}

// ---------------------------------------------------------------------------
// Hamming-metric certification

std::unique_ptr<HammingProblem> hamming_problem(const LinearCode& code) {
  auto hp = std::make_unique<HammingProblem>();
  const Field& f = *code.field;
  const std::size_t r = code.codimension();
  hp->problem.census = rank_census(code.field, 1, 1);
  hp->problem.positions = code.length;
  hp->problem.space = syndrome_space(f.characteristic(), static_cast<int>(r) * f.degree());
  hp->tables.assign(code.length, std::vector<std::uint64_t>(f.size(), 0));
  for (std::size_t j = 0; j < code.length; ++j)
    for (Elem a = 1; a < f.size(); ++a) {
      std::uint64_t key = 0;
      for (std::size_t i = r; i-- > 0;) key = key * f.size() + f.mul(a, code.parity_check(i, j));
      hp->tables[j][a] = key;
    }
  hp->problem.tables = &hp->tables;
  return hp;
}

HammingDistanceCertificate min_distance_hamming(const LinearCode& code, int w_max, std::uint64_t budget,
                                                unsigned workers) {
  if (w_max < 1) throw Error(Errc::DimensionMismatch, "w_max must be positive");
  const auto hp = hamming_problem(code);
  HammingDistanceCertificate cert;
  cert.w_max = w_max;
  BigInt remaining = budget;
  for (int w = 1; w <= w_max && static_cast<std::size_t>(w) <= code.length; ++w) {
    const BigInt words = layer_size(hp->problem, w);
    if (words > remaining) throw Error(Errc::BudgetExceeded, "weight " + std::to_string(w) + " layer exceeds budget");
    const auto found = find_codeword(hp->problem, w, static_cast<std::uint64_t>(remaining), workers);
    remaining -= found.examined;
    cert.examined += found.examined;
    if (found.witness) {
      cert.exact = true;
      cert.distance = w;
      cert.witness.assign(code.length, 0);
      for (auto [pos, sym] : *found.witness) cert.witness[pos] = sym;
      return cert;
    }
  }
  cert.distance = w_max + 1;
  return cert;
}

int covering_radius_hamming(const LinearCode& code, int cap, std::uint64_t budget, unsigned workers) {
  const auto hp = hamming_problem(code);
  if (hp->problem.space.size() > budget) throw Error(Errc::BudgetExceeded, "syndrome space exceeds budget");
  const auto res = cover_syndromes(hp->problem, cap, budget, workers);
  if (res.budget_exceeded) throw Error(Errc::BudgetExceeded, "coverage layer exceeds budget");
  if (!res.complete) throw Error(Errc::CapReached, "cap " + std::to_string(cap));
  return res.radius;
}

}  // namespace sumrank
