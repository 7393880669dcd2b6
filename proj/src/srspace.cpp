#include "sumrank/srspace.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace sumrank {

BlockCodec::BlockCodec(FieldPtr base, int n, int m, TowerMap phi)
    : base_(std::move(base)), n_(n), m_(m), phi_(std::move(phi)) {
  domain_ = phi_.sub();
  codomain_ = phi_.sup();
  if (phi_.base() != base_ || domain_->degree() != n_ * base_->degree() || codomain_->degree() != m_ * base_->degree())
    throw Error(Errc::DimensionMismatch, "embedding does not match block shape");
  if (n_ > m_) throw Error(Errc::DimensionMismatch, "block rows exceed columns");
  census_ = rank_census(base_, n_, m_);
  symbols_ = census_->count;

  const auto rb_dom = relative_basis(domain_, base_);
  const std::uint64_t q = base_->size();
  frob_basis_.assign(static_cast<std::size_t>(n_), std::vector<Elem>(static_cast<std::size_t>(n_)));
  for (int j = 0; j < n_; ++j)
    for (int r = 0; r < n_; ++r)
      frob_basis_[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] =
          phi_(frobenius(*domain_, rb_dom->basis(r), static_cast<std::uint64_t>(j), q));

  const std::size_t nm = static_cast<std::size_t>(n_ * m_);
  const auto rb_cod = relative_basis(codomain_, base_);
  codec_matrix_ = Matrix(base_, nm, nm);
  std::vector<Elem> coeffs(static_cast<std::size_t>(n_), 0);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < m_; ++k) {
      std::fill(coeffs.begin(), coeffs.end(), 0);
      coeffs[static_cast<std::size_t>(j)] = rb_cod->basis(k);
      const Matrix img = forward_matrix(coeffs);
      for (std::size_t e = 0; e < nm; ++e) codec_matrix_(e, static_cast<std::size_t>(j * m_ + k)) = img.entries[e];
    }
  if (rank(codec_matrix_) != nm) throw Error(Errc::DegenerateCodec, "coefficient-to-matrix map is not bijective");

  // Tabulate the inverse by running the forward map over every coefficient tuple.
  inverse_.assign(std::size_t{symbols_} * static_cast<std::size_t>(n_), 0);
  const Elem Q = codomain_->size();
  std::fill(coeffs.begin(), coeffs.end(), 0);
  for (std::uint32_t count = 0; count < symbols_; ++count) {
    const std::uint32_t idx = forward(coeffs);
    std::copy(coeffs.begin(), coeffs.end(), inverse_.begin() + static_cast<std::ptrdiff_t>(std::size_t{idx} * static_cast<std::size_t>(n_)));
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      if (++coeffs[d] < Q) break;
      coeffs[d] = 0;
    }
  }
}

Matrix BlockCodec::forward_matrix(std::span<const Elem> coeffs) const {
  if (coeffs.size() != static_cast<std::size_t>(n_)) throw Error(Errc::LengthMismatch, "coefficient tuple size");
  const Field& F = *codomain_;
  const auto rb = relative_basis(codomain_, base_);
  Matrix out(base_, static_cast<std::size_t>(n_), static_cast<std::size_t>(m_));
  std::vector<Elem> row(static_cast<std::size_t>(m_));
  for (int r = 0; r < n_; ++r) {
    Elem y = 0;
    for (int j = 0; j < n_; ++j)
      y = F.add(y, F.mul(coeffs[static_cast<std::size_t>(j)], frob_basis_[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)]));
    rb->coords_into(y, row);
    for (int c = 0; c < m_; ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = row[static_cast<std::size_t>(c)];
  }
  return out;
}

std::uint32_t BlockCodec::forward(std::span<const Elem> coeffs) const { return matrix_index(forward_matrix(coeffs)); }

BlockCodecPtr block_codec(const FieldPtr& base, int n, int m, TowerMap phi) {
  return std::make_shared<const BlockCodec>(base, n, m, std::move(phi));
}

BlockCodecPtr block_codec(const FieldPtr& base, int n, int m) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, BlockCodecPtr> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({base.get(), n, m});
    if (it != cache.end()) return it->second;
  }
  const int p = base->characteristic();
  const int f = base->degree();
  auto dom = field_make(p, f * n);
  auto cod = field_make(p, f * m);
  auto codec = block_codec(base, n, m, embedding_make(dom, cod, base));
  std::lock_guard lock(mu);
  return cache.emplace(std::make_tuple(base.get(), n, m), codec).first->second;
}

SRGeometry geometry_make(std::uint64_t q, int n, int m, std::size_t t) {
  if (t == 0) throw Error(Errc::LengthMismatch, "block length must be positive");
  return {block_codec(field_of_size(q), n, m), t};
}

bool same_geometry(const SRGeometry& a, const SRGeometry& b) {
  if (a.codec == b.codec) return a.t == b.t;
  return a.t == b.t && a.codec->base() == b.codec->base() && a.n() == b.n() && a.m() == b.m() &&
         a.codec->phi().matrix() == b.codec->phi().matrix();
}

SRWord codec_forward(const SRGeometry& g, const CoeffWord& cw) {
  if (cw.coeffs.size() != static_cast<std::size_t>(g.n())) throw Error(Errc::GeometryMismatch, "coefficient rows");
  for (const auto& row : cw.coeffs)
    if (row.size() != g.t) throw Error(Errc::GeometryMismatch, "coefficient row length");
  SRWord w;
  w.blocks.resize(g.t);
  std::vector<Elem> tuple(static_cast<std::size_t>(g.n()));
  for (std::size_t i = 0; i < g.t; ++i) {
    for (std::size_t j = 0; j < tuple.size(); ++j) tuple[j] = cw.coeffs[j][i];
    w.blocks[i] = g.codec->forward(tuple);
  }
  return w;
}

CoeffWord codec_inverse(const SRGeometry& g, const SRWord& w) {
  if (w.blocks.size() != g.t) throw Error(Errc::GeometryMismatch, "word length");
  CoeffWord cw;
  cw.coeffs.assign(static_cast<std::size_t>(g.n()), std::vector<Elem>(g.t, 0));
  for (std::size_t i = 0; i < g.t; ++i) {
    const auto c = g.codec->inverse(w.blocks[i]);
    for (std::size_t j = 0; j < c.size(); ++j) cw.coeffs[j][i] = c[j];
  }
  return cw;
}

int wt_sr(const BlockCodec& codec, const SRWord& w) {
  int total = 0;
  for (auto b : w.blocks) {
    if (b >= codec.symbols()) throw Error(Errc::GeometryMismatch, "matrix index out of range");
    total += codec.rank_of(b);
  }
  return total;
}

namespace {
std::uint32_t combine_index(const BlockCodec& codec, std::uint32_t a, std::uint32_t b, bool subtract) {
  const Field& f = *codec.base();
  const Elem q = f.size();
  std::uint32_t out = 0, pw = 1;
  for (int k = 0; k < codec.n() * codec.m(); ++k) {
    const Elem x = a % q, y = b % q;
    out += (subtract ? f.sub(x, y) : f.add(x, y)) * pw;
    a /= q;
    b /= q;
    pw *= q;
  }
  return out;
}
}  // namespace

SRWord word_add(const BlockCodec& codec, const SRWord& u, const SRWord& v) {
  if (u.blocks.size() != v.blocks.size()) throw Error(Errc::GeometryMismatch, "word lengths differ");
  SRWord w;
  w.blocks.resize(u.blocks.size());
  for (std::size_t i = 0; i < u.blocks.size(); ++i) w.blocks[i] = combine_index(codec, u.blocks[i], v.blocks[i], false);
  return w;
}

SRWord word_sub(const BlockCodec& codec, const SRWord& u, const SRWord& v) {
  if (u.blocks.size() != v.blocks.size()) throw Error(Errc::GeometryMismatch, "word lengths differ");
  SRWord w;
  w.blocks.resize(u.blocks.size());
  for (std::size_t i = 0; i < u.blocks.size(); ++i) w.blocks[i] = combine_index(codec, u.blocks[i], v.blocks[i], true);
  return w;
}

int d_sr(const BlockCodec& codec, const SRWord& u, const SRWord& v) { return wt_sr(codec, word_sub(codec, u, v)); }

int lemma71_weight(std::span<const Elem> a0, std::span<const Elem> a1) {
  if (a0.size() != a1.size()) throw Error(Errc::LengthMismatch, "coefficient rows differ in length");
  int w0 = 0, w1 = 0, both = 0;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    w0 += a0[i] != 0;
    w1 += a1[i] != 0;
    both += a0[i] != 0 && a1[i] != 0;
  }
  return 2 * w0 + 2 * w1 - 3 * both;
}

// ---------------------------------------------------------------------------
// SumRankCode

std::size_t SumRankCode::dimension_fq() const {
  return positions() * static_cast<std::size_t>(codec()->n() * codec()->m()) - codimension_fq();
}

const std::vector<std::vector<std::uint64_t>>& SumRankCode::syndrome_tables() const {
  std::call_once(tables_once_, [this] {
    const std::uint32_t symbols = codec()->symbols();
    tables_.assign(positions(), std::vector<std::uint64_t>(symbols, 0));
    for (std::size_t pos = 0; pos < positions(); ++pos)
      for (std::uint32_t s = 0; s < symbols; ++s) tables_[pos][s] = block_syndrome(pos, s);
  });
  return tables_;
}

std::uint64_t SumRankCode::syndrome(const SRWord& w) const {
  if (w.blocks.size() != positions()) throw Error(Errc::GeometryMismatch, "word length");
  const auto& tables = syndrome_tables();
  const auto space = syndrome_space();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < w.blocks.size(); ++i) {
    if (w.blocks[i] >= codec()->symbols()) throw Error(Errc::GeometryMismatch, "matrix index out of range");
    s = space.add(s, tables[i][w.blocks[i]]);
  }
  return s;
}

EnumProblem SumRankCode::enum_problem() const {
  EnumProblem pr;
  pr.census = codec()->census_ptr();
  pr.positions = positions();
  pr.space = syndrome_space();
  pr.tables = &syndrome_tables();
  return pr;
}

// ---------------------------------------------------------------------------
// Components

Component component_from(LinearCode code, std::string label) {
  Component c;
  c.label = std::move(label);
  if (code.dimension() == 0) {
    c.distance = kInfiniteDistance;
    c.distance_exact = true;
  } else if (code.codimension() == 0) {
    c.distance = 1;
    c.distance_exact = true;
  } else {
    const int w_max = static_cast<int>(std::min<std::size_t>(code.length, 6));
    try {
      const auto cert = min_distance_hamming(code, w_max, 10'000'000);
      c.distance = cert.distance;
      c.distance_exact = cert.exact;
    } catch (const Error& e) {
      if (e.code() != Errc::BudgetExceeded) throw;
      c.distance = 1;
      c.distance_exact = false;
    }
  }
  c.code = std::move(code);
  return c;
}

Component component_from(CyclicCode code) {
  Component c = component_from(code.code, "cyclic");
  if (!c.distance_exact) {
    int bound = std::max(bch_designed_distance(code.defining_set, code.n), ht_bound(code.defining_set, code.n));
    if (boston_check(code.defining_set)) bound = std::max(bound, 4);
    c.distance = std::max(c.distance, bound);
  }
  c.cyclic = std::move(code);
  return c;
}

// ---------------------------------------------------------------------------
// SRCode

SRCode::SRCode(SRGeometry geometry, std::vector<Component> components)
    : geometry_(std::move(geometry)), components_(std::move(components)) {
  if (components_.size() != static_cast<std::size_t>(geometry_.n()))
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(geometry_.n()) + " components");
  for (const auto& c : components_) {
    if (c.code.length != geometry_.t) throw Error(Errc::LengthMismatch, "component length differs from block length");
    if (c.code.field != geometry_.codec->codomain())
      throw Error(Errc::WrongField, "component alphabet must be " + geometry_.codec->codomain()->name());
  }
  const Field& F = *geometry_.codec->codomain();
  space_ = sumrank::syndrome_space(F.characteristic(), static_cast<int>(codimension_total()) * F.degree());
}

std::size_t SRCode::codimension_total() const {
  std::size_t r = 0;
  for (const auto& c : components_) r += c.code.codimension();
  return r;
}

std::size_t SRCode::codimension_fq() const { return codimension_total() * static_cast<std::size_t>(geometry_.m()); }

std::uint64_t SRCode::block_syndrome(std::size_t pos, std::uint32_t symbol) const {
  const Field& F = *geometry_.codec->codomain();
  const auto coeffs = geometry_.codec->inverse(symbol);
  std::uint64_t key = 0, scale = 1;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const Matrix& h = components_[j].code.parity_check;
    for (std::size_t i = 0; i < h.rows; ++i) {
      key += std::uint64_t{F.mul(coeffs[j], h(i, pos))} * scale;
      scale *= F.size();
    }
  }
  return key;
}

std::optional<int> SRCode::analytic_distance_bound() const {
  const auto kind = geometry_.codec->phi().kind();
  if (kind != EmbeddingKind::Identity && kind != EmbeddingKind::Inclusion) return std::nullopt;
  int bound = kInfiniteDistance;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (components_[j].distance >= kInfiniteDistance) continue;
    bound = std::min(bound, static_cast<int>(j + 1) * components_[j].distance);
  }
  return bound;
}

bool SRCode::member_by_components(const SRWord& w) const {
  const CoeffWord cw = codec_inverse(geometry_, w);
  for (std::size_t j = 0; j < components_.size(); ++j)
    if (!components_[j].code.member(cw.coeffs[j])) return false;
  return true;
}

std::vector<SRWord> SRCode::structured_candidates(int max_weight) const {
  std::vector<SRWord> out;
  const std::size_t n = components_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const LinearCode& code = components_[j].code;
    if (code.dimension() == 0) continue;
    std::vector<std::vector<Elem>> words;
    if (code.codimension() > 0) {
      const auto hp = hamming_problem(code);
      for (int w = 1; w <= std::min<int>(max_weight, static_cast<int>(code.length)); ++w) {
        try {
          const auto found = find_codeword(hp->problem, w, 1'000'000, 1);
          if (!found.witness) continue;
          std::vector<Elem> c(code.length, 0);
          for (auto [pos, sym] : *found.witness) c[pos] = sym;
          words.push_back(std::move(c));
        } catch (const Error&) {
          break;
        }
      }
    }
    for (std::size_t r = 0; r < code.generator.rows; ++r)
      words.emplace_back(code.generator.entries.begin() + static_cast<std::ptrdiff_t>(r * code.length),
                         code.generator.entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * code.length));
    for (auto& c : words) {
      CoeffWord cw;
      cw.coeffs.assign(n, std::vector<Elem>(geometry_.t, 0));
      cw.coeffs[j] = std::move(c);
      out.push_back(codec_forward(geometry_, cw));
    }
  }
  return out;
}

std::shared_ptr<const SRCode> sr_build(std::vector<Component> components, const SRGeometry& geometry) {
  return std::make_shared<const SRCode>(geometry, std::move(components));
}

// ---------------------------------------------------------------------------
// PlotkinCode

PlotkinCode::PlotkinCode(SumRankCodePtr first, SumRankCodePtr second) : first_(std::move(first)), second_(std::move(second)) {
  const auto& a = *first_->codec();
  const auto& b = *second_->codec();
  if (first_->positions() != second_->positions() || a.base() != b.base() || a.n() != b.n() || a.m() != b.m() ||
      !(a.phi().matrix() == b.phi().matrix()))
    throw Error(Errc::GeometryMismatch, "Plotkin sum needs identical geometries");
  const auto s1 = first_->syndrome_space(), s2 = second_->syndrome_space();
  space_ = sumrank::syndrome_space(s1.p, s1.digits + s2.digits);
  shift_ = s1.size();
}

std::uint64_t PlotkinCode::block_syndrome(std::size_t pos, std::uint32_t symbol) const {
  const std::size_t t = first_->positions();
  if (pos < t) {
    const std::uint64_t s1 = first_->syndrome_tables()[pos][symbol];
    const std::uint64_t s2 = second_->syndrome_space().neg(second_->syndrome_tables()[pos][symbol]);
    return s1 + s2 * shift_;
  }
  return second_->syndrome_tables()[pos - t][symbol] * shift_;
}

std::optional<int> PlotkinCode::analytic_distance_bound() const {
  const auto d1 = first_->analytic_distance_bound();
  const auto d2 = second_->analytic_distance_bound();
  if (!d1 || !d2) return std::nullopt;
  return std::min(std::min(2 * *d1, kInfiniteDistance), *d2);
}

bool PlotkinCode::member_by_halves(const SRWord& w) const {
  const std::size_t t = first_->positions();
  if (w.blocks.size() != 2 * t) throw Error(Errc::GeometryMismatch, "word length");
  SRWord u, v;
  u.blocks.assign(w.blocks.begin(), w.blocks.begin() + static_cast<std::ptrdiff_t>(t));
  v.blocks.assign(w.blocks.begin() + static_cast<std::ptrdiff_t>(t), w.blocks.end());
  return first_->member(u) && second_->member(word_sub(*codec(), v, u));
}

std::vector<SRWord> PlotkinCode::structured_candidates(int max_weight) const {
  std::vector<SRWord> out;
  const std::size_t t = first_->positions();
  for (const auto& u : first_->structured_candidates(max_weight / 2)) {
    SRWord w;
    w.blocks = u.blocks;
    w.blocks.insert(w.blocks.end(), u.blocks.begin(), u.blocks.end());
    out.push_back(std::move(w));
  }
  for (const auto& v : second_->structured_candidates(max_weight)) {
    SRWord w;
    w.blocks.assign(t, 0);
    w.blocks.insert(w.blocks.end(), v.blocks.begin(), v.blocks.end());
    out.push_back(std::move(w));
  }
  return out;
}

std::shared_ptr<const PlotkinCode> plotkin(SumRankCodePtr first, SumRankCodePtr second) {
  return std::make_shared<const PlotkinCode>(std::move(first), std::move(second));
}

}  // namespace sumrank
