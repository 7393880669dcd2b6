#include <gtest/gtest.h>

#include <set>

#include "sumrank/gf.hpp"

using namespace sumrank;

namespace {

// Brute-force multiplicative order without the log tables.
std::uint64_t order_by_iteration(const Field& f, Elem x) {
  Elem y = x;
  std::uint64_t k = 1;
  while (y != 1) {
    // multiply via repeated addition is too slow; use poly multiply through coords
    std::vector<int> a = f.coords(y), b = f.coords(x), r(2 * f.degree(), 0);
    for (int i = 0; i < f.degree(); ++i)
      for (int j = 0; j < f.degree(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % f.characteristic();
    const auto& mod = f.modulus();
    for (int d = 2 * f.degree() - 1; d >= f.degree(); --d) {
      const int c = r[d];
      if (c == 0) continue;
      for (int i = 0; i <= f.degree(); ++i)
        r[d - f.degree() + i] = ((r[d - f.degree() + i] - c * mod[i]) % f.characteristic() + f.characteristic()) %
                                f.characteristic();
    }
    r.resize(f.degree());
    y = f.from_coords(r);
    ++k;
  }
  return k;
}

}  // namespace

TEST(Field, CanonicalModuli) {
  EXPECT_EQ(field_make(2, 2)->modulus(), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(field_make(2, 1)->modulus(), (std::vector<int>{0, 1}));
  EXPECT_EQ(field_make(2, 1)->size(), 2u);
  auto f16 = field_make(2, 4);
  EXPECT_EQ(f16->modulus(), (std::vector<int>{1, 0, 0, 1, 1}));
  EXPECT_EQ(order_by_iteration(*f16, f16->alpha()), 15u);
  EXPECT_EQ(field_make(2, 4).get(), f16.get());
}

TEST(Field, Errors) {
  EXPECT_THROW(field_make(4, 1), Error);
  try {
    field_make(2, 21);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FieldTooLarge);
  }
  try {
    field_make(6, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPrimeCharacteristic);
  }
}

TEST(Field, AxiomsSmallFields) {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {2, 4}, {7, 2}, {3, 3}}) {
    auto f = field_make(p, e);
    const Elem q = f->size();
    for (Elem a = 0; a < q; ++a) {
      EXPECT_EQ(f->add(a, f->neg(a)), 0u);
      EXPECT_EQ(f->from_coords(f->coords(a)), a);
      if (a) EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
      for (Elem b = 0; b < q; ++b) {
        EXPECT_EQ(f->add(a, b), f->add(b, a));
        EXPECT_EQ(f->mul(a, b), f->mul(b, a));
        if (q > 32) continue;
        for (Elem c = 0; c < q; ++c) {
          EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
          EXPECT_EQ(f->mul(a, f->mul(b, c)), f->mul(f->mul(a, b), c));
          EXPECT_EQ(f->add(a, f->add(b, c)), f->add(f->add(a, b), c));
        }
      }
    }
  }
}

TEST(Field, ModulusOverride) {
  auto f = field_make_with_modulus(2, {1, 1, 0, 0, 1});
  EXPECT_EQ(f->size(), 16u);
  EXPECT_EQ(order_by_iteration(*f, f->primitive()), 15u);
  auto g = field_make_with_modulus(2, {1, 1, 1, 1, 1});  // irreducible, not primitive
  EXPECT_FALSE(g->modulus_is_primitive());
  EXPECT_EQ(order_by_iteration(*g, g->primitive()), 15u);
  try {
    field_make_with_modulus(2, {1, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotIrreducible);
  }
}

TEST(Field, Parse) {
  EXPECT_EQ(parse_field("2^3")->size(), 8u);
  EXPECT_EQ(parse_field("5")->size(), 5u);
  EXPECT_THROW(parse_field("2^x"), Error);
}

TEST(Felt, Operators) {
  auto f4 = field_make(2, 2);
  Felt w(f4, 2);
  EXPECT_EQ(w * w, Felt(f4, 3));
  EXPECT_EQ(w * w, w + Felt(f4, 1));
  EXPECT_EQ(w / w, Felt(f4, 1));
  EXPECT_THROW(w + Felt(field_make(2, 3), 1), Error);
}

TEST(Frobenius, Basics) {
  auto f4 = field_make(2, 2);
  EXPECT_EQ(frobenius(*f4, 0, 5, 2), 0u);
  EXPECT_EQ(frobenius(*f4, 2, 1, 2), 3u);
  auto f8 = field_make(2, 3);
  for (Elem x = 0; x < 8; ++x) EXPECT_EQ(frobenius(*f8, x, 3, 2), x);
  auto f81 = field_make(3, 4);
  for (Elem x = 0; x < 81; ++x) {
    EXPECT_EQ(frobenius(*f81, x, 2, 9), x);
    EXPECT_EQ(frobenius(*f81, x, 4, 3), x);
  }
  try {
    frobenius(*f8, 1, 1, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotASubfield);
  }
}

TEST(Frobenius, Linear) {
  auto f16 = field_make(2, 4);
  for (Elem x = 0; x < 16; ++x)
    for (Elem y = 0; y < 16; ++y)
      EXPECT_EQ(frobenius(*f16, f16->add(x, y), 1, 4),
                f16->add(frobenius(*f16, x, 1, 4), frobenius(*f16, y, 1, 4)));
}

TEST(Subfield, InclusionIsHomomorphism) {
  for (auto [p, a, b] : std::vector<std::array<int, 3>>{{2, 2, 4}, {2, 1, 3}, {2, 2, 6}, {3, 2, 4}, {2, 3, 6}}) {
    auto sub = field_make(p, a), sup = field_make(p, b);
    auto inc = inclusion(sub, sup);
    std::set<Elem> image;
    for (Elem x = 0; x < sub->size(); ++x) {
      image.insert((*inc)(x));
      EXPECT_EQ(inc->preimage((*inc)(x)), x);
      for (Elem y = 0; y < sub->size(); ++y) {
        EXPECT_EQ((*inc)(sub->mul(x, y)), sup->mul((*inc)(x), (*inc)(y)));
        EXPECT_EQ((*inc)(sub->add(x, y)), sup->add((*inc)(x), (*inc)(y)));
      }
    }
    EXPECT_EQ(image.size(), sub->size());
  }
  EXPECT_THROW(inclusion(field_make(2, 2), field_make(2, 3)), Error);
}

TEST(RelativeBasis, RoundTrip) {
  for (auto [p, a, b] : std::vector<std::array<int, 3>>{{2, 1, 3}, {2, 2, 4}, {2, 2, 6}, {3, 1, 2}, {3, 2, 4}}) {
    auto big = field_make(p, b), base = field_make(p, a);
    auto rb = relative_basis(big, base);
    EXPECT_EQ(rb->dimension(), b / a);
    for (Elem x = 0; x < big->size(); ++x) {
      auto c = rb->coords(x);
      EXPECT_EQ(rb->combine(c), x);
    }
  }
}

TEST(Linalg, RankNullspaceInverse) {
  auto f2 = field_make(2, 1);
  // Census of all 2x2 binary matrices by rank.
  int census[3] = {0, 0, 0};
  for (int bits = 0; bits < 16; ++bits) {
    Matrix m(f2, 2, 2);
    for (int i = 0; i < 4; ++i) m.entries[i] = (bits >> i) & 1;
    ++census[rank(m)];
  }
  EXPECT_EQ(census[0], 1);
  EXPECT_EQ(census[1], 9);
  EXPECT_EQ(census[2], 6);

  auto f4 = field_make(2, 2);
  Matrix h(f4, 2, 4);
  h.entries = {1, 1, 1, 1, 0, 1, 2, 3};
  auto ns = nullspace(h);
  EXPECT_EQ(ns.rows, 2u);
  for (std::size_t r = 0; r < ns.rows; ++r) {
    auto s = matvec(h, std::span<const Elem>(ns.entries.data() + r * 4, 4));
    EXPECT_EQ(s, (std::vector<Elem>{0, 0}));
  }
  Matrix a(f4, 2, 2);
  a.entries = {1, 2, 2, 1};
  auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(multiply(a, *inv), identity_matrix(f4, 2));
  Matrix s(f4, 2, 2);
  s.entries = {1, 2, 2, 3};
  EXPECT_FALSE(inverse(s));
}

TEST(Embedding, Kinds) {
  auto f2 = field_make(2, 1), f4 = field_make(2, 2), f8 = field_make(2, 3), f16 = field_make(2, 4);
  auto id = embedding_make(f4, f4, f2);
  EXPECT_EQ(id.kind(), EmbeddingKind::Identity);
  for (Elem x = 0; x < 4; ++x) EXPECT_EQ(id(x), x);

  auto inc = embedding_make(f4, f16, f2);
  EXPECT_EQ(inc.kind(), EmbeddingKind::Inclusion);
  EXPECT_EQ(rank(inc.matrix()), 2u);
  EXPECT_EQ(inc(0), 0u);
  EXPECT_EQ(inc(1), 1u);
  const Elem w = inc(2);
  EXPECT_EQ(f16->order(w), 3u);
  EXPECT_EQ(f16->add(f16->add(f16->mul(w, w), w), 1), 0u);
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) EXPECT_EQ(inc(f4->mul(x, y)), f16->mul(inc(x), inc(y)));

  auto pre = embedding_make(f4, f8, f2);
  EXPECT_EQ(pre.kind(), EmbeddingKind::Prefix);
  EXPECT_EQ(rank(pre.matrix()), 2u);
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) EXPECT_EQ(pre(f4->add(x, y)), f8->add(pre(x), pre(y)));

  try {
    embedding_make(f8, f4, f2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
  EXPECT_THROW(embed(inc, Felt(f8, 1)), Error);
  EXPECT_EQ(embed(inc, Felt(f4, 1)), Felt(f16, 1));
}

TEST(Embedding, OverLargerBase) {
  // F_16 -> F_256 over F_4: inclusion must fix the embedded F_4.
  auto f4 = field_make(2, 2), f16 = field_make(2, 4), f256 = field_make(2, 8);
  auto map = embedding_make(f16, f256, f4);
  EXPECT_EQ(map.kind(), EmbeddingKind::Inclusion);
  EXPECT_EQ(map.matrix().rows, 2u);
  EXPECT_EQ(map.matrix().cols, 4u);
  auto i16 = inclusion(f4, f16), i256 = inclusion(f4, f256);
  for (Elem b = 0; b < 4; ++b) EXPECT_EQ(map((*i16)(b)), (*i256)(b));
  for (Elem x = 0; x < 16; ++x)
    for (Elem y = 0; y < 16; ++y) EXPECT_EQ(map(f16->mul(x, y)), f256->mul(map(x), map(y)));
}

TEST(Embedding, ExplicitMatrix) {
  auto f2 = field_make(2, 1), f4 = field_make(2, 2), f8 = field_make(2, 3);
  Matrix rows(f2, 2, 3);
  rows.entries = {0, 1, 0, 0, 0, 1};
  auto map = embedding_from_matrix(f4, f8, rows);
  EXPECT_EQ(map.matrix(), rows);
  EXPECT_EQ(map.kind(), EmbeddingKind::Explicit);
  Matrix bad(f2, 2, 3);
  bad.entries = {1, 1, 0, 1, 1, 0};
  try {
    embedding_from_matrix(f4, f8, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateCodec);
  }
}
