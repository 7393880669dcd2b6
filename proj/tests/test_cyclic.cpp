#include <gtest/gtest.h>

#include <random>

#include "sumrank/cyclic.hpp"

using namespace sumrank;

namespace {

using U = std::vector<std::uint64_t>;

// Generator polynomial prod_{i in T} (x - beta^i), mapped back to F_Q.
std::vector<Elem> generator_poly(const CyclicCode& c) {
  const Field& s = *c.splitting;
  std::vector<Elem> g{1};
  for (auto i : c.defining_set) {
    const Elem root = s.pow(c.beta, i);
    std::vector<Elem> next(g.size() + 1, 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      next[k + 1] = s.add(next[k + 1], g[k]);
      next[k] = s.sub(next[k], s.mul(root, g[k]));
    }
    g = std::move(next);
  }
  auto inc = inclusion(c.field, c.splitting);
  std::vector<Elem> out;
  for (auto x : g) {
    auto pre = inc->preimage(x);
    EXPECT_TRUE(pre.has_value());
    out.push_back(pre.value_or(0));
  }
  return out;
}

// Remainder of word(x) modulo monic g(x) over F_Q is zero.
bool divisible(const Field& f, std::vector<Elem> w, const std::vector<Elem>& g) {
  const std::size_t dg = g.size() - 1;
  for (std::size_t d = w.size(); d-- > dg;) {
    const Elem c = w[d];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dg; ++i) w[d - dg + i] = f.sub(w[d - dg + i], f.mul(c, g[i]));
  }
  for (auto x : w)
    if (x != 0) return false;
  return true;
}

int hamming_weight(const std::vector<Elem>& w) {
  return static_cast<int>(std::count_if(w.begin(), w.end(), [](Elem x) { return x != 0; }));
}

}  // namespace

TEST(Cosets, Examples) {
  EXPECT_EQ(coset(15, 4, 0), U{0});
  EXPECT_EQ(coset(15, 4, 1), (U{1, 4}));
  EXPECT_EQ(coset(26, 3, 5), (U{5, 15, 19}));
  try {
    coset(15, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCoprime);
  }
  auto table = coset_table(26, 3);
  std::size_t total = 0;
  for (const auto& c : table.cosets) {
    total += c.size();
    for (auto x : c) EXPECT_NE(std::find(c.begin(), c.end(), x * 3 % 26), c.end());
  }
  EXPECT_EQ(total, 26u);
}

TEST(Cyclic, DefiningSets) {
  auto f4 = field_make(2, 2), f8 = field_make(2, 3), f3 = field_make(3, 1);
  auto c = cyclic_make(15, f4, {0, 1, 2});
  EXPECT_EQ(c.defining_set, (U{0, 1, 2, 4, 8}));
  EXPECT_EQ(c.dimension(), 10u);
  EXPECT_EQ(c.code.dimension(), 10u);
  auto c7 = cyclic_make(7, f8, {0, 1, 2});
  EXPECT_EQ(c7.defining_set, (U{0, 1, 2}));
  EXPECT_EQ(c7.code.dimension(), 4u);
  auto c5 = cyclic_make(15, f4, {0, 1, 5});
  EXPECT_EQ(c5.defining_set, (U{0, 1, 4, 5}));
  EXPECT_EQ(c5.code.dimension(), 11u);
  auto t32 = cyclic_make(26, f3, {0, 1, 5});
  EXPECT_EQ(t32.code.dimension(), 19u);
  EXPECT_THROW(cyclic_make(15, f4, {15}), Error);
  EXPECT_THROW(cyclic_make(14, f4, {1}), Error);
  EXPECT_THROW(cyclic_from_defining_set(15, f4, {1}), Error);
}

TEST(Cyclic, MembershipAgreesWithGeneratorPolynomial) {
  struct Case {
    std::uint64_t n;
    FieldPtr f;
    U reps;
  };
  const std::vector<Case> cases = {{7, field_make(2, 1), {1}},     {7, field_make(2, 1), {0, 1}}, {5, field_make(2, 2), {1}},
                                   {5, field_make(2, 2), {0, 2}},  {15, field_make(2, 1), {1, 3}}, {8, field_make(3, 1), {0, 1}},
                                   {9, field_make(2, 1), {1}},      {13, field_make(3, 1), {1}}};
  for (const auto& cs : cases) {
    const auto c = cyclic_make(cs.n, cs.f, cs.reps);
    const auto g = generator_poly(c);
    EXPECT_EQ(g.size(), c.defining_set.size() + 1);
    const Field& f = *cs.f;
    // Every message polynomial times g is a member.
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Elem> msg(c.dimension());
      for (auto& x : msg) x = rng() % f.size();
      std::vector<Elem> w(cs.n, 0);
      for (std::size_t i = 0; i < msg.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) w[i + j] = f.add(w[i + j], f.mul(msg[i], g[j]));
      EXPECT_TRUE(c.code.member(w));
      EXPECT_TRUE(c.member_by_roots(w));
      // Cyclic shift stays in the code.
      std::rotate(w.rbegin(), w.rbegin() + 1, w.rend());
      EXPECT_TRUE(c.code.member(w));
    }
    // Random words: both membership tests agree with divisibility.
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Elem> w(cs.n);
      for (auto& x : w) x = rng() % f.size();
      if (trial % 2) {
        // perturb a codeword in one coordinate to get near-misses
        w = c.code.encode(std::vector<Elem>(c.dimension(), 1));
        w[trial % cs.n] = f.add(w[trial % cs.n], 1);
      }
      const bool div = divisible(f, w, g);
      EXPECT_EQ(c.code.member(w), div);
      EXPECT_EQ(c.member_by_roots(w), div);
    }
    // Generator rows are members.
    for (std::size_t r = 0; r < c.code.generator.rows; ++r) {
      std::vector<Elem> row(c.code.generator.entries.begin() + static_cast<std::ptrdiff_t>(r * cs.n),
                            c.code.generator.entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * cs.n));
      EXPECT_TRUE(divisible(f, row, g));
    }
  }
}

TEST(Bounds, Bch) {
  EXPECT_EQ(bch_designed_distance({}, 7), 1);
  EXPECT_EQ(bch_designed_distance({0, 1, 2}, 7), 4);
  EXPECT_EQ(bch_designed_distance({0, 1, 4, 5}, 15), 3);
  EXPECT_EQ(bch_designed_distance({0, 6}, 7), 3);  // wraps around
}

TEST(Bounds, HartmannTzeng) {
  EXPECT_GE(ht_bound({0, 1, 4, 5}, 15), 4);
  EXPECT_EQ(ht_bound({3}, 7), 2);
  EXPECT_EQ(ht_bound({0, 1, 2}, 7), 4);
  EXPECT_EQ(ht_bound({}, 7), 1);
}

TEST(Bounds, Boston) {
  auto t = cyclic_make(26, field_make(3, 1), {0, 1, 5}).defining_set;
  EXPECT_TRUE(boston_check(t));
  EXPECT_TRUE(boston_check({0, 1, 3, 5}));
  EXPECT_FALSE(boston_check(cyclic_make(15, field_make(2, 2), {0, 1, 2}).defining_set));
  auto t5 = cyclic_make(24, field_make(5, 1), {0, 1, 3}).defining_set;
  EXPECT_TRUE(boston_check(t5));
}

TEST(Hamming, Construction) {
  auto h = hamming_code_make(field_make(2, 2), 2);
  EXPECT_EQ(h.length, 5u);
  EXPECT_EQ(h.dimension(), 3u);
  auto h2 = hamming_code_make(field_make(2, 1), 3);
  EXPECT_EQ(h2.length, 7u);
  EXPECT_EQ(h2.dimension(), 4u);
  auto h8 = hamming_code_make(field_make(2, 3), 2);
  EXPECT_EQ(h8.length, 9u);
  EXPECT_EQ(h8.dimension(), 7u);
  for (const auto* code : {&h, &h2, &h8}) {
    auto cert = min_distance_hamming(*code, 4, 1000000000);
    EXPECT_TRUE(cert.exact);
    EXPECT_EQ(cert.distance, 3);
    EXPECT_TRUE(code->member(cert.witness));
    EXPECT_EQ(hamming_weight(cert.witness), 3);
  }
}

TEST(Hamming, DistanceExamples) {
  auto f4 = field_make(2, 2), f3 = field_make(3, 1);
  auto t31 = cyclic_make(63, f4, {0, 1, 2});
  EXPECT_EQ(t31.code.dimension(), 56u);
  auto serial = min_distance_hamming(t31.code, 4, 1000000000, 1);
  EXPECT_TRUE(serial.exact);
  EXPECT_EQ(serial.distance, 4);
  EXPECT_TRUE(t31.code.member(serial.witness));
  EXPECT_TRUE(t31.member_by_roots(serial.witness));
  auto parallel = min_distance_hamming(t31.code, 4, 1000000000, 4);
  EXPECT_EQ(parallel.witness, serial.witness);

  auto t32 = cyclic_make(26, f3, {0, 1, 5});
  auto d32 = min_distance_hamming(t32.code, 4, 1000000000);
  EXPECT_EQ(d32.distance, 4);
  EXPECT_TRUE(d32.exact);

  auto rep = cyclic_from_defining_set(5, f4, {1, 2, 3, 4});
  auto drep = min_distance_hamming(rep.code, 5, 1000000000);
  EXPECT_EQ(drep.distance, 5);

  auto small = min_distance_hamming(t32.code, 3, 1000000000);
  EXPECT_FALSE(small.exact);
  EXPECT_EQ(small.distance, 4);
  try {
    min_distance_hamming(t31.code, 4, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(Hamming, CoveringRadius) {
  auto f4 = field_make(2, 2);
  EXPECT_EQ(covering_radius_hamming(hamming_code_make(f4, 2), 5, 1000000), 1);
  EXPECT_EQ(covering_radius_hamming(hamming_code_make(field_make(2, 1), 3), 5, 1000000), 1);
  EXPECT_EQ(covering_radius_hamming(parity_code(f4, 5), 5, 1000000), 1);
  EXPECT_EQ(covering_radius_hamming(trivial_code(f4, 5), 5, 1000000), 0);
  auto rep = cyclic_from_defining_set(5, f4, {1, 2, 3, 4});
  try {
    covering_radius_hamming(rep.code, 2, 1000000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CapReached);
  }
}

TEST(Hamming, BoundsNeverExceedTruth) {
  auto f4 = field_make(2, 2), f2 = field_make(2, 1), f3 = field_make(3, 1);
  struct Case {
    std::uint64_t n;
    FieldPtr f;
    U reps;
  };
  const std::vector<Case> cases = {{15, f4, {0, 1, 2}}, {15, f4, {0, 1, 5}}, {7, f2, {1}},     {15, f2, {1, 3}},
                                   {26, f3, {0, 1, 5}}, {13, f3, {1}},       {21, f4, {0, 1}}, {17, f4, {1}}};
  for (const auto& cs : cases) {
    auto c = cyclic_make(cs.n, cs.f, cs.reps);
    auto cert = min_distance_hamming(c.code, 6, 1000000000);
    ASSERT_TRUE(cert.exact) << cs.n;
    EXPECT_GE(cert.distance, bch_designed_distance(c.defining_set, cs.n));
    EXPECT_GE(cert.distance, ht_bound(c.defining_set, cs.n));
    if (boston_check(c.defining_set)) EXPECT_GE(cert.distance, 4);
    if (c.code.codimension() * static_cast<std::size_t>(cs.f->degree()) <= 16) {
      const int r = covering_radius_hamming(c.code, 8, 1000000000);
      EXPECT_GE(r, (cert.distance - 1) / 2);
    }
  }
}
