#include <gtest/gtest.h>

#include <random>

#include "sumrank/families.hpp"

using namespace sumrank;

namespace {

const SRCode& as_sr(const FamilyCode& fc) { return dynamic_cast<const SRCode&>(*fc.code); }

std::vector<std::size_t> dims(const SRCode& c) {
  std::vector<std::size_t> out;
  for (const auto& comp : c.components()) out.push_back(comp.code.dimension());
  return out;
}

const Annotation* find_annotation(const FamilyCode& fc, const std::string& name) {
  for (const auto& a : fc.annotations)
    if (a.name == name) return &a;
  return nullptr;
}

CoeffWord zero_coeffs(const SRGeometry& g) {
  CoeffWord cw;
  cw.coeffs.assign(static_cast<std::size_t>(g.n()), std::vector<Elem>(g.t, 0));
  return cw;
}

// Random member: each component row is a random combination of its generator rows.
SRWord random_member(const SRCode& c, std::mt19937& rng) {
  auto cw = zero_coeffs(c.geometry());
  for (std::size_t j = 0; j < c.components().size(); ++j) {
    const auto& code = c.components()[j].code;
    std::vector<Elem> coeffs(code.dimension());
    for (auto& x : coeffs) x = static_cast<Elem>(rng() % code.field->size());
    cw.coeffs[j] = code.encode(coeffs);
  }
  return codec_forward(c.geometry(), cw);
}

std::vector<SRWord> all_members(const SumRankCode& code) {
  const std::uint32_t s = code.codec()->symbols();
  const std::size_t t = code.positions();
  SRWord w;
  w.blocks.assign(t, 0);
  std::vector<SRWord> out = {w};
  while (true) {
    std::size_t d = 0;
    while (d < t && ++w.blocks[d] == s) w.blocks[d++] = 0;
    if (d == t) break;
    if (code.member(w)) out.push_back(w);
  }
  return out;
}

int min_weight(const BlockCodec& codec, const std::vector<SRWord>& words) {
  int best = kInfiniteDistance;
  for (const auto& w : words) {
    const int wt = wt_sr(codec, w);
    if (wt > 0) best = std::min(best, wt);
  }
  return best;
}

}  // namespace

TEST(Families, Thm31Shapes) {
  auto a = thm31_code(4, 3, 1);
  EXPECT_EQ(a.code->positions(), 63u);
  EXPECT_EQ(a.code->codimension_fq(), 7u);
  EXPECT_EQ(family_id(a.params), "THM31_q4_m3_l1");
  auto b = thm31_code(4, 2, 1);
  EXPECT_EQ(b.code->positions(), 15u);
  EXPECT_EQ(b.code->dimension_fq(), 10u);
  auto c = thm31_code(5, 2, 3);
  EXPECT_EQ(c.code->positions(), 8u);
  ASSERT_NE(find_annotation(c, "lambda-condition"), nullptr);
  EXPECT_FALSE(find_annotation(c, "lambda-condition")->pass);
  EXPECT_TRUE(find_annotation(a, "lambda-condition")->pass);
}

TEST(Families, Thm31BadDivisor) {
  try {
    thm31_code(4, 2, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadDivisor);
  }
}

TEST(Families, Thm32Shapes) {
  auto a = thm32_code(3, 3);
  EXPECT_EQ(a.code->positions(), 26u);
  EXPECT_EQ(a.code->dimension_fq(), 19u);
  EXPECT_TRUE(find_annotation(a, "boston-pattern")->pass);
  auto b = thm32_code(5, 2);
  EXPECT_EQ(b.code->positions(), 24u);
  EXPECT_EQ(b.code->dimension_fq(), 19u);
  EXPECT_TRUE(find_annotation(b, "boston-pattern")->pass);
  EXPECT_EQ(thm32_code(3, 2).code->positions(), 8u);
  try {
    thm32_code(7, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedAlphabet);
  }
}

TEST(Families, Thm41Shapes) {
  auto a = thm41_code(2, 3, 1, 1);
  const auto& sr = as_sr(a);
  EXPECT_EQ(sr.positions(), 7u);
  EXPECT_EQ(dims(sr), (std::vector<std::size_t>{4, 6, 6}));
  EXPECT_EQ(sr.codimension_total(), 5u);
  EXPECT_EQ(sr.analytic_distance_bound(), 4);
  EXPECT_EQ(family_id(a.params), "THM41_q2_s3_m1_l1");

  // Two components only when s = 2, so the F_4 codimension is 5 + 1.
  auto b = thm41_code(2, 2, 2, 1);
  EXPECT_EQ(b.code->positions(), 15u);
  EXPECT_EQ(dims(as_sr(b)), (std::vector<std::size_t>{10, 14}));
  EXPECT_EQ(as_sr(b).codimension_total(), 6u);
  EXPECT_EQ(thm41_code(2, 2, 2, 3).code->positions(), 5u);
}

TEST(Families, Cor41Shapes) {
  auto a = cor41_code(2, 2, 3, 1, 1);
  const auto& sr = as_sr(a);
  EXPECT_EQ(sr.positions(), 7u);
  EXPECT_EQ(sr.geometry().n(), 2);
  EXPECT_EQ(sr.geometry().m(), 3);
  EXPECT_EQ(dims(sr), (std::vector<std::size_t>{4, 6}));
  EXPECT_EQ(rank(sr.codec()->codec_matrix()), 6u);
  const auto* lam = find_annotation(a, "lambda-condition");
  ASSERT_NE(lam, nullptr);
  EXPECT_FALSE(lam->pass);
  EXPECT_NE(lam->detail.find("0.74"), std::string::npos);
}

TEST(Families, Thm51Shapes) {
  auto a = thm51_code(2);
  const auto& sr = as_sr(a);
  EXPECT_EQ(sr.positions(), 15u);
  EXPECT_EQ(dims(sr), (std::vector<std::size_t>{11, 14}));
  EXPECT_EQ(sr.components()[0].cyclic->defining_set, (std::vector<std::uint64_t>{0, 1, 4, 5}));
  EXPECT_TRUE(find_annotation(a, "ht-bound")->pass);
  EXPECT_EQ(sr.codimension_total(), 5u);
}

TEST(Families, Thm61Shapes) {
  auto a = thm61_code(2, 2, 2);
  EXPECT_EQ(a.code->positions(), 5u);
  EXPECT_EQ(dims(as_sr(a)), (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(a.code->dimension_fq(), 14u);
  EXPECT_EQ(a.code->analytic_distance_bound(), 3);
  auto b = thm61_code(2, 3, 2);
  EXPECT_EQ(b.code->positions(), 9u);
  EXPECT_EQ(dims(as_sr(b)), (std::vector<std::size_t>{7, 8}));
  EXPECT_EQ(rank(b.code->codec()->codec_matrix()), 6u);
  EXPECT_EQ(thm61_code(3, 2, 2).code->positions(), 10u);
}

TEST(Families, Thm71RefusesUncertifiedInputs) {
  const auto F4 = field_of_size(4);
  for (const auto& c0 : {hamming_code_make(F4, 2), parity_code(F4, 7)}) {
    try {
      thm71_code(c0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InputNotVerified);
    }
  }
  try {
    thm71_code(parity_code(field_of_size(2), 7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WrongField);
  }
}

TEST(Families, Thm71SearchPipeline) {
  const auto spec = thm71_search();
  ASSERT_TRUE(spec.has_value());
  const auto c0 = input_code(*spec);
  EXPECT_EQ(c0.field->size(), 4u);
  auto fc = thm71_code(c0);
  EXPECT_EQ(fc.code->codec()->n(), 2);
  EXPECT_EQ(fc.code->codec()->m(), 2);
  EXPECT_EQ(fc.claims.distance, 4);
  EXPECT_EQ(fc.claims.covering_radius, 2);
}

TEST(Families, GeneratorImagesAreMembers) {
  std::vector<FamilyCode> codes = {thm41_code(2, 3, 1, 1), cor41_code(2, 2, 3, 1, 1), thm51_code(2), thm61_code(2, 2, 2),
                                   thm61_code(2, 3, 2)};
  for (const auto& fc : codes) {
    const auto& sr = as_sr(fc);
    for (std::size_t j = 0; j < sr.components().size(); ++j) {
      const auto& g = sr.components()[j].code.generator;
      for (std::size_t r = 0; r < g.rows; ++r) {
        auto cw = zero_coeffs(sr.geometry());
        for (std::size_t c = 0; c < g.cols; ++c) cw.coeffs[j][c] = g(r, c);
        const auto w = codec_forward(sr.geometry(), cw);
        EXPECT_TRUE(sr.member(w)) << family_id(fc.params) << " component " << j << " row " << r;
        EXPECT_TRUE(sr.member_by_components(w));
      }
    }
  }
}

TEST(Families, BlockwiseCyclicShiftClosure) {
  std::mt19937 rng(7);
  for (const auto& fc : {thm41_code(2, 3, 1, 1), thm51_code(2), thm41_code(2, 2, 2, 3)}) {
    const auto& sr = as_sr(fc);
    for (int trial = 0; trial < 20; ++trial) {
      SRWord w = random_member(sr, rng);
      ASSERT_TRUE(sr.member(w));
      std::rotate(w.blocks.rbegin(), w.blocks.rbegin() + 1, w.blocks.rend());
      EXPECT_TRUE(sr.member(w)) << family_id(fc.params);
    }
  }
}

TEST(Families, DescriptorRoundTrip) {
  std::mt19937 rng(3);
  for (const auto& fc : {thm41_code(2, 3, 1, 1), cor41_code(2, 2, 3, 1, 1), thm61_code(2, 3, 2), thm31_code(4, 2, 1)}) {
    const Json d = descriptor_to_json(fc);
    const FamilyCode back = descriptor_from_json(Json::parse(d.dump()));
    EXPECT_EQ(descriptor_to_json(back).dump(), d.dump());
    EXPECT_EQ(family_id(back.params), family_id(fc.params));
    for (int i = 0; i < 200; ++i) {
      SRWord w;
      for (std::size_t p = 0; p < fc.code->positions(); ++p)
        w.blocks.push_back(static_cast<std::uint32_t>(rng() % fc.code->codec()->symbols()));
      EXPECT_EQ(back.code->member(w), fc.code->member(w));
    }
  }
}

TEST(Families, DescriptorRejectsTampering) {
  Json d = descriptor_to_json(thm61_code(2, 2, 2));
  Json bad_field = d;
  bad_field["code"]["component_field"]["modulus"] = Json::array({1, 0, 1});
  EXPECT_THROW(descriptor_from_json(bad_field), Error);
  Json bad_distance = d;
  bad_distance["code"]["components"][1]["distance"] = 3;
  EXPECT_THROW(descriptor_from_json(bad_distance), Error);
}

TEST(Families, ParamsJson) {
  auto p = thm41_code(2, 3, 1, 1).params;
  EXPECT_EQ(family_id(params_from_json(params_to_json(p))), "THM41_q2_s3_m1_l1");
  Json bad = params_to_json(p);
  bad["colour"] = 3;
  EXPECT_THROW(params_from_json(bad), Error);
  EXPECT_THROW(family_from_name("THM99"), Error);
}

TEST(Families, Cor81Shape) {
  auto a = cor81_code(2, 3, 1);
  EXPECT_EQ(a.code->positions(), 14u);
  EXPECT_EQ(a.code->codimension_fq(), 18u);
  EXPECT_EQ(a.code->analytic_distance_bound(), 4);
  EXPECT_EQ(a.default_mode, Mode::Compositional);
  auto b = cor81_code(2, 2, 2);
  EXPECT_EQ(b.code->positions(), 30u);
  EXPECT_EQ(b.code->codimension_fq(), 14u);
}

TEST(Plotkin, ExhaustiveDistanceEquality) {
  std::mt19937 rng(11);
  const auto F4 = field_of_size(4);
  int checked = 0;
  for (std::size_t t = 1; t <= 3; ++t) {
    const auto g = geometry_make(2, 2, 2, t);
    for (int trial = 0; trial < 6; ++trial) {
      auto random_sr = [&]() {
        std::vector<Component> comps;
        for (int j = 0; j < 2; ++j) {
          const std::size_t k = std::min<std::size_t>(t, 1 + rng() % 2);
          Matrix gen(F4, k, t);
          for (auto& e : gen.entries) e = static_cast<Elem>(rng() % 4);
          comps.push_back(component_from(code_from_generator(gen), "linear"));
        }
        return sr_build(std::move(comps), g);
      };
      auto c1 = random_sr(), c2 = random_sr();
      const auto m1 = all_members(*c1), m2 = all_members(*c2);
      const int d1 = min_weight(*g.codec, m1), d2 = min_weight(*g.codec, m2);
      int best = kInfiniteDistance;
      for (const auto& u : m1)
        for (const auto& v : m2) {
          const SRWord uv = word_add(*g.codec, u, v);
          const int wt = wt_sr(*g.codec, u) + wt_sr(*g.codec, uv);
          if (wt > 0) best = std::min(best, wt);
        }
      EXPECT_EQ(best, std::min(2 * d1, d2)) << "t=" << t;
      const auto p = plotkin(c1, c2);
      // Spot-check the Plotkin membership against the (u | u + v) construction.
      for (std::size_t i = 0; i < std::min<std::size_t>(m1.size(), 8); ++i) {
        SRWord w = m1[i];
        const SRWord uv = word_add(*g.codec, m1[i], m2[i % m2.size()]);
        w.blocks.insert(w.blocks.end(), uv.blocks.begin(), uv.blocks.end());
        EXPECT_TRUE(p->member(w));
        EXPECT_TRUE(p->member_by_halves(w));
      }
      if (t <= 2) EXPECT_EQ(min_weight(*g.codec, all_members(*p)), best);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 18);
}

TEST(Plotkin, GeometryMismatch) {
  auto a = thm61_code(2, 2, 2);
  auto b = thm41_code(2, 3, 1, 1);
  try {
    plotkin(a.code, b.code);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GeometryMismatch);
  }
}
