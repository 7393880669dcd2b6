#include <gtest/gtest.h>

#include <random>

#include "sumrank/certify.hpp"

using namespace sumrank;

namespace {

Budget serial_budget() {
  Budget b;
  b.workers = 1;
  return b;
}

std::shared_ptr<const SRCode> hamming_metric(const LinearCode& c) {
  return sr_build({component_from(c, "linear")}, geometry_make(c.field->size(), 1, 1, c.length));
}

std::shared_ptr<const SRCode> whole_space(std::uint64_t q, int n, int m, std::size_t t) {
  const auto g = geometry_make(q, n, m, t);
  std::vector<Component> comps;
  for (int j = 0; j < n; ++j) comps.push_back(component_from(trivial_code(g.codec->codomain(), t), "trivial"));
  return sr_build(std::move(comps), g);
}

const ClaimResult& result(const CertifyRun& run, const std::string& claim) {
  for (const auto& r : run.results)
    if (r.claim == claim) return r;
  throw std::runtime_error("missing claim " + claim);
}

}  // namespace

TEST(Distance, Thm41ExhaustiveWithWitness) {
  const auto fc = thm41_code(2, 3, 1, 1);
  const auto c = certify_dsr(*fc.code, 4, Mode::Exhaustive, serial_budget());
  ASSERT_TRUE(c.exact);
  EXPECT_EQ(c.upper, 4);
  ASSERT_EQ(c.emptiness.size(), 3u);
  EXPECT_EQ(c.emptiness[0], 343);
  EXPECT_EQ(c.emptiness[2], 4723943);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_TRUE(fc.code->member(*c.witness));
  EXPECT_EQ(wt_sr(*fc.code->codec(), *c.witness), 4);
}

TEST(Distance, Thm51AndThm61) {
  const auto a = certify_dsr(*thm51_code(2).code, 4, Mode::Exhaustive, serial_budget());
  EXPECT_TRUE(a.exact);
  EXPECT_EQ(a.upper, 4);
  const auto b = certify_dsr(*thm61_code(2, 2, 2).code, 3, Mode::Exhaustive, serial_budget());
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.upper, 3);
}

TEST(Distance, BudgetExhaustionIsInconclusive) {
  Budget tiny = serial_budget();
  tiny.membership_tests = 1000;
  const auto c = certify_dsr(*thm41_code(2, 3, 1, 1).code, 4, Mode::Exhaustive, tiny);
  EXPECT_FALSE(c.exact);
  EXPECT_FALSE(c.note.empty());
}

TEST(Distance, CompositionalNeedsAnalyticBound) {
  const auto fc = cor81_code(2, 3, 1);
  const auto c = certify_dsr(*fc.code, 4, Mode::Compositional, serial_budget());
  EXPECT_TRUE(c.exact);
  EXPECT_EQ(c.upper, 4);
  EXPECT_EQ(c.lower_source, "analytic");
  const auto prefix = certify_dsr(*cor41_code(2, 2, 3, 1, 1).code, 4, Mode::Compositional, serial_budget());
  EXPECT_FALSE(prefix.exact);
}

TEST(Covering, Thm61Squares) {
  const auto c = covering_radius_sr(*thm61_code(2, 2, 2).code, 4, serial_budget());
  ASSERT_TRUE(c.complete);
  EXPECT_EQ(c.radius, 2);
  EXPECT_EQ(c.syndromes, 64u);
}

TEST(Covering, Thm61Rectangular) {
  const auto fc = thm61_code(2, 3, 2);
  EXPECT_EQ(rank(fc.code->codec()->codec_matrix()), 6u);
  const auto c = covering_radius_sr(*fc.code, 4, serial_budget());
  ASSERT_TRUE(c.complete);
  EXPECT_EQ(c.radius, 2);
  EXPECT_EQ(c.syndromes, 512u);
}

TEST(Covering, WholeSpace) {
  const auto c = covering_radius_sr(*whole_space(2, 2, 2, 3), 4, serial_budget());
  EXPECT_EQ(c.radius, 0);
  EXPECT_EQ(c.syndromes, 1u);
}

TEST(Covering, CapReachedIsIncomplete) {
  const auto c = covering_radius_sr(*thm61_code(2, 2, 2).code, 1, serial_budget());
  EXPECT_FALSE(c.complete);
  EXPECT_FALSE(c.radius.has_value());
}

TEST(Bounds, SpherePacking) {
  const auto r41 = sphere_packing_check(*thm41_code(2, 3, 1, 1).code, 4);
  EXPECT_EQ(r41.v_half, 52823);
  EXPECT_EQ(r41.q_codim, 32768);
  EXPECT_TRUE(r41.direct);
  EXPECT_TRUE(r41.optimal);

  const auto r51 = sphere_packing_check(*thm51_code(2).code, 4);
  EXPECT_EQ(r51.v_half, 8731);
  EXPECT_EQ(r51.q_codim, 1024);
  EXPECT_TRUE(r51.optimal);

  // Two components at s = 2: codimension 12 over F_2, and 8731 > 4096.
  const auto r22 = sphere_packing_check(*thm41_code(2, 2, 2, 1).code, 4);
  EXPECT_EQ(r22.v_half, 8731);
  EXPECT_EQ(r22.q_codim, 4096);
  EXPECT_TRUE(r22.optimal);

  const auto r61 = sphere_packing_check(*thm61_code(2, 2, 2).code, 3);
  EXPECT_EQ(r61.v_inner, 46);
  EXPECT_EQ(r61.q_codim, 64);
  EXPECT_FALSE(r61.direct);
  EXPECT_TRUE(r61.punctured);
  EXPECT_EQ(r61.v_ceil, 886);
  EXPECT_EQ(r61.ceil_lhs, 886 * BigInt(1 << 14));
  EXPECT_EQ(r61.ambient, BigInt(1) << 20);
  EXPECT_TRUE(r61.ceil_comparison);
}

TEST(Bounds, HammingVolumeComparisons) {
  const auto r31 = sphere_packing_check(*thm31_code(4, 3, 1).code, 4);
  EXPECT_EQ(r31.v_half, 17767);
  EXPECT_EQ(r31.q_codim, 16384);
  EXPECT_TRUE(r31.optimal);
  const auto r32 = sphere_packing_check(*thm32_code(3, 3).code, 4);
  EXPECT_EQ(r32.v_half, 1353);
  EXPECT_EQ(r32.q_codim, 2187);
  EXPECT_FALSE(r32.optimal);
}

TEST(Bounds, DefectClassificationDensity) {
  EXPECT_EQ(singleton_defect(*thm51_code(2).code, 4), 4);
  EXPECT_EQ(singleton_defect(*thm61_code(2, 2, 2).code, 3), 2);
  EXPECT_EQ(singleton_defect(*whole_space(2, 2, 2, 3), 1), 0);
  EXPECT_EQ(classify(3, 1), Classification::Perfect);
  EXPECT_EQ(classify(3, 2), Classification::QuasiPerfect);
  EXPECT_EQ(classify(1, 0), Classification::Perfect);
  EXPECT_EQ(classify(4, 3), Classification::Neither);
  EXPECT_EQ(packing_density(*thm41_code(2, 3, 1, 1).code, 4), Rational(344, 32768));
  EXPECT_EQ(packing_density(*thm61_code(2, 2, 2).code, 3), Rational(46, 64));
  const auto ham = hamming_metric(hamming_code_make(field_of_size(4), 2));
  EXPECT_EQ(packing_density(*ham, 3), Rational(1));
}

TEST(Consistency, HammingMetricAgreesWithCyclicCertifiers) {
  const auto F4 = field_of_size(4), F2 = field_of_size(2), F3 = field_of_size(3);
  std::vector<LinearCode> codes = {hamming_code_make(F4, 2), hamming_code_make(F2, 3), hamming_code_make(F3, 2),
                                   parity_code(F4, 6), cyclic_make(15, F4, {0, 1, 2}).code, cyclic_make(8, F3, {0, 1}).code};
  for (const auto& c : codes) {
    const auto sr = hamming_metric(c);
    const auto dh = min_distance_hamming(c, static_cast<int>(c.length), 100'000'000);
    const auto ds = certify_dsr(*sr, std::nullopt, Mode::Exhaustive, serial_budget());
    ASSERT_TRUE(dh.exact);
    ASSERT_TRUE(ds.exact);
    EXPECT_EQ(*ds.upper, dh.distance);
    const int rh = covering_radius_hamming(c, 6, 100'000'000);
    const auto rs = covering_radius_sr(*sr, 6, serial_budget());
    ASSERT_TRUE(rs.radius.has_value());
    EXPECT_EQ(*rs.radius, rh);
    // Monotonicity.
    EXPECT_GE(*rs.radius, (*ds.upper - 1) / 2);
  }
  const auto perfect = hamming_metric(hamming_code_make(F4, 2));
  const auto d = certify_dsr(*perfect, 3, Mode::Exhaustive, serial_budget());
  const auto r = covering_radius_sr(*perfect, 4, serial_budget());
  EXPECT_EQ(classify(*d.upper, *r.radius), Classification::Perfect);
}

TEST(Run, Thm61FullSuite) {
  CertifyOptions opt;
  opt.budget = serial_budget();
  const auto fc = thm61_code(2, 2, 2);
  const auto run = certify_family(fc, opt);
  EXPECT_EQ(result(run, "distance").computed, 3);
  EXPECT_EQ(result(run, "covering_radius").computed, 2);
  EXPECT_EQ(result(run, "classification").computed, "QUASI_PERFECT");
  EXPECT_EQ(result(run, "optimality").verdict, Verdict::Confirmed);
  EXPECT_EQ(result(run, "defect").computed, 2);
  EXPECT_EQ(result(run, "density").computed, "23/32");
  std::vector<Verdict> v;
  for (const auto& r : run.results) v.push_back(r.verdict);
  EXPECT_EQ(exit_code(v), 0);
}

TEST(Run, RefutedByCriterionExitsOne) {
  CertifyOptions opt;
  opt.budget = serial_budget();
  opt.claims = {"distance", "optimality"};
  const auto run = certify_family(thm32_code(3, 3), opt);
  EXPECT_EQ(result(run, "distance").verdict, Verdict::Confirmed);
  EXPECT_EQ(result(run, "optimality").verdict, Verdict::RefutedByCriterion);
  std::vector<Verdict> v;
  for (const auto& r : run.results) v.push_back(r.verdict);
  EXPECT_EQ(exit_code(v), 1);
}

TEST(Run, UnknownClaimRejected) {
  CertifyOptions opt;
  opt.claims = {"weight_enumerator"};
  EXPECT_THROW(certify_family(thm61_code(2, 2, 2), opt), Error);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(exit_code({Verdict::Confirmed, Verdict::Unclaimed}), 0);
  EXPECT_EQ(exit_code({Verdict::Confirmed, Verdict::Refuted}), 1);
  EXPECT_EQ(exit_code({Verdict::RefutedByCriterion}), 1);
  EXPECT_EQ(exit_code({Verdict::Refuted, Verdict::Inconclusive}), 2);
  EXPECT_EQ(exit_code({}), 0);
}

TEST(Certificates, ReplayAndTamper) {
  CertifyOptions opt;
  opt.budget = serial_budget();
  for (const auto& fc : {thm41_code(2, 3, 1, 1), thm61_code(2, 2, 2)}) {
    const auto run = certify_family(fc, opt);
    for (const auto& r : run.results) {
      const Json cert = certificate_json(fc, r);
      EXPECT_EQ(cert.at("fingerprint"), certificate_fingerprint(cert));
      EXPECT_EQ(replay_certificate(cert, *fc.code), "") << r.claim;
      if (r.claim == "distance") {
        Json bad = cert;
        auto& blocks = bad["evidence"]["witness"]["blocks"];
        blocks[0] = (blocks[0].get<std::uint32_t>() + 1) % fc.code->codec()->symbols();
        bad["fingerprint"] = certificate_fingerprint(bad);
        EXPECT_NE(replay_certificate(bad, *fc.code), "");
        Json stale = cert;
        stale["computed"] = 5;
        EXPECT_NE(replay_certificate(stale, *fc.code), "");
      }
    }
  }
}

TEST(Certificates, SerialAndParallelAgree) {
  for (const auto& fc : {thm41_code(2, 3, 1, 1), thm51_code(2), thm61_code(2, 2, 2)}) {
    CertifyOptions serial, parallel;
    serial.budget.workers = 1;
    parallel.budget.workers = 4;
    const auto a = certify_family(fc, serial), b = certify_family(fc, parallel), c = certify_family(fc, serial);
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
      const auto ja = certificate_json(fc, a.results[i]).dump();
      EXPECT_EQ(ja, certificate_json(fc, b.results[i]).dump());
      EXPECT_EQ(ja, certificate_json(fc, c.results[i]).dump());
    }
  }
}
