#include "sumrank/certify.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

namespace sumrank {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "CONFIRMED";
    case Verdict::Refuted: return "REFUTED";
    case Verdict::RefutedByCriterion: return "REFUTED-BY-THIS-CRITERION";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Unclaimed: return "UNCLAIMED";
  }
  return "?";
}

unsigned effective_workers(const Budget& b) {
  if (b.workers) return b.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::string big(const BigInt& x) { return x.str(); }

int max_weight(const SumRankCode& code) { return static_cast<int>(code.positions()) * code.codec()->n(); }

SRWord dense(const SumRankCode& code, const SparseWord& w) {
  SRWord out;
  out.blocks.assign(code.positions(), 0);
  for (auto [pos, sym] : w) out.blocks[pos] = sym;
  return out;
}

bool is_zero(const SRWord& w) {
  return std::all_of(w.blocks.begin(), w.blocks.end(), [](std::uint32_t b) { return b == 0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Distance

DistanceCertificate certify_dsr(const SumRankCode& code, std::optional<int> expected, Mode mode, const Budget& budget) {
  DistanceCertificate cert;
  cert.mode = mode;
  if (code.dimension_fq() == 0) {
    cert.exact = true;
    cert.lower = kInfiniteDistance;
    cert.lower_source = "zero code";
    cert.note = "the zero code has no nonzero codeword";
    return cert;
  }
  const auto bound = code.analytic_distance_bound();
  int start = 1;
  if (mode == Mode::Compositional) {
    if (!bound) {
      cert.lower_source = "analytic";
      cert.note = "no analytic lower bound for this embedding; use EXHAUSTIVE mode";
      return cert;
    }
    start = *bound;
    cert.lower = *bound;
    cert.lower_source = "analytic";
  } else {
    cert.lower_source = "exhaustive";
  }
  const int top = std::min(max_weight(code), std::max({start, expected.value_or(1), bound.value_or(1)}) + 2);

  // Structured candidates, bucketed by weight.
  std::vector<std::optional<SRWord>> structured(static_cast<std::size_t>(top) + 1);
  for (auto& w : code.structured_candidates(top)) {
    if (is_zero(w) || !code.member(w)) continue;
    const int wt = wt_sr(*code.codec(), w);
    if (wt <= top && !structured[static_cast<std::size_t>(wt)]) structured[static_cast<std::size_t>(wt)] = std::move(w);
  }

  const auto problem = code.enum_problem();
  const unsigned workers = effective_workers(budget);
  std::uint64_t remaining = budget.membership_tests;
  for (int w = start; w <= top; ++w) {
    cert.searched_cap = w;
    if (structured[static_cast<std::size_t>(w)]) {
      cert.witness = structured[static_cast<std::size_t>(w)];
      cert.witness_source = "structured";
      cert.upper = w;
      cert.exact = true;
      return cert;
    }
    const BigInt size = layer_size(problem, w);
    const bool fits = size <= BigInt(remaining);
    const auto found = find_codeword(problem, w, remaining, workers);
    if (found.witness) {
      cert.witness = dense(code, *found.witness);
      cert.witness_source = "enumeration";
      cert.witness_examined = found.examined;
      cert.upper = w;
      cert.exact = true;
      return cert;
    }
    if (!fits || !found.complete) {
      cert.note = "weight-" + std::to_string(w) + " layer has " + big(size) + " words, budget left " +
                  std::to_string(remaining) + "; examined prefix of " + big(found.examined);
      return cert;
    }
    remaining -= static_cast<std::uint64_t>(size);
    cert.emptiness.push_back(size);
    cert.lower = w + 1;
  }
  cert.note = "no codeword up to weight " + std::to_string(top);
  return cert;
}

// ---------------------------------------------------------------------------
// Covering radius

CoveringCertificate covering_radius_sr(const SumRankCode& code, int cap, const Budget& budget) {
  CoveringCertificate cert;
  const auto space = code.syndrome_space();
  cert.syndromes = space.size();
  if (cert.syndromes > budget.syndrome_cap) {
    cert.note = "syndrome space of " + std::to_string(cert.syndromes) + " exceeds the cap";
    return cert;
  }
  const auto problem = code.enum_problem();
  const auto res = cover_syndromes(problem, cap, budget.membership_tests, effective_workers(budget));
  cert.complete = res.complete;
  cert.layer_words = res.layer_words;
  cert.digest = fnv1a(res.first_hit.data(), res.first_hit.size());
  for (auto h : res.first_hit) {
    if (h == kUnhit) continue;
    if (cert.hits_by_weight.size() <= h) cert.hits_by_weight.resize(std::size_t{h} + 1, 0);
    ++cert.hits_by_weight[h];
  }
  if (res.complete) {
    cert.radius = res.radius;
    cert.lower = res.radius;
  } else {
    cert.lower = static_cast<int>(res.layer_words.size());
    cert.note = res.cap_reached ? "weight cap " + std::to_string(cap) + " reached before full coverage"
                                : "next layer exceeds the membership budget";
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Bounds

BigInt code_volume(const SumRankCode& code, int radius) {
  return vol_sr_uniform(code.codec()->base()->size(), code.codec()->n(), code.codec()->m(), code.positions(), radius);
}

SpherePackingReport sphere_packing_check(const SumRankCode& code, int d) {
  SpherePackingReport r;
  r.d = d;
  const std::uint64_t q = code.codec()->base()->size();
  const int n = code.codec()->n(), m = code.codec()->m();
  const std::size_t t = code.positions();
  const std::uint64_t N = static_cast<std::uint64_t>(n * m) * t;
  const std::uint64_t codim = code.codimension_fq();
  const std::uint64_t dim = code.dimension_fq();
  r.v_half = code_volume(code, d / 2);
  r.v_inner = code_volume(code, (d - 1) / 2);
  r.v_ceil = code_volume(code, (d + 1) / 2);
  r.q_codim = big_pow(q, codim);
  r.direct = r.v_half > r.q_codim;

  VolumeQuery pq;
  pq.q = q;
  pq.radius = (d - 1) / 2;
  pq.blocks.assign(t - 1, BlockSize{n, m});
  if (n > 1) pq.blocks.push_back(BlockSize{n - 1, m});
  r.punctured_volume = vol_sr(pq);
  const BigInt size = big_pow(q, dim);
  r.punctured_lhs = size * r.punctured_volume;
  r.punctured_rhs = big_pow(q, N - static_cast<std::uint64_t>(m));
  r.punctured = r.punctured_lhs > r.punctured_rhs;

  r.ceil_lhs = size * r.v_ceil;
  r.ambient = big_pow(q, N);
  r.ceil_comparison = r.ceil_lhs > r.ambient;
  r.optimal = r.direct || r.punctured;
  return r;
}

int singleton_defect(const SumRankCode& code, int d) {
  const int n = code.codec()->n(), m = code.codec()->m();
  if (n > m) throw Error(Errc::DimensionMismatch, "Singleton-like bound needs n <= m");
  const long long bound = static_cast<long long>(m) * (static_cast<long long>(n) * static_cast<long long>(code.positions()) - d + 1);
  return static_cast<int>(bound - static_cast<long long>(code.dimension_fq()));
}

Classification classify(int d, int r) {
  const int packing = (d - 1) / 2;
  if (r == packing) return Classification::Perfect;
  if (r == packing + 1) return Classification::QuasiPerfect;
  return Classification::Neither;
}

Rational packing_density(const SumRankCode& code, int d) {
  return Rational(code_volume(code, (d - 1) / 2), big_pow(code.codec()->base()->size(), code.codimension_fq()));
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

const std::vector<std::string> kClaimOrder = {"distance", "covering_radius", "optimality", "defect", "classification", "density"};

Json distance_evidence(const SumRankCode& code, const DistanceCertificate& c) {
  Json e;
  e["mode"] = mode_name(c.mode);
  e["lower_bound"] = c.lower;
  e["lower_source"] = c.lower_source;
  Json empt = Json::array();
  for (const auto& x : c.emptiness) empt.push_back(big(x));
  e["emptiness_words"] = empt;
  e["searched_cap"] = c.searched_cap;
  if (c.witness) {
    Json w;
    w["weight"] = wt_sr(*code.codec(), *c.witness);
    w["source"] = c.witness_source;
    w["examined"] = big(c.witness_examined);
    w["blocks"] = c.witness->blocks;
    e["witness"] = w;
  } else {
    e["witness"] = nullptr;
  }
  if (!c.note.empty()) e["note"] = c.note;
  return e;
}

Json covering_evidence(const CoveringCertificate& c) {
  Json e;
  e["syndromes"] = c.syndromes;
  e["complete"] = c.complete;
  e["lower_bound"] = c.lower;
  e["hits_by_weight"] = c.hits_by_weight;
  Json lw = Json::array();
  for (const auto& x : c.layer_words) lw.push_back(big(x));
  e["layer_words"] = lw;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << c.digest;
  e["coverage_digest"] = os.str();
  if (!c.note.empty()) e["note"] = c.note;
  return e;
}

Json packing_evidence(const SpherePackingReport& r) {
  Json e;
  e["d"] = r.d;
  e["V_floor_d_half"] = big(r.v_half);
  e["q_codim"] = big(r.q_codim);
  e["direct"] = r.direct;
  e["punctured_volume"] = big(r.punctured_volume);
  e["punctured_lhs"] = big(r.punctured_lhs);
  e["punctured_rhs"] = big(r.punctured_rhs);
  e["punctured"] = r.punctured;
  e["V_floor_d_minus_1_half"] = big(r.v_inner);
  e["V_ceil_d_half"] = big(r.v_ceil);
  e["ceil_lhs"] = big(r.ceil_lhs);
  e["ambient"] = big(r.ambient);
  e["ceil_comparison"] = r.ceil_comparison;
  return e;
}

Verdict compare(bool claimed, bool equal) {
  if (!claimed) return Verdict::Unclaimed;
  return equal ? Verdict::Confirmed : Verdict::Refuted;
}

}  // namespace

CertifyRun certify_family(const FamilyCode& fc, const CertifyOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  CertifyRun run;
  run.id = family_id(fc.params);
  const auto& code = *fc.code;
  const auto& claims = fc.claims;

  std::vector<std::string> requested = options.claims.empty() ? fc.default_claims : options.claims;
  for (const auto& c : requested)
    if (std::find(kClaimOrder.begin(), kClaimOrder.end(), c) == kClaimOrder.end())
      throw Error(Errc::ConfigError, "unknown claim '" + c + "'");
  auto wants = [&](const char* name) { return std::find(requested.begin(), requested.end(), name) != requested.end(); };

  const Mode mode = options.mode.value_or(fc.default_mode);
  const bool need_d = wants("distance") || wants("optimality") || wants("defect") || wants("classification") || wants("density");
  const bool need_r = wants("covering_radius") || wants("classification");

  std::optional<DistanceCertificate> dist;
  if (need_d) dist = certify_dsr(code, claims.distance, mode, options.budget);
  const bool d_known = dist && dist->exact && dist->upper;
  const int d = d_known ? *dist->upper : 0;
  std::optional<CoveringCertificate> cov;
  if (need_r) cov = covering_radius_sr(code, options.cap, options.budget);
  const bool r_known = cov && cov->radius;

  auto needs_distance = [&](ClaimResult& r) {
    r.verdict = Verdict::Inconclusive;
    r.evidence["note"] = "distance not certified";
  };

  for (const auto& name : kClaimOrder) {
    if (!wants(name.c_str())) continue;
    ClaimResult r;
    r.claim = name;
    r.claimed = nullptr;
    r.computed = nullptr;
    if (name == "distance") {
      if (claims.distance) r.claimed = *claims.distance;
      r.evidence = distance_evidence(code, *dist);
      if (d_known) {
        r.computed = d;
        r.verdict = compare(claims.distance.has_value(), claims.distance == d);
      } else if (claims.distance && dist->lower > *claims.distance) {
        r.verdict = Verdict::Refuted;
      } else {
        r.verdict = Verdict::Inconclusive;
      }
    } else if (name == "covering_radius") {
      if (claims.covering_radius) r.claimed = *claims.covering_radius;
      r.evidence = covering_evidence(*cov);
      if (r_known) {
        r.computed = *cov->radius;
        r.verdict = compare(claims.covering_radius.has_value(), claims.covering_radius == cov->radius);
      } else if (claims.covering_radius && cov->lower > *claims.covering_radius) {
        r.verdict = Verdict::Refuted;
      } else {
        r.verdict = Verdict::Inconclusive;
      }
    } else if (name == "optimality") {
      if (claims.optimal) r.claimed = *claims.optimal;
      if (!d_known) {
        needs_distance(r);
      } else {
        const auto rep = sphere_packing_check(code, d);
        r.evidence = packing_evidence(rep);
        r.computed = rep.optimal;
        if (!claims.optimal) r.verdict = Verdict::Unclaimed;
        else if (rep.optimal == *claims.optimal) r.verdict = Verdict::Confirmed;
        else r.verdict = Verdict::RefutedByCriterion;
      }
    } else if (name == "defect") {
      if (claims.defect) r.claimed = *claims.defect;
      if (!d_known) {
        needs_distance(r);
      } else if (code.codec()->n() > code.codec()->m()) {
        r.evidence["note"] = "Singleton-like bound needs n <= m";
        r.verdict = claims.defect ? Verdict::Inconclusive : Verdict::Unclaimed;
      } else {
        const int defect = singleton_defect(code, d);
        r.computed = defect;
        r.evidence["d"] = d;
        r.evidence["dimension_fq"] = code.dimension_fq();
        r.verdict = compare(claims.defect.has_value(), claims.defect == defect);
      }
    } else if (name == "classification") {
      if (claims.classification) r.claimed = classification_name(*claims.classification);
      if (!d_known || !r_known) {
        r.verdict = Verdict::Inconclusive;
        r.evidence["note"] = "distance or covering radius not certified";
      } else {
        const auto cls = classify(d, *cov->radius);
        r.computed = classification_name(cls);
        r.evidence["d"] = d;
        r.evidence["covering_radius"] = *cov->radius;
        r.verdict = compare(claims.classification.has_value(), claims.classification == cls);
      }
    } else if (name == "density") {
      if (claims.density) r.claimed = rational_string(*claims.density);
      if (!d_known) {
        needs_distance(r);
      } else {
        const Rational mu = packing_density(code, d);
        r.computed = rational_string(mu);
        r.evidence["d"] = d;
        r.evidence["volume"] = big(code_volume(code, (d - 1) / 2));
        r.evidence["q_codim"] = big(big_pow(code.codec()->base()->size(), code.codimension_fq()));
        r.verdict = compare(claims.density.has_value(), claims.density == mu);
      }
    }
    run.results.push_back(std::move(r));
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

// ---------------------------------------------------------------------------
// Certificates

std::string certificate_fingerprint(const Json& cert) {
  Json copy = cert;
  copy.erase("fingerprint");
  const std::string text = copy.dump();
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text.data(), text.size());
  return os.str();
}

Json certificate_json(const FamilyCode& fc, const ClaimResult& r) {
  const auto& code = *fc.code;
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "certificate";
  j["id"] = family_id(fc.params);
  j["params"] = params_to_json(fc.params);
  Json summary;
  summary["block_length"] = code.positions();
  summary["q"] = code.codec()->base()->size();
  summary["n"] = code.codec()->n();
  summary["m"] = code.codec()->m();
  summary["codimension_fq"] = code.codimension_fq();
  summary["dimension_fq"] = code.dimension_fq();
  if (fc.claims.codimension) summary["claimed_codimension_fq"] = *fc.claims.codimension;
  j["code"] = summary;
  j["claim"] = r.claim;
  j["claimed"] = r.claimed;
  j["computed"] = r.computed;
  j["verdict"] = verdict_name(r.verdict);
  j["evidence"] = r.evidence;
  Json ann = Json::array();
  for (const auto& a : fc.annotations) ann.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j["annotations"] = ann;
  j["source"] = fc.claims.source;
  j["toolchain"] = kToolchain;
  j["fingerprint"] = certificate_fingerprint(j);
  return j;
}

std::string replay_certificate(const Json& cert, const SumRankCode& code) {
  try {
    if (cert.at("fingerprint").get<std::string>() != certificate_fingerprint(cert)) return "fingerprint mismatch";
    const auto& summary = cert.at("code");
    if (summary.at("block_length").get<std::size_t>() != code.positions() ||
        summary.at("codimension_fq").get<std::size_t>() != code.codimension_fq())
      return "code parameters differ";
    const auto claim = cert.at("claim").get<std::string>();
    const auto& ev = cert.at("evidence");
    const auto& computed = cert.at("computed");
    if (computed.is_null()) return "";
    if (claim == "distance") {
      const int d = computed.get<int>();
      if (d >= kInfiniteDistance) return code.dimension_fq() == 0 ? "" : "infinite distance on a nonzero code";
      if (ev.at("witness").is_null()) return "missing witness";
      SRWord w;
      w.blocks = ev["witness"].at("blocks").get<std::vector<std::uint32_t>>();
      if (is_zero(w)) return "zero witness";
      if (!code.member(w)) return "witness is not a codeword";
      if (wt_sr(*code.codec(), w) != d) return "witness weight differs";
      const int lower = ev.at("lower_bound").get<int>();
      if (lower != d) return "lower bound does not meet the witness";
      if (ev.at("lower_source") == "exhaustive") {
        const auto& empt = ev.at("emptiness_words");
        if (empt.size() != static_cast<std::size_t>(d - 1)) return "emptiness record incomplete";
        const auto problem = code.enum_problem();
        for (int k = 1; k < d; ++k)
          if (empt[static_cast<std::size_t>(k - 1)].get<std::string>() != big(layer_size(problem, k)))
            return "emptiness count differs from layer size at weight " + std::to_string(k);
      } else {
        const auto bound = code.analytic_distance_bound();
        if (!bound || *bound != lower) return "analytic bound differs";
      }
    } else if (claim == "covering_radius") {
      const int r = computed.get<int>();
      const auto hits = ev.at("hits_by_weight").get<std::vector<std::uint64_t>>();
      std::uint64_t total = 0;
      for (auto h : hits) total += h;
      if (total != code.syndrome_space().size() || ev.at("syndromes").get<std::uint64_t>() != total)
        return "coverage table does not cover the syndrome space";
      if (static_cast<int>(hits.size()) != r + 1 || hits.back() == 0) return "radius differs from coverage table";
    } else if (claim == "optimality") {
      const auto rep = sphere_packing_check(code, ev.at("d").get<int>());
      if (packing_evidence(rep) != ev || rep.optimal != computed.get<bool>()) return "volume comparison differs";
    } else if (claim == "defect") {
      if (singleton_defect(code, ev.at("d").get<int>()) != computed.get<int>()) return "defect differs";
    } else if (claim == "classification") {
      if (classification_name(classify(ev.at("d").get<int>(), ev.at("covering_radius").get<int>())) != computed.get<std::string>())
        return "classification differs";
    } else if (claim == "density") {
      if (rational_string(packing_density(code, ev.at("d").get<int>())) != computed.get<std::string>()) return "density differs";
    }
    return "";
  } catch (const std::exception& e) {
    return std::string("malformed certificate: ") + e.what();
  }
}

int exit_code(const std::vector<Verdict>& verdicts) {
  bool refuted = false;
  for (auto v : verdicts) {
    if (v == Verdict::Inconclusive) return 2;
    if (v == Verdict::Refuted || v == Verdict::RefutedByCriterion) refuted = true;
  }
  return refuted ? 1 : 0;
}

}  // namespace sumrank
