#include "sumrank/families.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace sumrank {

namespace {

std::uint64_t upow(std::uint64_t q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 40) / q) throw Error(Errc::FieldTooLarge, std::to_string(q) + "^" + std::to_string(e));
    r *= q;
  }
  return r;
}

std::uint64_t block_length(std::uint64_t total, std::uint64_t lambda) {
  if (lambda == 0 || total % lambda != 0)
    throw Error(Errc::BadDivisor, std::to_string(lambda) + " does not divide " + std::to_string(total));
  return total / lambda;
}

std::string fixed(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << x;
  return os.str();
}

Annotation lambda_condition(std::uint64_t lambda, double limit, const std::string& formula) {
  Annotation a;
  a.name = "lambda-condition";
  a.pass = static_cast<double>(lambda) < limit;
  a.detail = std::to_string(lambda) + " < " + formula + " = " + fixed(limit);
  return a;
}

Annotation domain_check(std::string name, bool pass) { return {std::move(name), pass, pass ? "holds" : "violated"}; }

// Components C_0 (cyclic, T = C_0 u C_1 u C_2), C_1 and C_2 parity, the rest trivial.
std::vector<Component> four_recipe(const FieldPtr& F, std::uint64_t t, int count) {
  std::vector<Component> comps;
  comps.push_back(component_from(cyclic_make(t, F, {0, 1, 2})));
  for (int j = 1; j < count; ++j) {
    if (j <= 2)
      comps.push_back(component_from(parity_code(F, t), "parity"));
    else
      comps.push_back(component_from(trivial_code(F, t), "trivial"));
  }
  return comps;
}

SumRankCodePtr hamming_metric_code(Component c) {
  const std::size_t t = c.code.length;
  auto g = SRGeometry{block_codec(c.code.field, 1, 1), t};
  return sr_build({std::move(c)}, g);
}

FamilyParams base_params(FamilyTag tag) {
  FamilyParams p;
  p.family = tag;
  return p;
}

}  // namespace

std::string_view family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::THM31: return "THM31";
    case FamilyTag::THM32: return "THM32";
    case FamilyTag::THM41: return "THM41";
    case FamilyTag::COR41: return "COR41";
    case FamilyTag::THM51: return "THM51";
    case FamilyTag::THM61: return "THM61";
    case FamilyTag::THM71: return "THM71";
    case FamilyTag::PLOTKIN: return "PLOTKIN";
    case FamilyTag::COR81: return "COR81";
  }
  return "?";
}

FamilyTag family_from_name(std::string_view name) {
  for (auto tag : {FamilyTag::THM31, FamilyTag::THM32, FamilyTag::THM41, FamilyTag::COR41, FamilyTag::THM51,
                   FamilyTag::THM61, FamilyTag::THM71, FamilyTag::PLOTKIN, FamilyTag::COR81})
    if (family_name(tag) == name) return tag;
  throw Error(Errc::ConfigError, "unknown family '" + std::string(name) + "'");
}

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::Perfect: return "PERFECT";
    case Classification::QuasiPerfect: return "QUASI_PERFECT";
    case Classification::Neither: return "NEITHER";
  }
  return "?";
}

std::string_view mode_name(Mode m) { return m == Mode::Exhaustive ? "EXHAUSTIVE" : "COMPOSITIONAL"; }

Mode mode_from_name(std::string_view name) {
  if (name == "EXHAUSTIVE") return Mode::Exhaustive;
  if (name == "COMPOSITIONAL") return Mode::Compositional;
  throw Error(Errc::ConfigError, "unknown mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Builders

FamilyCode thm31_code(std::uint64_t q, int m, std::uint64_t lambda, double epsilon) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM31);
  fc.params.q = q;
  fc.params.m = m;
  fc.params.lambda = lambda;
  fc.params.epsilon = epsilon;
  const auto F = field_of_size(q);
  const std::uint64_t t = block_length(upow(q, m) - 1, lambda);
  fc.code = hamming_metric_code(component_from(cyclic_make(t, F, {0, 1, 2})));
  fc.annotations.push_back(domain_check("q >= 4", q >= 4));
  const double qd = static_cast<double>(q);
  fc.annotations.push_back(lambda_condition(lambda, (qd - 1) / std::sqrt(2 * qd * (1 + epsilon)), "(q-1)/sqrt(2q(1+eps))"));
  fc.claims.distance = 4;
  fc.claims.codimension = static_cast<std::size_t>(2 * m + 1);
  fc.claims.optimal = true;
  fc.claims.source = "THM31: cyclic [(q^m-1)/lambda, k >= n-2m-1, 4]_q, distance-optimal";
  fc.default_claims = {"distance", "optimality"};
  return fc;
}

FamilyCode thm32_code(std::uint64_t q, int m) {
  if (q != 3 && q != 5) throw Error(Errc::UnsupportedAlphabet, "family needs q in {3, 5}");
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM32);
  fc.params.q = q;
  fc.params.m = m;
  const auto F = field_of_size(q);
  const std::uint64_t t = upow(q, m) - 1;
  const std::uint64_t third = q == 3 ? 5 : 3;
  auto cyc = cyclic_make(t, F, {0, 1, third});
  fc.annotations.push_back({"boston-pattern", boston_check(cyc.defining_set), "q in the defining set"});
  fc.code = hamming_metric_code(component_from(std::move(cyc)));
  fc.claims.distance = 4;
  fc.claims.optimal = true;
  fc.claims.source = q == 3 ? "THM32: ternary cyclic code, T = C_0 u C_1 u C_5" : "THM32: quinary cyclic code, T = C_0 u C_1 u C_3";
  fc.default_claims = {"distance", "optimality"};
  return fc;
}

FamilyCode thm41_code(std::uint64_t q, int s, int m, std::uint64_t lambda, double epsilon) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM41);
  fc.params.q = q;
  fc.params.s = s;
  fc.params.m = m;
  fc.params.lambda = lambda;
  fc.params.epsilon = epsilon;
  const std::uint64_t Q = upow(q, s);
  const std::uint64_t t = block_length(upow(Q, m) - 1, lambda);
  const auto base = field_of_size(q);
  const auto F = field_of_size(Q);
  fc.code = sr_build(four_recipe(F, t, s), {block_codec(base, s, s), t});
  const double qd = static_cast<double>(q), Qd = static_cast<double>(Q);
  fc.annotations.push_back(
      lambda_condition(lambda, std::sqrt((Qd - 1) / (2 * (qd - 1) * (qd - 1) * (1 + epsilon))), "sqrt((q^s-1)/(2(q-1)^2(1+eps)))"));
  fc.annotations.push_back(domain_check("s >= 3 (all three recipe components present)", s >= 3));
  const std::size_t codim = static_cast<std::size_t>(s * (2 * m + 3));
  fc.claims.distance = 4;
  fc.claims.codimension = codim;
  fc.claims.optimal = true;
  fc.claims.density = Rational(vol_sr_uniform(q, s, s, t, 1), big_pow(q, codim));
  fc.claims.source = "THM41: cyclic sum-rank code, s x s blocks, codimension 2m+3 over F_{q^s}";
  fc.default_claims = {"distance", "optimality", "density"};
  return fc;
}

FamilyCode cor41_code(std::uint64_t q, int s1, int s2, int m, std::uint64_t lambda, double epsilon) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::COR41);
  fc.params.q = q;
  fc.params.s1 = s1;
  fc.params.s2 = s2;
  fc.params.m = m;
  fc.params.lambda = lambda;
  fc.params.epsilon = epsilon;
  const std::uint64_t Q = upow(q, s2);
  const std::uint64_t t = block_length(upow(Q, m) - 1, lambda);
  const auto base = field_of_size(q);
  const auto F = field_of_size(Q);
  fc.code = sr_build(four_recipe(F, t, s1), {block_codec(base, s1, s2), t});
  fc.annotations.push_back(domain_check("s1 < s2", s1 < s2));
  const double qd = static_cast<double>(q);
  const double limit = (std::pow(qd, s1) - 1) / (qd - 1) * std::sqrt(1 / (2 * (1 + epsilon) * std::pow(qd, s2)));
  fc.annotations.push_back(lambda_condition(lambda, limit, "((q^s1-1)/(q-1)) sqrt(1/(2(1+eps)q^s2))"));
  fc.claims.distance = 4;
  fc.claims.codimension = static_cast<std::size_t>(s2 * (2 * m + 3));
  fc.claims.optimal = true;
  fc.claims.source = "COR41: s1 x s2 blocks, codimension 2m+3 over F_{q^s2}";
  fc.default_claims = {"distance", "optimality"};
  return fc;
}

FamilyCode thm51_code(std::uint64_t q) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM51);
  fc.params.q = q;
  const std::uint64_t Q = upow(q, 2);
  const std::uint64_t t = upow(q, 4) - 1;
  const auto base = field_of_size(q);
  const auto F = field_of_size(Q);
  auto cyc = cyclic_make(t, F, {0, 1, Q + 1});
  const int ht = ht_bound(cyc.defining_set, t);
  fc.annotations.push_back({"ht-bound", ht >= 4, "HT bound " + std::to_string(ht)});
  std::vector<Component> comps;
  comps.push_back(component_from(std::move(cyc)));
  comps.push_back(component_from(parity_code(F, t), "parity"));
  fc.code = sr_build(std::move(comps), {block_codec(base, 2, 2), t});
  fc.claims.distance = 4;
  fc.claims.codimension = 10;
  fc.claims.optimal = true;
  fc.claims.defect = 4;
  fc.claims.source = "THM51: 2 x 2 blocks, block length q^4-1, Singleton defect 4";
  fc.default_claims = {"distance", "optimality", "defect"};
  return fc;
}

FamilyCode thm61_code(std::uint64_t q, int m, int u) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM61);
  fc.params.q = q;
  fc.params.m = m;
  fc.params.u = u;
  fc.annotations.push_back(domain_check("m >= 2", m >= 2));
  fc.annotations.push_back(domain_check("u >= 2", u >= 2));
  const auto base = field_of_size(q);
  const auto F = field_of_size(upow(q, m));
  auto ham = hamming_code_make(F, u);
  const std::size_t t = ham.length;
  std::vector<Component> comps;
  comps.push_back(component_from(std::move(ham), "hamming"));
  comps.push_back(component_from(parity_code(F, t), "parity"));
  fc.code = sr_build(std::move(comps), {block_codec(base, 2, m), t});
  fc.claims.distance = 3;
  fc.claims.covering_radius = 2;
  fc.claims.codimension = static_cast<std::size_t>(m * (u + 1));
  fc.claims.optimal = true;
  fc.claims.classification = Classification::QuasiPerfect;
  fc.claims.source = "THM61: 2 x m blocks, Hamming + parity, quasi-perfect";
  fc.default_claims = {"distance", "covering_radius", "classification", "optimality", "defect", "density"};
  return fc;
}

FamilyCode thm71_code(const LinearCode& c0) {
  if (c0.field->size() != 4) throw Error(Errc::WrongField, "input code must be quaternary");
  try {
    const auto dist = min_distance_hamming(c0, 4, 50'000'000);
    if (!dist.exact || dist.distance != 4)
      throw Error(Errc::InputNotVerified, "input code distance is " + std::string(dist.exact ? "" : "at least ") +
                                              std::to_string(dist.distance) + ", need 4");
    const int radius = covering_radius_hamming(c0, 3, 50'000'000);
    if (radius != 2) throw Error(Errc::InputNotVerified, "input covering radius is " + std::to_string(radius) + ", need 2");
  } catch (const Error& e) {
    if (e.code() == Errc::BudgetExceeded || e.code() == Errc::CapReached)
      throw Error(Errc::InputNotVerified, std::string("input certification failed: ") + e.what());
    throw;
  }
  FamilyCode fc;
  fc.params = base_params(FamilyTag::THM71);
  const std::size_t t = c0.length;
  const auto base = field_of_size(2);
  std::vector<Component> comps;
  comps.push_back(component_from(c0, "input"));
  comps.push_back(component_from(parity_code(c0.field, t), "parity"));
  fc.code = sr_build(std::move(comps), {block_codec(base, 2, 2), t});
  fc.claims.distance = 4;
  fc.claims.covering_radius = 2;
  fc.claims.classification = Classification::QuasiPerfect;
  fc.claims.source = "THM71: binary 2 x 2 blocks from a quaternary [t, k, 4] code with covering radius 2";
  fc.default_claims = {"distance", "covering_radius", "classification"};
  return fc;
}

FamilyCode plotkin_code(const FamilyCode& first, const FamilyCode& second) {
  FamilyCode fc;
  fc.params = base_params(FamilyTag::PLOTKIN);
  fc.params.first = std::make_shared<const FamilyParams>(first.params);
  fc.params.second = std::make_shared<const FamilyParams>(second.params);
  fc.code = plotkin(first.code, second.code);
  if (first.claims.distance && second.claims.distance)
    fc.claims.distance = std::min(2 * *first.claims.distance, *second.claims.distance);
  if (first.claims.codimension && second.claims.codimension)
    fc.claims.codimension = *first.claims.codimension + *second.claims.codimension;
  fc.claims.source = "PLOTKIN: (u | u + v), distance min{2 d_1, d_2}";
  fc.default_claims = {"distance"};
  return fc;
}

FamilyCode cor81_code(std::uint64_t q, int s, int m) {
  const FamilyCode inner = thm41_code(q, s, m, 1);
  const auto& sr = dynamic_cast<const SRCode&>(*inner.code);
  const auto F = sr.geometry().codec->codomain();
  const std::size_t t = sr.geometry().t;
  std::vector<Component> comps;
  comps.push_back(component_from(parity_code(F, t), "parity"));
  for (int j = 1; j < s; ++j) comps.push_back(component_from(trivial_code(F, t), "trivial"));
  auto d = sr_build(std::move(comps), sr.geometry());

  FamilyCode fc;
  fc.params = base_params(FamilyTag::COR81);
  fc.params.q = q;
  fc.params.s = s;
  fc.params.m = m;
  fc.code = plotkin(d, inner.code);
  fc.claims.distance = 4;
  fc.claims.codimension = static_cast<std::size_t>(s) + *inner.claims.codimension;
  fc.claims.optimal = true;
  fc.claims.source = "COR81: Plotkin sum of a distance-2 code and the THM41 code";
  fc.default_claims = {"distance", "optimality"};
  fc.default_mode = Mode::Compositional;
  return fc;
}

// ---------------------------------------------------------------------------
// THM71 input search

LinearCode input_code(const InputCodeSpec& spec) {
  const auto F4 = field_of_size(4);
  if (!spec.defining_set.empty()) return cyclic_from_defining_set(spec.length, F4, spec.defining_set).code;
  if (spec.parity_check.empty()) throw Error(Errc::ConfigError, "input code needs a defining set or a parity check");
  Matrix h(F4, spec.parity_check.size(), spec.length);
  for (std::size_t r = 0; r < h.rows; ++r) {
    if (spec.parity_check[r].size() != spec.length) throw Error(Errc::LengthMismatch, "parity-check row length");
    for (std::size_t c = 0; c < spec.length; ++c) {
      if (spec.parity_check[r][c] >= 4) throw Error(Errc::ConfigError, "entry outside F_4");
      h(r, c) = spec.parity_check[r][c];
    }
  }
  return code_from_parity_check(h, spec.length);
}

std::optional<InputCodeSpec> thm71_search(std::uint64_t max_length) {
  const auto F4 = field_of_size(4);
  for (std::uint64_t n = 5; n <= max_length; n += 2) {
    const auto table = coset_table(n, 4);
    const std::size_t k = table.cosets.size();
    if (k > 20) continue;
    std::vector<std::vector<std::uint64_t>> sets;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      std::vector<std::uint64_t> T;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) T.insert(T.end(), table.cosets[i].begin(), table.cosets[i].end());
      std::sort(T.begin(), T.end());
      if (T.size() >= 3 && T.size() < n) sets.push_back(std::move(T));
    }
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const auto& T : sets) {
      const auto code = cyclic_from_defining_set(n, F4, T).code;
      try {
        const auto dist = min_distance_hamming(code, 4, 5'000'000);
        if (!dist.exact || dist.distance != 4) continue;
        if (covering_radius_hamming(code, 2, 5'000'000) != 2) continue;
      } catch (const Error&) {
        continue;
      }
      InputCodeSpec spec;
      spec.length = n;
      spec.defining_set = T;
      return spec;
    }
  }
  return std::nullopt;
}

FamilyCode build_family(const FamilyParams& p) {
  switch (p.family) {
    case FamilyTag::THM31: return thm31_code(p.q, p.m, p.lambda, p.epsilon);
    case FamilyTag::THM32: return thm32_code(p.q, p.m);
    case FamilyTag::THM41: return thm41_code(p.q, p.s, p.m, p.lambda, p.epsilon);
    case FamilyTag::COR41: return cor41_code(p.q, p.s1, p.s2, p.m, p.lambda, p.epsilon);
    case FamilyTag::THM51: return thm51_code(p.q);
    case FamilyTag::THM61: return thm61_code(p.q, p.m, p.u);
    case FamilyTag::THM71: {
      auto spec = p.input ? p.input : thm71_search();
      if (!spec) throw Error(Errc::InputNotVerified, "no certified quaternary input code found");
      FamilyCode fc = thm71_code(input_code(*spec));
      fc.params.input = spec;
      return fc;
    }
    case FamilyTag::PLOTKIN: {
      if (!p.first || !p.second) throw Error(Errc::ConfigError, "PLOTKIN needs 'first' and 'second'");
      return plotkin_code(build_family(*p.first), build_family(*p.second));
    }
    case FamilyTag::COR81: return cor81_code(p.q, p.s, p.m);
  }
  throw Error(Errc::ConfigError, "unknown family");
}

// ---------------------------------------------------------------------------
// Identifiers and JSON

std::string family_id(const FamilyParams& p) {
  std::string id(family_name(p.family));
  auto add = [&id](const char* key, std::uint64_t v) { id += "_" + std::string(key) + std::to_string(v); };
  switch (p.family) {
    case FamilyTag::THM31: add("q", p.q); add("m", p.m); add("l", p.lambda); break;
    case FamilyTag::THM32: add("q", p.q); add("m", p.m); break;
    case FamilyTag::THM41: add("q", p.q); add("s", p.s); add("m", p.m); add("l", p.lambda); break;
    case FamilyTag::COR41:
      add("q", p.q);
      id += "_s" + std::to_string(p.s1) + "x" + std::to_string(p.s2);
      add("m", p.m);
      add("l", p.lambda);
      break;
    case FamilyTag::THM51: add("q", p.q); break;
    case FamilyTag::THM61: add("q", p.q); add("m", p.m); add("u", p.u); break;
    case FamilyTag::THM71:
      if (p.input) {
        add("n", p.input->length);
        if (!p.input->defining_set.empty()) {
          id += "_T";
          for (std::size_t i = 0; i < p.input->defining_set.size(); ++i)
            id += (i ? "-" : "") + std::to_string(p.input->defining_set[i]);
        } else {
          std::uint64_t h = 0xcbf29ce484222325ULL;
          for (const auto& row : p.input->parity_check) h = fnv1a(row.data(), row.size() * sizeof(Elem), h);
          std::ostringstream os;
          os << std::hex << std::setw(8) << std::setfill('0') << (h & 0xffffffffULL);
          id += "_h" + os.str();
        }
      } else {
        id += "_search";
      }
      break;
    case FamilyTag::PLOTKIN:
      id += "_" + (p.first ? family_id(*p.first) : "?") + "__" + (p.second ? family_id(*p.second) : "?");
      break;
    case FamilyTag::COR81: add("q", p.q); add("s", p.s); add("m", p.m); break;
  }
  return id;
}

Json params_to_json(const FamilyParams& p) {
  Json j;
  j["family"] = family_name(p.family);
  switch (p.family) {
    case FamilyTag::THM31:
      j["q"] = p.q; j["m"] = p.m; j["lambda"] = p.lambda; j["epsilon"] = p.epsilon;
      break;
    case FamilyTag::THM32:
      j["q"] = p.q; j["m"] = p.m;
      break;
    case FamilyTag::THM41:
      j["q"] = p.q; j["s"] = p.s; j["m"] = p.m; j["lambda"] = p.lambda; j["epsilon"] = p.epsilon;
      break;
    case FamilyTag::COR41:
      j["q"] = p.q; j["s1"] = p.s1; j["s2"] = p.s2; j["m"] = p.m; j["lambda"] = p.lambda; j["epsilon"] = p.epsilon;
      break;
    case FamilyTag::THM51:
      j["q"] = p.q;
      break;
    case FamilyTag::THM61:
      j["q"] = p.q; j["m"] = p.m; j["u"] = p.u;
      break;
    case FamilyTag::THM71:
      if (p.input) {
        Json in;
        in["length"] = p.input->length;
        if (!p.input->defining_set.empty()) in["defining_set"] = p.input->defining_set;
        else in["parity_check"] = p.input->parity_check;
        j["input_code"] = in;
      }
      break;
    case FamilyTag::PLOTKIN:
      if (p.first) j["first"] = params_to_json(*p.first);
      if (p.second) j["second"] = params_to_json(*p.second);
      break;
    case FamilyTag::COR81:
      j["q"] = p.q; j["s"] = p.s; j["m"] = p.m;
      break;
  }
  return j;
}

namespace {

std::vector<std::string> allowed_keys(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::THM31: return {"q", "m", "lambda", "epsilon"};
    case FamilyTag::THM32: return {"q", "m"};
    case FamilyTag::THM41: return {"q", "s", "m", "lambda", "epsilon"};
    case FamilyTag::COR41: return {"q", "s1", "s2", "m", "lambda", "epsilon"};
    case FamilyTag::THM51: return {"q"};
    case FamilyTag::THM61: return {"q", "m", "u"};
    case FamilyTag::THM71: return {"input_code"};
    case FamilyTag::PLOTKIN: return {"first", "second"};
    case FamilyTag::COR81: return {"q", "s", "m"};
  }
  return {};
}

std::vector<std::string> required_keys(FamilyTag tag) {
  auto keys = allowed_keys(tag);
  std::erase(keys, "lambda");
  std::erase(keys, "epsilon");
  std::erase(keys, "input_code");
  return keys;
}

template <class T>
T get_number(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw Error(Errc::ConfigError, std::string("'") + key + "' must be a number");
  } else {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw Error(Errc::ConfigError, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<T>();
}

}  // namespace

FamilyParams params_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigError, "family parameters must be an object");
  if (!j.contains("family") || !j["family"].is_string()) throw Error(Errc::ConfigError, "missing 'family'");
  FamilyParams p;
  p.family = family_from_name(j["family"].get<std::string>());
  const auto allowed = allowed_keys(p.family);
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(Errc::ConfigError, "unknown key '" + key + "' for " + std::string(family_name(p.family)));
  }
  for (const auto& key : required_keys(p.family))
    if (!j.contains(key)) throw Error(Errc::ConfigError, "missing '" + key + "' for " + std::string(family_name(p.family)));
  if (j.contains("q")) p.q = get_number<std::uint64_t>(j, "q");
  if (j.contains("s")) p.s = get_number<int>(j, "s");
  if (j.contains("s1")) p.s1 = get_number<int>(j, "s1");
  if (j.contains("s2")) p.s2 = get_number<int>(j, "s2");
  if (j.contains("m")) p.m = get_number<int>(j, "m");
  if (j.contains("u")) p.u = get_number<int>(j, "u");
  if (j.contains("lambda")) p.lambda = get_number<std::uint64_t>(j, "lambda");
  if (j.contains("epsilon")) p.epsilon = get_number<double>(j, "epsilon");
  if (j.contains("input_code")) {
    const auto& in = j["input_code"];
    if (!in.is_object() || !in.contains("length")) throw Error(Errc::ConfigError, "input_code needs 'length'");
    for (const auto& [key, value] : in.items())
      if (key != "length" && key != "defining_set" && key != "parity_check")
        throw Error(Errc::ConfigError, "unknown key '" + key + "' in input_code");
    InputCodeSpec spec;
    spec.length = get_number<std::uint64_t>(in, "length");
    try {
      if (in.contains("defining_set")) spec.defining_set = in["defining_set"].get<std::vector<std::uint64_t>>();
      if (in.contains("parity_check")) spec.parity_check = in["parity_check"].get<std::vector<std::vector<Elem>>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ConfigError, std::string("input_code: ") + e.what());
    }
    p.input = std::move(spec);
  }
  if (j.contains("first")) p.first = std::make_shared<const FamilyParams>(params_from_json(j["first"]));
  if (j.contains("second")) p.second = std::make_shared<const FamilyParams>(params_from_json(j["second"]));
  return p;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

Json claims_to_json(const ClaimSet& c) {
  Json j = Json::object();
  if (c.distance) j["distance"] = *c.distance;
  if (c.covering_radius) j["covering_radius"] = *c.covering_radius;
  if (c.codimension) j["codimension"] = *c.codimension;
  if (c.optimal) j["optimal"] = *c.optimal;
  if (c.defect) j["defect"] = *c.defect;
  if (c.classification) j["classification"] = classification_name(*c.classification);
  if (c.density) j["density"] = rational_string(*c.density);
  j["source"] = c.source;
  return j;
}

namespace {

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

ClaimSet claims_from_json(const Json& j) {
  ClaimSet c;
  if (j.contains("distance")) c.distance = j["distance"].get<int>();
  if (j.contains("covering_radius")) c.covering_radius = j["covering_radius"].get<int>();
  if (j.contains("codimension")) c.codimension = j["codimension"].get<std::size_t>();
  if (j.contains("optimal")) c.optimal = j["optimal"].get<bool>();
  if (j.contains("defect")) c.defect = j["defect"].get<int>();
  if (j.contains("classification")) {
    const auto name = j["classification"].get<std::string>();
    for (auto k : {Classification::Perfect, Classification::QuasiPerfect, Classification::Neither})
      if (classification_name(k) == name) c.classification = k;
  }
  if (j.contains("density")) c.density = rational_from_string(j["density"].get<std::string>());
  c.source = j.value("source", "");
  return c;
}

std::string_view kind_name(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::Identity: return "identity";
    case EmbeddingKind::Inclusion: return "inclusion";
    case EmbeddingKind::Prefix: return "prefix";
    case EmbeddingKind::Explicit: return "explicit";
  }
  return "?";
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r)
    rows.push_back(std::vector<Elem>(m.entries.begin() + static_cast<std::ptrdiff_t>(r * m.cols),
                                     m.entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols)));
  return rows;
}

Json code_to_json(const SumRankCode& code) {
  Json j;
  if (const auto* pc = dynamic_cast<const PlotkinCode*>(&code)) {
    j["type"] = "plotkin";
    j["first"] = code_to_json(*pc->first());
    j["second"] = code_to_json(*pc->second());
    return j;
  }
  const auto& sr = dynamic_cast<const SRCode&>(code);
  const auto& g = sr.geometry();
  const auto& F = *g.codec->codomain();
  j["type"] = "sr";
  j["q"] = g.q();
  j["n"] = g.n();
  j["m"] = g.m();
  j["t"] = g.t;
  j["embedding"] = kind_name(g.codec->phi().kind());
  j["embedding_matrix"] = matrix_rows(g.codec->phi().matrix());
  j["component_field"] = {{"p", F.characteristic()}, {"degree", F.degree()}, {"modulus", F.modulus()}};
  Json comps = Json::array();
  for (const auto& c : sr.components()) {
    Json cj;
    cj["label"] = c.label;
    cj["length"] = c.code.length;
    cj["dimension"] = c.code.dimension();
    cj["distance"] = c.distance;
    cj["distance_exact"] = c.distance_exact;
    if (c.cyclic) cj["defining_set"] = c.cyclic->defining_set;
    cj["parity_check"] = matrix_rows(c.code.parity_check);
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  return j;
}

SumRankCodePtr code_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "plotkin") return plotkin(code_from_json(j.at("first")), code_from_json(j.at("second")));
  if (type != "sr") throw Error(Errc::ConfigError, "unknown code type '" + type + "'");
  const auto base = field_of_size(j.at("q").get<std::uint64_t>());
  const auto codec = block_codec(base, j.at("n").get<int>(), j.at("m").get<int>());
  if (kind_name(codec->phi().kind()) != j.at("embedding").get<std::string>() ||
      matrix_rows(codec->phi().matrix()) != j.at("embedding_matrix"))
    throw Error(Errc::GeometryMismatch, "descriptor embedding differs from the canonical one");
  const auto F = codec->codomain();
  if (j.at("component_field").at("modulus").get<std::vector<int>>() != F->modulus())
    throw Error(Errc::WrongField, "descriptor component field modulus differs from the canonical one");
  const std::size_t t = j.at("t").get<std::size_t>();
  std::vector<Component> comps;
  for (const auto& cj : j.at("components")) {
    const auto label = cj.at("label").get<std::string>();
    const auto rows = cj.at("parity_check").get<std::vector<std::vector<Elem>>>();
    const std::size_t len = cj.at("length").get<std::size_t>();
    Matrix h(F, rows.size(), len);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != len) throw Error(Errc::LengthMismatch, "parity-check row length");
      for (std::size_t col = 0; col < len; ++col) {
        if (rows[r][col] >= F->size()) throw Error(Errc::WrongField, "parity-check entry out of range");
        h(r, col) = rows[r][col];
      }
    }
    auto code = code_from_parity_check(h, len);
    if (code.codimension() != rows.size()) throw Error(Errc::ConfigError, "parity check is not full rank");
    Component c;
    if (cj.contains("defining_set")) {
      auto cyc = cyclic_from_defining_set(len, F, cj["defining_set"].get<std::vector<std::uint64_t>>());
      if (!(cyc.code.parity_check == code.parity_check))
        throw Error(Errc::ConfigError, "defining set does not match the parity check");
      c = component_from(std::move(cyc));
    } else {
      c = component_from(std::move(code), label);
    }
    // Stored distances are recomputed, never trusted.
    if (cj.at("distance").get<int>() != c.distance || cj.at("distance_exact").get<bool>() != c.distance_exact)
      throw Error(Errc::ConfigError, "component distance does not match the parity check");
    comps.push_back(std::move(c));
  }
  return sr_build(std::move(comps), {codec, t});
}

}  // namespace

Json descriptor_to_json(const FamilyCode& fc) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "descriptor";
  j["id"] = family_id(fc.params);
  j["params"] = params_to_json(fc.params);
  const auto& code = *fc.code;
  Json summary;
  summary["block_length"] = code.positions();
  summary["q"] = code.codec()->base()->size();
  summary["n"] = code.codec()->n();
  summary["m"] = code.codec()->m();
  summary["codimension_fq"] = code.codimension_fq();
  summary["dimension_fq"] = code.dimension_fq();
  if (const auto b = code.analytic_distance_bound()) summary["analytic_bound"] = *b;
  else summary["analytic_bound"] = nullptr;
  j["summary"] = summary;
  j["claims"] = claims_to_json(fc.claims);
  Json ann = Json::array();
  for (const auto& a : fc.annotations) ann.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j["annotations"] = ann;
  j["default_claims"] = fc.default_claims;
  j["default_mode"] = mode_name(fc.default_mode);
  j["code"] = code_to_json(code);
  return j;
}

FamilyCode descriptor_from_json(const Json& j) {
  try {
    if (j.at("kind") != "descriptor") throw Error(Errc::ConfigError, "not a descriptor");
    if (j.at("schema_version") != 1) throw Error(Errc::ConfigError, "unsupported schema version");
    FamilyCode fc;
    fc.params = params_from_json(j.at("params"));
    fc.code = code_from_json(j.at("code"));
    fc.claims = claims_from_json(j.at("claims"));
    for (const auto& a : j.at("annotations"))
      fc.annotations.push_back({a.at("name").get<std::string>(), a.at("pass").get<bool>(), a.at("detail").get<std::string>()});
    fc.default_claims = j.at("default_claims").get<std::vector<std::string>>();
    fc.default_mode = mode_from_name(j.at("default_mode").get<std::string>());
    return fc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("malformed descriptor: ") + e.what());
  }
}

}  // namespace sumrank
