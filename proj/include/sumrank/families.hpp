#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumrank/srspace.hpp"
#include "json.hpp"

namespace sumrank {

using Json = nlohmann::ordered_json;

enum class FamilyTag { THM31, THM32, THM41, COR41, THM51, THM61, THM71, PLOTKIN, COR81 };

std::string_view family_name(FamilyTag tag);
/// Throws ConfigError for unknown names.
FamilyTag family_from_name(std::string_view name);

/// Quaternary input code for THM71, given by a cyclic defining set or a parity-check matrix.
struct InputCodeSpec {
  std::uint64_t length = 0;
  std::vector<std::uint64_t> defining_set;
  std::vector<std::vector<Elem>> parity_check;
};

struct FamilyParams {
  FamilyTag family = FamilyTag::THM31;
  std::uint64_t q = 0;
  int s = 0;
  int s1 = 0;
  int s2 = 0;
  int m = 0;
  int u = 0;
  std::uint64_t lambda = 1;
  double epsilon = 0.01;
  std::optional<InputCodeSpec> input;                  // THM71
  std::shared_ptr<const FamilyParams> first, second;  // PLOTKIN
};

enum class Classification { Perfect, QuasiPerfect, Neither };
std::string_view classification_name(Classification c);

enum class Mode { Exhaustive, Compositional };
std::string_view mode_name(Mode m);
Mode mode_from_name(std::string_view name);

/// Parameters the construction asserts. Codimension is over the base field F_q.
struct ClaimSet {
  std::optional<int> distance;
  std::optional<int> covering_radius;
  std::optional<std::size_t> codimension;
  std::optional<bool> optimal;
  std::optional<int> defect;
  std::optional<Classification> classification;
  std::optional<Rational> density;
  std::string source;
};

/// Advisory parameter condition, evaluated but never enforced.
struct Annotation {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FamilyCode {
  FamilyParams params;
  SumRankCodePtr code;
  ClaimSet claims;
  std::vector<Annotation> annotations;
  std::vector<std::string> default_claims;
  Mode default_mode = Mode::Exhaustive;
};

FamilyCode thm31_code(std::uint64_t q, int m, std::uint64_t lambda, double epsilon = 0.01);
FamilyCode thm32_code(std::uint64_t q, int m);
FamilyCode thm41_code(std::uint64_t q, int s, int m, std::uint64_t lambda, double epsilon = 0.01);
FamilyCode cor41_code(std::uint64_t q, int s1, int s2, int m, std::uint64_t lambda, double epsilon = 0.01);
FamilyCode thm51_code(std::uint64_t q);
FamilyCode thm61_code(std::uint64_t q, int m, int u);
/// c0 must be a quaternary code with certified Hamming distance 4 and covering radius 2.
FamilyCode thm71_code(const LinearCode& c0);
FamilyCode plotkin_code(const FamilyCode& first, const FamilyCode& second);
FamilyCode cor81_code(std::uint64_t q, int s, int m);

/// First quaternary cyclic code of odd length 5..max_length (defining sets by size,
/// then lexicographically) with Hamming distance 4 and covering radius 2.
std::optional<InputCodeSpec> thm71_search(std::uint64_t max_length = 21);
LinearCode input_code(const InputCodeSpec& spec);

/// Dispatches on params.family.
FamilyCode build_family(const FamilyParams& params);

/// Stable identifier such as "THM41_q2_s3_m1_l1".
std::string family_id(const FamilyParams& params);

Json params_to_json(const FamilyParams& params);
FamilyParams params_from_json(const Json& j);
Json claims_to_json(const ClaimSet& claims);
/// "numerator/denominator" in lowest terms.
std::string rational_string(const Rational& r);

/// Full descriptor: parameters, geometry, component parity checks and claims.
Json descriptor_to_json(const FamilyCode& fc);
/// Rebuilds the code from the serialized parity checks alone.
FamilyCode descriptor_from_json(const Json& j);

}  // namespace sumrank
