#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumrank/families.hpp"

namespace sumrank {

enum class Verdict { Confirmed, Refuted, RefutedByCriterion, Inconclusive, Unclaimed };
std::string_view verdict_name(Verdict v);

struct Budget {
  std::uint64_t membership_tests = 200'000'000;  // per certification
  std::uint64_t syndrome_cap = std::uint64_t{1} << 28;
  unsigned workers = 0;  // 0 = hardware concurrency
};

unsigned effective_workers(const Budget& b);

struct DistanceCertificate {
  Mode mode = Mode::Exhaustive;
  bool exact = false;
  int lower = 1;                 // proven lower bound
  std::optional<int> upper;      // weight of the witness
  std::string lower_source;      // "exhaustive" or "analytic"
  std::vector<BigInt> emptiness; // words examined per weight 1..lower-1 (exhaustive mode)
  int searched_cap = 0;          // largest weight whose layer was entered
  std::optional<SRWord> witness;
  std::string witness_source;    // "structured" or "enumeration"
  BigInt witness_examined;
  std::string note;
};

/// Exact minimum sum-rank distance: proven emptiness (or the analytic bound) below,
/// a member witness at. Searches up to max(expected, bound) + 2.
DistanceCertificate certify_dsr(const SumRankCode& code, std::optional<int> expected, Mode mode, const Budget& budget);

struct CoveringCertificate {
  bool complete = false;
  std::optional<int> radius;
  int lower = 0;  // every weight up to this was enumerated without full coverage
  std::uint64_t syndromes = 0;
  std::vector<std::uint64_t> hits_by_weight;  // syndromes first reached at each weight
  std::vector<BigInt> layer_words;
  std::uint64_t digest = 0;  // FNV-1a of the first-hit table
  std::string note;
};

CoveringCertificate covering_radius_sr(const SumRankCode& code, int cap, const Budget& budget);

struct SpherePackingReport {
  int d = 0;
  BigInt v_half;        // V(floor(d/2))
  BigInt v_inner;       // V(floor((d-1)/2))
  BigInt v_ceil;        // V(ceil(d/2))
  BigInt q_codim;       // q^{codim over F_q}
  bool direct = false;  // V(floor(d/2)) > q^codim
  BigInt punctured_volume;  // V'(floor((d-1)/2)) with one row of one block removed
  BigInt punctured_lhs;     // |C| V'
  BigInt punctured_rhs;     // q^{N - m}
  bool punctured = false;   // |C| V' > q^{N-m}
  BigInt ceil_lhs;          // |C| V(ceil(d/2))
  BigInt ambient;           // q^N
  bool ceil_comparison = false;
  bool optimal = false;     // direct || punctured
};

/// Volumes for the code's uniform block shape.
BigInt code_volume(const SumRankCode& code, int radius);
SpherePackingReport sphere_packing_check(const SumRankCode& code, int d);
/// m (n t - d + 1) - dim over F_q; requires n <= m.
int singleton_defect(const SumRankCode& code, int d);
Classification classify(int d, int r);
Rational packing_density(const SumRankCode& code, int d);

struct CertifyOptions {
  std::vector<std::string> claims;  // empty = family defaults
  std::optional<Mode> mode;         // empty = family default
  Budget budget;
  int cap = 4;                      // covering radius weight cap
};

struct ClaimResult {
  std::string claim;
  Verdict verdict = Verdict::Inconclusive;
  Json claimed;   // null when unclaimed
  Json computed;  // null when unknown
  Json evidence;
};

struct CertifyRun {
  std::string id;
  std::vector<ClaimResult> results;
  double seconds = 0;
};

CertifyRun certify_family(const FamilyCode& fc, const CertifyOptions& options);

/// One certificate per claim; no timing data so identical runs give identical bytes.
Json certificate_json(const FamilyCode& fc, const ClaimResult& r);
/// FNV-1a of the certificate's compact dump without the fingerprint field.
std::string certificate_fingerprint(const Json& cert);

/// Re-checks a certificate against the code without enumeration: witness membership
/// and weight, volume comparisons, defect and density arithmetic. Returns an empty
/// string on success, else the failing check.
std::string replay_certificate(const Json& cert, const SumRankCode& code);

/// 2 if any INCONCLUSIVE, else 1 if any REFUTED or REFUTED-BY-THIS-CRITERION, else 0.
int exit_code(const std::vector<Verdict>& verdicts);

inline constexpr const char* kToolchain = "sumrank 1.0 (C++20)";

}  // namespace sumrank
