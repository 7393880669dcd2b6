#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sumrank/matspace.hpp"

namespace sumrank {

/// Syndromes packed as base-p integers: (Z_p)^digits with digit 0 least significant.
struct SyndromeSpace {
  int p = 2;
  int digits = 0;

  std::uint64_t size() const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    if (p == 2) return a ^ b;
    return add_slow(a, b);
  }
  std::uint64_t neg(std::uint64_t a) const noexcept;
  std::uint64_t add_slow(std::uint64_t a, std::uint64_t b) const noexcept;
};

/// Throws UnsupportedAlphabet when p^digits does not fit in 64 bits.
SyndromeSpace syndrome_space(int p, int digits);

/// Sparse word: (position, matrix index) pairs with nonzero blocks, positions ascending.
using SparseWord = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Everything the enumerator needs: the symbol alphabet grouped by rank and a
/// syndrome contribution per (position, symbol). Syndromes must be additive.
struct EnumProblem {
  std::shared_ptr<const RankCensus> census;
  std::size_t positions = 0;
  SyndromeSpace space;
  const std::vector<std::vector<std::uint64_t>>* tables = nullptr;
};

/// Exact number of words of sum-rank weight w.
BigInt layer_size(const EnumProblem& problem, int weight);

struct FindResult {
  bool complete = false;  // whole layer examined (or witness found)
  BigInt examined;        // words in the examined prefix of the layer
  std::optional<SparseWord> witness;
};

/// Searches the weight-w layer for a word with zero syndrome. Words are ordered by
/// support size, supports in colex order, rank compositions in lex order, then
/// symbols in index order with the last support position varying fastest. The
/// returned witness is the first in that order regardless of worker count. Only
/// a prefix of whole supports fitting in the budget is examined.
FindResult find_codeword(const EnumProblem& problem, int weight, std::uint64_t budget, unsigned workers);

/// Marks every syndrome reached by a weight-w word: first_hit[s] = w where it was kUnhit.
/// Returns the number of newly reached syndromes.
inline constexpr std::uint8_t kUnhit = 255;
std::uint64_t cover_layer(const EnumProblem& problem, int weight, std::vector<std::uint8_t>& first_hit,
                          unsigned workers);

struct CoverageResult {
  bool complete = false;         // every syndrome reached
  bool cap_reached = false;      // stopped after the weight cap
  bool budget_exceeded = false;  // next layer did not fit in the budget
  int radius = 0;                // largest first-hit weight when complete
  std::vector<std::uint8_t> first_hit;
  std::vector<BigInt> layer_words;  // words examined per weight, index = weight
  BigInt examined;
};

/// Breadth-first syndrome coverage by increasing weight up to cap.
CoverageResult cover_syndromes(const EnumProblem& problem, int cap, std::uint64_t budget, unsigned workers);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace sumrank
