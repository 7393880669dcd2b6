#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <vector>

#include "sumrank/gf.hpp"

namespace sumrank {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt big_pow(std::uint64_t base, std::uint64_t exp);
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Gaussian binomial [n choose k]_q.
BigInt gauss_binom(int n, int k, std::uint64_t q);
/// Number of n x m matrices over F_q of rank exactly r.
BigInt rank_count(std::uint64_t q, int n, int m, int r);

struct BlockSize {
  int n = 1;
  int m = 1;
};

struct VolumeQuery {
  std::uint64_t q = 2;
  std::vector<BlockSize> blocks;
  int radius = 0;
};

/// Number of words of each exact sum-rank weight 0..max_weight.
std::vector<BigInt> sr_weight_counts(std::uint64_t q, const std::vector<BlockSize>& blocks, int max_weight);
BigInt vol_sr(const VolumeQuery& query);
BigInt vol_sr_uniform(std::uint64_t q, int n, int m, std::size_t t, int radius);
/// t(t-1)(q^s-1)^4 / (2(q-1)^2), a lower bound on the radius-2 ball with t square s x s blocks.
Rational vol_sr_lower_bound(std::uint64_t q, int s, std::uint64_t t);
BigInt vol_hamming(std::uint64_t q, std::uint64_t n, std::uint64_t r);

/// Matrix index: entry (r, c) is base-q digit r*m + c (digit 0 least significant).
std::uint32_t matrix_index(const Matrix& mat);
Matrix matrix_from_index(const FieldPtr& field, int n, int m, std::uint32_t index);

/// Every n x m matrix over F_q grouped by rank, each group in index order.
struct RankCensus {
  FieldPtr field;
  int n = 0;
  int m = 0;
  std::uint32_t count = 0;
  std::vector<std::uint8_t> rank_of;
  std::vector<std::vector<std::uint32_t>> by_rank;

  int max_rank() const { return static_cast<int>(by_rank.size()) - 1; }
};

/// Cached per (field, n, m); q^{nm} must not exceed 2^20.
std::shared_ptr<const RankCensus> rank_census(const FieldPtr& field, int n, int m);

}  // namespace sumrank
