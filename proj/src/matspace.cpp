#include "sumrank/matspace.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace sumrank {

BigInt big_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt r = 1, b = base;
  while (exp > 0) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

BigInt gauss_binom(int n, int k, std::uint64_t q) {
  if (k < 0 || k > n) return 0;
  BigInt num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= big_pow(q, static_cast<std::uint64_t>(n - i)) - 1;
    den *= big_pow(q, static_cast<std::uint64_t>(i + 1)) - 1;
  }
  return num / den;
}

BigInt rank_count(std::uint64_t q, int n, int m, int r) {
  if (r < 0 || r > std::min(n, m))
    throw Error(Errc::RankOutOfRange, "rank " + std::to_string(r) + " for " + std::to_string(n) + "x" + std::to_string(m));
  BigInt prod = 1;
  const BigInt qm = big_pow(q, static_cast<std::uint64_t>(m));
  for (int i = 0; i < r; ++i) prod *= qm - big_pow(q, static_cast<std::uint64_t>(i));
  return gauss_binom(n, r, q) * prod;
}

std::vector<BigInt> sr_weight_counts(std::uint64_t q, const std::vector<BlockSize>& blocks, int max_weight) {
  std::vector<BigInt> acc(static_cast<std::size_t>(max_weight + 1), 0);
  acc[0] = 1;
  std::map<std::pair<int, int>, std::vector<BigInt>> per_shape;
  for (const auto& b : blocks) {
    auto& census = per_shape[{b.n, b.m}];
    if (census.empty())
      for (int r = 0; r <= std::min(b.n, b.m); ++r) census.push_back(rank_count(q, b.n, b.m, r));
    std::vector<BigInt> next(acc.size(), 0);
    for (std::size_t w = 0; w < acc.size(); ++w) {
      if (acc[w] == 0) continue;
      for (std::size_t r = 0; r < census.size() && w + r < acc.size(); ++r) next[w + r] += acc[w] * census[r];
    }
    acc = std::move(next);
  }
  return acc;
}

BigInt vol_sr(const VolumeQuery& query) {
  BigInt total = 0;
  for (const auto& c : sr_weight_counts(query.q, query.blocks, query.radius)) total += c;
  return total;
}

BigInt vol_sr_uniform(std::uint64_t q, int n, int m, std::size_t t, int radius) {
  return vol_sr({q, std::vector<BlockSize>(t, BlockSize{n, m}), radius});
}

Rational vol_sr_lower_bound(std::uint64_t q, int s, std::uint64_t t) {
  const BigInt qs1 = big_pow(q, static_cast<std::uint64_t>(s)) - 1;
  const BigInt num = BigInt(t) * BigInt(t - 1) * qs1 * qs1 * qs1 * qs1;
  const BigInt den = 2 * BigInt(q - 1) * BigInt(q - 1);
  return Rational(num, den);
}

BigInt vol_hamming(std::uint64_t q, std::uint64_t n, std::uint64_t r) {
  BigInt total = 0;
  for (std::uint64_t i = 0; i <= r && i <= n; ++i) total += binomial(n, i) * big_pow(q - 1, i);
  return total;
}

std::uint32_t matrix_index(const Matrix& mat) {
  std::uint32_t idx = 0;
  const std::uint32_t q = mat.field->size();
  for (std::size_t k = mat.entries.size(); k-- > 0;) idx = idx * q + mat.entries[k];
  return idx;
}

Matrix matrix_from_index(const FieldPtr& field, int n, int m, std::uint32_t index) {
  Matrix mat(field, static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (auto& e : mat.entries) {
    e = index % field->size();
    index /= field->size();
  }
  return mat;
}

std::shared_ptr<const RankCensus> rank_census(const FieldPtr& field, int n, int m) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, std::shared_ptr<const RankCensus>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({field.get(), n, m});
    if (it != cache.end()) return it->second;
  }
  std::uint64_t count = 1;
  for (int i = 0; i < n * m; ++i) {
    count *= field->size();
    if (count > (1u << 20)) throw Error(Errc::FieldTooLarge, "matrix space too large to tabulate");
  }
  auto census = std::make_shared<RankCensus>();
  census->field = field;
  census->n = n;
  census->m = m;
  census->count = static_cast<std::uint32_t>(count);
  census->rank_of.resize(count);
  census->by_rank.resize(static_cast<std::size_t>(std::min(n, m) + 1));
  for (std::uint32_t idx = 0; idx < count; ++idx) {
    const auto r = rank(matrix_from_index(field, n, m, idx));
    census->rank_of[idx] = static_cast<std::uint8_t>(r);
    census->by_rank[r].push_back(idx);
  }
  std::lock_guard lock(mu);
  return cache.emplace(std::make_tuple(field.get(), n, m), census).first->second;
}

}  // namespace sumrank
