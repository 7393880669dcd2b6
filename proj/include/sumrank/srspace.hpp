#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "sumrank/cyclic.hpp"
#include "sumrank/enumerate.hpp"
#include "sumrank/gf.hpp"
#include "sumrank/matspace.hpp"

namespace sumrank {

/// Bijection between coefficient tuples (a_0, ..., a_{n-1}) over F_{q^m} and n x m
/// matrices over F_q: the matrix of x -> sum_j a_j phi(x^{q^j}) on F_{q^n}, rows
/// indexed by the basis 1, alpha, ..., alpha^{n-1}.
class BlockCodec {
 public:
  BlockCodec(FieldPtr base, int n, int m, TowerMap phi);

  const FieldPtr& base() const noexcept { return base_; }
  const FieldPtr& domain() const noexcept { return domain_; }
  const FieldPtr& codomain() const noexcept { return codomain_; }
  const TowerMap& phi() const noexcept { return phi_; }
  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  std::uint32_t symbols() const noexcept { return symbols_; }
  /// (n m) x (n m) over F_q: column j*m + k is the image of a_j = alpha_m^k.
  const Matrix& codec_matrix() const noexcept { return codec_matrix_; }
  const RankCensus& census() const { return *census_; }
  const std::shared_ptr<const RankCensus>& census_ptr() const noexcept { return census_; }

  Matrix forward_matrix(std::span<const Elem> coeffs) const;
  std::uint32_t forward(std::span<const Elem> coeffs) const;
  /// Coefficients of a matrix index (n elements of F_{q^m}).
  std::span<const Elem> inverse(std::uint32_t symbol) const {
    return {inverse_.data() + std::size_t{symbol} * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  int rank_of(std::uint32_t symbol) const { return census_->rank_of[symbol]; }

 private:
  FieldPtr base_, domain_, codomain_;
  int n_, m_;
  TowerMap phi_;
  std::uint32_t symbols_ = 0;
  Matrix codec_matrix_;
  std::vector<Elem> inverse_;
  std::vector<std::vector<Elem>> frob_basis_;  // frob_basis_[j][r] = phi((alpha_n^r)^{q^j})
  std::shared_ptr<const RankCensus> census_;
};

using BlockCodecPtr = std::shared_ptr<const BlockCodec>;

/// Codec for (q, n, m) with the default embedding from embedding_make.
BlockCodecPtr block_codec(const FieldPtr& base, int n, int m);
BlockCodecPtr block_codec(const FieldPtr& base, int n, int m, TowerMap phi);

struct SRGeometry {
  BlockCodecPtr codec;
  std::size_t t = 0;

  std::uint64_t q() const { return codec->base()->size(); }
  int n() const { return codec->n(); }
  int m() const { return codec->m(); }
};

SRGeometry geometry_make(std::uint64_t q, int n, int m, std::size_t t);
bool same_geometry(const SRGeometry& a, const SRGeometry& b);

/// Word as one matrix index per block.
struct SRWord {
  std::vector<std::uint32_t> blocks;
  friend bool operator==(const SRWord&, const SRWord&) = default;
};

/// n rows a_0, ..., a_{n-1}, each of length t over F_{q^m}.
struct CoeffWord {
  std::vector<std::vector<Elem>> coeffs;
  friend bool operator==(const CoeffWord&, const CoeffWord&) = default;
};

SRWord codec_forward(const SRGeometry& g, const CoeffWord& cw);
CoeffWord codec_inverse(const SRGeometry& g, const SRWord& w);
int wt_sr(const BlockCodec& codec, const SRWord& w);
int d_sr(const BlockCodec& codec, const SRWord& u, const SRWord& v);
SRWord word_add(const BlockCodec& codec, const SRWord& u, const SRWord& v);
SRWord word_sub(const BlockCodec& codec, const SRWord& u, const SRWord& v);

/// 2 wt_H(a0) + 2 wt_H(a1) - 3 |supp(a0) cap supp(a1)|.
int lemma71_weight(std::span<const Elem> a0, std::span<const Elem> a1);

inline constexpr int kInfiniteDistance = 1 << 20;

/// Sum-rank code with an additive syndrome map.
class SumRankCode {
 public:
  virtual ~SumRankCode() = default;

  virtual const BlockCodecPtr& codec() const = 0;
  /// Number of blocks.
  virtual std::size_t positions() const = 0;
  virtual SyndromeSpace syndrome_space() const = 0;
  virtual std::uint64_t block_syndrome(std::size_t pos, std::uint32_t symbol) const = 0;
  virtual std::size_t codimension_fq() const = 0;
  /// Lower bound on the distance from component data, when one is known.
  virtual std::optional<int> analytic_distance_bound() const = 0;
  /// Known-member words that make good low-weight witness candidates.
  virtual std::vector<SRWord> structured_candidates(int max_weight) const = 0;

  std::size_t dimension_fq() const;
  std::uint64_t syndrome(const SRWord& w) const;
  bool member(const SRWord& w) const { return syndrome(w) == 0; }
  const std::vector<std::vector<std::uint64_t>>& syndrome_tables() const;
  EnumProblem enum_problem() const;

 private:
  mutable std::once_flag tables_once_;
  mutable std::vector<std::vector<std::uint64_t>> tables_;
};

using SumRankCodePtr = std::shared_ptr<const SumRankCode>;

struct Component {
  LinearCode code;
  std::optional<CyclicCode> cyclic;  // kept for descriptors
  std::string label;                 // "cyclic", "parity", "trivial", "hamming", "linear", "zero"
  int distance = 1;                  // exact or lower bound; kInfiniteDistance for the zero code
  bool distance_exact = false;
};

Component component_from(LinearCode code, std::string label);
Component component_from(CyclicCode code);

/// SR(C_0, ..., C_{n-1}).
class SRCode : public SumRankCode {
 public:
  SRCode(SRGeometry geometry, std::vector<Component> components);

  const SRGeometry& geometry() const noexcept { return geometry_; }
  const std::vector<Component>& components() const noexcept { return components_; }

  const BlockCodecPtr& codec() const override { return geometry_.codec; }
  std::size_t positions() const override { return geometry_.t; }
  SyndromeSpace syndrome_space() const override { return space_; }
  std::uint64_t block_syndrome(std::size_t pos, std::uint32_t symbol) const override;
  std::size_t codimension_fq() const override;
  std::optional<int> analytic_distance_bound() const override;
  std::vector<SRWord> structured_candidates(int max_weight) const override;

  /// Membership through the component parity checks of codec_inverse(w).
  bool member_by_components(const SRWord& w) const;
  /// Codimension over F_{q^m}.
  std::size_t codimension_total() const;

 private:
  SRGeometry geometry_;
  std::vector<Component> components_;
  SyndromeSpace space_;
};

/// Plotkin sum {(u | u + v) : u in first, v in second}.
class PlotkinCode : public SumRankCode {
 public:
  PlotkinCode(SumRankCodePtr first, SumRankCodePtr second);

  const SumRankCodePtr& first() const noexcept { return first_; }
  const SumRankCodePtr& second() const noexcept { return second_; }

  const BlockCodecPtr& codec() const override { return first_->codec(); }
  std::size_t positions() const override { return 2 * first_->positions(); }
  SyndromeSpace syndrome_space() const override { return space_; }
  std::uint64_t block_syndrome(std::size_t pos, std::uint32_t symbol) const override;
  std::size_t codimension_fq() const override { return first_->codimension_fq() + second_->codimension_fq(); }
  std::optional<int> analytic_distance_bound() const override;
  std::vector<SRWord> structured_candidates(int max_weight) const override;

  /// u in first and v - u in second for w = (u | v).
  bool member_by_halves(const SRWord& w) const;

 private:
  SumRankCodePtr first_, second_;
  SyndromeSpace space_;
  std::uint64_t shift_ = 1;  // p^{digits of first}
};

/// Builds SR(C_0..C_{n-1}); throws LengthMismatch or WrongField on inconsistent components.
std::shared_ptr<const SRCode> sr_build(std::vector<Component> components, const SRGeometry& geometry);
std::shared_ptr<const PlotkinCode> plotkin(SumRankCodePtr first, SumRankCodePtr second);

}  // namespace sumrank
