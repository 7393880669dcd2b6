#include "sumrank/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace sumrank {

std::uint64_t SyndromeSpace::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < digits; ++i) s *= static_cast<std::uint64_t>(p);
  return s;
}

std::uint64_t SyndromeSpace::add_slow(std::uint64_t a, std::uint64_t b) const noexcept {
  const auto P = static_cast<std::uint64_t>(p);
  std::uint64_t r = 0, pw = 1;
  while (a != 0 || b != 0) {
    r += ((a % P + b % P) % P) * pw;
    a /= P;
    b /= P;
    pw *= P;
  }
  return r;
}

std::uint64_t SyndromeSpace::neg(std::uint64_t a) const noexcept {
  if (p == 2) return a;
  const auto P = static_cast<std::uint64_t>(p);
  std::uint64_t r = 0, pw = 1;
  while (a != 0) {
    r += ((P - a % P) % P) * pw;
    a /= P;
    pw *= P;
  }
  return r;
}

SyndromeSpace syndrome_space(int p, int digits) {
  BigInt size = big_pow(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(digits));
  if (size > BigInt(std::numeric_limits<std::uint64_t>::max() / 2))
    throw Error(Errc::UnsupportedAlphabet, "syndrome space exceeds 64 bits");
  return {p, digits};
}

namespace {

struct Layer {
  std::vector<std::vector<std::uint64_t>> binom;  // binom[c][i] = C(c, i)
  struct Group {
    int k = 0;
    std::vector<std::vector<int>> compositions;
    std::uint64_t item_size = 0;  // words per support
    std::uint64_t items = 0;      // number of supports
  };
  std::vector<Group> groups;
};

void compositions(int w, int k, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (k == 0) {
    if (w == 0) out.push_back(cur);
    return;
  }
  for (int r = 1; r <= std::min(w, max_part); ++r) {
    if (w - r > (k - 1) * max_part || w - r < k - 1) continue;
    cur.push_back(r);
    compositions(w - r, k - 1, max_part, cur, out);
    cur.pop_back();
  }
}

std::uint64_t small_binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  const BigInt b = binomial(n, k);
  if (b > BigInt(std::numeric_limits<std::uint64_t>::max())) throw Error(Errc::BudgetExceeded, "layer too large");
  return static_cast<std::uint64_t>(b);
}

Layer make_layer(const EnumProblem& pr, int w) {
  Layer layer;
  const int rmax = pr.census->max_rank();
  layer.binom.assign(pr.positions + 2, std::vector<std::uint64_t>(static_cast<std::size_t>(w + 1), 0));
  for (std::size_t c = 0; c < layer.binom.size(); ++c)
    for (int i = 0; i <= w; ++i) layer.binom[c][static_cast<std::size_t>(i)] = small_binom(c, static_cast<std::uint64_t>(i));
  for (int k = 1; k <= w && static_cast<std::size_t>(k) <= pr.positions; ++k) {
    Layer::Group g;
    g.k = k;
    std::vector<int> cur;
    compositions(w, k, rmax, cur, g.compositions);
    if (g.compositions.empty()) continue;
    BigInt size = 0;
    for (const auto& c : g.compositions) {
      BigInt prod = 1;
      for (int r : c) prod *= pr.census->by_rank[static_cast<std::size_t>(r)].size();
      size += prod;
    }
    if (size > BigInt(std::numeric_limits<std::uint64_t>::max() / 4))
      throw Error(Errc::BudgetExceeded, "support item too large");
    g.item_size = static_cast<std::uint64_t>(size);
    g.items = small_binom(pr.positions, static_cast<std::uint64_t>(k));
    layer.groups.push_back(std::move(g));
  }
  return layer;
}

// Colex unranking: index = sum_i C(c_i, i+1) with c_0 < c_1 < ...
void unrank_colex(const Layer& layer, std::uint64_t index, int k, std::vector<std::uint32_t>& out) {
  out.assign(static_cast<std::size_t>(k), 0);
  const auto& B = layer.binom;
  for (int i = k; i >= 1; --i) {
    std::size_t c = static_cast<std::size_t>(i) - 1;
    while (B[c + 1][static_cast<std::size_t>(i)] <= index) ++c;
    index -= B[c][static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i - 1)] = static_cast<std::uint32_t>(c);
  }
}

// Walks every word on one support; visit(syndrome, chosen) returns false to stop.
template <class Visit>
bool run_support(const EnumProblem& pr, const std::vector<std::uint32_t>& support,
                 const std::vector<std::vector<int>>& comps, std::vector<std::uint32_t>& chosen, Visit&& visit) {
  const std::size_t k = support.size();
  chosen.assign(k, 0);
  std::vector<const std::vector<std::uint32_t>*> classes(k);
  std::vector<const std::uint64_t*> rows(k);
  for (std::size_t i = 0; i < k; ++i) rows[i] = (*pr.tables)[support[i]].data();
  std::vector<std::size_t> pos(k);
  std::vector<std::uint64_t> acc(k + 1, 0);
  for (const auto& comp : comps) {
    for (std::size_t i = 0; i < k; ++i) classes[i] = &pr.census->by_rank[static_cast<std::size_t>(comp[i])];
    // Odometer over the k rank classes, last position fastest.
    std::fill(pos.begin(), pos.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      chosen[i] = (*classes[i])[0];
      acc[i + 1] = pr.space.add(acc[i], rows[i][chosen[i]]);
    }
    while (true) {
      if (!visit(acc[k], chosen)) return false;
      std::size_t d = k;
      while (d > 0) {
        --d;
        if (++pos[d] < classes[d]->size()) break;
        pos[d] = 0;
        if (d == 0) {
          d = k + 1;
          break;
        }
      }
      if (d == k + 1) break;
      for (std::size_t i = d; i < k; ++i) {
        chosen[i] = (*classes[i])[pos[i]];
        acc[i + 1] = pr.space.add(acc[i], rows[i][chosen[i]]);
      }
    }
  }
  return true;
}

struct ItemRef {
  const Layer::Group* group;
  std::uint64_t local;
};

}  // namespace

BigInt layer_size(const EnumProblem& problem, int weight) {
  std::vector<BlockSize> blocks(problem.positions, BlockSize{problem.census->n, problem.census->m});
  const auto counts = sr_weight_counts(problem.census->field->size(), blocks, weight);
  return counts[static_cast<std::size_t>(weight)];
}

FindResult find_codeword(const EnumProblem& pr, int weight, std::uint64_t budget, unsigned workers) {
  const Layer layer = make_layer(pr, weight);
  // Flatten the examined prefix of items.
  std::vector<std::pair<const Layer::Group*, std::uint64_t>> spans;  // group, item count
  FindResult result;
  result.complete = true;
  std::uint64_t remaining = budget;
  std::uint64_t total_items = 0;
  for (const auto& g : layer.groups) {
    const std::uint64_t fit = g.item_size == 0 ? g.items : std::min<std::uint64_t>(g.items, remaining / g.item_size);
    if (fit > 0) {
      spans.emplace_back(&g, fit);
      total_items += fit;
      remaining -= fit * g.item_size;
      result.examined += BigInt(fit) * g.item_size;
    }
    if (fit < g.items) {
      result.complete = false;
      break;
    }
  }
  auto locate = [&](std::uint64_t gidx) -> ItemRef {
    for (const auto& [g, n] : spans) {
      if (gidx < n) return {g, gidx};
      gidx -= n;
    }
    return {nullptr, 0};
  };

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::mutex mu;
  SparseWord best_word;

  auto worker = [&]() {
    std::vector<std::uint32_t> support, chosen;
    while (true) {
      const std::uint64_t g = next.fetch_add(1);
      if (g >= total_items || g > best.load()) break;
      const ItemRef item = locate(g);
      unrank_colex(layer, item.local, item.group->k, support);
      SparseWord found;
      run_support(pr, support, item.group->compositions, chosen, [&](std::uint64_t s, const std::vector<std::uint32_t>& c) {
        if (s != 0) return true;
        for (std::size_t i = 0; i < support.size(); ++i) found.emplace_back(support[i], c[i]);
        return false;
      });
      if (!found.empty()) {
        std::lock_guard lock(mu);
        if (g < best.load()) {
          best.store(g);
          best_word = std::move(found);
        }
      }
    }
  };

  const unsigned n_workers = std::max(1u, workers);
  if (n_workers == 1 || total_items < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
    result.witness = std::move(best_word);
    result.complete = true;
    // Count only supports up to and including the witness support.
    result.examined = 0;
    std::uint64_t left = best.load() + 1;
    for (const auto& [g, n] : spans) {
      const std::uint64_t take = std::min(left, n);
      result.examined += BigInt(take) * g->item_size;
      left -= take;
      if (left == 0) break;
    }
  }
  return result;
}

std::uint64_t cover_layer(const EnumProblem& pr, int weight, std::vector<std::uint8_t>& first_hit, unsigned workers) {
  const Layer layer = make_layer(pr, weight);
  std::vector<std::pair<const Layer::Group*, std::uint64_t>> spans;
  std::uint64_t total_items = 0;
  for (const auto& g : layer.groups) {
    spans.emplace_back(&g, g.items);
    total_items += g.items;
  }
  const std::size_t words = (first_hit.size() + 63) / 64;
  const unsigned n_workers = std::max(1u, workers);
  std::vector<std::vector<std::uint64_t>> local(n_workers, std::vector<std::uint64_t>(words, 0));
  std::atomic<std::uint64_t> next{0};

  auto worker = [&](unsigned id) {
    auto& bits = local[id];
    std::vector<std::uint32_t> support, chosen;
    while (true) {
      std::uint64_t g = next.fetch_add(1);
      if (g >= total_items) break;
      const Layer::Group* group = nullptr;
      for (const auto& [gr, n] : spans) {
        if (g < n) {
          group = gr;
          break;
        }
        g -= n;
      }
      unrank_colex(layer, g, group->k, support);
      run_support(pr, support, group->compositions, chosen, [&](std::uint64_t s, const std::vector<std::uint32_t>&) {
        bits[s >> 6] |= std::uint64_t{1} << (s & 63);
        return true;
      });
    }
  };

  if (n_workers == 1 || total_items < 2) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker, i);
    for (auto& t : pool) t.join();
  }
  std::uint64_t fresh = 0;
  for (std::size_t s = 0; s < first_hit.size(); ++s) {
    if (first_hit[s] != kUnhit) continue;
    for (const auto& bits : local) {
      if (bits[s >> 6] >> (s & 63) & 1) {
        first_hit[s] = static_cast<std::uint8_t>(weight);
        ++fresh;
        break;
      }
    }
  }
  return fresh;
}

CoverageResult cover_syndromes(const EnumProblem& pr, int cap, std::uint64_t budget, unsigned workers) {
  CoverageResult res;
  const std::uint64_t size = pr.space.size();
  res.first_hit.assign(size, kUnhit);
  res.first_hit[0] = 0;
  res.layer_words.push_back(1);
  res.examined = 1;
  std::uint64_t hit = 1;
  BigInt remaining = budget;
  for (int w = 1;; ++w) {
    if (hit == size) {
      res.complete = true;
      break;
    }
    if (w > cap || w > pr.census->max_rank() * static_cast<int>(pr.positions)) {
      res.cap_reached = true;
      break;
    }
    const BigInt words = layer_size(pr, w);
    if (words > remaining) {
      res.budget_exceeded = true;
      break;
    }
    remaining -= words;
    res.examined += words;
    res.layer_words.push_back(words);
    hit += cover_layer(pr, w, res.first_hit, workers);
    res.radius = w;
  }
  if (!res.complete) res.radius = 0;
  return res;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  std::uint64_t h = seed;
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sumrank
