#include "sfw/sfp_growth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <string>
#include <thread>

#include "sfw/error.hpp"

namespace sfw {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Leaf codes under `cell` form the half-open range [lo, hi).
std::pair<std::uint64_t, std::uint64_t> leaf_range(const Gid& cell, int height) {
  const int shift = 2 * (height - cell.level);
  return {cell.code << shift, (cell.code + 1) << shift};
}

void sort_words(std::vector<Wid>& words, const GlobalWordTable& table) {
  std::sort(words.begin(), words.end(),
            [&](Wid a, Wid b) { return *table.rank_of(a) < *table.rank_of(b); });
}

void mine_entry(const SfpTree& tree, const LevelEntry& e, std::uint64_t sigma,
                std::vector<SpatialFrequentWordset>& out) {
  out.push_back({{e.wid}, e.gid, e.count});
  const FpTree cond = spatial_word_cond_tree(tree, e.wid, e.gid, sigma);
  fp_growth_visit(cond, sigma, [&](std::span<const Wid> words, std::uint64_t count) {
    SpatialFrequentWordset sfw{{words.begin(), words.end()}, e.gid, count};
    sfw.words.push_back(e.wid);
    sort_words(sfw.words, tree.words());
    out.push_back(std::move(sfw));
  });
}

}  // namespace

std::uint64_t SigmaSchedule::at(int level) const {
  if (values_.size() == 1) return values_.front();
  if (level < 0 || static_cast<std::size_t>(level) >= values_.size()) {
    throw ConfigInvalid("no sigma for level " + std::to_string(level));
  }
  return values_[static_cast<std::size_t>(level)];
}

std::uint64_t SigmaSchedule::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

void SigmaSchedule::validate(int height) const {
  if (values_.empty()) throw ConfigInvalid("sigma list is empty");
  for (auto v : values_) {
    if (v < 1) throw ConfigInvalid("sigma must be >= 1");
  }
  if (values_.size() != 1 && values_.size() != static_cast<std::size_t>(height) + 1) {
    throw ConfigInvalid("per-level sigma list needs " + std::to_string(height + 1) +
                        " values (root first), got " + std::to_string(values_.size()));
  }
}

LevelFreqTable spatial_generalization(const CellFreqTable& cells,
                                      const GlobalWordTable& words,
                                      const GridConfig& cfg, int level,
                                      std::uint64_t sigma) {
  if (level < 0 || level > cfg.height()) {
    throw InvalidLevel("level " + std::to_string(level) + " outside grid of height " +
                       std::to_string(cfg.height()));
  }
  LevelFreqTable table{level, {}};
  const int shift = 2 * (cfg.height() - level);
  for (std::uint32_t rank = 0; rank < cells.word_count(); ++rank) {
    const Wid wid = words.wid_at(rank);
    // Cells are code-ordered, so each ancestor's leaves are one run.
    bool open = false;
    LevelEntry run;
    for (const auto& [code, entry] : cells.cells(rank)) {
      const std::uint64_t ancestor = code >> shift;
      if (open && run.gid.code == ancestor) {
        run.count += entry.count;
        continue;
      }
      if (open && run.count >= sigma) table.entries.push_back(run);
      run = {wid, {level, ancestor}, entry.count};
      open = true;
    }
    if (open && run.count >= sigma) table.entries.push_back(run);
  }
  return table;
}

std::vector<LevelEntry> iterate_reverse(const LevelFreqTable& table,
                                        const GlobalWordTable& words) {
  std::vector<LevelEntry> out = table.entries;
  std::stable_sort(out.begin(), out.end(), [&](const LevelEntry& a, const LevelEntry& b) {
    const auto ra = *words.rank_of(a.wid);
    const auto rb = *words.rank_of(b.wid);
    if (ra != rb) return ra > rb;
    return a.gid.code < b.gid.code;
  });
  return out;
}

FpTree spatial_word_cond_tree(const SfpTree& tree, Wid wid, const Gid& cell,
                              std::uint64_t sigma) {
  const auto rank = tree.words().rank_of(wid);
  if (!rank) throw UnknownEntry("wid " + std::to_string(wid) + " is not a retained word");
  if (cell.level < 0 || cell.level > tree.grid().height()) {
    throw UnknownEntry("cell level outside the grid");
  }
  const auto [lo, hi] = leaf_range(cell, tree.grid().height());
  const auto& cells = tree.header().cells(*rank);

  // Per node, the number of its records that fall inside `cell`.
  std::vector<std::pair<NodeId, std::uint64_t>> weights;
  for (auto it = cells.lower_bound(lo); it != cells.end() && it->first < hi; ++it) {
    for (NodeId id : it->second.nodelinks) {
      weights.emplace_back(id, tree.node(id).gids.get(it->first));
    }
  }
  if (weights.empty()) {
    throw UnknownEntry("wid " + std::to_string(wid) + " has no records in cell \"" +
                       gid_to_string(cell) + "\"");
  }
  std::sort(weights.begin(), weights.end());

  PatternBase base;
  std::vector<Wid> path;
  for (std::size_t i = 0; i < weights.size();) {
    const NodeId id = weights[i].first;
    std::uint64_t w = 0;
    for (; i < weights.size() && weights[i].first == id; ++i) w += weights[i].second;
    tree.prefix_path(id, path);
    if (!path.empty()) base.add(path, w);
  }
  return FpTree::from_pattern_base(base, sigma);
}

void sort_results(std::vector<SpatialFrequentWordset>& results,
                  const GlobalWordTable& words) {
  std::vector<std::vector<std::uint32_t>> keys(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    keys[i].reserve(results[i].words.size());
    for (Wid w : results[i].words) keys[i].push_back(*words.rank_of(w));
  }
  std::vector<std::size_t> idx(results.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = results[a];
    const auto& y = results[b];
    if (x.gid.level != y.gid.level) return x.gid.level > y.gid.level;
    if (x.gid.code != y.gid.code) return x.gid.code < y.gid.code;
    if (keys[a].size() != keys[b].size()) return keys[a].size() < keys[b].size();
    return keys[a] < keys[b];
  });
  std::vector<SpatialFrequentWordset> sorted;
  sorted.reserve(results.size());
  for (std::size_t i : idx) sorted.push_back(std::move(results[i]));
  results = std::move(sorted);
}

std::vector<SpatialFrequentWordset> sfp_growth(const SfpTree& tree,
                                               const SigmaSchedule& sigma,
                                               const GrowthOptions& options) {
  const GridConfig& cfg = tree.grid();
  sigma.validate(cfg.height());
  std::vector<SpatialFrequentWordset> out;
  for (int level = cfg.height(); level >= 0; --level) {
    const std::uint64_t s = sigma.at(level);
    const auto table = spatial_generalization(tree.header(), tree.words(), cfg, level, s);
    const auto entries = iterate_reverse(table, tree.words());

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || entries.size() < 2) {
      for (const auto& e : entries) mine_entry(tree, e, s, out);
      continue;
    }
    // Entries are independent read-only tasks; the final sort makes the
    // output independent of scheduling.
    std::vector<std::vector<SpatialFrequentWordset>> partial(threads);
    std::atomic<std::size_t> next{0};
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          for (std::size_t i = next++; i < entries.size(); i = next++) {
            mine_entry(tree, entries[i], s, partial[t]);
          }
        });
      }
    }
    for (auto& p : partial) {
      out.insert(out.end(), std::make_move_iterator(p.begin()),
                 std::make_move_iterator(p.end()));
    }
  }
  sort_results(out, tree.words());
  return out;
}

MiningReport mine_sf_wordsets(RecordSource& db, const SigmaSchedule& sigma,
                              const GridConfig& cfg, const GrowthOptions& options) {
  sigma.validate(cfg.height());
  MiningReport report;

  auto start = Clock::now();
  const FrequencyTables fts = construct_fts(db, sigma.min(), cfg);
  report.first_scan_ms = ms_since(start);
  report.scan = fts.stats;
  report.retained_words = fts.words.size();
  report.one_word_cell_entries = fts.cells.entry_count();

  start = Clock::now();
  const SfpTree tree = insert_all(db, fts, cfg);
  report.tree_build_ms = ms_since(start);
  report.tree_nodes = tree.node_count() - 1;

  start = Clock::now();
  report.patterns = sfp_growth(tree, sigma, options);
  report.growth_ms = ms_since(start);
  return report;
}

}  // namespace sfw
