#pragma once

#include <cstdint>
#include <vector>

#include "sfw/fp_tree.hpp"
#include "sfw/geo_grid.hpp"
#include "sfw/record_source.hpp"
#include "sfw/sfp_tree.hpp"

namespace sfw {

// Minimum spatial support per hierarchy level. One value applies to every
// level; a longer list gives one value per level, root first.
class SigmaSchedule {
 public:
  SigmaSchedule() = default;
  explicit SigmaSchedule(std::uint64_t uniform) : values_{uniform} {}
  explicit SigmaSchedule(std::vector<std::uint64_t> root_first)
      : values_(std::move(root_first)) {}

  std::uint64_t at(int level) const;
  std::uint64_t min() const;
  bool uniform() const { return values_.size() == 1; }
  const std::vector<std::uint64_t>& values() const { return values_; }

  // Throws ConfigInvalid unless every value is >= 1 and the list has either
  // one entry or exactly height + 1.
  void validate(int height) const;

 private:
  std::vector<std::uint64_t> values_{2};
};

struct LevelEntry {
  Wid wid = 0;
  Gid gid;
  std::uint64_t count = 0;

  friend bool operator==(const LevelEntry&, const LevelEntry&) = default;
};

// Per-(word, cell) counts at one level, ordered by word rank then cell code.
struct LevelFreqTable {
  int level = 0;
  std::vector<LevelEntry> entries;
};

struct SpatialFrequentWordset {
  std::vector<Wid> words;  // global word order
  Gid gid;
  std::uint64_t count = 0;

  friend bool operator==(const SpatialFrequentWordset&,
                         const SpatialFrequentWordset&) = default;
};

// Sums leaf-cell counts into their level-`level` ancestors and keeps sums
// >= sigma. Throws InvalidLevel outside [0, height].
LevelFreqTable spatial_generalization(const CellFreqTable& cells,
                                      const GlobalWordTable& words,
                                      const GridConfig& cfg, int level,
                                      std::uint64_t sigma);

// Least globally frequent word first (ties: larger wid first), cells
// ascending within a word.
std::vector<LevelEntry> iterate_reverse(const LevelFreqTable& table,
                                        const GlobalWordTable& words);

// Non-spatial FP-tree over the prefix paths of `wid`'s nodes, each weighted
// by how many of the node's records fall inside `cell`. Words below sigma
// are pruned. Throws UnknownEntry if `wid` has no records in `cell`.
FpTree spatial_word_cond_tree(const SfpTree& tree, Wid wid, const Gid& cell,
                              std::uint64_t sigma);

struct GrowthOptions {
  unsigned threads = 1;
};

// Every (wordset, cell) with spatial support >= sigma.at(level), for every
// level from leaf to root, sorted by sort_results().
std::vector<SpatialFrequentWordset> sfp_growth(const SfpTree& tree,
                                               const SigmaSchedule& sigma,
                                               const GrowthOptions& options = {});

// Level descending, gid ascending, wordset size ascending, then word ranks.
void sort_results(std::vector<SpatialFrequentWordset>& results,
                  const GlobalWordTable& words);

struct MiningReport {
  std::vector<SpatialFrequentWordset> patterns;
  ScanStats scan;
  std::uint64_t retained_words = 0;
  std::uint64_t one_word_cell_entries = 0;
  std::uint64_t tree_nodes = 0;
  double first_scan_ms = 0.0;
  double tree_build_ms = 0.0;
  double growth_ms = 0.0;
};

// First scan, second scan with tree insertion, then growth. Words are
// retained when their global count reaches the smallest per-level sigma.
MiningReport mine_sf_wordsets(RecordSource& db, const SigmaSchedule& sigma,
                              const GridConfig& cfg,
                              const GrowthOptions& options = {});

}  // namespace sfw
