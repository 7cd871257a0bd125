#pragma once

// Spatial FP-tree: a prefix tree over frequency-sorted wordsets whose nodes
// also record how many of the records passing through them fell into each
// leaf cell of the grid. The header table is keyed by (word, leaf cell) and
// links every node that holds that cell in its count table.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sfw/fp_tree.hpp"
#include "sfw/geo_grid.hpp"
#include "sfw/record_source.hpp"
#include "sfw/text_pipeline.hpp"

namespace sfw {

// Leaf-cell -> count map of one node. Most nodes see only a few cells, so
// entries live in a flat vector until the table grows past a handful.
class GidCountTable {
 public:
  // Adds `delta` to the entry for `code`; returns true if it was absent.
  bool add(std::uint64_t code, std::uint64_t delta = 1);
  std::uint64_t get(std::uint64_t code) const;
  std::size_t size() const { return large_.empty() ? small_.size() : large_.size(); }
  bool empty() const { return size() == 0; }

  template <typename F>
  void for_each(F&& f) const {
    if (large_.empty()) {
      for (const auto& [code, count] : small_) f(code, count);
    } else {
      for (const auto& [code, count] : large_) f(code, count);
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted_entries() const;

 private:
  static constexpr std::size_t kSmallLimit = 8;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> small_;
  std::unordered_map<std::uint64_t, std::uint64_t> large_;
};

struct WordCount {
  Wid wid = 0;
  std::uint64_t count = 0;
};

// Words whose global support reaches the retention threshold, in global
// order: descending count, ties by ascending wid.
class GlobalWordTable {
 public:
  GlobalWordTable() = default;
  GlobalWordTable(const std::unordered_map<Wid, std::uint64_t>& counts,
                  std::uint64_t min_count);

  const std::vector<WordCount>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<std::uint32_t> rank_of(Wid wid) const;
  std::uint64_t count_of(Wid wid) const;
  Wid wid_at(std::uint32_t rank) const { return entries_[rank].wid; }

 private:
  std::vector<WordCount> entries_;
  std::unordered_map<Wid, std::uint32_t> rank_;
};

struct CellEntry {
  std::uint64_t count = 0;
  std::vector<NodeId> nodelinks;
};

// (word, leaf cell) -> count + links, grouped by word rank and ordered by
// cell code so every cell under a given ancestor is one contiguous range.
class CellFreqTable {
 public:
  using CellMap = std::map<std::uint64_t, CellEntry>;

  CellFreqTable() = default;
  explicit CellFreqTable(std::size_t words) : by_rank_(words) {}

  std::size_t word_count() const { return by_rank_.size(); }
  const CellMap& cells(std::uint32_t rank) const { return by_rank_[rank]; }
  CellMap& cells(std::uint32_t rank) { return by_rank_[rank]; }
  const CellEntry* find(std::uint32_t rank, std::uint64_t code) const;
  std::size_t entry_count() const;

 private:
  std::vector<CellMap> by_rank_;
};

struct ScanStats {
  std::uint64_t records = 0;
  std::uint64_t out_of_bounds = 0;
  std::uint64_t distinct_words = 0;
};

struct FrequencyTables {
  GlobalWordTable words;
  CellFreqTable cells;  // counts only; nodelinks stay empty
  ScanStats stats;
};

// First scan. Keeps words with global count >= min_count, and for those
// words the count in every leaf cell they occur in. Out-of-bounds records
// are skipped and counted.
FrequencyTables construct_fts(RecordSource& db, std::uint64_t min_count,
                              const GridConfig& cfg);

// Retained words of `wordset` in global order.
std::vector<Wid> refine_and_sort(std::span<const Wid> wordset,
                                 const GlobalWordTable& words);

class SfpTree {
 public:
  struct Node {
    Wid wid = 0;
    std::uint32_t rank = 0;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;  // sorted by rank
    GidCountTable gids;
  };

  static constexpr NodeId kRoot = 0;

  // Bare root with an empty header over `words`.
  SfpTree(GridConfig cfg, GlobalWordTable words);

  // Walks/extends the path for `wids` and bumps the leaf cell count in every
  // node on it. Throws OrderViolation if wids are not strictly increasing in
  // global order (or not retained), InvalidLevel if leaf is not leaf-level.
  void insert_ssd(std::span<const Wid> wids, const Gid& leaf);

  const GridConfig& grid() const { return grid_; }
  const GlobalWordTable& words() const { return words_; }
  const CellFreqTable& header() const { return header_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }

  // Words strictly above `id`, root side first.
  void prefix_path(NodeId id, std::vector<Wid>& out) const;

  // One node per line: "word [gid:count, ...]", children indented two
  // spaces, cells ascending. Words print as wids without a dictionary.
  std::string dump(const WordDictionary* dict = nullptr) const;

 private:
  NodeId child_with_rank(NodeId parent, std::uint32_t rank) const;

  GridConfig grid_;
  GlobalWordTable words_;
  CellFreqTable header_;
  std::vector<Node> nodes_;
};

// Second scan over a source already counted by construct_fts. Throws Error
// if the replay disagrees with the first scan.
SfpTree insert_all(RecordSource& db, const FrequencyTables& fts,
                   const GridConfig& cfg);

// construct_fts followed by insert_all.
SfpTree build_sfp_tree(RecordSource& db, std::uint64_t min_count,
                       const GridConfig& cfg);

}  // namespace sfw
