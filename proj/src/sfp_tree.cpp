#include "sfw/sfp_tree.hpp"

#include <algorithm>
#include <sstream>

#include "sfw/error.hpp"

namespace sfw {
namespace {

struct CellKey {
  Wid wid;
  std::uint64_t code;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = k.code * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.wid) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

bool GidCountTable::add(std::uint64_t code, std::uint64_t delta) {
  if (large_.empty()) {
    for (auto& [c, n] : small_) {
      if (c == code) {
        n += delta;
        return false;
      }
    }
    if (small_.size() < kSmallLimit) {
      small_.emplace_back(code, delta);
      return true;
    }
    large_.reserve(kSmallLimit * 4);
    for (const auto& [c, n] : small_) large_.emplace(c, n);
    small_.clear();
    small_.shrink_to_fit();
  }
  auto [it, inserted] = large_.try_emplace(code, 0);
  it->second += delta;
  return inserted;
}

std::uint64_t GidCountTable::get(std::uint64_t code) const {
  if (large_.empty()) {
    for (const auto& [c, n] : small_) {
      if (c == code) return n;
    }
    return 0;
  }
  auto it = large_.find(code);
  return it == large_.end() ? 0 : it->second;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> GidCountTable::sorted_entries() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(size());
  for_each([&](std::uint64_t c, std::uint64_t n) { out.emplace_back(c, n); });
  std::sort(out.begin(), out.end());
  return out;
}

GlobalWordTable::GlobalWordTable(const std::unordered_map<Wid, std::uint64_t>& counts,
                                 std::uint64_t min_count) {
  for (const auto& [wid, count] : counts) {
    if (count >= min_count) entries_.push_back({wid, count});
  }
  std::sort(entries_.begin(), entries_.end(), [](const WordCount& a, const WordCount& b) {
    return a.count != b.count ? a.count > b.count : a.wid < b.wid;
  });
  rank_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    rank_.emplace(entries_[i].wid, static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> GlobalWordTable::rank_of(Wid wid) const {
  auto it = rank_.find(wid);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t GlobalWordTable::count_of(Wid wid) const {
  auto r = rank_of(wid);
  return r ? entries_[*r].count : 0;
}

const CellEntry* CellFreqTable::find(std::uint32_t rank, std::uint64_t code) const {
  if (rank >= by_rank_.size()) return nullptr;
  auto it = by_rank_[rank].find(code);
  return it == by_rank_[rank].end() ? nullptr : &it->second;
}

std::size_t CellFreqTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& m : by_rank_) n += m.size();
  return n;
}

FrequencyTables construct_fts(RecordSource& db, std::uint64_t min_count,
                              const GridConfig& cfg) {
  std::unordered_map<Wid, std::uint64_t> global;
  std::unordered_map<CellKey, std::uint64_t, CellKeyHash> per_cell;
  ScanStats stats;
  db.scan([&](const SpatialSocialRecord& r) {
    ++stats.records;
    if (!cfg.bbox().contains(r.geo)) {
      ++stats.out_of_bounds;
      return;
    }
    const std::uint64_t code = encode(r.geo, cfg).code;
    for (Wid w : r.words) {
      ++global[w];
      ++per_cell[{w, code}];
    }
  });
  stats.distinct_words = global.size();

  FrequencyTables fts{GlobalWordTable(global, std::max<std::uint64_t>(min_count, 1)), {}, stats};
  fts.cells = CellFreqTable(fts.words.size());
  for (const auto& [key, count] : per_cell) {
    if (auto rank = fts.words.rank_of(key.wid)) {
      fts.cells.cells(*rank)[key.code].count = count;
    }
  }
  return fts;
}

std::vector<Wid> refine_and_sort(std::span<const Wid> wordset,
                                 const GlobalWordTable& words) {
  std::vector<std::uint32_t> ranks;
  ranks.reserve(wordset.size());
  for (Wid w : wordset) {
    if (auto r = words.rank_of(w)) ranks.push_back(*r);
  }
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  std::vector<Wid> out;
  out.reserve(ranks.size());
  for (auto r : ranks) out.push_back(words.wid_at(r));
  return out;
}

SfpTree::SfpTree(GridConfig cfg, GlobalWordTable words)
    : grid_(cfg), words_(std::move(words)), header_(words_.size()) {
  nodes_.emplace_back();
}

NodeId SfpTree::child_with_rank(NodeId parent, std::uint32_t rank) const {
  const auto& children = nodes_[parent].children;
  auto it = std::lower_bound(children.begin(), children.end(), rank,
                             [this](NodeId c, std::uint32_t r) { return nodes_[c].rank < r; });
  return (it != children.end() && nodes_[*it].rank == rank) ? *it : kNoNode;
}

void SfpTree::insert_ssd(std::span<const Wid> wids, const Gid& leaf) {
  if (leaf.level != grid_.height()) {
    throw InvalidLevel("insert_ssd needs a leaf-level gid");
  }
  // Validate the whole path before touching the tree.
  std::vector<std::uint32_t> ranks;
  ranks.reserve(wids.size());
  for (Wid w : wids) {
    auto r = words_.rank_of(w);
    if (!r) throw OrderViolation("wid " + std::to_string(w) + " is not a retained word");
    if (!ranks.empty() && *r <= ranks.back()) {
      throw OrderViolation("wids are not sorted by global word order");
    }
    ranks.push_back(*r);
  }

  NodeId parent = kRoot;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const std::uint32_t rank = ranks[i];
    NodeId id = child_with_rank(parent, rank);
    if (id == kNoNode) {
      id = static_cast<NodeId>(nodes_.size());
      Node fresh;
      fresh.wid = wids[i];
      fresh.rank = rank;
      fresh.parent = parent;
      nodes_.push_back(std::move(fresh));
      auto& children = nodes_[parent].children;
      auto pos = std::lower_bound(children.begin(), children.end(), rank,
                                  [this](NodeId c, std::uint32_t r) { return nodes_[c].rank < r; });
      children.insert(pos, id);
    }
    const bool new_cell = nodes_[id].gids.add(leaf.code);
    CellEntry& entry = header_.cells(rank)[leaf.code];
    ++entry.count;
    if (new_cell) entry.nodelinks.push_back(id);
    parent = id;
  }
}

void SfpTree::prefix_path(NodeId id, std::vector<Wid>& out) const {
  out.clear();
  for (NodeId p = nodes_[id].parent; p != kRoot && p != kNoNode; p = nodes_[p].parent) {
    out.push_back(nodes_[p].wid);
  }
  std::reverse(out.begin(), out.end());
}

std::string SfpTree::dump(const WordDictionary* dict) const {
  std::ostringstream out;
  auto visit = [&](auto&& self, NodeId id, int depth) -> void {
    const Node& n = nodes_[id];
    out << std::string(static_cast<std::size_t>(2 * depth), ' ');
    if (dict != nullptr) {
      out << dict->word(n.wid);
    } else {
      out << n.wid;
    }
    out << " [";
    bool first = true;
    for (const auto& [code, count] : n.gids.sorted_entries()) {
      if (!first) out << ", ";
      first = false;
      out << gid_to_string({grid_.height(), code}) << ':' << count;
    }
    out << "]\n";
    for (NodeId c : n.children) self(self, c, depth + 1);
  };
  for (NodeId c : nodes_[kRoot].children) visit(visit, c, 0);
  return out.str();
}

SfpTree insert_all(RecordSource& db, const FrequencyTables& fts, const GridConfig& cfg) {
  SfpTree tree(cfg, fts.words);
  db.scan([&](const SpatialSocialRecord& r) {
    if (!cfg.bbox().contains(r.geo)) return;
    const auto wids = refine_and_sort(r.words, tree.words());
    if (wids.empty()) return;
    tree.insert_ssd(wids, encode(r.geo, cfg));
  });
  // The skeleton from the first scan must match what insertion produced.
  const auto& built = tree.header();
  for (std::uint32_t rank = 0; rank < fts.cells.word_count(); ++rank) {
    const auto& expected = fts.cells.cells(rank);
    const auto& actual = built.cells(rank);
    const bool same = expected.size() == actual.size() &&
                      std::equal(expected.begin(), expected.end(), actual.begin(),
                                 [](const auto& a, const auto& b) {
                                   return a.first == b.first && a.second.count == b.second.count;
                                 });
    if (!same) {
      throw Error("record source replayed differently on the second scan");
    }
  }
  return tree;
}

SfpTree build_sfp_tree(RecordSource& db, std::uint64_t min_count, const GridConfig& cfg) {
  const FrequencyTables fts = construct_fts(db, min_count, cfg);
  return insert_all(db, fts, cfg);
}

}  // namespace sfw
