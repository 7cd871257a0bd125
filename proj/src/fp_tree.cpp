#include "sfw/fp_tree.hpp"

#include <algorithm>
#include <string>

#include "sfw/error.hpp"

namespace sfw {
namespace {

// Descending count, ties by ascending wid.
std::vector<Wid> frequency_order(const std::unordered_map<Wid, std::uint64_t>& counts,
                                 std::uint64_t minsup) {
  std::vector<std::pair<Wid, std::uint64_t>> kept;
  for (const auto& [wid, count] : counts) {
    if (count >= minsup) kept.emplace_back(wid, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<Wid> order;
  order.reserve(kept.size());
  for (const auto& [wid, count] : kept) order.push_back(wid);
  return order;
}

bool is_single_path(const FpTree& tree) {
  NodeId id = FpTree::kRoot;
  while (true) {
    const auto& children = tree.node(id).children;
    if (children.empty()) return true;
    if (children.size() > 1) return false;
    id = children.front();
  }
}

void mine(const FpTree& tree, std::uint64_t minsup, std::vector<Wid>& suffix,
          const ItemsetVisitor& visit);

// A chain's itemsets are the non-empty subsets of its nodes; each subset's
// support is the count of its deepest node.
void mine_single_path(const FpTree& tree, std::uint64_t minsup,
                      std::vector<Wid>& suffix, const ItemsetVisitor& visit) {
  std::vector<NodeId> chain;
  for (NodeId id = FpTree::kRoot; !tree.node(id).children.empty();) {
    id = tree.node(id).children.front();
    if (tree.node(id).count < minsup) break;
    chain.push_back(id);
  }
  const std::size_t base = suffix.size();
  const std::uint64_t limit = std::uint64_t{1} << chain.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    suffix.resize(base);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        suffix.push_back(tree.wid_of(chain[i]));
        count = tree.node(chain[i]).count;
      }
    }
    visit(suffix, count);
  }
  suffix.resize(base);
}

void mine(const FpTree& tree, std::uint64_t minsup, std::vector<Wid>& suffix,
          const ItemsetVisitor& visit) {
  if (tree.empty()) return;
  // Chain length is bounded by the header size, which keeps the bitmask
  // enumeration in range.
  if (tree.header().size() < 63 && is_single_path(tree)) {
    mine_single_path(tree, minsup, suffix, visit);
    return;
  }
  const auto& header = tree.header();
  std::vector<Wid> path;
  for (auto r = header.size(); r-- > 0;) {
    const auto& entry = header[r];
    if (entry.count < minsup) continue;
    suffix.push_back(entry.wid);
    visit(suffix, entry.count);
    PatternBase base;
    for (NodeId id = entry.head; id != kNoNode; id = tree.node(id).next) {
      tree.prefix_path(id, path);
      if (!path.empty()) base.add(path, tree.node(id).count);
    }
    if (base.size() > 0) {
      const FpTree cond = FpTree::from_pattern_base(base, minsup);
      mine(cond, minsup, suffix, visit);
    }
    suffix.pop_back();
  }
}

}  // namespace

void PatternBase::add(std::span<const Wid> path, std::uint64_t weight) {
  words_.insert(words_.end(), path.begin(), path.end());
  offsets_.push_back(words_.size());
  weights_.push_back(weight);
}

FpTree::FpTree(std::vector<Wid> order) {
  nodes_.emplace_back();
  header_.reserve(order.size());
  rank_.reserve(order.size());
  for (Wid wid : order) {
    if (!rank_.emplace(wid, static_cast<std::uint32_t>(header_.size())).second) {
      throw OrderViolation("word order lists wid " + std::to_string(wid) + " twice");
    }
    header_.push_back({wid, 0, kNoNode, kNoNode});
  }
}

FpTree FpTree::build(std::span<const std::vector<Wid>> transactions,
                     std::uint64_t minsup) {
  std::unordered_map<Wid, std::uint64_t> counts;
  for (const auto& t : transactions) {
    std::vector<Wid> unique(t);
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (Wid w : unique) ++counts[w];
  }
  FpTree tree(frequency_order(counts, minsup));
  std::vector<std::uint32_t> ranks;
  for (const auto& t : transactions) {
    ranks.clear();
    for (Wid w : t) {
      if (auto r = tree.rank_of(w)) ranks.push_back(*r);
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    tree.insert_ranks(ranks, 1);
  }
  return tree;
}

FpTree FpTree::from_pattern_base(const PatternBase& base, std::uint64_t minsup) {
  std::unordered_map<Wid, std::uint64_t> counts;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (Wid w : base.path(i)) counts[w] += base.weight(i);
  }
  FpTree tree(frequency_order(counts, minsup));
  if (tree.header_.empty()) return tree;
  std::vector<std::uint32_t> ranks;
  for (std::size_t i = 0; i < base.size(); ++i) {
    ranks.clear();
    for (Wid w : base.path(i)) {
      if (auto it = tree.rank_.find(w); it != tree.rank_.end()) ranks.push_back(it->second);
    }
    std::sort(ranks.begin(), ranks.end());
    tree.insert_ranks(ranks, base.weight(i));
  }
  return tree;
}

std::optional<std::uint32_t> FpTree::rank_of(Wid wid) const {
  auto it = rank_.find(wid);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

void FpTree::insert_path(std::span<const Wid> sorted, std::uint64_t count) {
  std::vector<std::uint32_t> ranks;
  ranks.reserve(sorted.size());
  for (Wid w : sorted) {
    auto r = rank_of(w);
    if (!r) {
      throw OrderViolation("wid " + std::to_string(w) + " is not in the tree's word order");
    }
    if (!ranks.empty() && *r <= ranks.back()) {
      throw OrderViolation("path is not sorted by the tree's word order");
    }
    ranks.push_back(*r);
  }
  insert_ranks(ranks, count);
}

NodeId FpTree::child_with_rank(NodeId parent, std::uint32_t rank) const {
  const auto& children = nodes_[parent].children;
  auto it = std::lower_bound(children.begin(), children.end(), rank,
                             [this](NodeId c, std::uint32_t r) { return nodes_[c].rank < r; });
  return (it != children.end() && nodes_[*it].rank == rank) ? *it : kNoNode;
}

void FpTree::insert_ranks(std::span<const std::uint32_t> ranks, std::uint64_t count) {
  NodeId parent = kRoot;
  for (std::uint32_t rank : ranks) {
    NodeId id = child_with_rank(parent, rank);
    if (id == kNoNode) {
      id = static_cast<NodeId>(nodes_.size());
      Node fresh;
      fresh.rank = rank;
      fresh.parent = parent;
      nodes_.push_back(std::move(fresh));
      auto& children = nodes_[parent].children;
      auto pos = std::lower_bound(children.begin(), children.end(), rank,
                                  [this](NodeId c, std::uint32_t r) { return nodes_[c].rank < r; });
      children.insert(pos, id);
      auto& entry = header_[rank];
      if (entry.tail == kNoNode) {
        entry.head = id;
      } else {
        nodes_[entry.tail].next = id;
      }
      entry.tail = id;
    }
    nodes_[id].count += count;
    header_[rank].count += count;
    parent = id;
  }
}

void FpTree::prefix_path(NodeId id, std::vector<Wid>& out) const {
  out.clear();
  for (NodeId p = nodes_[id].parent; p != kRoot && p != kNoNode; p = nodes_[p].parent) {
    out.push_back(wid_of(p));
  }
  std::reverse(out.begin(), out.end());
}

FpTree conditional_tree(const FpTree& tree, Wid wid, std::uint64_t minsup) {
  const auto rank = tree.rank_of(wid);
  if (!rank) throw UnknownWord("wid " + std::to_string(wid) + " not in tree header");
  PatternBase base;
  std::vector<Wid> path;
  for (NodeId id = tree.header()[*rank].head; id != kNoNode; id = tree.node(id).next) {
    tree.prefix_path(id, path);
    if (!path.empty()) base.add(path, tree.node(id).count);
  }
  return FpTree::from_pattern_base(base, minsup);
}

void fp_growth_visit(const FpTree& tree, std::uint64_t minsup,
                     const ItemsetVisitor& visit) {
  std::vector<Wid> suffix;
  mine(tree, std::max<std::uint64_t>(minsup, 1), suffix, visit);
}

std::vector<Itemset> fp_growth(const FpTree& tree, std::uint64_t minsup) {
  std::vector<Itemset> out;
  fp_growth_visit(tree, minsup, [&](std::span<const Wid> words, std::uint64_t count) {
    out.push_back({std::vector<Wid>(words.begin(), words.end()), count});
  });
  std::vector<std::vector<std::uint32_t>> keys(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& words = out[i].words;
    std::sort(words.begin(), words.end(),
              [&](Wid a, Wid b) { return *tree.rank_of(a) < *tree.rank_of(b); });
    for (Wid w : words) keys[i].push_back(*tree.rank_of(w));
  }
  std::vector<std::size_t> idx(out.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].size() != keys[b].size()) return keys[a].size() < keys[b].size();
    return keys[a] < keys[b];
  });
  std::vector<Itemset> sorted;
  sorted.reserve(out.size());
  for (std::size_t i : idx) sorted.push_back(std::move(out[i]));
  return sorted;
}

}  // namespace sfw
