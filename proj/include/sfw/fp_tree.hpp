#pragma once

// Classic FP-tree and FP-growth over wid transactions.
//
// The tree is an arena of nodes. Each node stores the rank of its word in
// the tree's word order (position in the header table) rather than the wid
// itself, so prefix-order checks and child lookups are integer compares.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sfw/text_pipeline.hpp"

namespace sfw {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

struct Itemset {
  std::vector<Wid> words;
  std::uint64_t count = 0;

  friend bool operator==(const Itemset&, const Itemset&) = default;
};

// Weighted prefix paths collected from a tree: the conditional pattern
// base of a word. Paths are stored back to back in one buffer.
class PatternBase {
 public:
  void add(std::span<const Wid> path, std::uint64_t weight);
  std::size_t size() const { return weights_.size(); }
  std::span<const Wid> path(std::size_t i) const {
    return std::span<const Wid>(words_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  std::uint64_t weight(std::size_t i) const { return weights_[i]; }

 private:
  std::vector<Wid> words_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint64_t> weights_;
};

class FpTree {
 public:
  struct Node {
    std::uint32_t rank = 0;
    std::uint64_t count = 0;
    NodeId parent = kNoNode;
    NodeId next = kNoNode;  // next node of the same word
    std::vector<NodeId> children;  // sorted by rank
  };

  struct HeaderEntry {
    Wid wid = 0;
    std::uint64_t count = 0;  // sum over the node chain
    NodeId head = kNoNode;
    NodeId tail = kNoNode;
  };

  static constexpr NodeId kRoot = 0;

  FpTree() : FpTree(std::vector<Wid>{}) {}
  // `order` fixes the word order: paths must list words in this order.
  explicit FpTree(std::vector<Wid> order);

  // Two scans: count, keep words with support >= minsup ordered by
  // descending count (ties by ascending wid), insert each transaction.
  static FpTree build(std::span<const std::vector<Wid>> transactions,
                      std::uint64_t minsup);

  // Tree over a weighted pattern base. Words whose total weight is below
  // minsup are dropped; order as in build().
  static FpTree from_pattern_base(const PatternBase& base, std::uint64_t minsup);

  // Throws OrderViolation if `sorted` is not strictly increasing in the
  // tree's order or names a word the order does not contain.
  void insert_path(std::span<const Wid> sorted, std::uint64_t count);

  const std::vector<HeaderEntry>& header() const { return header_; }
  std::optional<std::uint32_t> rank_of(Wid wid) const;
  const Node& node(NodeId id) const { return nodes_[id]; }
  Wid wid_of(NodeId id) const { return header_[nodes_[id].rank].wid; }
  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_[kRoot].children.empty(); }

  // Words strictly above `id`, root side first.
  void prefix_path(NodeId id, std::vector<Wid>& out) const;

 private:
  void insert_ranks(std::span<const std::uint32_t> ranks, std::uint64_t count);
  NodeId child_with_rank(NodeId parent, std::uint32_t rank) const;

  std::vector<Node> nodes_;
  std::vector<HeaderEntry> header_;
  std::unordered_map<Wid, std::uint32_t> rank_;
};

// Conditional FP-tree of `wid`: prefix paths of each of its nodes weighted
// by the node count, words below minsup pruned. Throws UnknownWord.
FpTree conditional_tree(const FpTree& tree, Wid wid, std::uint64_t minsup);

// Visits every itemset with support >= minsup exactly once. Word order in
// the visited span is unspecified.
using ItemsetVisitor = std::function<void(std::span<const Wid>, std::uint64_t)>;
void fp_growth_visit(const FpTree& tree, std::uint64_t minsup,
                     const ItemsetVisitor& visit);

// All frequent itemsets, words in tree order, sorted by size then by the
// rank sequence of their words.
std::vector<Itemset> fp_growth(const FpTree& tree, std::uint64_t minsup);

}  // namespace sfw
