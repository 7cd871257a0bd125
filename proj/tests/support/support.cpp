#include "support.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "sfw/datagen.hpp"

namespace sfw::testing {
namespace {

std::vector<Wid> sorted_unique(std::vector<Wid> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename F>
void for_each_subset(const std::vector<Wid>& items, F&& f) {
  if (items.size() > 20) throw std::runtime_error("naive oracle: transaction too long");
  const std::uint64_t limit = std::uint64_t{1} << items.size();
  std::vector<Wid> subset;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(items[i]);
    }
    f(subset);
  }
}

std::string words_str(const std::vector<Wid>& w) {
  std::string s = "{";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + "}";
}

std::string key_str(const SpatialKey& k) {
  return words_str(k.first) + "@L" + std::to_string(k.second.level) + ":" +
         gid_to_string(k.second);
}

}  // namespace

GridConfig reference_grid() { return GridConfig({0.0, 0.0, 1.0, 1.0}, 1); }

std::vector<SpatialSocialRecord> reference_db() {
  return {
      {"r1", {kA, kB}, {0.10, 0.10}},
      {"r2", {kA, kB}, {0.20, 0.30}},
      {"r3", {kA}, {0.70, 0.20}},
      {"r4", {kB, kC}, {0.80, 0.40}},
  };
}

std::vector<std::vector<Wid>> restaurant_db() {
  return {
      {kItalian, kRestaurant, kExpensive},
      {kCoffee, kExpensive, kRestaurant},
      {kItalian, kPizza, kExpensive},
      {kRestaurant, kPizza, kExpensive},
      {kItalian, kRestaurant},
  };
}

std::map<std::vector<Wid>, std::uint64_t> naive_itemsets(
    const std::vector<std::vector<Wid>>& transactions, std::uint64_t minsup) {
  std::map<std::vector<Wid>, std::uint64_t> counts;
  for (const auto& t : transactions) {
    for_each_subset(sorted_unique(t), [&](const std::vector<Wid>& s) { ++counts[s]; });
  }
  std::erase_if(counts, [&](const auto& kv) { return kv.second < minsup; });
  return counts;
}

std::map<SpatialKey, std::uint64_t> naive_sfw(const std::vector<SpatialSocialRecord>& db,
                                              const SigmaSchedule& sigma,
                                              const GridConfig& cfg) {
  std::map<SpatialKey, std::uint64_t> counts;
  for (const auto& r : db) {
    if (!cfg.bbox().contains(r.geo)) continue;
    const Gid leaf = encode(r.geo, cfg);
    const auto words = sorted_unique(r.words);
    for (int level = 0; level <= cfg.height(); ++level) {
      const Gid cell{level, leaf.code >> (2 * (cfg.height() - level))};
      for_each_subset(words, [&](const std::vector<Wid>& s) { ++counts[{s, cell}]; });
    }
  }
  std::erase_if(counts,
                [&](const auto& kv) { return kv.second < sigma.at(kv.first.second.level); });
  return counts;
}

std::map<SpatialKey, std::uint64_t> as_map(const std::vector<SpatialFrequentWordset>& r) {
  std::map<SpatialKey, std::uint64_t> out;
  for (const auto& s : r) out[{sorted_unique(s.words), s.gid}] = s.count;
  return out;
}

std::map<std::vector<Wid>, std::uint64_t> as_map(const std::vector<Itemset>& r) {
  std::map<std::vector<Wid>, std::uint64_t> out;
  for (const auto& s : r) out[sorted_unique(s.words)] = s.count;
  return out;
}

Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {  // inclusive
    return lo + rng() % (hi - lo + 1);
  };
  auto real = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  Instance inst;
  inst.seed = seed;
  const double lon = real(-170.0, 160.0);
  const double lat = real(-80.0, 70.0);
  const int height = static_cast<int>(pick(0, 3));
  inst.grid = GridConfig({lon, lat, lon + real(0.01, 10.0), lat + real(0.01, 10.0)}, height);
  constexpr std::uint64_t kSigmas[] = {2, 3, 5};
  inst.sigma = SigmaSchedule(kSigmas[pick(0, 2)]);

  GenConfig gen;
  gen.seed = seed;
  gen.n_records = pick(0, 1990);
  gen.vocab_size = static_cast<std::uint32_t>(pick(1, 50));
  gen.zipf_exponent = real(0.6, 1.6);
  gen.words_per_record_mean = real(1.0, 5.0);
  const auto plants = gen.n_records >= 60 && gen.vocab_size >= 2 ? pick(0, 2) : 0;
  for (std::uint64_t p = 0; p < plants; ++p) {
    PlantedPattern pp;
    const auto len = pick(2, std::min<std::uint64_t>(4, gen.vocab_size));
    std::set<Wid> words;
    while (words.size() < len) words.insert(static_cast<Wid>(pick(0, gen.vocab_size - 1)));
    pp.words.assign(words.begin(), words.end());
    const int level = static_cast<int>(pick(0, static_cast<std::uint64_t>(height)));
    pp.cell = {level, pick(0, (std::uint64_t{1} << (2 * level)) - 1)};
    pp.injection_count = pick(5, 25);
    gen.planted.push_back(pp);
  }
  inst.records = generate(gen, inst.grid);

  // Strays outside the box must be skipped by both miners.
  const auto strays = pick(0, 5);
  const BoundingBox& b = inst.grid.bbox();
  for (std::uint64_t i = 0; i < strays; ++i) {
    SpatialSocialRecord r;
    r.oid = "stray" + std::to_string(i);
    r.words = {0};
    r.geo = {b.max_lon + 0.5, b.min_lat};
    inst.records.insert(inst.records.begin() + static_cast<std::ptrdiff_t>(pick(0, inst.records.size())), r);
  }
  return inst;
}

std::vector<std::string> check_tree_invariants(const SfpTree& tree) {
  std::vector<std::string> v;
  const auto& words = tree.words();
  const std::uint64_t cells = std::uint64_t{1} << (2 * tree.grid().height());
  std::vector<std::uint64_t> mass(words.size(), 0);
  std::set<std::pair<NodeId, std::uint64_t>> node_cells;

  for (NodeId id = 1; id < tree.node_count(); ++id) {
    const auto& n = tree.node(id);
    if (n.gids.empty()) v.push_back("node " + std::to_string(id) + " has an empty gid table");
    n.gids.for_each([&](std::uint64_t code, std::uint64_t count) {
      if (code >= cells) v.push_back("node " + std::to_string(id) + " holds a non-leaf gid");
      if (count == 0) v.push_back("node " + std::to_string(id) + " holds a zero count");
      mass[n.rank] += count;
      node_cells.insert({id, code});
    });
    if (n.parent != SfpTree::kRoot && tree.node(n.parent).rank >= n.rank) {
      v.push_back("prefix order broken at node " + std::to_string(id));
    }
    if (n.wid != words.wid_at(n.rank)) v.push_back("node wid/rank disagree");
  }
  for (std::uint32_t r = 0; r < words.size(); ++r) {
    if (mass[r] != words.entries()[r].count) {
      v.push_back("mass conservation fails for wid " + std::to_string(words.wid_at(r)) + ": " +
                  std::to_string(mass[r]) + " vs " + std::to_string(words.entries()[r].count));
    }
  }

  std::set<std::pair<NodeId, std::uint64_t>> linked;
  const auto& header = tree.header();
  for (std::uint32_t r = 0; r < header.word_count(); ++r) {
    for (const auto& [code, entry] : header.cells(r)) {
      std::uint64_t sum = 0;
      for (NodeId id : entry.nodelinks) {
        if (tree.node(id).rank != r) v.push_back("header link points at another word");
        sum += tree.node(id).gids.get(code);
        if (!linked.insert({id, code}).second) {
          v.push_back("node " + std::to_string(id) + " linked twice in one chain");
        }
      }
      if (sum != entry.count) {
        v.push_back("header count mismatch for wid " + std::to_string(words.wid_at(r)) +
                    " cell " + std::to_string(code));
      }
    }
  }
  if (linked != node_cells) v.push_back("header links do not cover every node cell exactly");
  return v;
}

std::vector<std::string> check_result_invariants(const std::vector<SpatialFrequentWordset>& r,
                                                 const SigmaSchedule& sigma) {
  std::vector<std::string> v;
  const auto m = as_map(r);
  if (m.size() != r.size()) v.push_back("duplicate (wordset, gid) pairs");
  for (const auto& [key, count] : m) {
    const auto& [words, gid] = key;
    if (words.empty()) v.push_back("empty wordset emitted");
    if (count < sigma.at(gid.level)) v.push_back(key_str(key) + " below sigma");
    if (words.size() > 1) {
      for_each_subset(words, [&](const std::vector<Wid>& s) {
        if (s.size() == words.size()) return;
        auto it = m.find({s, gid});
        if (it == m.end()) {
          v.push_back("subset closure: " + key_str({s, gid}) + " missing under " + key_str(key));
        } else if (it->second < count) {
          v.push_back("anti-monotonicity: " + key_str({s, gid}) + " count below superset");
        }
      });
    }
    if (gid.level > 0) {
      const Gid up{gid.level - 1, gid.code >> 2};
      auto it = m.find({words, up});
      if (it == m.end()) {
        if (count >= sigma.at(up.level)) {
          v.push_back("upward closure: " + key_str({words, up}) + " missing");
        }
      } else if (it->second < count) {
        v.push_back("upward closure: " + key_str({words, up}) + " count below child");
      }
    }
  }
  return v;
}

std::vector<std::string> check_fp_tree_invariants(const FpTree& tree,
                                                  std::uint64_t inserted_weight) {
  std::vector<std::string> v;
  std::uint64_t root_mass = 0;
  for (NodeId c : tree.node(FpTree::kRoot).children) root_mass += tree.node(c).count;
  if (root_mass != inserted_weight) {
    v.push_back("root mass " + std::to_string(root_mass) + " != inserted " +
                std::to_string(inserted_weight));
  }
  std::vector<int> seen(tree.node_count(), 0);
  for (std::uint32_t r = 0; r < tree.header().size(); ++r) {
    const auto& e = tree.header()[r];
    std::uint64_t sum = 0;
    for (NodeId id = e.head; id != kNoNode; id = tree.node(id).next) {
      sum += tree.node(id).count;
      ++seen[id];
      if (tree.node(id).rank != r) v.push_back("chain holds a node of another word");
    }
    if (sum != e.count) v.push_back("header total differs from chain sum");
  }
  for (NodeId id = 1; id < tree.node_count(); ++id) {
    if (seen[id] != 1) v.push_back("node " + std::to_string(id) + " not on exactly one chain");
    const auto& n = tree.node(id);
    std::uint64_t below = 0;
    for (NodeId c : n.children) {
      below += tree.node(c).count;
      if (tree.node(c).rank <= n.rank) v.push_back("child rank not after parent");
    }
    if (below > n.count) v.push_back("children outweigh parent");
  }
  return v;
}

}  // namespace sfw::testing
