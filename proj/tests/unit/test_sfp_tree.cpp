#include "doctest.h"
#include "sfw/error.hpp"
#include "sfw/sfp_tree.hpp"
#include "support.hpp"

using namespace sfw;
using namespace sfw::testing;

namespace {

SfpTree reference_tree() {
  const auto db = reference_db();
  SpanRecordSource src(db);
  return build_sfp_tree(src, 2, reference_grid());
}

// Yields one more record on every scan after the first.
class DriftingSource : public RecordSource {
 public:
  explicit DriftingSource(std::vector<SpatialSocialRecord> r) : records_(std::move(r)) {}
  void scan(const Visitor& visit) override {
    for (const auto& r : records_) visit(r);
    if (scans_++ > 0) visit(records_.front());
  }

 private:
  std::vector<SpatialSocialRecord> records_;
  int scans_ = 0;
};

}  // namespace

TEST_CASE("construct_fts on the reference database") {
  const auto db = reference_db();
  SpanRecordSource src(db);
  const auto fts = construct_fts(src, 2, reference_grid());

  REQUIRE(fts.words.size() == 2);
  CHECK(fts.words.wid_at(0) == kA);
  CHECK(fts.words.wid_at(1) == kB);
  CHECK(fts.words.count_of(kA) == 3);
  CHECK(fts.words.count_of(kB) == 3);
  CHECK(fts.words.count_of(kC) == 0);
  CHECK_FALSE(fts.words.rank_of(kC).has_value());

  CHECK(fts.cells.entry_count() == 4);
  CHECK(fts.cells.find(0, 0b00)->count == 2);
  CHECK(fts.cells.find(0, 0b01)->count == 1);
  CHECK(fts.cells.find(1, 0b00)->count == 2);
  CHECK(fts.cells.find(1, 0b01)->count == 1);
  CHECK(fts.cells.find(0, 0b10) == nullptr);

  CHECK(fts.stats.records == 4);
  CHECK(fts.stats.out_of_bounds == 0);
  CHECK(fts.stats.distinct_words == 3);

  // At threshold 1, c survives and ranks last.
  const auto all = construct_fts(src, 1, reference_grid());
  CHECK(all.words.size() == 3);
  CHECK(all.words.wid_at(2) == kC);
}

TEST_CASE("sfp-tree of the reference database") {
  const SfpTree tree = reference_tree();
  CHECK(tree.dump() == "0 [00:2, 01:1]\n  1 [00:2]\n1 [01:1]\n");

  WordDictionary dict;
  intern({"a", "b", "c"}, dict);
  CHECK(tree.dump(&dict) == "a [00:2, 01:1]\n  b [00:2]\nb [01:1]\n");

  CHECK(tree.node_count() == 4);
  CHECK(tree.header().find(1, 0b00)->nodelinks.size() == 1);
  CHECK(tree.header().find(1, 0b01)->nodelinks.size() == 1);
  CHECK(tree.header().find(1, 0b00)->nodelinks != tree.header().find(1, 0b01)->nodelinks);
  CHECK(check_tree_invariants(tree).empty());

  std::vector<Wid> prefix;
  tree.prefix_path(tree.header().find(1, 0b00)->nodelinks.front(), prefix);
  CHECK(prefix == std::vector<Wid>{kA});
  prefix.clear();
  tree.prefix_path(tree.header().find(1, 0b01)->nodelinks.front(), prefix);
  CHECK(prefix.empty());
}

TEST_CASE("refine_and_sort") {
  const GlobalWordTable words({{kA, 5}, {kB, 9}, {kC, 1}}, 2);
  CHECK(refine_and_sort(std::vector<Wid>{kA, kB, kC}, words) == std::vector<Wid>{kB, kA});
  CHECK(refine_and_sort(std::vector<Wid>{kC}, words).empty());
  CHECK(refine_and_sort(std::vector<Wid>{}, words).empty());

  // Ties break by ascending wid.
  const GlobalWordTable tied({{7, 4}, {3, 4}, {5, 4}}, 1);
  CHECK(refine_and_sort(std::vector<Wid>{7, 5, 3}, tied) == std::vector<Wid>{3, 5, 7});
}

TEST_CASE("insert_ssd") {
  const GridConfig cfg({0.0, 0.0, 1.0, 1.0}, 2);
  const GlobalWordTable words({{1, 10}, {2, 8}, {3, 6}}, 1);
  SfpTree tree(cfg, words);

  tree.insert_ssd(std::vector<Wid>{1, 2}, {2, 5});
  tree.insert_ssd(std::vector<Wid>{1, 2}, {2, 5});
  CHECK(tree.node_count() == 3);
  CHECK(tree.node(1).gids.get(5) == 2);
  CHECK(tree.node(2).gids.get(5) == 2);
  CHECK(tree.header().find(1, 5)->nodelinks.size() == 1);
  CHECK(tree.header().find(1, 5)->count == 2);

  // A new cell on an existing node adds exactly one header link.
  tree.insert_ssd(std::vector<Wid>{1, 3}, {2, 9});
  CHECK(tree.node_count() == 4);
  CHECK(tree.node(1).gids.sorted_entries() ==
        std::vector<std::pair<std::uint64_t, std::uint64_t>>{{5, 2}, {9, 1}});
  CHECK(tree.header().find(0, 9)->nodelinks.size() == 1);
  CHECK(tree.header().find(2, 9)->count == 1);

  // Word 3 under a different parent gets its own node and link.
  tree.insert_ssd(std::vector<Wid>{3}, {2, 9});
  CHECK(tree.header().find(2, 9)->nodelinks.size() == 2);
  CHECK(tree.header().find(2, 9)->count == 2);

  const std::size_t before = tree.node_count();
  CHECK_THROWS_AS(tree.insert_ssd(std::vector<Wid>{2, 1}, {2, 0}), OrderViolation);
  CHECK_THROWS_AS(tree.insert_ssd(std::vector<Wid>{1, 4}, {2, 0}), OrderViolation);
  CHECK_THROWS_AS(tree.insert_ssd(std::vector<Wid>{1}, {1, 0}), InvalidLevel);
  CHECK(tree.node_count() == before);
  CHECK(tree.node(1).gids.get(0) == 0);
}

TEST_CASE("gid count table spills past its small capacity") {
  GidCountTable t;
  for (std::uint64_t c = 0; c < 20; ++c) CHECK(t.add(c * 3, c + 1));
  CHECK_FALSE(t.add(9, 1));
  CHECK(t.size() == 20);
  CHECK(t.get(9) == 5);
  CHECK(t.get(10) == 0);
  const auto e = t.sorted_entries();
  CHECK(e.front() == std::pair<std::uint64_t, std::uint64_t>{0, 1});
  CHECK(e.back() == std::pair<std::uint64_t, std::uint64_t>{57, 20});
}

TEST_CASE("out-of-bounds and wordless records are skipped") {
  auto db = reference_db();
  db.push_back({"far", {kA, kB}, {5.0, 5.0}});
  db.push_back({"empty", {}, {0.5, 0.5}});
  db.push_back({"rare", {kC}, {0.5, 0.5}});
  SpanRecordSource src(db);
  const auto fts = construct_fts(src, 2, reference_grid());
  CHECK(fts.stats.records == 7);
  CHECK(fts.stats.out_of_bounds == 1);
  CHECK(fts.words.count_of(kA) == 3);
  CHECK(fts.words.count_of(kC) == 2);
  const SfpTree tree = insert_all(src, fts, reference_grid());
  CHECK(check_tree_invariants(tree).empty());
}

TEST_CASE("second scan that disagrees with the first throws") {
  DriftingSource src(reference_db());
  const auto fts = construct_fts(src, 2, reference_grid());
  CHECK_THROWS_AS(insert_all(src, fts, reference_grid()), Error);
}

TEST_CASE("empty database gives an empty tree") {
  std::vector<SpatialSocialRecord> none;
  SpanRecordSource src(none);
  const SfpTree tree = build_sfp_tree(src, 2, reference_grid());
  CHECK(tree.node_count() == 1);
  CHECK(tree.dump().empty());
  CHECK(check_tree_invariants(tree).empty());
}

TEST_CASE("property: tree invariants and rebuild determinism on random instances") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = random_instance(seed);
    SpanRecordSource src(inst.records);
    const SfpTree tree = build_sfp_tree(src, inst.sigma.min(), inst.grid);
    const auto violations = check_tree_invariants(tree);
    CHECK_MESSAGE(violations.empty(), "seed " << seed << ": "
                                      << (violations.empty() ? "" : violations.front()));
    const SfpTree again = build_sfp_tree(src, inst.sigma.min(), inst.grid);
    CHECK(tree.dump() == again.dump());
  }
}
