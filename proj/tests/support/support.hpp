#pragma once

// Fixtures, a naive powerset-counting oracle and invariant checkers shared
// by the unit tests and the acceptance runner.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sfw/fp_tree.hpp"
#include "sfw/geo_grid.hpp"
#include "sfw/sfp_growth.hpp"
#include "sfw/sfp_tree.hpp"

namespace sfw::testing {

// Four records on a height-1 grid over [0,1]x[0,1]:
//   r1 {a,b} and r2 {a,b} in cell 00, r3 {a} and r4 {b,c} in cell 01,
// with a=0, b=1, c=2.
inline constexpr Wid kA = 0;
inline constexpr Wid kB = 1;
inline constexpr Wid kC = 2;
GridConfig reference_grid();
std::vector<SpatialSocialRecord> reference_db();

// The five-transaction restaurant database; wids in first-seen order.
inline constexpr Wid kItalian = 0;
inline constexpr Wid kRestaurant = 1;
inline constexpr Wid kExpensive = 2;
inline constexpr Wid kCoffee = 3;
inline constexpr Wid kPizza = 4;
std::vector<std::vector<Wid>> restaurant_db();

// Support of every itemset occurring at least `minsup` times, found by
// enumerating each transaction's subsets. Keys are ascending wid lists.
std::map<std::vector<Wid>, std::uint64_t> naive_itemsets(
    const std::vector<std::vector<Wid>>& transactions, std::uint64_t minsup);

// Same, per cell and level, keyed by (words ascending, gid).
using SpatialKey = std::pair<std::vector<Wid>, Gid>;
std::map<SpatialKey, std::uint64_t> naive_sfw(const std::vector<SpatialSocialRecord>& db,
                                              const SigmaSchedule& sigma,
                                              const GridConfig& cfg);

std::map<SpatialKey, std::uint64_t> as_map(const std::vector<SpatialFrequentWordset>& r);
std::map<std::vector<Wid>, std::uint64_t> as_map(const std::vector<Itemset>& r);

struct Instance {
  std::uint64_t seed = 0;
  GridConfig grid;
  SigmaSchedule sigma;
  std::vector<SpatialSocialRecord> records;
};

// Small random database: N <= 2000, vocabulary <= 50, height <= 3,
// sigma in {2, 3, 5}; a few out-of-bounds records and planted patterns.
Instance random_instance(std::uint64_t seed);

// Each returns human-readable violations; empty means the property holds.
std::vector<std::string> check_tree_invariants(const SfpTree& tree);
std::vector<std::string> check_result_invariants(const std::vector<SpatialFrequentWordset>& r,
                                                 const SigmaSchedule& sigma);
std::vector<std::string> check_fp_tree_invariants(const FpTree& tree,
                                                  std::uint64_t inserted_weight);

}  // namespace sfw::testing
