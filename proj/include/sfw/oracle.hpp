#pragma once

// Brute-force reference miner used to check sfp_growth on small inputs.
// Not part of the mining API: it groups records per cell and runs a plain
// level-wise Apriori in each group, sharing no code with the FP-tree path.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sfw/fp_tree.hpp"
#include "sfw/geo_grid.hpp"
#include "sfw/sfp_growth.hpp"
#include "sfw/text_pipeline.hpp"

namespace sfw::oracle {

struct CellTransactionGroup {
  Gid gid;
  std::vector<std::vector<Wid>> transactions;
};

// In-bounds records partitioned by their level-`level` cell, ascending gid.
std::vector<CellTransactionGroup> group_by_cell(std::span<const SpatialSocialRecord> db,
                                                const GridConfig& cfg, int level);

// Every itemset with support >= sigma. Words ascending by wid; results sorted
// by size, then lexicographically.
std::vector<Itemset> apriori_mine(std::span<const std::vector<Wid>> transactions,
                                  std::uint64_t sigma);

// Ground truth for every level. Words ascending by wid.
std::vector<SpatialFrequentWordset> oracle_sfw(std::span<const SpatialSocialRecord> db,
                                               const SigmaSchedule& sigma,
                                               const GridConfig& cfg);

struct CountMismatch {
  SpatialFrequentWordset left;
  SpatialFrequentWordset right;
};

struct DiffReport {
  std::vector<SpatialFrequentWordset> only_left;
  std::vector<SpatialFrequentWordset> only_right;
  std::vector<CountMismatch> mismatched;

  bool empty() const {
    return only_left.empty() && only_right.empty() && mismatched.empty();
  }
  std::size_t size() const {
    return only_left.size() + only_right.size() + mismatched.size();
  }
};

// Compares two result sets keyed by (word set, gid). Word order inside a
// wordset does not matter.
DiffReport diff(std::span<const SpatialFrequentWordset> left,
                std::span<const SpatialFrequentWordset> right);

// Structured text, one line per difference.
void print_report(std::ostream& out, const DiffReport& report,
                  const WordDictionary* dict, const char* left_name,
                  const char* right_name);

}  // namespace sfw::oracle
