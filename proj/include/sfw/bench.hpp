#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sfw/datagen.hpp"
#include "sfw/geo_grid.hpp"

namespace sfw {

// Cross product of record counts and sigma values on generated data.
struct BenchSpec {
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> sigmas;
  GenConfig gen;  // n_records is overridden per size
  GridConfig grid;
  int repeats = 1;  // per phase, the fastest repeat is reported
  unsigned threads = 1;
};

struct BenchRow {
  std::uint64_t n = 0;
  std::uint64_t sigma = 0;
  double first_scan_ms = 0.0;
  double tree_build_ms = 0.0;
  double growth_ms = 0.0;
  std::uint64_t pattern_count = 0;
  std::uint64_t one_word_cell_entries = 0;
};

std::vector<BenchRow> run_bench(const BenchSpec& spec);

// Whitespace-separated table with a header row.
void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace sfw
