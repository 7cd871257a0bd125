#include "sfw/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "sfw/error.hpp"
#include "sfw/sfp_growth.hpp"

namespace sfw {

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  if (spec.repeats < 1) throw ConfigInvalid("bench repeats must be >= 1");
  std::vector<BenchRow> rows;
  for (std::uint64_t n : spec.sizes) {
    GenConfig gen = spec.gen;
    gen.n_records = n;
    const auto records = generate(gen, spec.grid);
    for (std::uint64_t sigma : spec.sigmas) {
      BenchRow row{n, sigma, 0, 0, 0, 0, 0};
      for (int r = 0; r < spec.repeats; ++r) {
        SpanRecordSource source(records);
        const MiningReport rep =
            mine_sf_wordsets(source, SigmaSchedule(sigma), spec.grid, {spec.threads});
        if (r == 0) {
          row.first_scan_ms = rep.first_scan_ms;
          row.tree_build_ms = rep.tree_build_ms;
          row.growth_ms = rep.growth_ms;
        } else {
          row.first_scan_ms = std::min(row.first_scan_ms, rep.first_scan_ms);
          row.tree_build_ms = std::min(row.tree_build_ms, rep.tree_build_ms);
          row.growth_ms = std::min(row.growth_ms, rep.growth_ms);
        }
        row.pattern_count = rep.patterns.size();
        row.one_word_cell_entries = rep.one_word_cell_entries;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "N sigma firstScanMs treeBuildMs growthMs patternCount oneWordCellEntries\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.n << ' ' << r.sigma << ' ';
    std::snprintf(buf, sizeof buf, "%.3f %.3f %.3f", r.first_scan_ms, r.tree_build_ms,
                  r.growth_ms);
    out << buf << ' ' << r.pattern_count << ' ' << r.one_word_cell_entries << '\n';
  }
}

}  // namespace sfw
