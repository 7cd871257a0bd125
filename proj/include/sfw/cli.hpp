#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfw/bench.hpp"
#include "sfw/datagen.hpp"
#include "sfw/geo_grid.hpp"
#include "sfw/sfp_growth.hpp"

namespace sfw::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kDifferences = 1;  // check found a mismatch
inline constexpr int kFailure = 2;      // bad config, unreadable input, refused
inline constexpr int kTooMalformed = 3; // more than 10% malformed lines

struct RunConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;  // stdout when absent
  BoundingBox bbox;
  std::optional<int> height;
  std::optional<double> cell_meters;
  SigmaSchedule sigma{2};
  std::optional<std::filesystem::path> stopwords;
  std::uint64_t seed = 1;
  std::uint64_t limit = 0;  // 0 = no cap
  unsigned threads = 1;

  std::optional<std::filesystem::path> summary;     // mine: summary file instead of stderr
  std::optional<std::filesystem::path> dictionary;  // mine: "wid<TAB>word" dump
  std::optional<std::filesystem::path> tree_dump;   // mine: indented SFP-tree

  // check only
  std::uint64_t max_records = 2000;
  std::uint64_t max_words = 50;
  bool force = false;
  bool inject_fault = false;
};

// Exactly one of height / cell_meters must be set. Throws ConfigInvalid.
GridConfig resolve_grid(const RunConfig& cfg);

BoundingBox parse_bbox(std::string_view text);
SigmaSchedule parse_sigma(std::string_view text);
// "w1,w2,w3@0011:50" (words may also be bare indices).
PlantedPattern parse_plant(std::string_view text, int height);

int cmd_mine(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gen(const GenConfig& gen, const GridConfig& grid,
            const std::optional<std::filesystem::path>& output, std::ostream& out,
            std::ostream& err);
int cmd_bench(const BenchSpec& spec, const std::optional<std::filesystem::path>& output,
              std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfw::cli
