#pragma once

// Deterministic synthetic geo-tagged corpora with planted local patterns.
//
// Background records are uniform over the bounding box and draw their words
// from a Zipf distribution over the vocabulary; wid i names the (i+1)-th
// most popular word, rendered as "w<i>". Each planted pattern adds records
// that carry the planted words and lie inside the target cell.

#include <cstdint>
#include <string>
#include <vector>

#include "sfw/geo_grid.hpp"
#include "sfw/text_pipeline.hpp"

namespace sfw {

struct PlantedPattern {
  std::vector<Wid> words;
  Gid cell;
  std::uint64_t injection_count = 0;
};

struct GenConfig {
  std::uint64_t n_records = 1000;  // total, planted records included
  std::uint32_t vocab_size = 1000;
  double zipf_exponent = 1.1;
  double words_per_record_mean = 15.0;
  std::vector<PlantedPattern> planted;
  std::uint64_t seed = 1;
};

// Throws ConfigInvalid on inconsistent fields.
void validate(const GenConfig& gen, const GridConfig& grid);

std::vector<SpatialSocialRecord> generate(const GenConfig& gen, const GridConfig& grid);

std::string vocabulary_word(Wid wid);

}  // namespace sfw
