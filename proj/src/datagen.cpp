#include "sfw/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sfw/error.hpp"

namespace sfw {
namespace {

// Only the engine comes from <random>: mt19937_64 is fully specified, while
// the standard distributions are not, and output must not depend on the
// standard library in use.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  // Knuth's multiplication method; fine for the small means used here.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 rng_;
};

class ZipfTable {
 public:
  ZipfTable(std::uint32_t n, double exponent) : cdf_(n) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
      sum += 1.0 / std::pow(static_cast<double>(k + 1), exponent);
      cdf_[k] = sum;
    }
    for (auto& c : cdf_) c /= sum;
  }

  Wid sample(Sampler& s) const {
    const double u = s.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<Wid>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

void add_noise(std::vector<Wid>& words, std::uint64_t n, const ZipfTable& zipf, Sampler& s) {
  for (std::uint64_t i = 0; i < n; ++i) words.push_back(zipf.sample(s));
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

GeoPoint point_in(const BoundingBox& box, Sampler& s) {
  return {box.min_lon + s.uniform() * box.width(), box.min_lat + s.uniform() * box.height()};
}

}  // namespace

void validate(const GenConfig& gen, const GridConfig& grid) {
  if (gen.vocab_size == 0) throw ConfigInvalid("vocabulary must not be empty");
  if (!(gen.zipf_exponent >= 0.0)) throw ConfigInvalid("zipf exponent must be >= 0");
  if (!(gen.words_per_record_mean >= 0.0) || gen.words_per_record_mean > 1000.0) {
    throw ConfigInvalid("words per record mean must be in [0, 1000]");
  }
  std::uint64_t injected = 0;
  for (const auto& p : gen.planted) {
    if (p.words.empty()) throw ConfigInvalid("planted pattern has no words");
    for (Wid w : p.words) {
      if (w >= gen.vocab_size) {
        throw ConfigInvalid("planted word w" + std::to_string(w) + " outside vocabulary");
      }
    }
    if (p.cell.level < 0 || p.cell.level > grid.height() ||
        (p.cell.level < 32 && p.cell.code >= (std::uint64_t{1} << (2 * p.cell.level)))) {
      throw ConfigInvalid("planted cell is not a cell of the grid");
    }
    injected += p.injection_count;
  }
  if (injected > gen.n_records) {
    throw ConfigInvalid("planted injection counts exceed the record count");
  }
}

std::vector<SpatialSocialRecord> generate(const GenConfig& gen, const GridConfig& grid) {
  validate(gen, grid);
  Sampler s(gen.seed);
  const ZipfTable zipf(gen.vocab_size, gen.zipf_exponent);

  std::uint64_t injected = 0;
  for (const auto& p : gen.planted) injected += p.injection_count;

  std::vector<SpatialSocialRecord> out;
  out.reserve(gen.n_records);
  for (std::uint64_t i = 0; i < gen.n_records - injected; ++i) {
    SpatialSocialRecord r;
    r.geo = point_in(grid.bbox(), s);
    add_noise(r.words, s.poisson(gen.words_per_record_mean), zipf, s);
    out.push_back(std::move(r));
  }
  for (const auto& p : gen.planted) {
    const BoundingBox cell = cell_bounds(p.cell, grid);
    const double noise_mean =
        std::max(0.0, gen.words_per_record_mean - static_cast<double>(p.words.size()));
    for (std::uint64_t i = 0; i < p.injection_count; ++i) {
      SpatialSocialRecord r;
      // Rounding can put a sample on the far edge of the cell, which
      // belongs to the neighbour; draw again.
      do {
        r.geo = point_in(cell, s);
      } while (ancestor_at(encode(r.geo, grid), p.cell.level) != p.cell);
      r.words = p.words;
      add_noise(r.words, s.poisson(noise_mean), zipf, s);
      out.push_back(std::move(r));
    }
  }
  // Fisher-Yates so planted records are spread through the stream.
  for (std::uint64_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[s.below(i)]);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].oid = std::to_string(i);
  return out;
}

std::string vocabulary_word(Wid wid) { return "w" + std::to_string(wid); }

}  // namespace sfw
