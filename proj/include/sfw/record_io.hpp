#pragma once

// Line-delimited JSON ingestion and result files.
//
// Ingestion: one object per line with `lon`, `lat` (numbers), `text`
// (string) or `words` (array of strings), and an optional `id`. Results:
// `words`, `gid`, `level`, `count`, in that key order.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfw/geo_grid.hpp"
#include "sfw/record_source.hpp"
#include "sfw/sfp_growth.hpp"
#include "sfw/text_pipeline.hpp"

namespace sfw {

struct RawRecord {
  std::string id;
  std::optional<std::string> text;
  std::optional<std::vector<std::string>> words;
  GeoPoint geo;
};

// nullopt when the line is not a well-formed record. `seq` becomes the id
// when the line carries none.
std::optional<RawRecord> parse_ingest_line(std::string_view line, std::uint64_t seq);

struct IngestStats {
  std::uint64_t lines = 0;  // non-blank lines read
  std::uint64_t records = 0;
  std::uint64_t malformed = 0;
};

// Re-reads the file on every scan. Words are interned into `dict`, so every
// scan after the first maps each record to the same wids.
class FileRecordSource : public RecordSource {
 public:
  FileRecordSource(std::filesystem::path path, TextPipeline pipeline, WordDictionary& dict,
                   std::uint64_t limit = 0);

  // Throws Error if the file cannot be opened.
  void scan(const Visitor& visit) override;

  // Counts from the most recent scan.
  const IngestStats& stats() const { return stats_; }

 private:
  std::filesystem::path path_;
  TextPipeline pipeline_;
  WordDictionary& dict_;
  std::uint64_t limit_;
  IngestStats stats_;
};

using WordNamer = std::function<std::string(Wid)>;

void write_ingest_record(std::ostream& out, const SpatialSocialRecord& record,
                         const WordNamer& name);

void write_result(std::ostream& out, const SpatialFrequentWordset& result,
                  const WordNamer& name);

}  // namespace sfw
