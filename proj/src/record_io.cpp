#include "sfw/record_io.hpp"

#include <fstream>
#include <ostream>

#include "json.hpp"

#include "sfw/error.hpp"

namespace sfw {

std::optional<RawRecord> parse_ingest_line(std::string_view line, std::uint64_t seq) {
  const auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) return std::nullopt;

  const auto lon = doc.find("lon");
  const auto lat = doc.find("lat");
  if (lon == doc.end() || lat == doc.end() || !lon->is_number() || !lat->is_number()) {
    return std::nullopt;
  }
  RawRecord r;
  r.geo = {lon->get<double>(), lat->get<double>()};

  if (auto id = doc.find("id"); id != doc.end()) {
    if (id->is_string()) {
      r.id = id->get<std::string>();
    } else if (id->is_number_integer()) {
      r.id = std::to_string(id->get<std::int64_t>());
    } else {
      return std::nullopt;
    }
  } else {
    r.id = std::to_string(seq);
  }

  if (auto words = doc.find("words"); words != doc.end()) {
    if (!words->is_array()) return std::nullopt;
    std::vector<std::string> list;
    for (const auto& w : *words) {
      if (!w.is_string()) return std::nullopt;
      list.push_back(w.get<std::string>());
    }
    r.words = std::move(list);
  } else if (auto text = doc.find("text"); text != doc.end()) {
    if (!text->is_string()) return std::nullopt;
    r.text = text->get<std::string>();
  } else {
    return std::nullopt;
  }
  return r;
}

FileRecordSource::FileRecordSource(std::filesystem::path path, TextPipeline pipeline,
                                   WordDictionary& dict, std::uint64_t limit)
    : path_(std::move(path)), pipeline_(std::move(pipeline)), dict_(dict), limit_(limit) {}

void FileRecordSource::scan(const Visitor& visit) {
  std::ifstream in(path_);
  if (!in) throw Error("cannot open input file " + path_.string());
  stats_ = {};
  std::string line;
  SpatialSocialRecord record;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (limit_ != 0 && stats_.lines >= limit_) break;
    ++stats_.lines;
    auto raw = parse_ingest_line(line, stats_.lines - 1);
    if (!raw) {
      ++stats_.malformed;
      continue;
    }
    ++stats_.records;
    const auto words = raw->words ? pipeline_.words_of_tokens(std::move(*raw->words))
                                  : pipeline_.words_of_text(*raw->text);
    record.oid = std::move(raw->id);
    record.words = intern(words, dict_);
    record.geo = raw->geo;
    visit(record);
  }
}

void write_ingest_record(std::ostream& out, const SpatialSocialRecord& record,
                         const WordNamer& name) {
  nlohmann::ordered_json j;
  j["id"] = record.oid;
  auto words = nlohmann::ordered_json::array();
  for (Wid w : record.words) words.push_back(name(w));
  j["words"] = std::move(words);
  j["lon"] = record.geo.lon;
  j["lat"] = record.geo.lat;
  out << j.dump() << '\n';
}

void write_result(std::ostream& out, const SpatialFrequentWordset& result,
                  const WordNamer& name) {
  nlohmann::ordered_json j;
  auto words = nlohmann::ordered_json::array();
  for (Wid w : result.words) words.push_back(name(w));
  j["words"] = std::move(words);
  j["gid"] = gid_to_string(result.gid);
  j["level"] = result.gid.level;
  j["count"] = result.count;
  out << j.dump() << '\n';
}

}  // namespace sfw
