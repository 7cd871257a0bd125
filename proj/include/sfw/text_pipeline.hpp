#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sfw/geo_grid.hpp"

namespace sfw {

using Wid = std::uint32_t;

// Bidirectional word <-> wid mapping. Wids are dense and handed out in
// first-seen order, so the same input stream always yields the same table.
class WordDictionary {
 public:
  // Returns the existing wid or assigns the next one. Throws DictionaryFull
  // when the wid space is exhausted.
  Wid intern(std::string_view word);

  // Lookup without insertion.
  const Wid* find(std::string_view word) const;
  const std::string& word(Wid wid) const { return words_.at(wid); }
  std::size_t size() const { return words_.size(); }

  // "wid<TAB>word" per line, ascending wid.
  void save(std::ostream& out) const;
  static WordDictionary load(std::istream& in);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, Wid> ids_;
};

struct SpatialSocialRecord {
  std::string oid;
  std::vector<Wid> words;  // ascending, no duplicates; may be empty
  GeoPoint geo;
};

using StopwordSet = std::unordered_set<std::string>;

// Lowercases ASCII and splits on every ASCII character that is not a letter
// or digit. Bytes >= 0x80 are kept as word characters, so UTF-8 words pass
// through untouched.
std::vector<std::string> tokenize(std::string_view text);

// Drops stopwords and collapses duplicates, keeping first-occurrence order.
std::vector<std::string> refine(const std::vector<std::string>& words,
                                const StopwordSet& stopwords);

// Interns each word; result is sorted ascending with no duplicates.
std::vector<Wid> intern(const std::vector<std::string>& words,
                        WordDictionary& dict);

// One word per line, '#' lines and blank lines ignored, entries lowercased.
StopwordSet load_stopwords(std::istream& in);
StopwordSet load_stopwords(const std::filesystem::path& path);

// tokenize -> (optional stemmer) -> refine -> intern.
class TextPipeline {
 public:
  using Stemmer = std::function<std::string(std::string_view)>;

  TextPipeline() = default;
  explicit TextPipeline(StopwordSet stopwords, Stemmer stemmer = {})
      : stopwords_(std::move(stopwords)), stemmer_(std::move(stemmer)) {}

  std::vector<std::string> words_of_text(std::string_view text) const;
  // Pre-tokenized input: stemming and stopword removal only.
  std::vector<std::string> words_of_tokens(std::vector<std::string> tokens) const;

  const StopwordSet& stopwords() const { return stopwords_; }

 private:
  StopwordSet stopwords_;
  Stemmer stemmer_;
};

}  // namespace sfw
