#include "sfw/text_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "sfw/error.hpp"

namespace sfw {
namespace {

bool is_word_byte(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

Wid WordDictionary::intern(std::string_view word) {
  if (auto it = ids_.find(std::string(word)); it != ids_.end()) {
    return it->second;
  }
  if (words_.size() >= std::numeric_limits<Wid>::max()) {
    throw DictionaryFull("word dictionary exhausted the wid space");
  }
  const auto wid = static_cast<Wid>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), wid);
  return wid;
}

const Wid* WordDictionary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? nullptr : &it->second;
}

void WordDictionary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << i << '\t' << words_[i] << '\n';
  }
}

WordDictionary WordDictionary::load(std::istream& in) {
  WordDictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigInvalid("dictionary line without tab: " + line);
    }
    const auto wid = std::stoul(line.substr(0, tab));
    if (wid != dict.size()) {
      throw ConfigInvalid("dictionary wids must be dense and ascending");
    }
    dict.intern(std::string_view(line).substr(tab + 1));
  }
  return dict;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (is_word_byte(static_cast<unsigned char>(c))) {
      current.push_back(ascii_lower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> refine(const std::vector<std::string>& words,
                                const StopwordSet& stopwords) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& w : words) {
    if (w.empty() || stopwords.contains(w)) continue;
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

std::vector<Wid> intern(const std::vector<std::string>& words,
                        WordDictionary& dict) {
  std::vector<Wid> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(dict.intern(w));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StopwordSet load_stopwords(std::istream& in) {
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    std::string lowered(word);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
    out.insert(std::move(lowered));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open stopword file " + path.string());
  return load_stopwords(in);
}

std::vector<std::string> TextPipeline::words_of_text(std::string_view text) const {
  return words_of_tokens(tokenize(text));
}

std::vector<std::string> TextPipeline::words_of_tokens(
    std::vector<std::string> tokens) const {
  if (stemmer_) {
    for (auto& t : tokens) t = stemmer_(t);
  }
  return refine(tokens, stopwords_);
}

}  // namespace sfw
