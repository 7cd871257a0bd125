#include "sfw/oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace sfw::oracle {
namespace {

using Key = std::pair<std::vector<Wid>, std::pair<int, std::uint64_t>>;

Key key_of(const SpatialFrequentWordset& s) {
  std::vector<Wid> words = s.words;
  std::sort(words.begin(), words.end());
  return {std::move(words), {s.gid.level, s.gid.code}};
}

std::string render(const SpatialFrequentWordset& s, const WordDictionary* dict) {
  std::vector<Wid> words = s.words;
  std::sort(words.begin(), words.end());
  std::string out = "{";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ",";
    out += dict ? dict->word(words[i]) : std::to_string(words[i]);
  }
  out += "} gid=\"" + gid_to_string(s.gid) + "\" level=" + std::to_string(s.gid.level);
  return out;
}

// Candidates of size k+1 from sorted frequent k-itemsets that share their
// first k-1 words; a candidate survives only if all its k-subsets are
// frequent.
std::vector<std::vector<Wid>> next_candidates(const std::vector<std::vector<Wid>>& frequent) {
  const std::set<std::vector<Wid>> known(frequent.begin(), frequent.end());
  std::vector<std::vector<Wid>> out;
  for (std::size_t i = 0; i < frequent.size(); ++i) {
    for (std::size_t j = i + 1; j < frequent.size(); ++j) {
      const auto& a = frequent[i];
      const auto& b = frequent[j];
      if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
      std::vector<Wid> cand = a;
      cand.push_back(b.back());
      bool all_frequent = true;
      std::vector<Wid> sub;
      for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
        sub.clear();
        for (std::size_t k = 0; k < cand.size(); ++k) {
          if (k != drop) sub.push_back(cand[k]);
        }
        all_frequent = known.contains(sub);
      }
      if (all_frequent) out.push_back(std::move(cand));
    }
  }
  return out;
}

}  // namespace

std::vector<CellTransactionGroup> group_by_cell(std::span<const SpatialSocialRecord> db,
                                                const GridConfig& cfg, int level) {
  std::map<std::uint64_t, std::vector<std::vector<Wid>>> groups;
  const BoundingBox& box = cfg.bbox();
  for (const auto& r : db) {
    if (r.geo.lon < box.min_lon || r.geo.lon > box.max_lon || r.geo.lat < box.min_lat ||
        r.geo.lat > box.max_lat) {
      continue;
    }
    // Drop the low quadrant digits of the leaf code, one pair per level.
    std::uint64_t code = encode(r.geo, cfg).code;
    for (int l = cfg.height(); l > level; --l) code /= 4;
    groups[code].push_back(r.words);
  }
  std::vector<CellTransactionGroup> out;
  for (auto& [code, txs] : groups) out.push_back({{level, code}, std::move(txs)});
  return out;
}

std::vector<Itemset> apriori_mine(std::span<const std::vector<Wid>> transactions,
                                  std::uint64_t sigma) {
  std::vector<std::vector<Wid>> sorted;
  sorted.reserve(transactions.size());
  for (const auto& t : transactions) {
    std::vector<Wid> s = t;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sorted.push_back(std::move(s));
  }

  std::map<Wid, std::uint64_t> singles;
  for (const auto& t : sorted) {
    for (Wid w : t) ++singles[w];
  }
  std::vector<Itemset> out;
  std::vector<std::vector<Wid>> frequent;
  for (const auto& [w, n] : singles) {
    if (n >= sigma) {
      out.push_back({{w}, n});
      frequent.push_back({w});
    }
  }

  while (!frequent.empty()) {
    auto candidates = next_candidates(frequent);
    if (candidates.empty()) break;
    std::vector<std::uint64_t> counts(candidates.size(), 0);
    for (const auto& t : sorted) {
      if (t.size() < candidates.front().size()) continue;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (std::includes(t.begin(), t.end(), candidates[c].begin(), candidates[c].end())) {
          ++counts[c];
        }
      }
    }
    frequent.clear();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (counts[c] >= sigma) {
        out.push_back({candidates[c], counts[c]});
        frequent.push_back(std::move(candidates[c]));
      }
    }
  }
  return out;
}

std::vector<SpatialFrequentWordset> oracle_sfw(std::span<const SpatialSocialRecord> db,
                                               const SigmaSchedule& sigma,
                                               const GridConfig& cfg) {
  std::vector<SpatialFrequentWordset> out;
  for (int level = cfg.height(); level >= 0; --level) {
    for (const auto& group : group_by_cell(db, cfg, level)) {
      for (auto& itemset : apriori_mine(group.transactions, sigma.at(level))) {
        out.push_back({std::move(itemset.words), group.gid, itemset.count});
      }
    }
  }
  return out;
}

DiffReport diff(std::span<const SpatialFrequentWordset> left,
                std::span<const SpatialFrequentWordset> right) {
  std::map<Key, const SpatialFrequentWordset*> l;
  std::map<Key, const SpatialFrequentWordset*> r;
  for (const auto& s : left) l.emplace(key_of(s), &s);
  for (const auto& s : right) r.emplace(key_of(s), &s);
  DiffReport report;
  for (const auto& [key, s] : l) {
    auto it = r.find(key);
    if (it == r.end()) {
      report.only_left.push_back(*s);
    } else if (it->second->count != s->count) {
      report.mismatched.push_back({*s, *it->second});
    }
  }
  for (const auto& [key, s] : r) {
    if (!l.contains(key)) report.only_right.push_back(*s);
  }
  return report;
}

void print_report(std::ostream& out, const DiffReport& report, const WordDictionary* dict,
                  const char* left_name, const char* right_name) {
  for (const auto& s : report.only_left) {
    out << "only_in_" << left_name << ' ' << render(s, dict) << " count=" << s.count << '\n';
  }
  for (const auto& s : report.only_right) {
    out << "only_in_" << right_name << ' ' << render(s, dict) << " count=" << s.count << '\n';
  }
  for (const auto& m : report.mismatched) {
    out << "count_mismatch " << render(m.left, dict) << ' ' << left_name << '='
        << m.left.count << ' ' << right_name << '=' << m.right.count << '\n';
  }
  out << "differences " << report.size() << '\n';
}

}  // namespace sfw::oracle
