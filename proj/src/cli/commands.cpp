#include "sfw/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "sfw/error.hpp"
#include "sfw/oracle.hpp"
#include "sfw/record_io.hpp"
#include "sfw/sfp_tree.hpp"
#include "sfw/text_pipeline.hpp"

namespace sfw::cli {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = text.find(sep);
    out.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigInvalid(std::string("invalid ") + what + ": \"" + std::string(text) + "\"");
  }
  return value;
}

double parse_double(std::string_view text, const char* what) {
  // from_chars for double is missing from older standard libraries.
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ConfigInvalid(std::string("invalid ") + what + ": \"" + s + "\"");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(std::string_view text, const char* what) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_number<std::uint64_t>(part, what));
  return out;
}

TextPipeline make_pipeline(const RunConfig& cfg) {
  if (!cfg.stopwords) return TextPipeline{};
  return TextPipeline(load_stopwords(*cfg.stopwords));
}

// Writes to the file when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::optional<std::filesystem::path>& path, std::ostream& fallback)
      : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot open output file " + path->string());
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

WordNamer dictionary_namer(const WordDictionary& dict) {
  return [&dict](Wid w) { return dict.word(w); };
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

GridConfig resolve_grid(const RunConfig& cfg) {
  validate(cfg.bbox);
  if (cfg.height.has_value() == cfg.cell_meters.has_value()) {
    throw ConfigInvalid("give exactly one of --height or --cell-meters");
  }
  if (cfg.height) return GridConfig(cfg.bbox, *cfg.height);
  return GridConfig(cfg.bbox, choose_grid_height(cfg.bbox, *cfg.cell_meters));
}

BoundingBox parse_bbox(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw ConfigInvalid("bbox must be minLon,minLat,maxLon,maxLat");
  }
  BoundingBox b{parse_double(parts[0], "bbox"), parse_double(parts[1], "bbox"),
                parse_double(parts[2], "bbox"), parse_double(parts[3], "bbox")};
  validate(b);
  return b;
}

SigmaSchedule parse_sigma(std::string_view text) {
  auto values = parse_list(text, "sigma");
  if (values.empty()) throw ConfigInvalid("sigma must not be empty");
  for (auto v : values) {
    if (v < 1) throw ConfigInvalid("sigma must be >= 1");
  }
  return SigmaSchedule(std::move(values));
}

PlantedPattern parse_plant(std::string_view text, int height) {
  const auto at = text.find('@');
  const auto colon = text.rfind(':');
  if (at == std::string_view::npos || colon == std::string_view::npos || colon < at) {
    throw ConfigInvalid("plant must look like w1,w2@GID:COUNT");
  }
  PlantedPattern p;
  for (auto w : split(text.substr(0, at), ',')) {
    if (!w.empty() && w.front() == 'w') w.remove_prefix(1);
    p.words.push_back(parse_number<Wid>(w, "planted word"));
  }
  try {
    p.cell = parse_gid(text.substr(at + 1, colon - at - 1), height);
  } catch (const MalformedGid& e) {
    throw ConfigInvalid(e.what());
  }
  p.injection_count = parse_number<std::uint64_t>(text.substr(colon + 1), "plant count");
  return p;
}

int cmd_mine(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GridConfig grid = resolve_grid(cfg);
    cfg.sigma.validate(grid.height());
    WordDictionary dict;
    FileRecordSource source(cfg.input, make_pipeline(cfg), dict, cfg.limit);

    auto start = Clock::now();
    const FrequencyTables fts = construct_fts(source, cfg.sigma.min(), grid);
    const double first_scan_ms = ms_since(start);
    const IngestStats ingest = source.stats();
    if (ingest.malformed * 10 > ingest.lines) {
      err << "error: " << ingest.malformed << " of " << ingest.lines
          << " lines are malformed (more than 10%), aborting\n";
      return kTooMalformed;
    }

    start = Clock::now();
    const SfpTree tree = insert_all(source, fts, grid);
    const double tree_build_ms = ms_since(start);

    start = Clock::now();
    const auto patterns = sfp_growth(tree, cfg.sigma, {cfg.threads});
    const double growth_ms = ms_since(start);

    {
      Sink sink(cfg.output, out);
      const auto name = dictionary_namer(dict);
      for (const auto& p : patterns) write_result(sink.get(), p, name);
    }
    if (cfg.dictionary) {
      std::ofstream d(*cfg.dictionary, std::ios::binary | std::ios::trunc);
      if (!d) throw Error("cannot open dictionary file " + cfg.dictionary->string());
      dict.save(d);
    }
    if (cfg.tree_dump) {
      std::ofstream t(*cfg.tree_dump, std::ios::binary | std::ios::trunc);
      if (!t) throw Error("cannot open tree dump file " + cfg.tree_dump->string());
      t << tree.dump(&dict);
    }

    std::map<int, std::uint64_t> per_level;
    for (int l = 0; l <= grid.height(); ++l) per_level[l] = 0;
    for (const auto& p : patterns) ++per_level[p.gid.level];

    std::ostringstream summary;
    summary << "records_read\t" << ingest.lines << '\n'
            << "records_mined\t" << fts.stats.records - fts.stats.out_of_bounds << '\n'
            << "records_out_of_bounds\t" << fts.stats.out_of_bounds << '\n'
            << "records_malformed\t" << ingest.malformed << '\n'
            << "distinct_words\t" << fts.stats.distinct_words << '\n'
            << "retained_words\t" << fts.words.size() << '\n'
            << "one_word_cell_entries\t" << fts.cells.entry_count() << '\n'
            << "grid_height\t" << grid.height() << '\n'
            << "tree_nodes\t" << tree.node_count() - 1 << '\n';
    for (const auto& [level, n] : per_level) {
      summary << "patterns_level_" << level << '\t' << n << '\n';
    }
    summary << "patterns_total\t" << patterns.size() << '\n'
            << "first_scan_ms\t" << first_scan_ms << '\n'
            << "tree_build_ms\t" << tree_build_ms << '\n'
            << "growth_ms\t" << growth_ms << '\n';
    if (cfg.summary) {
      std::ofstream s(*cfg.summary, std::ios::binary | std::ios::trunc);
      if (!s) throw Error("cannot open summary file " + cfg.summary->string());
      s << summary.str();
    } else {
      err << summary.str();
    }
    return kOk;
  });
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GridConfig grid = resolve_grid(cfg);
    cfg.sigma.validate(grid.height());
    WordDictionary dict;
    FileRecordSource source(cfg.input, make_pipeline(cfg), dict, cfg.limit);

    std::vector<SpatialSocialRecord> records;
    source.scan([&](const SpatialSocialRecord& r) { records.push_back(r); });
    if (!cfg.force && (records.size() > cfg.max_records || dict.size() > cfg.max_words)) {
      err << "error: instance too large for the brute-force oracle (" << records.size()
          << " records, " << dict.size() << " distinct words; limits " << cfg.max_records
          << " / " << cfg.max_words << "); pass --force to run anyway\n";
      return kFailure;
    }

    auto mined = mine_sf_wordsets(source, cfg.sigma, grid, {cfg.threads}).patterns;
    if (cfg.inject_fault) {
      // Harness self-test: the comparison must notice a corrupted result.
      if (mined.empty()) {
        mined.push_back({{0}, Gid{0, 0}, 1});
      } else {
        ++mined.front().count;
      }
    }
    const auto expected = oracle::oracle_sfw(records, cfg.sigma, grid);
    const auto report = oracle::diff(mined, expected);

    out << "records\t" << records.size() << '\n'
        << "miner_patterns\t" << mined.size() << '\n'
        << "oracle_patterns\t" << expected.size() << '\n';
    oracle::print_report(out, report, &dict, "miner", "oracle");
    out << (report.empty() ? "identical\n" : "DIFFERENT\n");
    return report.empty() ? kOk : kDifferences;
  });
}

int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg.bbox);
    std::optional<GridConfig> grid;
    if (cfg.height || cfg.cell_meters) grid = resolve_grid(cfg);
    WordDictionary dict;
    FileRecordSource source(cfg.input, make_pipeline(cfg), dict, cfg.limit);

    std::uint64_t in_bounds = 0;
    std::uint64_t occurrences = 0;
    std::uint64_t empty = 0;
    BoundingBox seen{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                     std::numeric_limits<double>::lowest(),
                     std::numeric_limits<double>::lowest()};
    std::map<std::uint64_t, std::uint64_t> cells;
    source.scan([&](const SpatialSocialRecord& r) {
      occurrences += r.words.size();
      if (r.words.empty()) ++empty;
      seen.min_lon = std::min(seen.min_lon, r.geo.lon);
      seen.min_lat = std::min(seen.min_lat, r.geo.lat);
      seen.max_lon = std::max(seen.max_lon, r.geo.lon);
      seen.max_lat = std::max(seen.max_lat, r.geo.lat);
      if (!cfg.bbox.contains(r.geo)) return;
      ++in_bounds;
      if (grid) ++cells[encode(r.geo, *grid).code];
    });
    const IngestStats& s = source.stats();
    out << "records_read\t" << s.lines << '\n'
        << "records_parsed\t" << s.records << '\n'
        << "records_malformed\t" << s.malformed << '\n'
        << "records_in_bbox\t" << in_bounds << '\n'
        << "records_out_of_bounds\t" << s.records - in_bounds << '\n'
        << "records_without_words\t" << empty << '\n'
        << "unique_words\t" << dict.size() << '\n'
        << "word_occurrences\t" << occurrences << '\n'
        << "mean_words_per_record\t"
        << (s.records ? static_cast<double>(occurrences) / static_cast<double>(s.records) : 0.0)
        << '\n';
    if (s.records > 0) {
      out << "spatial_scope\t" << seen.min_lon << ',' << seen.min_lat << ',' << seen.max_lon
          << ',' << seen.max_lat << '\n';
    } else {
      out << "spatial_scope\t-\n";
    }
    if (grid) {
      out << "grid_height\t" << grid->height() << '\n'
          << "occupied_leaf_cells\t" << cells.size() << '\n';
    }
    return kOk;
  });
}

int cmd_gen(const GenConfig& gen, const GridConfig& grid,
            const std::optional<std::filesystem::path>& output, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const auto records = generate(gen, grid);
    Sink sink(output, out);
    for (const auto& r : records) write_ingest_record(sink.get(), r, vocabulary_word);
    return kOk;
  });
}

int cmd_bench(const BenchSpec& spec, const std::optional<std::filesystem::path>& output,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = run_bench(spec);
    Sink sink(output, out);
    write_bench_table(sink.get(), rows);
    return kOk;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial frequent wordset mining over geo-tagged short text", "sfwmine"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  std::string bbox_text = "-180,-90,180,90";
  std::string sigma_text = "2";
  std::optional<std::string> output;
  std::optional<std::string> stopwords;
  std::optional<std::string> summary;
  std::optional<std::string> dictionary;
  std::optional<std::string> tree_dump;
  std::string input;

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--bbox", bbox_text, "minLon,minLat,maxLon,maxLat")
        ->capture_default_str();
    auto* h = sub->add_option("--height", run_cfg.height, "grid height (levels below root)");
    auto* m = sub->add_option("--cell-meters", run_cfg.cell_meters,
                              "target leaf cell size in meters");
    h->excludes(m);
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--input", input, "line-delimited JSON records")->required();
    sub->add_option("--output", output, "output file (stdout when omitted)");
    add_grid(sub);
    sub->add_option("--sigma", sigma_text, "S or S0,S1,...,Sh (per level, root first)")
        ->capture_default_str();
    sub->add_option("--stopwords", stopwords, "stopword file, one word per line");
    sub->add_option("--seed", run_cfg.seed, "random seed");
    sub->add_option("--limit", run_cfg.limit, "read at most N records (0 = all)");
    sub->add_option("--threads", run_cfg.threads, "growth worker threads");
  };

  auto* mine = app.add_subcommand("mine", "mine spatial frequent wordsets");
  add_run(mine);
  mine->add_option("--summary", summary, "write the run summary here instead of stderr");
  mine->add_option("--dictionary", dictionary, "write the word dictionary (wid<TAB>word)");
  mine->add_option("--dump-tree", tree_dump, "write the SFP-tree as indented text");

  auto* check = app.add_subcommand("check", "compare the miner against the brute-force oracle");
  add_run(check);
  check->add_option("--max-records", run_cfg.max_records, "oracle record limit");
  check->add_option("--max-words", run_cfg.max_words, "oracle vocabulary limit");
  check->add_flag("--force", run_cfg.force, "ignore the oracle size limits");
  check->add_flag("--inject-fault", run_cfg.inject_fault, "corrupt one miner result")
      ->group("");

  auto* stats = app.add_subcommand("stats", "print corpus and dictionary statistics");
  stats->add_option("--input", input, "line-delimited JSON records")->required();
  stats->add_option("--bbox", bbox_text, "minLon,minLat,maxLon,maxLat")->capture_default_str();
  {
    auto* h = stats->add_option("--height", run_cfg.height, "grid height");
    auto* m = stats->add_option("--cell-meters", run_cfg.cell_meters, "target cell meters");
    h->excludes(m);
  }
  stats->add_option("--stopwords", stopwords, "stopword file");
  stats->add_option("--limit", run_cfg.limit, "read at most N records");

  GenConfig gen;
  std::vector<std::string> plants;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic corpus");
  gen_cmd->add_option("--output", output, "output file (stdout when omitted)");
  gen_cmd->add_option("--records", gen.n_records, "total records")->capture_default_str();
  gen_cmd->add_option("--vocab", gen.vocab_size, "vocabulary size")->capture_default_str();
  gen_cmd->add_option("--zipf", gen.zipf_exponent, "Zipf exponent")->capture_default_str();
  gen_cmd->add_option("--words-mean", gen.words_per_record_mean, "mean words per record")
      ->capture_default_str();
  gen_cmd->add_option("--plant", plants, "planted pattern w1,w2@GID:COUNT (repeatable)");
  gen_cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  add_grid(gen_cmd);

  BenchSpec bench;
  std::string sizes_text = "25000,50000,100000,200000";
  std::string sigmas_text = "10";
  auto* bench_cmd = app.add_subcommand("bench", "time the mining phases over a sweep");
  bench_cmd->add_option("--output", output, "table file (stdout when omitted)");
  bench_cmd->add_option("--sizes", sizes_text, "record counts, comma separated")
      ->capture_default_str();
  bench_cmd->add_option("--sigmas", sigmas_text, "sigma values, comma separated")
      ->capture_default_str();
  bench_cmd->add_option("--vocab", bench.gen.vocab_size, "vocabulary size")
      ->capture_default_str();
  bench_cmd->add_option("--zipf", bench.gen.zipf_exponent, "Zipf exponent")
      ->capture_default_str();
  bench_cmd->add_option("--words-mean", bench.gen.words_per_record_mean,
                        "mean words per record")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.gen.seed, "random seed")->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "repeats per run (fastest kept)")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "growth worker threads");
  add_grid(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto to_path = [](const std::optional<std::string>& s)
      -> std::optional<std::filesystem::path> {
    if (!s) return std::nullopt;
    return std::filesystem::path(*s);
  };

  return guarded(err, [&] {
    run_cfg.bbox = parse_bbox(bbox_text);
    run_cfg.input = input;
    run_cfg.output = to_path(output);
    run_cfg.stopwords = to_path(stopwords);
    run_cfg.summary = to_path(summary);
    run_cfg.dictionary = to_path(dictionary);
    run_cfg.tree_dump = to_path(tree_dump);

    if (mine->parsed() || check->parsed()) {
      run_cfg.sigma = parse_sigma(sigma_text);
      return mine->parsed() ? cmd_mine(run_cfg, out, err) : cmd_check(run_cfg, out, err);
    }
    if (stats->parsed()) return cmd_stats(run_cfg, out, err);

    // gen and bench default to height 4 when no cell size is given.
    if (!run_cfg.height && !run_cfg.cell_meters) run_cfg.height = 4;
    const GridConfig grid = resolve_grid(run_cfg);
    if (gen_cmd->parsed()) {
      for (const auto& p : plants) gen.planted.push_back(parse_plant(p, grid.height()));
      return cmd_gen(gen, grid, run_cfg.output, out, err);
    }
    bench.sizes = parse_list(sizes_text, "sizes");
    bench.sigmas = parse_list(sigmas_text, "sigmas");
    bench.grid = grid;
    return cmd_bench(bench, run_cfg.output, out, err);
  });
}

}  // namespace sfw::cli
