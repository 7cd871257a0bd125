#include <sstream>

#include "doctest.h"
#include "sfw/error.hpp"
#include "sfw/text_pipeline.hpp"

using namespace sfw;
using Words = std::vector<std::string>;

namespace {
StopwordSet english() { return {"we", "are", "in", "an", "a", "the", "is"}; }
}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("we are in an Italian restaurant") ==
        Words{"we", "are", "in", "an", "italian", "restaurant"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("pizza!!pizza") == Words{"pizza", "pizza"});
  CHECK(tokenize("  NYC,  2012-11-18 ") == Words{"nyc", "2012", "11", "18"});
  // UTF-8 passes through unchanged.
  CHECK(tokenize("Café 서울!") == Words{"café", "서울"});
}

TEST_CASE("refine") {
  CHECK(refine({"we", "are", "in", "an", "italian", "restaurant"}, english()) ==
        Words{"italian", "restaurant"});
  CHECK(refine({"pizza", "pizza"}, {}) == Words{"pizza"});
  CHECK(refine({"we", "are"}, english()).empty());
}

TEST_CASE("intern") {
  WordDictionary dict;
  CHECK(intern({"italian", "restaurant"}, dict) == std::vector<Wid>{0, 1});
  CHECK(intern({"restaurant", "italian"}, dict) == std::vector<Wid>{0, 1});
  CHECK(intern({}, dict).empty());
  CHECK(intern({"pizza", "italian"}, dict) == std::vector<Wid>{0, 2});
  CHECK(dict.size() == 3);
  CHECK(dict.word(2) == "pizza");
  REQUIRE(dict.find("pizza") != nullptr);
  CHECK(*dict.find("pizza") == 2);
  CHECK(dict.find("pasta") == nullptr);
}

TEST_CASE("dictionary save/load") {
  WordDictionary dict;
  intern({"b", "a", "서울"}, dict);
  std::stringstream s;
  dict.save(s);
  CHECK(s.str() == "0\tb\n1\ta\n2\t서울\n");
  const auto back = WordDictionary::load(s);
  CHECK(back.size() == 3);
  CHECK(back.word(2) == "서울");

  std::stringstream bad("1\tx\n");
  CHECK_THROWS_AS(WordDictionary::load(bad), ConfigInvalid);
}

TEST_CASE("stopword file format") {
  std::stringstream in("# comment\nThe\n\n  a \nIs\n");
  const auto sw = load_stopwords(in);
  CHECK(sw == StopwordSet{"the", "a", "is"});
}

TEST_CASE("pipeline with a stemmer hook") {
  const TextPipeline plain(english());
  CHECK(plain.words_of_text("We are in an Italian restaurant") ==
        Words{"italian", "restaurant"});

  const TextPipeline stemming(english(), [](std::string_view w) {
    std::string s(w);
    if (s.size() > 3 && s.ends_with('s')) s.pop_back();
    return s;
  });
  CHECK(stemming.words_of_text("pizzas and pizza") == Words{"pizza", "and"});
}

TEST_CASE("property: processing is deterministic and idempotent") {
  const std::vector<std::string> texts = {
      "Expensive restaurant in the city", "the pizza is good, pizza!", "",
      "Italian restaurant; expensive?", "coffee coffee COFFEE"};
  const TextPipeline pipe(english());

  WordDictionary d1, d2;
  std::vector<std::vector<Wid>> first, second;
  for (const auto& t : texts) first.push_back(intern(pipe.words_of_text(t), d1));
  for (const auto& t : texts) second.push_back(intern(pipe.words_of_text(t), d2));
  CHECK(first == second);
  CHECK(d1.size() == d2.size());

  // Re-processing the processed corpus changes nothing.
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string joined;
    for (Wid w : first[i]) joined += d1.word(w) + " ";
    const auto again = intern(pipe.words_of_text(joined), d1);
    CHECK(again == first[i]);
  }
  CHECK(d1.size() == d2.size());
}
