#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "qadisc/extract.hpp"

using namespace qadisc;
using fixtures::sentence;
using fixtures::wage_sentence;

TEST_CASE("builtin lexicon applies the default exclusions") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  CHECK(lex.contains("because"));
  CHECK(lex.contains("despite"));
  CHECK(lex.contains("as soon as"));
  CHECK_FALSE(lex.contains("so"));
  CHECK_FALSE(lex.contains("as"));
  CHECK_FALSE(lex.contains("to"));
  CHECK_FALSE(lex.contains("about"));
}

TEST_CASE("wage sentence splits into the five clause segments") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s = wage_sentence();
  const std::vector<Segment> segs = segment_sentence(s, lex);
  REQUIRE(segs.size() == 5);
  CHECK(segs[0] == Segment{0, 3, true});    // Despite labor-shortage warnings
  CHECK(segs[1].begin == 4);                // 80% aim ... 4%
  CHECK(segs[1].end == 13);
  CHECK(segs[2].begin == 14);               // and 77% say ... workers
  CHECK(segs[2].end == 22);
  CHECK(segs[3] == Segment{23, 25, true});  // if struck
  CHECK(segs[4].begin == 26);               // or would consider it .
  CHECK(segs[4].end == 31);
}

TEST_CASE("wage sentence targets match the six annotated words") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s = wage_sentence();
  const std::set<std::size_t> targets = extract_targets(s, lex);
  std::set<std::string> surfaces;
  for (std::size_t t : targets) surfaces.insert(s.tokens[t].surface);
  CHECK(surfaces == std::set<std::string>{"warnings", "aim", "say", "replace",
                                          "struck", "consider"});
}

TEST_CASE("sentence without split points is a single segment") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s =
      sentence("one", "The committee approved the plan",
               "OTHER NOUN VERB OTHER NOUN");
  const std::vector<Segment> segs = segment_sentence(s, lex);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].begin == 0);
  CHECK(segs[0].end == 5);
}

TEST_CASE("punctuation then connective splitting, in that order") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  // "A , B because C" -> "A" / "B" / "because C"
  const TaggedSentence s =
      sentence("abc", "prices rose , sales fell because demand sank",
               "NOUN VERB PUNCT NOUN VERB OTHER NOUN VERB");
  const std::vector<Segment> segs = segment_sentence(s, lex);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0] == Segment{0, 2, false});
  CHECK(segs[1] == Segment{3, 5, false});
  CHECK(segs[2] == Segment{5, 8, true});
}

TEST_CASE("V ADV V counts as one verb run") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s = sentence("adv", "He is also studying chemistry",
                                    "OTHER VERB ADV VERB NOUN");
  const std::set<std::size_t> targets = extract_targets(s, lex);
  REQUIRE(targets.size() == 1);
  CHECK(s.tokens[*targets.begin()].surface == "studying");
}

TEST_CASE("verbless connective-initial segment falls back to the first noun") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s =
      sentence("rain", "because of the rain , the game stopped",
               "OTHER OTHER OTHER NOUN PUNCT OTHER NOUN VERB");
  const std::set<std::size_t> targets = extract_targets(s, lex);
  std::set<std::string> surfaces;
  for (std::size_t t : targets) surfaces.insert(s.tokens[t].surface);
  CHECK(surfaces == std::set<std::string>{"rain", "stopped"});
}

TEST_CASE("verbless connective-initial segment without nouns takes an adverb") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s = sentence("adv2", "he agreed , though warily",
                                    "OTHER VERB PUNCT OTHER ADV");
  const std::set<std::size_t> targets = extract_targets(s, lex);
  std::set<std::string> surfaces;
  for (std::size_t t : targets) surfaces.insert(s.tokens[t].surface);
  CHECK(surfaces == std::set<std::string>{"agreed", "warily"});
}

TEST_CASE("excluded verbs never become targets") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const TaggedSentence s = sentence("said", "officials said prices rose",
                                    "NOUN VERB NOUN VERB");
  const std::set<std::size_t> targets = extract_targets(s, lex);
  for (std::size_t t : targets) {
    CHECK_FALSE(is_excluded_verb(s.tokens[t].surface));
    CHECK(s.tokens[t].surface != "said");
  }
  CHECK(targets == std::set<std::size_t>{3});
}

TEST_CASE("extraction invariants hold on the fixtures") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  for (const TaggedSentence& s :
       {wage_sentence(),
        sentence("x", "traders sold stock when markets opened , but kept bonds",
                 "NOUN VERB NOUN OTHER NOUN VERB PUNCT OTHER VERB NOUN")}) {
    const std::vector<Segment> segs = segment_sentence(s, lex);
    const std::set<std::size_t> targets = extract_targets(s, lex, segs);

    // segments are disjoint and ordered
    for (std::size_t i = 1; i < segs.size(); ++i)
      CHECK(segs[i - 1].end <= segs[i].begin);

    // every target lies inside exactly one segment
    for (std::size_t t : targets) {
      int containing = 0;
      for (const Segment& seg : segs)
        if (t >= seg.begin && t < seg.end) ++containing;
      CHECK(containing == 1);
    }

    // at most one non-verb target per segment, only in connective segments
    for (const Segment& seg : segs) {
      int non_verb = 0;
      for (std::size_t t : targets)
        if (t >= seg.begin && t < seg.end && s.tokens[t].pos != Pos::Verb)
          ++non_verb;
      CHECK(non_verb <= 1);
      if (non_verb > 0) CHECK(seg.starts_with_connective);
    }

    // idempotence
    CHECK(extract_targets(s, lex) == targets);
  }
}

TEST_CASE("lexicon file loading with comments and exclusions") {
  const std::string path = "test_lexicon.txt";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "because\n"
        << "as soon as\n"
        << "meanwhile\n"
        << "!because\n";
  }
  const ConnectiveLexicon lex = ConnectiveLexicon::from_file(path);
  CHECK(lex.contains("as soon as"));
  CHECK(lex.contains("meanwhile"));
  CHECK_FALSE(lex.contains("because"));
  std::remove(path.c_str());
}

TEST_CASE("longest connective match wins at a position") {
  ConnectiveLexicon lex;
  lex.add("as");
  lex.add("as long as");
  const TaggedSentence s = sentence("lm", "as long as it lasts",
                                    "OTHER OTHER OTHER OTHER VERB");
  CHECK(lex.match_at(s.tokens, 0) == 3);
}
