#include <doctest.h>

#include <cstdio>
#include <random>

#include "fixtures.hpp"
#include "qadisc/extract.hpp"
#include "qadisc/metrics.hpp"
#include "qadisc/parser.hpp"

using namespace qadisc;
using fixtures::sentence;

namespace {

// Two-clause fixture: "it could hit Hawaii if it stays on its predicted path"
TaggedSentence hawaii() {
  return sentence("hawaii", "It could hit Hawaii if it stays on its predicted path",
                  "OTHER VERB VERB NOUN OTHER OTHER VERB OTHER OTHER "
                  "OTHER-open NOUN");
}

FeatureVector fv(std::initializer_list<const char*> names) {
  FeatureVector out;
  for (const char* n : names) out.add(n);
  return out;
}

}  // namespace

TEST_CASE("class_weight formula") {
  CHECK(class_weight(20, 100) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(class_weight(0, 100) == doctest::Approx(1e7).epsilon(0.01));
  CHECK(class_weight(100, 100) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("training rejects an empty set") {
  CHECK_THROWS_AS(train_prefix_classifier({}), EmptyTrainingSet);
}

TEST_CASE("a separating feature pushes scores across the threshold") {
  const PrefixId reason = *prefix_by_surface("What is the reason");
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  for (int i = 0; i < 10; ++i) {
    examples.emplace_back(fv({"next_conn=because", "tgt_pos=VERB"}),
                          std::set<PrefixId>{reason});
    examples.emplace_back(fv({"seg_conn=while", "tgt_pos=VERB"}),
                          std::set<PrefixId>{});
  }
  const PrefixModel model = train_prefix_classifier(examples);
  CHECK(model.score(reason, fv({"next_conn=because", "tgt_pos=VERB"})) >= 0.3);
  CHECK(model.score(reason, fv({"seg_conn=while", "tgt_pos=VERB"})) < 0.3);
}

TEST_CASE("a single-example model predicts its own labels") {
  const PrefixId manner = *prefix_by_surface("In what manner");
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  examples.emplace_back(fv({"tgt=rise", "w[1]=sharply"}),
                        std::set<PrefixId>{manner});
  const PrefixModel model = train_prefix_classifier(examples);
  CHECK(model.predict(examples[0].first).count(manner) == 1);
}

TEST_CASE("duplicating the training set leaves predictions unchanged") {
  const PrefixId after = *prefix_by_surface("After what");
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  for (int i = 0; i < 5; ++i) {
    examples.emplace_back(fv({"seg_conn=after", "seg_pos=last"}),
                          std::set<PrefixId>{after});
    examples.emplace_back(fv({"seg_pos=first"}), std::set<PrefixId>{});
  }
  auto doubled = examples;
  doubled.insert(doubled.end(), examples.begin(), examples.end());

  const PrefixModel m1 = train_prefix_classifier(examples);
  const PrefixModel m2 = train_prefix_classifier(doubled);
  for (const auto& [x, _] : examples) CHECK(m1.predict(x) == m2.predict(x));
}

TEST_CASE("prediction sets are monotone non-increasing in tau") {
  const PrefixId reason = *prefix_by_surface("What is the reason");
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  for (int i = 0; i < 8; ++i) {
    examples.emplace_back(fv({"next_conn=because"}), std::set<PrefixId>{reason});
    examples.emplace_back(fv({"seg_conn=while"}), std::set<PrefixId>{});
  }
  PrefixModel model = train_prefix_classifier(examples);
  const FeatureVector x = fv({"next_conn=because"});

  std::set<PrefixId> prev;
  bool first = true;
  for (int k = 0; k <= 10; ++k) {
    model.set_tau(k / 10.0);
    const std::set<PrefixId> cur = model.predict(x);
    if (!first)
      for (PrefixId p : cur) CHECK(prev.count(p) == 1);
    prev = cur;
    first = false;
  }
  model.set_tau(0.0);
  CHECK(model.predict(x).size() == 17);
  model.set_tau(1.0);
  CHECK(model.predict(x).empty());
}

TEST_CASE("model save and load round-trip scores") {
  const PrefixId manner = *prefix_by_surface("In what manner");
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  for (int i = 0; i < 6; ++i) {
    examples.emplace_back(fv({"tgt=rise", "seg_conn=as soon as"}),
                          std::set<PrefixId>{manner});
    examples.emplace_back(fv({"tgt=fall"}), std::set<PrefixId>{});
  }
  const PrefixModel m = train_prefix_classifier(examples);
  m.save("roundtrip.model");
  const PrefixModel back = PrefixModel::load("roundtrip.model");
  for (const auto& [x, _] : examples) {
    for (PrefixId p = 0; p < kPrefixCount; ++p)
      CHECK(m.score(p, x) == doctest::Approx(back.score(p, x)).epsilon(1e-12));
  }
  CHECK(back.tau() == m.tau());
  std::remove("roundtrip.model");
}

TEST_CASE("generate_question strips the leading connective and lifts the aux") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const PrefixId in_case = *prefix_by_surface("In what case");
  TaggedSentence s = hawaii();
  // target "stays" in "if it stays on its predicted path"
  const auto qs = generate_question(s, in_case, {6}, lex);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].body == "it stays on its predicted path?");
  CHECK(qs[0].full_text.rfind("In what case", 0) == 0);
}

TEST_CASE("generate_question keeps one-word segments valid") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const PrefixId while_what = *prefix_by_surface("While what");
  const TaggedSentence s =
      sentence("short", "markets fell , recovering", "NOUN VERB PUNCT VERB");
  const auto qs = generate_question(s, while_what, {3}, lex);
  REQUIRE(qs.size() == 1);
  const ParsedQuestion back = parse_question(qs[0].full_text);
  CHECK(prefix_info(back.prefix).surface == "While what");
  CHECK(back.body == "recovering?");
}

TEST_CASE("generate_question emits one question per target in order") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const PrefixId while_what = *prefix_by_surface("While what");
  const TaggedSentence s = sentence(
      "two", "prices rose , sales fell", "NOUN VERB PUNCT NOUN VERB");
  const auto qs = generate_question(s, while_what, {1, 4}, lex);
  REQUIRE(qs.size() == 2);
  CHECK(qs[0].body.find("prices") != std::string::npos);
  CHECK(qs[1].body.find("sales") != std::string::npos);
  CHECK_THROWS_AS(generate_question(s, while_what, {}, lex), NoTargets);
}

TEST_CASE("generate_answer prefers the sense-compatible segment") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();
  const PrefixId in_case = *prefix_by_surface("In what case");
  TaggedSentence s = hawaii();
  const auto qs = generate_question(s, in_case, {2}, lex);  // target "hit"
  REQUIRE(qs.size() == 1);
  const std::string answer = generate_answer(s, qs[0], lex, compat);
  CHECK(answer == "if it stays on its predicted path");
}

TEST_CASE("generate_answer with one remaining segment returns it") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();
  const PrefixId while_what = *prefix_by_surface("While what");
  const TaggedSentence s = sentence(
      "two", "prices rose , sales fell", "NOUN VERB PUNCT NOUN VERB");
  const auto qs = generate_question(s, while_what, {1}, lex);
  CHECK(generate_answer(s, qs[0], lex, compat) == "sales fell");
}

TEST_CASE("generate_answer fails on a single-segment sentence") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();
  const PrefixId manner = *prefix_by_surface("In what manner");
  const TaggedSentence s =
      sentence("one", "prices rose sharply", "NOUN VERB ADV");
  const auto qs = generate_question(s, manner, {1}, lex);
  CHECK_THROWS_AS(generate_answer(s, qs[0], lex, compat), NoCandidate);
}

TEST_CASE("parse_sentence output is structurally valid and capped") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();

  // permissive model: predict everything
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  std::set<PrefixId> all;
  for (PrefixId p = 0; p < kPrefixCount; ++p) all.insert(p);
  examples.emplace_back(fv({"tgt_pos=VERB"}), all);
  PrefixModel model = train_prefix_classifier(examples, 0.3, 400, 0.5);

  TaggedSentence s = hawaii();
  s.targets = extract_targets(s, lex);
  REQUIRE_FALSE(s.targets.empty());
  const AnnotationSet out = parse_sentence(model, s, lex, compat);
  CHECK(out.pairs.size() <= s.targets.size() * 17);
  for (const QAPair& qa : out.pairs) {
    const std::string full =
        compose_question(qa.prefix, qa.auxiliary, {qa.question_body})
            .full_text;
    const ParsedQuestion back = parse_question(full);
    CHECK(back.prefix == qa.prefix);
    CHECK_FALSE(qa.answer.empty());
    // everything is copied from the sentence
    TokenBag sent_bag;
    for (const Token& t : s.tokens) sent_bag.add_text(t.surface);
    CHECK(iou(qa_token_bag(qa), sent_bag) > 0.0);
    REQUIRE(qa.source_targets.has_value());
    CHECK(s.targets.count(qa.source_targets->first) == 1);
    CHECK(s.targets.count(qa.source_targets->second) == 1);
  }
}

TEST_CASE("parse_sentence with no targets yields an empty set") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  examples.emplace_back(fv({"x"}), std::set<PrefixId>{});
  const PrefixModel model = train_prefix_classifier(examples);
  TaggedSentence s = sentence("none", "yes", "OTHER");
  const AnnotationSet out = parse_sentence(model, s, lex, compat);
  CHECK(out.pairs.empty());
}

TEST_CASE("pipeline is deterministic") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  const CompatibilityTable compat = CompatibilityTable::builtin();
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  examples.emplace_back(fv({"tgt_pos=VERB"}),
                        std::set<PrefixId>{*prefix_by_surface("After what")});
  const PrefixModel m1 = train_prefix_classifier(examples, 0.3, 300, 0.5);
  const PrefixModel m2 = train_prefix_classifier(examples, 0.3, 300, 0.5);
  TaggedSentence s = hawaii();
  s.targets = extract_targets(s, lex);
  const AnnotationSet o1 = parse_sentence(m1, s, lex, compat);
  const AnnotationSet o2 = parse_sentence(m2, s, lex, compat);
  REQUIRE(o1.pairs.size() == o2.pairs.size());
  for (std::size_t i = 0; i < o1.pairs.size(); ++i)
    CHECK(o1.pairs[i] == o2.pairs[i]);
}

TEST_CASE("predict_prefixes validates the target index") {
  const ConnectiveLexicon lex = ConnectiveLexicon::builtin();
  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  examples.emplace_back(fv({"x"}), std::set<PrefixId>{});
  const PrefixModel model = train_prefix_classifier(examples);
  TaggedSentence s = hawaii();
  s.targets = extract_targets(s, lex);
  CHECK_THROWS_AS(predict_prefixes(model, s, 0, lex), std::invalid_argument);
}
