#include <doctest.h>

#include <random>
#include <set>

#include "qadisc/grammar.hpp"

using namespace qadisc;

TEST_CASE("catalog has exactly 17 distinct prefixes") {
  auto catalog = prefix_catalog();
  CHECK(catalog.size() == 17);
  std::set<std::string> surfaces;
  for (const PrefixInfo& p : catalog) surfaces.insert(p.surface);
  CHECK(surfaces.size() == 17);
}

TEST_CASE("prefix senses follow the sense table") {
  CHECK(prefix_info(*prefix_by_surface("Despite what")).sense ==
        "Comparison.Concession");
  CHECK(prefix_info(*prefix_by_surface("Unless what")).sense ==
        "Contingency.Negative-condition");
  CHECK(prefix_info(*prefix_by_surface("In what manner")).sense ==
        "Expansion.Manner");
  CHECK(prefix_info(*prefix_by_surface("What is the reason")).sense ==
        "Contingency.Cause");
  CHECK(prefix_info(*prefix_by_surface("While what")).sense ==
        "Temporal.Synchronous");
}

TEST_CASE("reversed pairs are mutually consistent") {
  for (PrefixId i = 0; i < kPrefixCount; ++i) {
    const PrefixInfo& p = prefix_info(i);
    if (p.direction != Direction::Reversed) continue;
    const PrefixInfo& q = prefix_info(p.reverse_partner);
    CHECK(q.direction == Direction::Reversed);
    CHECK(q.reverse_partner == i);
    CHECK(q.canonical == p.canonical);
  }
}

TEST_CASE("canonical labels partition the catalog into 14 classes") {
  std::set<std::string> labels;
  for (PrefixId i = 0; i < kPrefixCount; ++i)
    labels.insert(canonical_label(i));
  CHECK(labels.size() == 14);
}

TEST_CASE("canonical_label collapses reverse partners only") {
  const PrefixId reason = *prefix_by_surface("What is the reason");
  const PrefixId result = *prefix_by_surface("What is the result of");
  const PrefixId after = *prefix_by_surface("After what");
  const PrefixId before = *prefix_by_surface("Before what");
  const PrefixId since = *prefix_by_surface("Since when");
  const PrefixId until = *prefix_by_surface("Until when");
  const PrefixId manner = *prefix_by_surface("In what manner");

  CHECK(canonical_label(reason) == canonical_label(result));
  CHECK(canonical_label(after) == canonical_label(before));
  CHECK(canonical_label(since) == canonical_label(until));
  CHECK(canonical_label(after) != canonical_label(since));
  CHECK(canonical_label(manner) == prefix_info(manner).surface);
}

TEST_CASE("no surface is a word-boundary prefix of another") {
  auto catalog = prefix_catalog();
  for (const PrefixInfo& a : catalog)
    for (const PrefixInfo& b : catalog) {
      if (a.surface == b.surface) continue;
      const bool starts = b.surface.rfind(a.surface, 0) == 0 &&
                          b.surface.size() > a.surface.size() &&
                          b.surface[a.surface.size()] == ' ';
      CHECK_FALSE(starts);
    }
}

TEST_CASE("parse_question splits prefix, auxiliary and body") {
  auto q = parse_question("In what case do checks and balances happen?");
  CHECK(prefix_info(q.prefix).surface == "In what case");
  CHECK(q.auxiliary == "do");
  CHECK(q.body == "checks and balances happen?");

  q = parse_question("Despite what did I decide to do a press conference?");
  CHECK(prefix_info(q.prefix).surface == "Despite what");
  CHECK(q.auxiliary == "did");
  CHECK(q.body == "I decide to do a press conference?");

  q = parse_question("What is the reason lawmakers requested action?");
  CHECK(prefix_info(q.prefix).surface == "What is the reason");
  CHECK_FALSE(q.auxiliary.has_value());
}

TEST_CASE("parse_question rejects non-catalog openings") {
  CHECK_THROWS_AS(parse_question("Who arrived?"), NoPrefixMatch);
  CHECK_THROWS_AS(parse_question("When did it rain?"), NoPrefixMatch);
  CHECK_THROWS_AS(parse_question(""), NoPrefixMatch);
}

TEST_CASE("compose_question joins spans and appends the question mark") {
  const PrefixId reason = *prefix_by_surface("What is the reason");
  auto q = compose_question(reason, std::nullopt,
                            {"lawmakers requested action"});
  CHECK(q.full_text == "What is the reason lawmakers requested action?");

  const PrefixId since = *prefix_by_surface("Since when");
  q = compose_question(since, "did", {"Pratchett", "a writer"});
  CHECK(q.full_text == "Since when did Pratchett a writer?");
}

TEST_CASE("compose_question rejects empty bodies") {
  const PrefixId while_what = *prefix_by_surface("While what");
  CHECK_THROWS_AS(
      compose_question(while_what, std::nullopt, {}, std::string("")),
      EmptyBody);
}

TEST_CASE("compose then parse round-trips over random bodies") {
  const std::vector<std::string> words = {
      "government", "report",  "flood",  "market", "voted",  "quickly",
      "economy",    "players", "signed", "storm",  "museum", "closed"};
  const std::vector<std::string> auxes = {"do", "did", "was", "could", "has"};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const PrefixId prefix = static_cast<PrefixId>(rng() % kPrefixCount);
    std::optional<std::string> aux;
    if (rng() % 2) aux = auxes[rng() % auxes.size()];
    std::string body;
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) body += ' ';
      body += words[rng() % words.size()];
    }
    const ComposedQuestion q = compose_question(prefix, aux, {body});
    const ParsedQuestion back = parse_question(q.full_text);
    CHECK(back.prefix == prefix);
    CHECK(back.auxiliary == aux);
    CHECK(back.body == q.body);
  }
}

TEST_CASE("parse is case-insensitive on the prefix") {
  auto q = parse_question("what is the result of the storm?");
  CHECK(prefix_info(q.prefix).surface == "What is the result of");
  CHECK(q.body == "the storm?");
}
