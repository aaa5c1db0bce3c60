#include "qadisc/core.hpp"

#include <algorithm>
#include <cctype>

namespace qadisc {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Pos pos_from_string(const std::string& tag) {
  const std::string t = lower(tag);
  if (t == "verb" || t == "aux" || t == "v") return Pos::Verb;
  if (t == "adv" || t == "adverb") return Pos::Adv;
  if (t == "noun" || t == "propn" || t == "n") return Pos::Noun;
  if (t == "other-open" || t == "adj" || t == "num") return Pos::OtherOpen;
  if (t == "punct" || t == "punc") return Pos::Punct;
  if (t == "other" || t == "x") return Pos::Other;
  throw std::invalid_argument("unknown POS tag: " + tag);
}

std::string pos_to_string(Pos pos) {
  switch (pos) {
    case Pos::Verb: return "VERB";
    case Pos::Adv: return "ADV";
    case Pos::Noun: return "NOUN";
    case Pos::OtherOpen: return "OTHER-open";
    case Pos::Punct: return "PUNCT";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

void TaggedSentence::check() const {
  if (tokens.empty())
    throw std::invalid_argument("sentence " + id + " has no tokens");
  for (std::size_t t : targets) {
    if (t >= tokens.size())
      throw std::invalid_argument("sentence " + id + ": target index " +
                                  std::to_string(t) + " out of range");
    const Pos p = tokens[t].pos;
    if (p != Pos::Verb && p != Pos::Noun && p != Pos::Adv)
      throw std::invalid_argument("sentence " + id + ": target \"" +
                                  tokens[t].surface +
                                  "\" is not a verb, noun or adverb");
  }
}

Verdict verdict_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "unreviewed" || v.empty()) return Verdict::Unreviewed;
  if (v == "correct") return Verdict::Correct;
  if (v == "not_correct") return Verdict::NotCorrect;
  if (v == "correct_not_grammatical") return Verdict::CorrectNotGrammatical;
  throw std::invalid_argument("unknown verdict: " + s);
}

std::string verdict_to_string(Verdict v) {
  switch (v) {
    case Verdict::Unreviewed: return "unreviewed";
    case Verdict::Correct: return "correct";
    case Verdict::NotCorrect: return "not_correct";
    case Verdict::CorrectNotGrammatical: return "correct_not_grammatical";
  }
  return "unreviewed";
}

Source source_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "gold") return Source::gold();
  if (v == "system") return Source::system();
  return Source::worker(s);
}

std::string source_to_string(const Source& s) {
  switch (s.kind) {
    case Source::Kind::Gold: return "gold";
    case Source::Kind::System: return "system";
    case Source::Kind::Worker: return s.worker_id;
  }
  return s.worker_id;
}

}  // namespace qadisc
