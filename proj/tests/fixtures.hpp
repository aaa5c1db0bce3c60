// Shared test fixtures: hand-tagged sentences and helpers.
#ifndef QADISC_TESTS_FIXTURES_HPP
#define QADISC_TESTS_FIXTURES_HPP

#include <sstream>
#include <string>
#include <vector>

#include "qadisc/core.hpp"
#include "qadisc/grammar.hpp"

namespace fixtures {

inline qadisc::TaggedSentence sentence(const std::string& id,
                                       const std::string& tokens,
                                       const std::string& tags) {
  qadisc::TaggedSentence s;
  s.id = id;
  std::stringstream ts(tokens), ps(tags);
  std::string tok, tag;
  while (ts >> tok) s.tokens.push_back({tok, qadisc::Pos::Other});
  std::size_t i = 0;
  while (ps >> tag) s.tokens.at(i++).pos = qadisc::pos_from_string(tag);
  if (i != s.tokens.size())
    throw std::logic_error("fixture token/tag mismatch: " + id);
  return s;
}

// The wage-increase sentence with its hand-assigned coarse tags.
// V=VERB A=ADV N=NOUN o=OTHER-open P=PUNCT O=OTHER
inline qadisc::TaggedSentence wage_sentence() {
  return sentence(
      "wage",
      "Despite labor-shortage warnings , 80% aim for first-year wage "
      "increases of under 4% ; and 77% say they'd try to replace workers , "
      "if struck , or would consider it .",
      "OTHER OTHER-open NOUN PUNCT OTHER-open VERB OTHER OTHER-open NOUN "
      "NOUN OTHER OTHER OTHER-open PUNCT OTHER OTHER-open VERB OTHER VERB "
      "OTHER VERB NOUN PUNCT OTHER VERB PUNCT OTHER VERB VERB OTHER PUNCT");
}

inline qadisc::QAPair qa(const std::string& question,
                         const std::string& answer,
                         qadisc::Verdict verdict = qadisc::Verdict::Unreviewed) {
  const qadisc::ParsedQuestion pq = qadisc::parse_question(question);
  qadisc::QAPair p;
  p.prefix = pq.prefix;
  p.auxiliary = pq.auxiliary;
  p.question_body = pq.body;
  p.answer = answer;
  p.grammaticality = verdict;
  return p;
}

inline qadisc::AnnotationSet annotation(const std::string& sid,
                                        qadisc::Source source,
                                        std::vector<qadisc::QAPair> pairs) {
  return {sid, source, std::move(pairs)};
}

}  // namespace fixtures

#endif
