#ifndef QADISC_EXTRACT_HPP
#define QADISC_EXTRACT_HPP

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qadisc/core.hpp"

namespace qadisc {

// Discourse connective list used for clause segmentation. Connectives are
// lowercased token sequences; the most ambiguous ones are excluded at load.
class ConnectiveLexicon {
 public:
  // Built-in PDTB explicit-connective list minus the default exclusions.
  static ConnectiveLexicon builtin();

  // File format: one connective per line, "#" comments, "!word" adds an
  // exclusion. Exclusions are applied after all lines are read.
  static ConnectiveLexicon from_file(const std::string& path);

  void add(const std::string& connective);
  void exclude(const std::string& connective);

  bool contains(const std::string& connective) const;
  std::size_t size() const { return connectives_.size(); }

  // Length (in tokens) of the longest lexicon connective starting at
  // position pos, or 0 if none matches. Case-insensitive, token-boundary.
  std::size_t match_at(const std::vector<Token>& tokens, std::size_t pos) const;

  const std::set<std::string>& connectives() const { return connectives_; }
  const std::set<std::string>& excluded() const { return excluded_; }

 private:
  void apply_exclusions();

  std::set<std::string> connectives_;
  std::set<std::string> excluded_;
  std::size_t max_tokens_ = 1;
};

struct Segment {
  std::size_t begin = 0;  // half-open token range [begin, end)
  std::size_t end = 0;
  bool starts_with_connective = false;

  bool operator==(const Segment&) const = default;
};

// Splits on the tokens "," ";" ":" (which belong to no segment), then
// further splits each span immediately before any connective occurrence.
// A connective already at the start of a span does not split again.
std::vector<Segment> segment_sentence(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon);

// Appendix heuristic: per segment, the last verb of each maximal verb run
// (a single ADV or infinitival "to" between verbs does not break a run) is
// a target; a verbless segment starting with a connective contributes its
// first noun, else its first adverb. Excluded verbs never become targets.
std::set<std::size_t> extract_targets(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon);

std::set<std::size_t> extract_targets(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon,
                                      const std::vector<Segment>& segments);

bool is_excluded_verb(const std::string& surface);

}  // namespace qadisc

#endif  // QADISC_EXTRACT_HPP
