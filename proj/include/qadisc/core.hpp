#ifndef QADISC_CORE_HPP
#define QADISC_CORE_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qadisc {

// Coarse POS tagset. Any external tagger output is mapped onto these six
// tags before a sentence enters the toolkit; we never run a tagger ourselves.
enum class Pos { Verb, Adv, Noun, OtherOpen, Punct, Other };

Pos pos_from_string(const std::string& tag);
std::string pos_to_string(Pos pos);

struct Token {
  std::string surface;
  Pos pos = Pos::Other;

  bool operator==(const Token&) const = default;
};

// A sentence with POS tags and the set of indices marking target words
// (verbs, eventive nouns, adverbs) that discourse questions may be about.
struct TaggedSentence {
  std::string id;
  std::vector<Token> tokens;
  std::set<std::size_t> targets;

  void check() const;  // throws std::invalid_argument on invariant violation
};

// Directionality class of a question prefix. Reversed prefixes come in
// pairs expressing the same assertion with the two units swapped.
enum class Direction { Fixed, Symmetric, Reversed };

// Index into the closed 17-member prefix catalog (see grammar.hpp). The
// catalog is the only source of PrefixId values; no 18th prefix can exist.
using PrefixId = int;
inline constexpr int kPrefixCount = 17;

struct PrefixInfo {
  std::string surface;         // e.g. "In what manner"
  std::string sense;           // PDTB sense, e.g. "Comparison.Concession"
  Direction direction = Direction::Fixed;
  int reverse_partner = -1;    // valid iff direction == Reversed
  std::string canonical;       // shared by reverse partners
  bool takes_auxiliary = false;
};

// Adjudication verdict for a QA pair.
enum class Verdict { Unreviewed, Correct, NotCorrect, CorrectNotGrammatical };

Verdict verdict_from_string(const std::string& s);
std::string verdict_to_string(Verdict v);

struct QAPair {
  PrefixId prefix = 0;
  std::optional<std::string> auxiliary;
  std::string question_body;  // non-empty, ends with "?"
  std::string answer;         // non-empty
  std::optional<std::pair<std::size_t, std::size_t>> source_targets;
  Verdict grammaticality = Verdict::Unreviewed;

  bool operator==(const QAPair&) const = default;
};

struct Source {
  enum class Kind { Worker, Gold, System };
  Kind kind = Kind::Worker;
  std::string worker_id;  // meaningful for Kind::Worker only

  static Source gold() { return {Kind::Gold, {}}; }
  static Source system() { return {Kind::System, {}}; }
  static Source worker(std::string id) { return {Kind::Worker, std::move(id)}; }

  bool operator==(const Source&) const = default;
};

Source source_from_string(const std::string& s);
std::string source_to_string(const Source& s);

// All QA pairs produced for one sentence by one source.
struct AnnotationSet {
  std::string sentence_id;
  Source source;
  std::vector<QAPair> pairs;
};

// A shallow discourse relation in PDTB terms, as supplied by the user.
struct PDTBRelation {
  std::string arg1_text;
  std::string arg2_text;
  std::optional<std::string> connective;
  std::vector<std::string> senses;
};

}  // namespace qadisc

#endif  // QADISC_CORE_HPP
