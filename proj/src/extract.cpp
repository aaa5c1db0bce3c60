#include "qadisc/extract.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace qadisc {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string normalize_connective(const std::string& s) {
  std::stringstream ss(s);
  std::string word, out;
  while (ss >> word) {
    if (!out.empty()) out += ' ';
    out += lower(word);
  }
  return out;
}

// PDTB explicit connectives. The most ambiguous entries (whose tokens
// usually carry other syntactic functions) are excluded below.
const char* const kBuiltinConnectives[] = {
    "accordingly", "additionally", "after", "afterward", "afterwards",
    "although", "alternatively", "and", "as a result", "as an alternative",
    "as if", "as long as", "as soon as", "as though", "as well", "because",
    "before", "besides", "but", "by comparison", "by contrast", "by then",
    "consequently", "conversely", "despite", "earlier", "either", "else",
    "except", "finally", "for example", "for instance", "further",
    "furthermore", "hence", "however", "if", "in addition", "in contrast",
    "in fact", "in other words", "in particular", "in short", "in sum",
    "in the end", "in turn", "insofar as", "instead", "later", "lest",
    "likewise", "meantime", "meanwhile", "moreover", "much as",
    "nevertheless", "nonetheless", "nor", "now that", "on the contrary",
    "on the other hand", "once", "or", "otherwise", "overall", "plus",
    "previously", "rather", "regardless", "separately", "similarly",
    "simultaneously", "since", "specifically", "thereafter", "thereby",
    "therefore", "though", "thus", "till", "ultimately", "unless", "until",
    "when", "when and if", "whereas", "while",
};

const char* const kDefaultExclusions[] = {
    "so", "as", "to", "about", "for", "also", "then", "still", "yet",
    "indeed", "and", "or", "nor", "either",
};

const char* const kExcludedVerbs[] = {"said", "according", "spoke"};

bool is_split_punct(const std::string& surface) {
  return surface == "," || surface == ";" || surface == ":";
}

}  // namespace

ConnectiveLexicon ConnectiveLexicon::builtin() {
  ConnectiveLexicon lex;
  for (const char* c : kBuiltinConnectives) lex.add(c);
  for (const char* e : kDefaultExclusions) lex.exclude(e);
  return lex;
}

ConnectiveLexicon ConnectiveLexicon::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  ConnectiveLexicon lex;
  std::string line;
  std::vector<std::string> exclusions;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    if (line[0] == '#') continue;
    if (line[0] == '!')
      exclusions.push_back(line.substr(1));
    else
      lex.add(line);
  }
  for (const std::string& e : exclusions) lex.exclude(e);
  return lex;
}

void ConnectiveLexicon::add(const std::string& connective) {
  const std::string norm = normalize_connective(connective);
  if (norm.empty()) return;
  if (excluded_.count(norm)) return;
  connectives_.insert(norm);
  const std::size_t words =
      1 + static_cast<std::size_t>(std::count(norm.begin(), norm.end(), ' '));
  max_tokens_ = std::max(max_tokens_, words);
}

void ConnectiveLexicon::exclude(const std::string& connective) {
  const std::string norm = normalize_connective(connective);
  if (norm.empty()) return;
  excluded_.insert(norm);
  connectives_.erase(norm);
}

bool ConnectiveLexicon::contains(const std::string& connective) const {
  return connectives_.count(normalize_connective(connective)) > 0;
}

std::size_t ConnectiveLexicon::match_at(const std::vector<Token>& tokens,
                                        std::size_t pos) const {
  std::size_t best = 0;
  std::string candidate;
  for (std::size_t len = 1; len <= max_tokens_ && pos + len <= tokens.size();
       ++len) {
    if (len > 1) candidate += ' ';
    candidate += lower(tokens[pos + len - 1].surface);
    if (connectives_.count(candidate)) best = len;
  }
  return best;
}

std::vector<Segment> segment_sentence(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon) {
  sentence.check();
  const auto& tokens = sentence.tokens;

  // Pass 1: split on "," ";" ":" (those tokens belong to no segment).
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    if (i == tokens.size() || is_split_punct(tokens[i].surface)) {
      if (i > begin) spans.emplace_back(begin, i);
      begin = i + 1;
    }
  }

  // Pass 2: split each span immediately before a connective occurrence.
  // A connective at the span start is not a split point.
  std::vector<Segment> segments;
  for (auto [b, e] : spans) {
    std::size_t seg_begin = b;
    std::size_t i = b;
    while (i < e) {
      const std::size_t len = lexicon.match_at(tokens, i);
      if (len > 0 && i > seg_begin) {
        segments.push_back({seg_begin, i, false});
        seg_begin = i;
        i += len;
      } else {
        i += std::max<std::size_t>(len, 1);
      }
    }
    if (seg_begin < e) segments.push_back({seg_begin, e, false});
  }

  for (Segment& s : segments)
    s.starts_with_connective = lexicon.match_at(tokens, s.begin) > 0;
  return segments;
}

bool is_excluded_verb(const std::string& surface) {
  const std::string s = lower(surface);
  for (const char* v : kExcludedVerbs)
    if (s == v) return true;
  return false;
}

std::set<std::size_t> extract_targets(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon) {
  return extract_targets(sentence, lexicon,
                         segment_sentence(sentence, lexicon));
}

std::set<std::size_t> extract_targets(const TaggedSentence& sentence,
                                      const ConnectiveLexicon& lexicon,
                                      const std::vector<Segment>& segments) {
  (void)lexicon;
  const auto& tokens = sentence.tokens;
  std::set<std::size_t> targets;

  for (const Segment& seg : segments) {
    bool segment_has_verb = false;
    std::size_t i = seg.begin;
    while (i < seg.end) {
      if (tokens[i].pos != Pos::Verb) {
        ++i;
        continue;
      }
      segment_has_verb = true;
      // Maximal verb run; a single ADV or infinitival "to" between verbs
      // keeps the run going ("is also studying", "try to replace").
      std::size_t last_verb = i;
      std::size_t j = i + 1;
      while (j < seg.end) {
        if (tokens[j].pos == Pos::Verb) {
          last_verb = j;
          ++j;
        } else if ((tokens[j].pos == Pos::Adv ||
                    lower(tokens[j].surface) == "to") &&
                   j + 1 < seg.end && tokens[j + 1].pos == Pos::Verb) {
          j += 2;
          last_verb = j - 1;
        } else {
          break;
        }
      }
      if (!is_excluded_verb(tokens[last_verb].surface))
        targets.insert(last_verb);
      i = j;
    }

    if (!segment_has_verb && seg.starts_with_connective) {
      std::size_t pick = seg.end;
      for (std::size_t k = seg.begin; k < seg.end; ++k) {
        if (tokens[k].pos == Pos::Noun) {
          pick = k;
          break;
        }
      }
      if (pick == seg.end) {
        for (std::size_t k = seg.begin; k < seg.end; ++k) {
          if (tokens[k].pos == Pos::Adv) {
            pick = k;
            break;
          }
        }
      }
      if (pick < seg.end) targets.insert(pick);
    }
  }
  return targets;
}

}  // namespace qadisc
