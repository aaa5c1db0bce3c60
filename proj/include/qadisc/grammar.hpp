#ifndef QADISC_GRAMMAR_HPP
#define QADISC_GRAMMAR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qadisc/core.hpp"

namespace qadisc {

struct NoPrefixMatch : std::runtime_error {
  explicit NoPrefixMatch(const std::string& text)
      : std::runtime_error("no question prefix matches: " + text) {}
};

struct EmptyBody : std::runtime_error {
  EmptyBody() : std::runtime_error("question body is empty") {}
};

// The closed catalog of 17 question prefixes with their PDTB senses,
// directionality classes and canonical labels.
std::span<const PrefixInfo> prefix_catalog();

const PrefixInfo& prefix_info(PrefixId id);

// Case-insensitive lookup by exact surface. Returns nullopt for unknown text.
std::optional<PrefixId> prefix_by_surface(const std::string& surface);

// Reversed partners and a symmetric prefix with itself share one label;
// fixed prefixes map to their own surface. 14 labels cover the 17 prefixes.
const std::string& canonical_label(PrefixId id);

// Auxiliaries the question grammar recognizes after the prefix.
bool is_auxiliary(const std::string& word);

struct ParsedQuestion {
  PrefixId prefix = 0;
  std::optional<std::string> auxiliary;
  std::string body;
};

// Longest-prefix match at the start of text, case-insensitive; the next
// token is consumed as auxiliary iff it is on the auxiliary list.
// Throws NoPrefixMatch.
ParsedQuestion parse_question(const std::string& text);

struct ComposedQuestion {
  PrefixId prefix = 0;
  std::optional<std::string> auxiliary;
  std::string body;
  std::string full_text;  // prefix [aux] body, single-space joined, ends "?"
};

// Assembles a question string. Composition is purely syntactic;
// grammaticality is not checked. Throws EmptyBody.
ComposedQuestion compose_question(PrefixId prefix,
                                  const std::optional<std::string>& auxiliary,
                                  const std::vector<std::string>& spans,
                                  const std::optional<std::string>& edits = {});

// Optional catalog override for experimentation (one record per line:
// surface | sense | direction | partner). The built-in catalog stays
// authoritative for scoring; this only validates and returns the parsed
// entries so callers can inspect an alternative set.
std::vector<PrefixInfo> load_catalog_file(const std::string& path);

}  // namespace qadisc

#endif  // QADISC_GRAMMAR_HPP
