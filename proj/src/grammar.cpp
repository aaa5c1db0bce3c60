#include "qadisc/grammar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qadisc {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

PrefixInfo make(const char* surface, const char* sense, Direction dir,
                int partner, const char* canonical) {
  PrefixInfo p;
  p.surface = surface;
  p.sense = sense;
  p.direction = dir;
  p.reverse_partner = partner;
  p.canonical = canonical;
  // "What is ..." prefixes already contain their copula; the rest take an
  // auxiliary between prefix and body.
  p.takes_auxiliary = p.surface.rfind("What is", 0) != 0;
  return p;
}

std::vector<PrefixInfo> build_catalog() {
  std::vector<PrefixInfo> c;
  c.push_back(make("In what manner", "Expansion.Manner", Direction::Fixed, -1,
                   "In what manner"));
  c.push_back(make("What is the reason", "Contingency.Cause",
                   Direction::Reversed, 2, "reason-result"));
  c.push_back(make("What is the result of", "Contingency.Cause",
                   Direction::Reversed, 1, "reason-result"));
  c.push_back(make("What is an example of", "Expansion.Level-of-detail",
                   Direction::Fixed, -1, "What is an example of"));
  c.push_back(make("After what", "Temporal.Asynchronous", Direction::Reversed,
                   9, "after-before"));
  c.push_back(make("While what", "Temporal.Synchronous", Direction::Symmetric,
                   -1, "While what"));
  c.push_back(make("In what case", "Contingency.Condition", Direction::Fixed,
                   -1, "In what case"));
  c.push_back(make("Despite what", "Comparison.Concession", Direction::Fixed,
                   -1, "Despite what"));
  c.push_back(make("What is contrasted with", "Comparison.Contrast",
                   Direction::Symmetric, -1, "What is contrasted with"));
  c.push_back(make("Before what", "Temporal.Asynchronous", Direction::Reversed,
                   4, "after-before"));
  c.push_back(make("Since when", "Temporal.Asynchronous", Direction::Reversed,
                   12, "since-until"));
  c.push_back(make("What is similar to", "Comparison.Similarity",
                   Direction::Symmetric, -1, "What is similar to"));
  c.push_back(make("Until when", "Temporal.Asynchronous", Direction::Reversed,
                   10, "since-until"));
  c.push_back(make("Instead of what", "Expansion.Substitution",
                   Direction::Fixed, -1, "Instead of what"));
  c.push_back(make("What is an alternative to", "Expansion.Disjunction",
                   Direction::Fixed, -1, "What is an alternative to"));
  c.push_back(make("Except when", "Expansion.Exception", Direction::Fixed, -1,
                   "Except when"));
  c.push_back(make("Unless what", "Contingency.Negative-condition",
                   Direction::Fixed, -1, "Unless what"));

  // Startup sanity: closed catalog, distinct surfaces, consistent partners.
  if (c.size() != kPrefixCount) throw std::logic_error("catalog size != 17");
  std::set<std::string> surfaces;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    if (!surfaces.insert(c[i].surface).second)
      throw std::logic_error("duplicate prefix surface: " + c[i].surface);
    if (c[i].direction == Direction::Reversed) {
      const int j = c[i].reverse_partner;
      if (j < 0 || j >= kPrefixCount || c[j].reverse_partner != i ||
          c[j].canonical != c[i].canonical)
        throw std::logic_error("inconsistent reverse partner: " +
                               c[i].surface);
    }
  }
  return c;
}

const std::vector<PrefixInfo>& catalog() {
  static const std::vector<PrefixInfo> c = build_catalog();
  return c;
}

const std::set<std::string>& auxiliaries() {
  static const std::set<std::string> aux = {
      "do",  "does", "did",  "is",    "are", "was",   "were",  "has", "have",
      "had", "will", "would", "can",  "could", "should", "may", "might",
      "must"};
  return aux;
}

}  // namespace

std::span<const PrefixInfo> prefix_catalog() { return catalog(); }

const PrefixInfo& prefix_info(PrefixId id) {
  if (id < 0 || id >= kPrefixCount)
    throw std::out_of_range("prefix id out of range: " + std::to_string(id));
  return catalog()[static_cast<std::size_t>(id)];
}

std::optional<PrefixId> prefix_by_surface(const std::string& surface) {
  const std::string want = lower(trim(surface));
  for (int i = 0; i < kPrefixCount; ++i)
    if (lower(catalog()[i].surface) == want) return i;
  return std::nullopt;
}

const std::string& canonical_label(PrefixId id) {
  return prefix_info(id).canonical;
}

bool is_auxiliary(const std::string& word) {
  return auxiliaries().count(lower(word)) > 0;
}

ParsedQuestion parse_question(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw NoPrefixMatch(text);
  const std::string lt = lower(t);

  // Longest surface match at the start, on a word boundary.
  int best = -1;
  std::size_t best_len = 0;
  for (int i = 0; i < kPrefixCount; ++i) {
    const std::string ls = lower(catalog()[i].surface);
    if (lt.rfind(ls, 0) != 0) continue;
    if (lt.size() > ls.size() && lt[ls.size()] != ' ') continue;
    if (ls.size() > best_len) {
      best = i;
      best_len = ls.size();
    }
  }
  if (best < 0) throw NoPrefixMatch(text);

  ParsedQuestion out;
  out.prefix = best;
  std::string rest = trim(t.substr(best_len));
  if (!rest.empty()) {
    const std::size_t sp = rest.find(' ');
    const std::string first = rest.substr(0, sp);
    std::string bare = first;
    if (!bare.empty() && bare.back() == '?') bare.pop_back();
    if (is_auxiliary(bare) && sp != std::string::npos) {
      out.auxiliary = lower(bare);
      rest = trim(rest.substr(sp + 1));
    }
  }
  out.body = rest;
  return out;
}

ComposedQuestion compose_question(PrefixId prefix,
                                  const std::optional<std::string>& auxiliary,
                                  const std::vector<std::string>& spans,
                                  const std::optional<std::string>& edits) {
  const PrefixInfo& info = prefix_info(prefix);

  std::string body;
  if (edits) {
    body = trim(*edits);
  } else {
    for (const std::string& s : spans) {
      const std::string t = trim(s);
      if (t.empty()) continue;
      if (!body.empty()) body += ' ';
      body += t;
    }
  }
  if (body.empty()) throw EmptyBody();
  if (body.back() != '?') body += '?';

  ComposedQuestion q;
  q.prefix = prefix;
  q.auxiliary = auxiliary;
  q.body = body;
  q.full_text = info.surface;
  if (auxiliary && !auxiliary->empty()) q.full_text += ' ' + *auxiliary;
  q.full_text += ' ' + body;
  return q;
}

std::vector<PrefixInfo> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog file: " + path);
  std::vector<PrefixInfo> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, '|')) parts.push_back(trim(part));
    if (parts.size() < 3)
      throw std::runtime_error("bad catalog line: " + line);
    PrefixInfo p;
    p.surface = parts[0];
    p.sense = parts[1];
    const std::string dir = lower(parts[2]);
    if (dir == "fixed") p.direction = Direction::Fixed;
    else if (dir == "symmetric") p.direction = Direction::Symmetric;
    else if (dir == "reversed") p.direction = Direction::Reversed;
    else throw std::runtime_error("bad direction in catalog line: " + line);
    p.canonical = p.surface;
    p.takes_auxiliary = p.surface.rfind("What is", 0) != 0;
    if (parts.size() > 3 && !parts[3].empty()) {
      // partner by surface; resolved against the already-read entries later
      p.canonical = parts[3] < p.surface ? parts[3] + "|" + p.surface
                                         : p.surface + "|" + parts[3];
    }
    out.push_back(std::move(p));
  }
  // resolve partner indices by matching canonical pair labels
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].direction != Direction::Reversed) continue;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (i != j && out[j].canonical == out[i].canonical)
        out[i].reverse_partner = static_cast<int>(j);
    }
    if (out[i].reverse_partner < 0)
      throw std::runtime_error("reversed prefix without partner: " +
                               out[i].surface);
  }
  return out;
}

}  // namespace qadisc
