#include "qadisc/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "qadisc/grammar.hpp"
#include "qadisc/metrics.hpp"

namespace qadisc {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

std::string normalize_ws(const std::string& s) {
  std::stringstream ss(s);
  std::string word, out;
  while (ss >> word) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::string question_text(const QAPair& qa) {
  const PrefixInfo& info = prefix_info(qa.prefix);
  std::string q = info.surface;
  if (qa.auxiliary && !qa.auxiliary->empty()) q += ' ' + *qa.auxiliary;
  q += ' ' + qa.question_body;
  return q;
}

}  // namespace

Split split_from_string(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "train") return Split::Train;
  if (v == "dev") return Split::Dev;
  if (v == "test") return Split::Test;
  throw std::invalid_argument("unknown split: " + s);
}

std::string split_to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "train";
}

Domain domain_from_string(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "wikinews") return Domain::Wikinews;
  if (v == "wikipedia") return Domain::Wikipedia;
  if (v == "other" || v.empty()) return Domain::Other;
  throw std::invalid_argument("unknown domain: " + s);
}

std::string domain_to_string(Domain d) {
  switch (d) {
    case Domain::Wikinews: return "wikinews";
    case Domain::Wikipedia: return "wikipedia";
    case Domain::Other: return "other";
  }
  return "other";
}

const std::vector<std::string> kCanonicalColumns = {
    "sentence_id", "split", "domain", "sentence",
    "source",      "question", "answer", "verdict"};

FormatDescriptor FormatDescriptor::canonical() {
  FormatDescriptor fmt;
  for (const std::string& c : kCanonicalColumns) fmt.columns[c] = c;
  return fmt;
}

FormatDescriptor FormatDescriptor::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open format descriptor: " + path);
  FormatDescriptor fmt;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DatasetError("bad descriptor line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("default.", 0) == 0) {
      fmt.defaults[key.substr(8)] = value;
    } else {
      if (std::find(kCanonicalColumns.begin(), kCanonicalColumns.end(), key) ==
          kCanonicalColumns.end())
        throw DatasetError("unknown canonical field in descriptor: " + key);
      fmt.columns[key] = value;
    }
  }
  return fmt;
}

std::string escape_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

std::vector<DatasetRecord> read_dataset_stream(std::istream& in,
                                               const FormatDescriptor& fmt) {
  std::string line;
  if (!std::getline(in, line)) throw DatasetError("empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_tabs(line);

  // canonical field -> column position (or -1 when supplied by default)
  std::map<std::string, int> col;
  for (const std::string& field : kCanonicalColumns) {
    col[field] = -1;
    auto it = fmt.columns.find(field);
    if (it == fmt.columns.end()) continue;
    auto pos = std::find(header.begin(), header.end(), it->second);
    if (pos != header.end())
      col[field] = static_cast<int>(pos - header.begin());
  }
  for (const std::string& field : kCanonicalColumns) {
    if (col[field] < 0 && !fmt.defaults.count(field) && field != "verdict")
      throw DatasetError("column for field \"" + field +
                         "\" not found in header and no default given");
  }

  std::vector<DatasetRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    auto get = [&](const std::string& field) -> std::string {
      const int c = col.at(field);
      if (c < 0) {
        auto it = fmt.defaults.find(field);
        return it == fmt.defaults.end() ? "" : it->second;
      }
      if (static_cast<std::size_t>(c) >= fields.size())
        throw MalformedRow(row, "missing column \"" + field + "\"");
      return unescape_field(fields[static_cast<std::size_t>(c)]);
    };

    DatasetRecord rec;
    try {
      rec.sentence_id = get("sentence_id");
      rec.split = split_from_string(get("split"));
      rec.domain = domain_from_string(get("domain"));
      rec.sentence = get("sentence");
      rec.source = source_from_string(get("source"));
      rec.qa.grammaticality = verdict_from_string(get("verdict"));
      rec.qa.answer = trim(get("answer"));
    } catch (const DatasetError&) {
      throw;
    } catch (const std::exception& e) {
      throw MalformedRow(row, e.what());
    }
    if (rec.sentence_id.empty()) throw MalformedRow(row, "empty sentence_id");
    if (rec.qa.answer.empty()) throw MalformedRow(row, "empty answer");

    const std::string question = trim(get("question"));
    try {
      const ParsedQuestion pq = parse_question(question);
      rec.qa.prefix = pq.prefix;
      rec.qa.auxiliary = pq.auxiliary;
      rec.qa.question_body = pq.body;
    } catch (const NoPrefixMatch&) {
      throw UnknownPrefixRow(row, question);
    }
    if (rec.qa.question_body.empty())
      throw MalformedRow(row, "question has no body: " + question);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<DatasetRecord> read_dataset(const std::string& path,
                                        const FormatDescriptor& fmt) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset file: " + path);
  return read_dataset_stream(in, fmt);
}

void sort_records(std::vector<DatasetRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const DatasetRecord& a, const DatasetRecord& b) {
                     if (a.split != b.split)
                       return static_cast<int>(a.split) <
                              static_cast<int>(b.split);
                     return a.sentence_id < b.sentence_id;
                   });
}

void write_dataset_stream(const std::vector<DatasetRecord>& records,
                          std::ostream& out) {
  std::vector<DatasetRecord> sorted = records;
  sort_records(sorted);

  for (std::size_t i = 0; i < kCanonicalColumns.size(); ++i) {
    if (i) out << '\t';
    out << kCanonicalColumns[i];
  }
  out << '\n';
  for (const DatasetRecord& r : sorted) {
    out << escape_field(r.sentence_id) << '\t' << split_to_string(r.split)
        << '\t' << domain_to_string(r.domain) << '\t'
        << escape_field(r.sentence) << '\t'
        << escape_field(source_to_string(r.source)) << '\t'
        << escape_field(question_text(r.qa)) << '\t'
        << escape_field(r.qa.answer) << '\t'
        << verdict_to_string(r.qa.grammaticality) << '\n';
  }
}

void write_dataset(const std::vector<DatasetRecord>& records,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot open output file: " + path);
  write_dataset_stream(records, out);
  if (!out) throw DatasetError("write failed: " + path);
}

std::string qa_key(const QAPair& qa) {
  return lower(normalize_ws(question_text(qa))) + "\t" +
         lower(normalize_ws(qa.answer));
}

AnnotationSet merge_adjudicated(const AnnotationSet& a, const AnnotationSet& b,
                                const std::map<std::string, Verdict>& verdicts) {
  AnnotationSet out;
  out.sentence_id = a.sentence_id;
  out.source = Source::gold();

  std::set<std::string> seen;
  auto consume = [&](const AnnotationSet& set) {
    for (const QAPair& qa : set.pairs) {
      const std::string key = qa_key(qa);
      auto it = verdicts.find(key);
      if (it == verdicts.end()) throw MissingVerdict(question_text(qa));
      if (it->second == Verdict::NotCorrect) continue;
      if (!seen.insert(key).second) continue;  // keep the first duplicate
      QAPair kept = qa;
      kept.grammaticality = it->second;
      out.pairs.push_back(std::move(kept));
    }
  };
  consume(a);
  consume(b);
  return out;
}

StatsReport dataset_stats(const std::vector<DatasetRecord>& records) {
  StatsReport rep;
  std::set<std::string> sentences;
  std::size_t q_tokens = 0, a_tokens = 0;
  for (const DatasetRecord& r : records) {
    sentences.insert(r.sentence_id);
    ++rep.total_qas;
    ++rep.per_prefix[prefix_info(r.qa.prefix).surface].first;
    q_tokens += metric_tokens(question_text(r.qa)).size();
    a_tokens += metric_tokens(r.qa.answer).size();
  }
  rep.sentences_with_qa = sentences.size();
  for (auto& [surface, entry] : rep.per_prefix)
    entry.second = static_cast<double>(entry.first) / rep.total_qas;
  if (rep.total_qas) {
    rep.avg_question_tokens = static_cast<double>(q_tokens) / rep.total_qas;
    rep.avg_answer_tokens = static_cast<double>(a_tokens) / rep.total_qas;
  }
  return rep;
}

std::vector<TaggedSentence> read_sentences_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DatasetError("empty sentences file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_tabs(line);
  if (header.size() < 3 || header[0] != "sentence_id" ||
      header[1] != "tokens" || header[2] != "pos")
    throw DatasetError(
        "sentences file needs header: sentence_id<TAB>tokens<TAB>pos");

  std::vector<TaggedSentence> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 3) throw MalformedRow(row, "expected 3 columns");
    if (trim(fields[2]).empty()) throw MalformedRow(row, "missing POS");

    TaggedSentence s;
    s.id = fields[0];
    std::stringstream ts(fields[1]), ps(fields[2]);
    std::string tok, tag;
    std::vector<std::string> tags;
    while (ps >> tag) tags.push_back(tag);
    while (ts >> tok) s.tokens.push_back({tok, Pos::Other});
    if (s.tokens.size() != tags.size())
      throw MalformedRow(row, "token/POS count mismatch");
    try {
      for (std::size_t i = 0; i < tags.size(); ++i)
        s.tokens[i].pos = pos_from_string(tags[i]);
    } catch (const std::exception& e) {
      throw MalformedRow(row, e.what());
    }
    if (s.tokens.empty()) throw MalformedRow(row, "sentence has no tokens");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TaggedSentence> read_sentences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open sentences file: " + path);
  return read_sentences_stream(in);
}

std::map<std::pair<std::string, std::string>,
         std::pair<std::size_t, std::size_t>>
split_breakdown(const std::vector<DatasetRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> sent;
  std::map<std::pair<std::string, std::string>,
           std::pair<std::size_t, std::size_t>>
      out;
  for (const DatasetRecord& r : records) {
    const auto key = std::make_pair(domain_to_string(r.domain),
                                    split_to_string(r.split));
    sent[key].insert(r.sentence_id);
    ++out[key].second;
  }
  for (auto& [key, entry] : out) entry.first = sent[key].size();
  return out;
}

}  // namespace qadisc
