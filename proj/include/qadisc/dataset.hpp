#ifndef QADISC_DATASET_HPP
#define QADISC_DATASET_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qadisc/core.hpp"

namespace qadisc {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedRow : DatasetError {
  std::size_t row;
  MalformedRow(std::size_t row, const std::string& what)
      : DatasetError("row " + std::to_string(row) + ": " + what), row(row) {}
};

struct UnknownPrefixRow : DatasetError {
  std::size_t row;
  UnknownPrefixRow(std::size_t row, const std::string& question)
      : DatasetError("row " + std::to_string(row) +
                     ": question has no known prefix: " + question),
        row(row) {}
};

struct MissingVerdict : DatasetError {
  explicit MissingVerdict(const std::string& question)
      : DatasetError("no verdict for QA: " + question) {}
};

enum class Split { Train, Dev, Test };
enum class Domain { Wikinews, Wikipedia, Other };

Split split_from_string(const std::string& s);
std::string split_to_string(Split s);
Domain domain_from_string(const std::string& s);
std::string domain_to_string(Domain d);

// One QA row of the dataset.
struct DatasetRecord {
  std::string sentence_id;
  Split split = Split::Train;
  Domain domain = Domain::Other;
  std::string sentence;
  Source source;
  QAPair qa;

  bool operator==(const DatasetRecord&) const = default;
};

// Maps a foreign tab-separated layout onto the canonical columns. Lines are
// "field=column_name"; "default.split", "default.domain", "default.source"
// and "default.verdict" supply constants for absent columns.
struct FormatDescriptor {
  std::map<std::string, std::string> columns;   // canonical field -> header
  std::map<std::string, std::string> defaults;  // canonical field -> value

  static FormatDescriptor canonical();
  static FormatDescriptor from_file(const std::string& path);
};

// Canonical columns in order.
extern const std::vector<std::string> kCanonicalColumns;

// Tab-separated with a mandatory header row; tabs, newlines and backslashes
// inside fields are backslash-escaped. Question strings are validated via
// parse_question; rows with unknown prefixes are rejected with row numbers.
std::vector<DatasetRecord> read_dataset(const std::string& path,
                                        const FormatDescriptor& fmt);
std::vector<DatasetRecord> read_dataset_stream(std::istream& in,
                                               const FormatDescriptor& fmt);

// Emits the canonical format sorted by (split, sentence_id); stable within a
// sentence. read(write(x)) == x for sorted valid record lists.
void write_dataset(const std::vector<DatasetRecord>& records,
                   const std::string& path);
void write_dataset_stream(const std::vector<DatasetRecord>& records,
                          std::ostream& out);

void sort_records(std::vector<DatasetRecord>& records);

std::string escape_field(const std::string& s);
std::string unescape_field(const std::string& s);

// Keeps CORRECT and CORRECT_NOT_GRAMMATICAL pairs from both sets, drops
// NOT_CORRECT, deduplicates exact questions+answers keeping the first.
// Verdicts are keyed by normalized "question\tanswer". Throws MissingVerdict.
AnnotationSet merge_adjudicated(const AnnotationSet& a, const AnnotationSet& b,
                                const std::map<std::string, Verdict>& verdicts);

// Normalization key used for duplicate detection and verdict lookup.
std::string qa_key(const QAPair& qa);

struct StatsReport {
  std::size_t sentences_with_qa = 0;
  std::size_t total_qas = 0;
  // prefix surface -> (count, proportion)
  std::map<std::string, std::pair<std::size_t, double>> per_prefix;
  double avg_question_tokens = 0.0;
  double avg_answer_tokens = 0.0;
};

StatsReport dataset_stats(const std::vector<DatasetRecord>& records);

// Tagged-sentence input: TSV with header "sentence_id<TAB>tokens<TAB>pos";
// tokens and tags are space-separated and must have equal counts.
std::vector<TaggedSentence> read_sentences(const std::string& path);
std::vector<TaggedSentence> read_sentences_stream(std::istream& in);

// Per-split (split, domain) -> (sentences, qas) breakdown.
std::map<std::pair<std::string, std::string>,
         std::pair<std::size_t, std::size_t>>
split_breakdown(const std::vector<DatasetRecord>& records);

}  // namespace qadisc

#endif  // QADISC_DATASET_HPP
