#ifndef QADISC_METRICS_HPP
#define QADISC_METRICS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qadisc/core.hpp"

namespace qadisc {

struct SentenceMismatch : std::runtime_error {
  SentenceMismatch(const std::string& a, const std::string& b)
      : std::runtime_error("annotation sets refer to different sentences: \"" +
                           a + "\" vs \"" + b + "\"") {}
};

struct InsufficientWorkers : std::runtime_error {
  InsufficientWorkers()
      : std::runtime_error("IAA needs at least two workers sharing a sentence") {}
};

// Multiset of lowercased tokens with standalone punctuation stripped.
class TokenBag {
 public:
  TokenBag() = default;
  explicit TokenBag(const std::string& text) { add_text(text); }

  void add_text(const std::string& text);
  void merge(const TokenBag& other);

  std::size_t size() const { return total_; }
  bool empty() const { return total_ == 0; }

  const std::map<std::string, std::size_t>& counts() const { return counts_; }

  bool operator==(const TokenBag&) const = default;

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

// Lowercased tokens of text, surrounding punctuation stripped per token,
// pure-punctuation tokens dropped. Shared by metrics and dataset stats.
std::vector<std::string> metric_tokens(const std::string& text);

// Bag over question body + answer. Prefix and auxiliary are the label, not
// the spans, so they stay out of the bag.
TokenBag qa_token_bag(const QAPair& qa);

// Multiset intersection over union; 0 when both bags are empty.
double iou(const TokenBag& a, const TokenBag& b);

struct Cluster {
  std::vector<std::size_t> left_members;   // indices into set A
  std::vector<std::size_t> right_members;  // indices into set B

  bool operator==(const Cluster&) const = default;
};

struct AlignmentResult {
  std::vector<Cluster> clusters;
  std::vector<std::size_t> unaligned_left;
  std::vector<std::size_t> unaligned_right;
  std::map<std::pair<std::size_t, std::size_t>, double> pairwise_iou;
  std::size_t left_size = 0;
  std::size_t right_size = 0;
};

// Each QA gets a directed edge to its max-IOU counterpart when that IOU is
// at least 0.5 (ties break to the lowest counterpart index); connected
// components of the edge graph are the clusters, singletons are unaligned.
AlignmentResult align_qa_sets(const AnnotationSet& a, const AnnotationSet& b);

// Same machinery over precomputed bags; used by the PDTB mode and tests.
AlignmentResult align_bags(const std::vector<TokenBag>& a,
                           const std::vector<TokenBag>& b);

struct UQAScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// A is the predicted/first-annotator side, B the gold/second side.
UQAScores uqa_scores(const AlignmentResult& r);

// Per cluster, correct iff the canonical label sets of the two sides
// intersect; 0 when there are no clusters.
double lqa_accuracy(const AlignmentResult& r, const AnnotationSet& a,
                    const AnnotationSet& b);

// Gold-anchored: a gold QA counts correct iff its cluster's A-side
// canonical labels include its own. Unaligned gold QAs count incorrect.
double prefix_accuracy(const AlignmentResult& r, const AnnotationSet& a,
                       const AnnotationSet& b);

// Arg1 and Arg2 act as one combined span aligned against each QA.
AlignmentResult align_pdtb(const PDTBRelation& rel, const AnnotationSet& qas);

// Pooled (micro) counts for corpus-level scoring.
struct PooledCounts {
  std::size_t left_total = 0;
  std::size_t left_aligned = 0;
  std::size_t right_total = 0;
  std::size_t right_aligned = 0;
  std::size_t clusters_total = 0;
  std::size_t clusters_label_correct = 0;
  std::size_t gold_total = 0;
  std::size_t gold_prefix_correct = 0;

  void add(const AlignmentResult& r, const AnnotationSet& a,
           const AnnotationSet& b);

  UQAScores uqa() const;
  double lqa() const;
  double prefix_acc() const;
};

struct MetricsReport {
  UQAScores uqa_micro;
  UQAScores uqa_macro;
  double lqa_micro = 0.0;
  double lqa_macro = 0.0;
  double prefix_acc = 0.0;
  // per prefix: gold occurrences and how many were label-matched
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_prefix;
  std::size_t sentences = 0;
};

// Scores predicted vs gold annotation sets paired by sentence id.
MetricsReport score_corpus(
    const std::vector<std::pair<AnnotationSet, AnnotationSet>>& pairs);

struct IAAResult {
  double uqa_f1 = 0.0;
  double lqa = 0.0;
  std::size_t worker_pairs = 0;
};

// Pairwise agreement: per unordered worker pair, micro-average over shared
// sentences; result is the mean over pairs. Throws InsufficientWorkers.
IAAResult compute_iaa(
    const std::map<std::string, std::map<std::string, AnnotationSet>>&
        by_worker);

}  // namespace qadisc

#endif  // QADISC_METRICS_HPP
