#ifndef QADISC_PARSER_HPP
#define QADISC_PARSER_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qadisc/core.hpp"
#include "qadisc/extract.hpp"
#include "qadisc/grammar.hpp"

namespace qadisc {

struct EmptyTrainingSet : std::runtime_error {
  EmptyTrainingSet() : std::runtime_error("training set is empty") {}
};

struct NoTargets : std::runtime_error {
  NoTargets() : std::runtime_error("no targets to generate a question for") {}
};

struct NoCandidate : std::runtime_error {
  NoCandidate() : std::runtime_error("no candidate answer segment") {}
};

// Positive-example weight for a skewed label: (total - count) / (count + 1e-5).
double class_weight(std::size_t count, std::size_t total);

// Sparse feature vector over a string-keyed vocabulary. The vocabulary is
// fixed at training time; unknown features hash to a reserved bucket.
struct FeatureVector {
  std::map<std::string, double> features;

  void add(const std::string& name, double value = 1.0) {
    features[name] += value;
  }
};

// Feature extraction for one (sentence, target) instance: target surface and
// POS, a +-3 token window, connectives in the target's segment and in the
// following segment, segment position, sentence-initial connective flag.
FeatureVector target_features(const TaggedSentence& sentence,
                              std::size_t target,
                              const ConnectiveLexicon& lexicon);

// 17 one-vs-rest logistic models over a shared vocabulary.
class PrefixModel {
 public:
  PrefixModel() = default;

  double score(PrefixId prefix, const FeatureVector& fv) const;  // sigmoid
  std::set<PrefixId> predict(const FeatureVector& fv) const;

  double tau() const { return tau_; }
  void set_tau(double tau);

  const std::map<std::string, double>& class_weights() const {
    return class_weights_;
  }

  void save(const std::string& path) const;
  static PrefixModel load(const std::string& path);

  friend PrefixModel train_prefix_classifier(
      const std::vector<std::pair<FeatureVector, std::set<PrefixId>>>& examples,
      double tau, std::size_t iterations, double learning_rate);

 private:
  std::size_t feature_index(const std::string& name) const;

  // vocab_[name] -> column; column 0 is the unknown bucket, 1 the bias.
  std::map<std::string, std::size_t> vocab_;
  std::vector<std::vector<double>> weights_;  // one row per catalog prefix
  std::map<std::string, double> class_weights_;  // by prefix surface
  double tau_ = 0.3;
};

// Deterministic full-batch gradient descent with logistic loss; positive
// examples are weighted by class_weight.
PrefixModel train_prefix_classifier(
    const std::vector<std::pair<FeatureVector, std::set<PrefixId>>>& examples,
    double tau = 0.3, std::size_t iterations = 200, double learning_rate = 0.1);

std::set<PrefixId> predict_prefixes(const PrefixModel& model,
                                    const TaggedSentence& sentence,
                                    std::size_t target,
                                    const ConnectiveLexicon& lexicon);

// Built-in connective -> compatible prefix table used by answer scoring;
// extendable by file (one "connective<TAB>prefix surface" per line).
class CompatibilityTable {
 public:
  static CompatibilityTable builtin();
  static CompatibilityTable from_file(const std::string& path);

  std::optional<PrefixId> prefix_for(const std::string& connective) const;
  void add(const std::string& connective, PrefixId prefix);

 private:
  std::map<std::string, PrefixId> table_;
};

// One question per target: body is the target's segment text with any
// leading connective stripped; the auxiliary is chosen by a surface rule
// over the segment's last verb. Throws NoTargets.
std::vector<ComposedQuestion> generate_question(
    const TaggedSentence& sentence, PrefixId prefix,
    const std::set<std::size_t>& targets, const ConnectiveLexicon& lexicon);

// Picks the best-scoring segment that does not overlap the question body:
// a compatibility bonus for a segment-initial connective matching the
// prefix sense plus an adjacency bonus; ties go to the nearest-left
// candidate. Throws NoCandidate.
std::string generate_answer(const TaggedSentence& sentence,
                            const ComposedQuestion& question,
                            const ConnectiveLexicon& lexicon,
                            const CompatibilityTable& compat);

// Full three-stage pipeline. Stage errors drop the candidate QA; output is
// capped at |targets| x 17 by construction.
AnnotationSet parse_sentence(const PrefixModel& model,
                             const TaggedSentence& sentence,
                             const ConnectiveLexicon& lexicon,
                             const CompatibilityTable& compat);

}  // namespace qadisc

#endif  // QADISC_PARSER_HPP
