#include "qadisc/parser.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qadisc/dataset.hpp"
#include "qadisc/metrics.hpp"

namespace qadisc {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string segment_text(const TaggedSentence& sentence, const Segment& seg,
                         std::size_t skip_begin = 0) {
  std::string out;
  for (std::size_t i = seg.begin + skip_begin; i < seg.end; ++i) {
    if (!out.empty()) out += ' ';
    out += sentence.tokens[i].surface;
  }
  return out;
}

const Segment* segment_of(const std::vector<Segment>& segments,
                          std::size_t index) {
  for (const Segment& s : segments)
    if (index >= s.begin && index < s.end) return &s;
  return nullptr;
}

}  // namespace

double class_weight(std::size_t count, std::size_t total) {
  return (static_cast<double>(total) - static_cast<double>(count)) /
         (static_cast<double>(count) + 1e-5);
}

FeatureVector target_features(const TaggedSentence& sentence,
                              std::size_t target,
                              const ConnectiveLexicon& lexicon) {
  FeatureVector fv;
  const auto& tokens = sentence.tokens;
  fv.add("tgt=" + lower(tokens[target].surface));
  fv.add("tgt_pos=" + pos_to_string(tokens[target].pos));

  for (int off = -3; off <= 3; ++off) {
    if (off == 0) continue;
    const long k = static_cast<long>(target) + off;
    if (k < 0 || k >= static_cast<long>(tokens.size())) continue;
    fv.add("w[" + std::to_string(off) + "]=" +
           lower(tokens[static_cast<std::size_t>(k)].surface));
  }

  const std::vector<Segment> segments = segment_sentence(sentence, lexicon);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    if (target < seg.begin || target >= seg.end) continue;
    std::size_t i = seg.begin;
    while (i < seg.end) {
      const std::size_t len = lexicon.match_at(tokens, i);
      if (len > 0) {
        std::string conn;
        for (std::size_t k = 0; k < len; ++k) {
          if (k) conn += ' ';
          conn += lower(tokens[i + k].surface);
        }
        fv.add("seg_conn=" + conn);
        i += len;
      } else {
        ++i;
      }
    }
    if (s + 1 < segments.size()) {
      const std::size_t len = lexicon.match_at(tokens, segments[s + 1].begin);
      if (len > 0) {
        std::string conn;
        for (std::size_t k = 0; k < len; ++k) {
          if (k) conn += ' ';
          conn += lower(tokens[segments[s + 1].begin + k].surface);
        }
        fv.add("next_conn=" + conn);
      }
    }
    if (segments.size() == 1)
      fv.add("seg_pos=only");
    else if (s == 0)
      fv.add("seg_pos=first");
    else if (s + 1 == segments.size())
      fv.add("seg_pos=last");
    else
      fv.add("seg_pos=middle");
    break;
  }
  if (!segments.empty() && segments.front().starts_with_connective)
    fv.add("sent_init_conn");
  return fv;
}

std::size_t PrefixModel::feature_index(const std::string& name) const {
  auto it = vocab_.find(name);
  return it == vocab_.end() ? 0 : it->second;  // 0 is the unknown bucket
}

double PrefixModel::score(PrefixId prefix, const FeatureVector& fv) const {
  const auto& w = weights_.at(static_cast<std::size_t>(prefix));
  double z = w[1];  // bias
  for (const auto& [name, value] : fv.features)
    z += w[feature_index(name)] * value;
  return sigmoid(z);
}

std::set<PrefixId> PrefixModel::predict(const FeatureVector& fv) const {
  std::set<PrefixId> out;
  for (PrefixId p = 0; p < kPrefixCount; ++p)
    if (score(p, fv) >= tau_) out.insert(p);
  return out;
}

void PrefixModel::set_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0) && tau != 0.0 && tau != 1.0)
    throw std::invalid_argument("tau must be in [0,1]");
  tau_ = tau;
}

PrefixModel train_prefix_classifier(
    const std::vector<std::pair<FeatureVector, std::set<PrefixId>>>& examples,
    double tau, std::size_t iterations, double learning_rate) {
  if (examples.empty()) throw EmptyTrainingSet();

  PrefixModel model;
  model.tau_ = tau;

  // Fixed vocabulary; column 0 is the unknown bucket, 1 the bias.
  std::size_t next = 2;
  for (const auto& [fv, _] : examples)
    for (const auto& [name, value] : fv.features)
      if (!model.vocab_.count(name)) model.vocab_[name] = next++;

  const std::size_t cols = next;
  model.weights_.assign(kPrefixCount, std::vector<double>(cols, 0.0));

  // Precompute indexed examples.
  std::vector<std::vector<std::pair<std::size_t, double>>> xs;
  xs.reserve(examples.size());
  for (const auto& [fv, _] : examples) {
    std::vector<std::pair<std::size_t, double>> x;
    for (const auto& [name, value] : fv.features)
      x.emplace_back(model.vocab_.at(name), value);
    xs.push_back(std::move(x));
  }

  const double n = static_cast<double>(examples.size());
  for (PrefixId p = 0; p < kPrefixCount; ++p) {
    std::size_t positives = 0;
    for (const auto& [_, labels] : examples) positives += labels.count(p);
    const double pos_weight = class_weight(positives, examples.size());
    model.class_weights_[prefix_info(p).surface] = pos_weight;

    auto& w = model.weights_[static_cast<std::size_t>(p)];
    std::vector<double> grad(cols, 0.0);
    for (std::size_t iter = 0; iter < iterations; ++iter) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t e = 0; e < xs.size(); ++e) {
        double z = w[1];
        for (const auto& [idx, value] : xs[e]) z += w[idx] * value;
        const bool y = examples[e].second.count(p) > 0;
        double err = sigmoid(z) - (y ? 1.0 : 0.0);
        if (y) err *= pos_weight;
        grad[1] += err;
        for (const auto& [idx, value] : xs[e]) grad[idx] += err * value;
      }
      for (std::size_t c = 0; c < cols; ++c)
        w[c] -= learning_rate * grad[c] / n;
    }
  }
  return model;
}

std::set<PrefixId> predict_prefixes(const PrefixModel& model,
                                    const TaggedSentence& sentence,
                                    std::size_t target,
                                    const ConnectiveLexicon& lexicon) {
  if (!sentence.targets.count(target))
    throw std::invalid_argument("index " + std::to_string(target) +
                                " is not a target of sentence " + sentence.id);
  return model.predict(target_features(sentence, target, lexicon));
}

void PrefixModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open model file: " + path);
  out << "qadisc-model 1\n";
  out << "tau " << tau_ << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& [name, idx] : vocab_) out << name << '\t' << idx << '\n';
  const std::size_t cols = weights_.empty() ? 0 : weights_[0].size();
  out << "weights " << weights_.size() << ' ' << cols << '\n';
  out.precision(17);
  for (const auto& row : weights_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << row[c];
    }
    out << '\n';
  }
  out << "class_weights " << class_weights_.size() << '\n';
  for (const auto& [surface, w] : class_weights_)
    out << surface << '\t' << w << '\n';
  if (!out) throw std::runtime_error("model write failed: " + path);
}

PrefixModel PrefixModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "qadisc-model" || version != 1)
    throw std::runtime_error("not a qadisc model file: " + path);

  PrefixModel model;
  std::string key;
  in >> key >> model.tau_;
  std::size_t n = 0;
  in >> key >> n;
  in.ignore();
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    std::getline(in, line);
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("bad vocab line in model file");
    model.vocab_[line.substr(0, tab)] =
        static_cast<std::size_t>(std::stoul(line.substr(tab + 1)));
  }
  std::size_t rows = 0, cols = 0;
  in >> key >> rows >> cols;
  if (rows != kPrefixCount)
    throw std::runtime_error("model file has wrong prefix count");
  model.weights_.assign(rows, std::vector<double>(cols, 0.0));
  for (auto& row : model.weights_)
    for (double& v : row) in >> v;
  in >> key >> n;
  in.ignore();
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    std::getline(in, line);
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("bad class weight line in model file");
    model.class_weights_[line.substr(0, tab)] =
        std::stod(line.substr(tab + 1));
  }
  if (!in) throw std::runtime_error("truncated model file: " + path);
  return model;
}

CompatibilityTable CompatibilityTable::builtin() {
  CompatibilityTable t;
  auto set = [&](const char* conn, const char* surface) {
    t.add(conn, *prefix_by_surface(surface));
  };
  set("because", "What is the reason");
  set("since", "What is the reason");
  set("so", "What is the result of");
  set("if", "In what case");
  set("unless", "Unless what");
  set("although", "Despite what");
  set("despite", "Despite what");
  set("while", "While what");
  set("when", "While what");
  set("after", "After what");
  set("before", "Before what");
  set("instead of", "Instead of what");
  return t;
}

CompatibilityTable CompatibilityTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open compatibility file: " + path);
  CompatibilityTable t = builtin();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("bad compatibility line: " + line);
    const auto prefix = prefix_by_surface(line.substr(tab + 1));
    if (!prefix)
      throw std::runtime_error("unknown prefix in compatibility line: " + line);
    t.add(line.substr(0, tab), *prefix);
  }
  return t;
}

void CompatibilityTable::add(const std::string& connective, PrefixId prefix) {
  table_[lower(connective)] = prefix;
}

std::optional<PrefixId> CompatibilityTable::prefix_for(
    const std::string& connective) const {
  auto it = table_.find(lower(connective));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::vector<ComposedQuestion> generate_question(
    const TaggedSentence& sentence, PrefixId prefix,
    const std::set<std::size_t>& targets, const ConnectiveLexicon& lexicon) {
  if (targets.empty()) throw NoTargets();
  const PrefixInfo& info = prefix_info(prefix);
  const std::vector<Segment> segments = segment_sentence(sentence, lexicon);

  std::vector<ComposedQuestion> out;
  for (std::size_t target : targets) {
    const Segment* seg = segment_of(segments, target);
    if (!seg) continue;
    const std::size_t conn_len =
        lexicon.match_at(sentence.tokens, seg->begin);

    std::vector<std::string> body_tokens;
    std::optional<std::string> auxiliary;
    for (std::size_t i = seg->begin + conn_len; i < seg->end; ++i) {
      const std::string& surf = sentence.tokens[i].surface;
      // Lift the first auxiliary out of the clause ("could hit" -> "could
      // ... hit") when the prefix wants one.
      if (info.takes_auxiliary && !auxiliary && i != target &&
          is_auxiliary(lower(surf))) {
        auxiliary = lower(surf);
        continue;
      }
      if (sentence.tokens[i].pos == Pos::Punct) continue;
      body_tokens.push_back(surf);
    }
    if (body_tokens.empty()) continue;

    if (info.takes_auxiliary && !auxiliary) {
      const std::string tgt = lower(sentence.tokens[target].surface);
      if (sentence.tokens[target].pos != Pos::Verb)
        auxiliary = "is";
      else if (tgt.size() > 2 && tgt.compare(tgt.size() - 2, 2, "ed") == 0)
        auxiliary = "did";
      else if (tgt.size() > 1 && tgt.back() == 's')
        auxiliary = "does";
      else
        auxiliary = "do";
    }

    std::string body;
    for (const std::string& t : body_tokens) {
      if (!body.empty()) body += ' ';
      body += t;
    }
    out.push_back(compose_question(prefix, auxiliary, {body}));
  }
  if (out.empty()) throw NoTargets();
  return out;
}

std::string generate_answer(const TaggedSentence& sentence,
                            const ComposedQuestion& question,
                            const ConnectiveLexicon& lexicon,
                            const CompatibilityTable& compat) {
  prefix_info(question.prefix);  // validates the id
  const std::vector<Segment> segments = segment_sentence(sentence, lexicon);
  if (segments.size() < 2) throw NoCandidate();

  const TokenBag body_bag(question.body);
  std::vector<TokenBag> seg_bags;
  seg_bags.reserve(segments.size());
  for (const Segment& seg : segments)
    seg_bags.emplace_back(segment_text(sentence, seg));

  // The question's source segment anchors the adjacency bonus.
  std::size_t qseg = 0;
  double best_overlap = -1.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double ov = iou(seg_bags[s], body_bag);
    if (ov > best_overlap) {
      best_overlap = ov;
      qseg = s;
    }
  }

  const std::string& prefix_sense = prefix_info(question.prefix).sense;
  const std::string& prefix_canon = canonical_label(question.prefix);

  long best = -1;
  double best_score = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (iou(seg_bags[s], body_bag) >= 0.5) continue;  // overlaps the question
    double score = 0.0;
    const std::size_t len = lexicon.match_at(sentence.tokens, segments[s].begin);
    if (len > 0) {
      std::string conn;
      for (std::size_t k = 0; k < len; ++k) {
        if (k) conn += ' ';
        conn += lower(sentence.tokens[segments[s].begin + k].surface);
      }
      if (auto p = compat.prefix_for(conn)) {
        if (prefix_info(*p).sense == prefix_sense ||
            canonical_label(*p) == prefix_canon)
          score += 2.0;
      }
    }
    const std::size_t dist = s > qseg ? s - qseg : qseg - s;
    score += 1.0 / (1.0 + static_cast<double>(dist));

    bool better = best < 0 || score > best_score + 1e-12;
    if (!better && best >= 0 && std::abs(score - best_score) <= 1e-12) {
      // tie: prefer the nearest candidate to the left
      const std::size_t bs = static_cast<std::size_t>(best);
      const bool cand_left = s < qseg, best_left = bs < qseg;
      if (cand_left && !best_left) better = true;
    }
    if (better) {
      best = static_cast<long>(s);
      best_score = score;
    }
  }
  if (best < 0) throw NoCandidate();
  return segment_text(sentence, segments[static_cast<std::size_t>(best)]);
}

AnnotationSet parse_sentence(const PrefixModel& model,
                             const TaggedSentence& sentence,
                             const ConnectiveLexicon& lexicon,
                             const CompatibilityTable& compat) {
  AnnotationSet out;
  out.sentence_id = sentence.id;
  out.source = Source::system();

  const std::vector<Segment> segments = segment_sentence(sentence, lexicon);
  std::set<std::string> seen;
  for (std::size_t target : sentence.targets) {
    const std::set<PrefixId> prefixes =
        model.predict(target_features(sentence, target, lexicon));
    for (PrefixId prefix : prefixes) {
      std::vector<ComposedQuestion> questions;
      try {
        questions = generate_question(sentence, prefix, {target}, lexicon);
      } catch (const NoTargets&) {
        continue;
      }
      for (const ComposedQuestion& q : questions) {
        std::string answer;
        try {
          answer = generate_answer(sentence, q, lexicon, compat);
        } catch (const NoCandidate&) {
          continue;
        }
        QAPair qa;
        qa.prefix = prefix;
        qa.auxiliary = q.auxiliary;
        qa.question_body = q.body;
        qa.answer = answer;
        std::size_t answer_target = target;
        for (const Segment& seg : segments) {
          const std::string text = segment_text(sentence, seg);
          if (text != answer) continue;
          for (std::size_t t : sentence.targets)
            if (t >= seg.begin && t < seg.end) {
              answer_target = t;
              break;
            }
          break;
        }
        qa.source_targets = std::make_pair(target, answer_target);
        const std::string key =
            q.full_text + "\t" + answer;
        if (seen.insert(key).second) out.pairs.push_back(std::move(qa));
      }
    }
  }
  return out;
}

}  // namespace qadisc
