#include "qadisc/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "qadisc/grammar.hpp"

namespace qadisc {
namespace {

bool is_punct_char(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

double harmonic(double p, double r) {
  return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
}

// Union-find over member indices of both sets (B offset by |A|).
struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::string> metric_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    std::size_t b = 0, e = word.size();
    while (b < e && is_punct_char(word[b])) ++b;
    while (e > b && is_punct_char(word[e - 1])) --e;
    if (e > b) out.push_back(word.substr(b, e - b));
    word.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  flush();
  return out;
}

void TokenBag::add_text(const std::string& text) {
  for (const std::string& t : metric_tokens(text)) {
    ++counts_[t];
    ++total_;
  }
}

void TokenBag::merge(const TokenBag& other) {
  for (const auto& [tok, n] : other.counts_) {
    counts_[tok] += n;
    total_ += n;
  }
}

TokenBag qa_token_bag(const QAPair& qa) {
  TokenBag bag(qa.question_body);
  bag.add_text(qa.answer);
  return bag;
}

double iou(const TokenBag& a, const TokenBag& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& [tok, n] : a.counts()) {
    auto it = b.counts().find(tok);
    if (it != b.counts().end()) inter += std::min(n, it->second);
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

AlignmentResult align_bags(const std::vector<TokenBag>& a,
                           const std::vector<TokenBag>& b) {
  AlignmentResult r;
  r.left_size = a.size();
  r.right_size = b.size();

  std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      m[i][j] = iou(a[i], b[j]);
      r.pairwise_iou[{i, j}] = m[i][j];
    }

  DisjointSet ds(a.size() + b.size());
  std::vector<bool> in_edge(a.size() + b.size(), false);

  // Directed max-IOU edge from each left member, threshold 0.5, ties to the
  // lowest counterpart index.
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = 0.0;
    std::size_t best_j = b.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (m[i][j] > best) {
        best = m[i][j];
        best_j = j;
      }
    }
    if (best_j < b.size() && best >= 0.5) {
      ds.unite(i, a.size() + best_j);
      in_edge[i] = in_edge[a.size() + best_j] = true;
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    double best = 0.0;
    std::size_t best_i = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (m[i][j] > best) {
        best = m[i][j];
        best_i = i;
      }
    }
    if (best_i < a.size() && best >= 0.5) {
      ds.unite(a.size() + j, best_i);
      in_edge[best_i] = in_edge[a.size() + j] = true;
    }
  }

  std::map<std::size_t, Cluster> by_root;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (in_edge[i])
      by_root[ds.find(i)].left_members.push_back(i);
    else
      r.unaligned_left.push_back(i);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (in_edge[a.size() + j])
      by_root[ds.find(a.size() + j)].right_members.push_back(j);
    else
      r.unaligned_right.push_back(j);
  }
  for (auto& [root, cluster] : by_root) r.clusters.push_back(cluster);
  return r;
}

AlignmentResult align_qa_sets(const AnnotationSet& a, const AnnotationSet& b) {
  if (a.sentence_id != b.sentence_id)
    throw SentenceMismatch(a.sentence_id, b.sentence_id);
  std::vector<TokenBag> ba, bb;
  ba.reserve(a.pairs.size());
  bb.reserve(b.pairs.size());
  for (const QAPair& qa : a.pairs) ba.push_back(qa_token_bag(qa));
  for (const QAPair& qa : b.pairs) bb.push_back(qa_token_bag(qa));
  return align_bags(ba, bb);
}

UQAScores uqa_scores(const AlignmentResult& r) {
  std::size_t la = 0, ra = 0;
  for (const Cluster& c : r.clusters) {
    la += c.left_members.size();
    ra += c.right_members.size();
  }
  UQAScores s;
  s.precision = r.left_size ? static_cast<double>(la) / r.left_size : 0.0;
  s.recall = r.right_size ? static_cast<double>(ra) / r.right_size : 0.0;
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

namespace {

bool cluster_label_match(const Cluster& c, const AnnotationSet& a,
                         const AnnotationSet& b) {
  std::set<std::string> left, right;
  for (std::size_t i : c.left_members)
    left.insert(canonical_label(a.pairs[i].prefix));
  for (std::size_t j : c.right_members)
    right.insert(canonical_label(b.pairs[j].prefix));
  for (const std::string& l : left)
    if (right.count(l)) return true;
  return false;
}

}  // namespace

double lqa_accuracy(const AlignmentResult& r, const AnnotationSet& a,
                    const AnnotationSet& b) {
  if (r.clusters.empty()) return 0.0;
  std::size_t correct = 0;
  for (const Cluster& c : r.clusters)
    if (cluster_label_match(c, a, b)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(r.clusters.size());
}

double prefix_accuracy(const AlignmentResult& r, const AnnotationSet& a,
                       const AnnotationSet& b) {
  if (b.pairs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const Cluster& c : r.clusters) {
    std::set<std::string> left;
    for (std::size_t i : c.left_members)
      left.insert(canonical_label(a.pairs[i].prefix));
    for (std::size_t j : c.right_members)
      if (left.count(canonical_label(b.pairs[j].prefix))) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(b.pairs.size());
}

AlignmentResult align_pdtb(const PDTBRelation& rel, const AnnotationSet& qas) {
  TokenBag args(rel.arg1_text);
  args.add_text(rel.arg2_text);
  std::vector<TokenBag> left = {args};
  std::vector<TokenBag> right;
  right.reserve(qas.pairs.size());
  for (const QAPair& qa : qas.pairs) right.push_back(qa_token_bag(qa));
  return align_bags(left, right);
}

void PooledCounts::add(const AlignmentResult& r, const AnnotationSet& a,
                       const AnnotationSet& b) {
  left_total += r.left_size;
  right_total += r.right_size;
  gold_total += b.pairs.size();
  clusters_total += r.clusters.size();
  for (const Cluster& c : r.clusters) {
    left_aligned += c.left_members.size();
    right_aligned += c.right_members.size();
    if (cluster_label_match(c, a, b)) ++clusters_label_correct;
    std::set<std::string> left;
    for (std::size_t i : c.left_members)
      left.insert(canonical_label(a.pairs[i].prefix));
    for (std::size_t j : c.right_members)
      if (left.count(canonical_label(b.pairs[j].prefix)))
        ++gold_prefix_correct;
  }
}

UQAScores PooledCounts::uqa() const {
  UQAScores s;
  s.precision =
      left_total ? static_cast<double>(left_aligned) / left_total : 0.0;
  s.recall =
      right_total ? static_cast<double>(right_aligned) / right_total : 0.0;
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

double PooledCounts::lqa() const {
  return clusters_total
             ? static_cast<double>(clusters_label_correct) / clusters_total
             : 0.0;
}

double PooledCounts::prefix_acc() const {
  return gold_total ? static_cast<double>(gold_prefix_correct) / gold_total
                    : 0.0;
}

MetricsReport score_corpus(
    const std::vector<std::pair<AnnotationSet, AnnotationSet>>& pairs) {
  MetricsReport rep;
  PooledCounts pooled;
  double sum_p = 0.0, sum_r = 0.0, sum_lqa = 0.0;
  for (const auto& [pred, gold] : pairs) {
    const AlignmentResult r = align_qa_sets(pred, gold);
    pooled.add(r, pred, gold);
    const UQAScores s = uqa_scores(r);
    sum_p += s.precision;
    sum_r += s.recall;
    sum_lqa += lqa_accuracy(r, pred, gold);

    // gold-anchored per-prefix breakdown
    std::vector<bool> matched(gold.pairs.size(), false);
    for (const Cluster& c : r.clusters) {
      std::set<std::string> left;
      for (std::size_t i : c.left_members)
        left.insert(canonical_label(pred.pairs[i].prefix));
      for (std::size_t j : c.right_members)
        if (left.count(canonical_label(gold.pairs[j].prefix)))
          matched[j] = true;
    }
    for (std::size_t j = 0; j < gold.pairs.size(); ++j) {
      auto& entry = rep.per_prefix[prefix_info(gold.pairs[j].prefix).surface];
      ++entry.first;
      if (matched[j]) ++entry.second;
    }
  }
  rep.sentences = pairs.size();
  rep.uqa_micro = pooled.uqa();
  rep.lqa_micro = pooled.lqa();
  rep.prefix_acc = pooled.prefix_acc();
  if (!pairs.empty()) {
    rep.uqa_macro.precision = sum_p / pairs.size();
    rep.uqa_macro.recall = sum_r / pairs.size();
    rep.uqa_macro.f1 = harmonic(rep.uqa_macro.precision, rep.uqa_macro.recall);
    rep.lqa_macro = sum_lqa / pairs.size();
  }
  return rep;
}

IAAResult compute_iaa(
    const std::map<std::string, std::map<std::string, AnnotationSet>>&
        by_worker) {
  std::vector<std::string> workers;
  for (const auto& [w, _] : by_worker) workers.push_back(w);

  IAAResult out;
  double sum_f1 = 0.0, sum_lqa = 0.0;
  std::size_t pairs_used = 0;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    for (std::size_t j = i + 1; j < workers.size(); ++j) {
      const auto& wa = by_worker.at(workers[i]);
      const auto& wb = by_worker.at(workers[j]);
      PooledCounts pooled;
      bool shared = false;
      for (const auto& [sid, a] : wa) {
        auto it = wb.find(sid);
        if (it == wb.end()) continue;
        shared = true;
        const AlignmentResult r = align_qa_sets(a, it->second);
        pooled.add(r, a, it->second);
      }
      if (!shared) continue;
      sum_f1 += pooled.uqa().f1;
      sum_lqa += pooled.lqa();
      ++pairs_used;
    }
  }
  if (pairs_used == 0) throw InsufficientWorkers();
  out.uqa_f1 = sum_f1 / pairs_used;
  out.lqa = sum_lqa / pairs_used;
  out.worker_pairs = pairs_used;
  return out;
}

}  // namespace qadisc
