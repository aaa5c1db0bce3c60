// qadisc — command line front end for the QADiscourse toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qadisc/dataset.hpp"
#include "qadisc/extract.hpp"
#include "qadisc/grammar.hpp"
#include "qadisc/metrics.hpp"
#include "qadisc/parser.hpp"

namespace {

using namespace qadisc;

struct Options {
  std::string input;
  std::string pred;
  std::string gold;
  std::string sentences;
  std::string output;
  std::string format_path;
  std::string lexicon_path;
  std::string model_path;
  std::string compat_path;
  std::string report = "text";
  std::string split = "train";
  std::string domain = "other";
  double tau = -1.0;
  unsigned long iterations = 200;
  double learning_rate = 0.1;
  unsigned long seed = 0;
};

ConnectiveLexicon load_lexicon(const Options& opt) {
  std::string path = opt.lexicon_path;
  if (path.empty()) {
    if (const char* env = std::getenv("QADISC_LEXICON")) path = env;
  }
  return path.empty() ? ConnectiveLexicon::builtin()
                      : ConnectiveLexicon::from_file(path);
}

FormatDescriptor load_format(const Options& opt) {
  return opt.format_path.empty() ? FormatDescriptor::canonical()
                                 : FormatDescriptor::from_file(opt.format_path);
}

std::ostream& open_output(const Options& opt, std::ofstream& file) {
  if (opt.output.empty() || opt.output == "-") return std::cout;
  file.open(opt.output);
  if (!file) throw std::runtime_error("cannot open output: " + opt.output);
  return file;
}

void emit(std::ostream& out, const std::string& report, const std::string& key,
          const std::string& value) {
  if (report == "machine")
    out << key << '\t' << value << '\n';
  else
    out << key << ": " << value << '\n';
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

std::string sentence_text(const TaggedSentence& s) {
  std::string out;
  for (const Token& t : s.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

// Dataset records grouped into one AnnotationSet per (sentence, source).
std::map<std::string, std::map<std::string, AnnotationSet>> group_records(
    const std::vector<DatasetRecord>& records) {
  std::map<std::string, std::map<std::string, AnnotationSet>> out;
  for (const DatasetRecord& r : records) {
    AnnotationSet& set = out[r.sentence_id][source_to_string(r.source)];
    set.sentence_id = r.sentence_id;
    set.source = r.source;
    set.pairs.push_back(r.qa);
  }
  return out;
}

AnnotationSet flatten_sentence(
    const std::map<std::string, AnnotationSet>& by_source,
    const std::string& sentence_id) {
  AnnotationSet out;
  out.sentence_id = sentence_id;
  for (const auto& [src, set] : by_source)
    out.pairs.insert(out.pairs.end(), set.pairs.begin(), set.pairs.end());
  return out;
}

int cmd_extract(const Options& opt) {
  const ConnectiveLexicon lexicon = load_lexicon(opt);
  const std::vector<TaggedSentence> sentences = read_sentences(opt.input);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  out << "sentence_id\tsegments\ttargets\n";
  for (const TaggedSentence& s : sentences) {
    const std::vector<Segment> segments = segment_sentence(s, lexicon);
    const std::set<std::size_t> targets = extract_targets(s, lexicon, segments);
    std::string seg_text;
    for (const Segment& seg : segments) {
      if (!seg_text.empty()) seg_text += ' ';
      seg_text += '[';
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        if (i > seg.begin) seg_text += ' ';
        seg_text += s.tokens[i].surface;
      }
      seg_text += ']';
    }
    std::string tgt_text;
    for (std::size_t t : targets) {
      if (!tgt_text.empty()) tgt_text += ' ';
      tgt_text += s.tokens[t].surface;
    }
    out << escape_field(s.id) << '\t' << escape_field(seg_text) << '\t'
        << escape_field(tgt_text) << '\n';
  }
  return 0;
}

int cmd_validate(const Options& opt) {
  const std::vector<DatasetRecord> records =
      read_dataset(opt.input, load_format(opt));
  std::cerr << "ok: " << records.size() << " records\n";
  return 0;
}

int cmd_convert(const Options& opt) {
  std::vector<DatasetRecord> records = read_dataset(opt.input, load_format(opt));
  if (opt.output.empty() || opt.output == "-")
    write_dataset_stream(records, std::cout);
  else
    write_dataset(records, opt.output);
  return 0;
}

int cmd_score(const Options& opt) {
  const FormatDescriptor fmtdesc = load_format(opt);
  const auto pred = group_records(read_dataset(opt.pred, fmtdesc));
  const auto gold = group_records(read_dataset(opt.gold, fmtdesc));

  std::vector<std::pair<AnnotationSet, AnnotationSet>> pairs;
  for (const auto& [sid, gold_sources] : gold) {
    auto it = pred.find(sid);
    if (it == pred.end()) {
      std::cerr << "error: sentence \"" << sid
                << "\" is in the gold file but not in the predictions\n";
      return 1;
    }
    pairs.emplace_back(flatten_sentence(it->second, sid),
                       flatten_sentence(gold_sources, sid));
  }
  for (const auto& [sid, _] : pred) {
    if (!gold.count(sid)) {
      std::cerr << "error: sentence \"" << sid
                << "\" is in the predictions but not in the gold file\n";
      return 1;
    }
  }

  const MetricsReport rep = score_corpus(pairs);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  emit(out, opt.report, "sentences", std::to_string(rep.sentences));
  emit(out, opt.report, "uqa_precision", fmt(rep.uqa_micro.precision));
  emit(out, opt.report, "uqa_recall", fmt(rep.uqa_micro.recall));
  emit(out, opt.report, "uqa_f1", fmt(rep.uqa_micro.f1));
  emit(out, opt.report, "uqa_precision_macro", fmt(rep.uqa_macro.precision));
  emit(out, opt.report, "uqa_recall_macro", fmt(rep.uqa_macro.recall));
  emit(out, opt.report, "uqa_f1_macro", fmt(rep.uqa_macro.f1));
  emit(out, opt.report, "lqa_accuracy", fmt(rep.lqa_micro));
  emit(out, opt.report, "lqa_accuracy_macro", fmt(rep.lqa_macro));
  emit(out, opt.report, "prefix_accuracy", fmt(rep.prefix_acc));
  for (const auto& [surface, entry] : rep.per_prefix)
    emit(out, opt.report, "prefix[" + surface + "]",
         std::to_string(entry.second) + "/" + std::to_string(entry.first));
  return 0;
}

int cmd_stats(const Options& opt) {
  const std::vector<DatasetRecord> records =
      read_dataset(opt.input, load_format(opt));
  const StatsReport rep = dataset_stats(records);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  emit(out, opt.report, "sentences_with_qa",
       std::to_string(rep.sentences_with_qa));
  emit(out, opt.report, "total_qas", std::to_string(rep.total_qas));
  for (const auto& [key, entry] : split_breakdown(records))
    emit(out, opt.report, "split[" + key.first + " " + key.second + "]",
         std::to_string(entry.first) + " " + std::to_string(entry.second));
  for (const auto& [surface, entry] : rep.per_prefix)
    emit(out, opt.report, "count[" + surface + "]",
         std::to_string(entry.first) + " (" + fmt(entry.second * 100.0) +
             "%)");
  emit(out, opt.report, "avg_question_tokens", fmt(rep.avg_question_tokens));
  emit(out, opt.report, "avg_answer_tokens", fmt(rep.avg_answer_tokens));
  return 0;
}

int cmd_iaa(const Options& opt) {
  const std::vector<DatasetRecord> records =
      read_dataset(opt.input, load_format(opt));
  std::map<std::string, std::map<std::string, AnnotationSet>> by_worker;
  for (const DatasetRecord& r : records) {
    AnnotationSet& set =
        by_worker[source_to_string(r.source)][r.sentence_id];
    set.sentence_id = r.sentence_id;
    set.source = r.source;
    set.pairs.push_back(r.qa);
  }
  const IAAResult res = compute_iaa(by_worker);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  emit(out, opt.report, "worker_pairs", std::to_string(res.worker_pairs));
  emit(out, opt.report, "iaa_uqa_f1", fmt(res.uqa_f1));
  emit(out, opt.report, "iaa_lqa", fmt(res.lqa));
  return 0;
}

int cmd_merge(const Options& opt) {
  const std::vector<DatasetRecord> records =
      read_dataset(opt.input, load_format(opt));

  // verdicts keyed per sentence; rows carry them in the verdict column
  std::map<std::string, std::map<std::string, Verdict>> verdicts;
  std::map<std::string, DatasetRecord> first_row;
  for (const DatasetRecord& r : records) {
    verdicts[r.sentence_id][qa_key(r.qa)] = r.qa.grammaticality;
    first_row.emplace(r.sentence_id, r);
  }

  std::vector<DatasetRecord> out_records;
  for (const auto& [sid, by_source] : group_records(records)) {
    AnnotationSet merged;
    merged.sentence_id = sid;
    merged.source = Source::gold();
    bool first = true;
    for (const auto& [src, set] : by_source) {
      if (first) {
        merged = merge_adjudicated(set, AnnotationSet{sid, Source::gold(), {}},
                                   verdicts[sid]);
        first = false;
      } else {
        merged = merge_adjudicated(merged, set, verdicts[sid]);
      }
    }
    const DatasetRecord& proto = first_row.at(sid);
    for (const QAPair& qa : merged.pairs) {
      DatasetRecord rec = proto;
      rec.source = Source::gold();
      rec.qa = qa;
      out_records.push_back(std::move(rec));
    }
  }
  if (opt.output.empty() || opt.output == "-")
    write_dataset_stream(out_records, std::cout);
  else
    write_dataset(out_records, opt.output);
  return 0;
}

int cmd_train(const Options& opt) {
  const ConnectiveLexicon lexicon = load_lexicon(opt);
  const std::vector<TaggedSentence> sentences = read_sentences(opt.sentences);
  const auto gold = group_records(read_dataset(opt.gold, load_format(opt)));

  std::vector<std::pair<FeatureVector, std::set<PrefixId>>> examples;
  for (TaggedSentence s : sentences) {
    s.targets = extract_targets(s, lexicon);
    auto git = gold.find(s.id);
    for (std::size_t target : s.targets) {
      std::set<PrefixId> labels;
      if (git != gold.end()) {
        std::string tgt = s.tokens[target].surface;
        for (char& c : tgt)
          c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        for (const auto& [src, set] : git->second) {
          for (const QAPair& qa : set.pairs) {
            for (const std::string& tok : metric_tokens(qa.question_body))
              if (tok == tgt) {
                labels.insert(qa.prefix);
                break;
              }
          }
        }
      }
      examples.emplace_back(target_features(s, target, lexicon),
                            std::move(labels));
    }
  }
  const double tau = opt.tau > 0.0 ? opt.tau : 0.3;
  const PrefixModel model = train_prefix_classifier(
      examples, tau, opt.iterations, opt.learning_rate);
  model.save(opt.output.empty() ? "qadisc.model" : opt.output);
  std::cerr << "trained on " << examples.size() << " targets\n";
  return 0;
}

int cmd_parse(const Options& opt) {
  const ConnectiveLexicon lexicon = load_lexicon(opt);
  const CompatibilityTable compat =
      opt.compat_path.empty() ? CompatibilityTable::builtin()
                              : CompatibilityTable::from_file(opt.compat_path);
  PrefixModel model = PrefixModel::load(opt.model_path);
  if (opt.tau > 0.0) model.set_tau(opt.tau);

  std::vector<TaggedSentence> sentences = read_sentences(opt.sentences);
  std::vector<DatasetRecord> out_records;
  for (TaggedSentence& s : sentences) {
    s.targets = extract_targets(s, lexicon);
    const AnnotationSet result = parse_sentence(model, s, lexicon, compat);
    for (const QAPair& qa : result.pairs) {
      DatasetRecord rec;
      rec.sentence_id = s.id;
      rec.split = split_from_string(opt.split);
      rec.domain = domain_from_string(opt.domain);
      rec.sentence = sentence_text(s);
      rec.source = Source::system();
      rec.qa = qa;
      rec.qa.source_targets.reset();  // token indices stay in-memory only
      out_records.push_back(std::move(rec));
    }
  }
  if (opt.output.empty() || opt.output == "-")
    write_dataset_stream(out_records, std::cout);
  else
    write_dataset(out_records, opt.output);
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format_path,
                  "column-mapping descriptor file");
  cmd->add_option("--report", opt.report, "report style")
      ->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--lexicon", opt.lexicon_path,
                  "connective lexicon file (or QADISC_LEXICON)");
  cmd->add_option("--seed", opt.seed, "seed for stochastic defaults");
  cmd->add_option("--output,-o", opt.output, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QADiscourse toolkit: discourse relations as QA pairs"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* extract = app.add_subcommand(
      "extract", "segment sentences and extract question targets");
  extract->add_option("--input,-i", opt.input, "tagged sentences TSV")
      ->required();
  add_common(extract, opt);

  CLI::App* validate =
      app.add_subcommand("validate", "validate a dataset file");
  validate->add_option("--input,-i", opt.input, "dataset file")->required();
  add_common(validate, opt);

  CLI::App* convert =
      app.add_subcommand("convert", "rewrite a dataset in canonical form");
  convert->add_option("--input,-i", opt.input, "dataset file")->required();
  add_common(convert, opt);

  CLI::App* score =
      app.add_subcommand("score", "score predictions against gold");
  score->add_option("--pred", opt.pred, "predicted dataset file")->required();
  score->add_option("--gold", opt.gold, "gold dataset file")->required();
  add_common(score, opt);

  CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("--input,-i", opt.input, "dataset file")->required();
  add_common(stats, opt);

  CLI::App* iaa =
      app.add_subcommand("iaa", "pairwise inter-annotator agreement");
  iaa->add_option("--input,-i", opt.input, "dataset file with worker sources")
      ->required();
  add_common(iaa, opt);

  CLI::App* merge =
      app.add_subcommand("merge", "merge adjudicated annotations");
  merge->add_option("--input,-i", opt.input,
                    "dataset file with verdict column")
      ->required();
  add_common(merge, opt);

  CLI::App* train = app.add_subcommand("train", "train the prefix classifier");
  train->add_option("--sentences", opt.sentences, "tagged sentences TSV")
      ->required();
  train->add_option("--gold", opt.gold, "gold dataset file")->required();
  train->add_option("--tau", opt.tau, "prediction threshold");
  train->add_option("--iterations", opt.iterations, "training iterations");
  train->add_option("--learning-rate", opt.learning_rate, "learning rate");
  add_common(train, opt);

  CLI::App* parse = app.add_subcommand("parse", "run the baseline pipeline");
  parse->add_option("--sentences", opt.sentences, "tagged sentences TSV")
      ->required();
  parse->add_option("--model", opt.model_path, "model file")->required();
  parse->add_option("--tau", opt.tau, "prediction threshold override");
  parse->add_option("--compat", opt.compat_path,
                    "connective compatibility table file");
  parse->add_option("--split", opt.split, "split label for output records");
  parse->add_option("--domain", opt.domain, "domain label for output records");
  add_common(parse, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return cmd_extract(opt);
    if (validate->parsed()) return cmd_validate(opt);
    if (convert->parsed()) return cmd_convert(opt);
    if (score->parsed()) return cmd_score(opt);
    if (stats->parsed()) return cmd_stats(opt);
    if (iaa->parsed()) return cmd_iaa(opt);
    if (merge->parsed()) return cmd_merge(opt);
    if (train->parsed()) return cmd_train(opt);
    if (parse->parsed()) return cmd_parse(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
