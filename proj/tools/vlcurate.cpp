// vlcurate: caption filtering, pseudo-label preparation, and contrastive
// objective tooling.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlcurate/catfilter.hpp"
#include "vlcurate/conceptlab.hpp"
#include "vlcurate/gradcheck.hpp"
#include "vlcurate/matrix_io.hpp"
#include "vlcurate/probe.hpp"
#include "vlcurate/run_header.hpp"
#include "vlcurate/semgraph.hpp"
#include "vlcurate/toy_trainer.hpp"

namespace fs = std::filesystem;
using namespace vlcurate;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string out_dir;
};

// Stream that is either a file or a standard stream.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

std::string resolve(const std::string& explicit_path, const Common& common,
                    const std::string& default_name) {
  if (!explicit_path.empty()) return explicit_path;
  if (!common.out_dir.empty()) return (fs::path(common.out_dir) / default_name).string();
  return {};
}

std::string canonical_config(const CLI::App& sub) {
  return std::string(sub.get_name()) + "\n" + sub.config_to_str(true, false);
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in list");
    }
  }
  return out;
}

// --- filter ---------------------------------------------------------------

struct FilterArgs {
  std::string input = "-";
  std::string output;
  std::string filters = "c,a,t";
  std::size_t min_complexity = kDefaultMinComplexity;
  double spot_conf = kDefaultSpotConfidence;
  std::size_t spot_chars = kDefaultSpotChars;
  double min_score = kDefaultMinScore;
  std::string stats_out;
  std::size_t threads = 1;
};

int cmd_filter(const FilterArgs& a, const Common& common, const CLI::App& sub) {
  PipelineConfig config;
  config.filters = parse_filter_list(a.filters);
  config.params = {a.min_complexity, a.spot_conf, a.spot_chars, a.min_score};
  config.threads = a.threads;

  std::ifstream file;
  if (a.input != "-") file = open_input(a.input);
  std::istream& in = a.input == "-" ? std::cin : file;

  Output out(resolve(a.output, common, "filtered.jsonl"));
  const FilterStats stats = run_pipeline(in, out.get(), config);
  out.close();

  const std::string stats_path = resolve(a.stats_out, common, "filter_stats.tsv");
  if (stats_path.empty()) {
    write_stats(std::cerr, stats);
  } else {
    Output s(stats_path);
    s.get() << header_line("filter", canonical_config(sub)) << '\n';
    write_stats(s.get(), stats);
    s.close();
  }
  return 0;
}

// --- vocab ----------------------------------------------------------------

struct VocabArgs {
  std::string input;
  std::string lexicon;
  std::string kind = "object";
  std::uint64_t min_count = kDefaultMinConceptCount;
  std::string output;
};

int cmd_vocab(const VocabArgs& a, const Common& common, const CLI::App& sub) {
  Lexicon lexicon;
  if (!a.lexicon.empty()) {
    std::ifstream lex = open_input(a.lexicon);
    lexicon = read_lexicon(lex);
  }
  const NodeKind kind = a.kind == "attribute" ? NodeKind::kAttribute : NodeKind::kObject;
  ConceptCounter counter(lexicon, kind);
  std::ifstream in = open_input(a.input);
  std::string line;
  std::size_t malformed = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const CaptionRecord rec = parse_record(line);
      if (rec.parse) counter.add(build_graph(*rec.parse));
    } catch (const InputError&) {
      ++malformed;
    }
  }
  Output out(resolve(a.output, common, a.kind + "_vocab.tsv"));
  out.get() << header_line("vocab", canonical_config(sub)) << '\n';
  write_vocab(out.get(), counter.finish(a.min_count));
  out.close();
  if (malformed) std::cerr << "skipped " << malformed << " malformed records\n";
  return 0;
}

// --- pseudolabel ----------------------------------------------------------

struct PseudoArgs {
  std::string predictions;
  std::string obj_vocab;
  std::string attr_vocab;
  std::int64_t top_k = static_cast<std::int64_t>(kDefaultTopK);
  std::string output;
};

int cmd_pseudolabel(const PseudoArgs& a, const Common& common, const CLI::App& sub) {
  std::ifstream obj_in = open_input(a.obj_vocab);
  const ConceptVocab obj_vocab = read_vocab(obj_in, NodeKind::kObject);
  std::optional<ConceptVocab> attr_vocab;
  if (!a.attr_vocab.empty()) {
    std::ifstream attr_in = open_input(a.attr_vocab);
    attr_vocab = read_vocab(attr_in, NodeKind::kAttribute);
  }

  std::ifstream in = open_input(a.predictions);
  Output out(resolve(a.output, common, "pseudolabels.jsonl"));
  out.get() << header_line("pseudolabel", canonical_config(sub)) << '\n';
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw InputError("predictions line " + std::to_string(line_no) + " is malformed");
    }
    PseudoLabelRecord rec{j["id"].get<std::string>(), std::nullopt, std::nullopt};
    auto sparsify = [&](const char* field, const ConceptVocab* vocab)
        -> std::optional<PseudoLabel> {
      if (!j.contains(field) || j[field].is_null()) return std::nullopt;
      if (!vocab) {
        throw InputError("predictions carry '" + std::string(field) +
                         "' but no vocabulary was given for it");
      }
      const auto probs = j[field].get<std::vector<double>>();
      if (probs.size() != vocab->size()) {
        throw InputError("predictions line " + std::to_string(line_no) + ": '" + field +
                         "' has " + std::to_string(probs.size()) + " entries, vocabulary has " +
                         std::to_string(vocab->size()));
      }
      return topk_sparsify(probs, a.top_k);
    };
    rec.obj = sparsify("obj", &obj_vocab);
    rec.attr = sparsify("attr", attr_vocab ? &*attr_vocab : nullptr);
    out.get() << to_json_line(rec) << '\n';
  }
  out.close();
  return 0;
}

// --- train-toy ------------------------------------------------------------

struct TrainArgs {
  SyntheticPairSpec spec;
  std::size_t steps = 200;
  double lr = 0.05;
  double tau_lr = 0.01;
  double tau_init = kInitialTau;
  double alpha = HnConfig::large_noisy().alpha;
  double beta = HnConfig::large_noisy().beta;
  std::size_t top_k = kDefaultTopK;
};

int cmd_train_toy(const TrainArgs& a, const Common& common, const CLI::App& sub) {
  if (!(a.tau_init > 0.0) || 1.0 / a.tau_init > kMaxLogitScale) {
    throw InputError("--tau-init must satisfy 1/tau <= 100");
  }
  validate(HnConfig{a.alpha, a.beta});
  validate(a.spec);
  if (common.out_dir.empty()) throw InputError("train-toy needs --out DIR");

  std::vector<ToyRunConfig> runs;
  for (ContrastiveLoss loss : {ContrastiveLoss::kInfoNce, ContrastiveLoss::kHnNce}) {
    for (bool cd : {false, true}) {
      ToyRunConfig c;
      c.loss = loss;
      c.hn = {a.alpha, a.beta};
      c.concept_terms = cd;
      c.top_k = a.top_k;
      c.steps = a.steps;
      c.learning_rate = a.lr;
      c.tau_learning_rate = a.tau_lr;
      c.initial_tau = a.tau_init;
      c.seed = common.seed;
      runs.push_back(c);
    }
  }

  const std::string header = header_line("train-toy", canonical_config(sub));
  Output curves((fs::path(common.out_dir) / "curves.tsv").string());
  Output metrics((fs::path(common.out_dir) / "metrics.tsv").string());
  curves.get() << header << "\nrun\tstep\tloss\ttau\n";
  metrics.get() << header << "\nrun\tfinal_loss\tr1_i2t\tr1_t2i\tfinal_tau\n";
  for (const ToyRunConfig& c : runs) {
    const ToyRunResult r = train_toy(a.spec, c);
    for (std::size_t s = 0; s < r.curve.size(); ++s) {
      curves.get() << r.name << '\t' << s << '\t' << fmt(r.curve[s].loss, "%.10g") << '\t'
                   << fmt(r.curve[s].tau, "%.10g") << '\n';
    }
    const std::string row = r.name + '\t' + fmt(r.final_loss) + '\t' + fmt(r.recall_i2t, "%.4f") +
                            '\t' + fmt(r.recall_t2i, "%.4f") + '\t' + fmt(r.final_tau);
    metrics.get() << row << '\n';
    std::cout << row << '\n';
  }
  curves.close();
  metrics.close();
  return 0;
}

// --- gradcheck ------------------------------------------------------------

struct GradArgs {
  GradCheckOptions options;
  std::string report;
};

int cmd_gradcheck(GradArgs a, const Common& common, const CLI::App& sub) {
  a.options.seed = common.seed;
  if (!(a.options.tau > 0.0) || 1.0 / a.options.tau > kMaxLogitScale) {
    throw InputError("--tau must satisfy 1/tau <= 100");
  }
  if (a.options.n < 2 || a.options.d < 1) throw InputError("--n must be >= 2 and --d >= 1");
  const auto entries = run_gradcheck(a.options);
  Output out(resolve(a.report, common, "gradcheck.tsv"));
  out.get() << header_line("gradcheck", canonical_config(sub)) << '\n';
  write_gradcheck_report(out.get(), entries);
  out.close();
  if (!all_passed(entries)) {
    for (const auto& e : entries) {
      if (!e.pass) {
        std::cerr << "gradient check failed: " << e.block << " alpha="
                  << (e.alpha ? fmt(*e.alpha, "%g") : "-")
                  << " beta=" << (e.beta ? fmt(*e.beta, "%g") : "-")
                  << " max_rel_err=" << fmt(e.max_rel_error, "%.3e") << '\n';
      }
    }
    return kExitFailure;
  }
  return 0;
}

// --- probe ----------------------------------------------------------------

struct ProbeArgs {
  std::string features;
  std::string labels;
  std::string prompts;
  std::string eval_features;
  std::string eval_labels;
  double delta = 0.0;
  double delta_b = 0.0;
  std::string delta_grid;
  std::string delta_b_grid;
  std::string shots = "0";
  ProbeOptions options;
  std::size_t threads = 1;
  std::string trajectory_out;
  std::string table_out;
};

// First `k` examples of each class in a seeded shuffle; k = 0 keeps all.
std::vector<std::size_t> k_shot_subset(const std::vector<std::size_t>& labels, std::size_t k,
                                       std::uint64_t seed) {
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (k == 0) return order;
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::map<std::size_t, std::size_t> taken;
  std::vector<std::size_t> out;
  for (std::size_t i : order) {
    if (taken[labels[i]]++ < k) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_probe(ProbeArgs a, const Common& common, const CLI::App& sub) {
  a.options.seed = common.seed;
  std::ifstream f_in = open_input(a.features);
  std::ifstream y_in = open_input(a.labels);
  std::ifstream p_in = open_input(a.prompts);
  const Matrix features = read_matrix(f_in).values;
  const std::vector<std::size_t> labels = read_labels(y_in);
  const Matrix w0 = zero_shot_init(read_matrix(p_in).values);

  Matrix eval_x = features;
  std::vector<std::size_t> eval_y = labels;
  if (a.eval_features.empty() != a.eval_labels.empty()) {
    throw InputError("--eval-features and --eval-labels go together");
  }
  if (!a.eval_features.empty()) {
    std::ifstream ex = open_input(a.eval_features);
    std::ifstream ey = open_input(a.eval_labels);
    eval_x = read_matrix(ex).values;
    eval_y = read_labels(ey);
  }

  std::vector<double> deltas = a.delta_grid.empty() ? std::vector<double>{a.delta}
                                                    : parse_list(a.delta_grid);
  std::vector<double> delta_bs = a.delta_b_grid.empty() ? std::vector<double>{a.delta_b}
                                                        : parse_list(a.delta_b_grid);
  for (double v : deltas) {
    if (!(v >= 0.0)) throw InputError("delta values must be >= 0");
  }
  for (double v : delta_bs) {
    if (!(v >= 0.0)) throw InputError("delta-b values must be >= 0");
  }

  ProbeProblem problem{features, labels, w0, a.delta, a.delta_b};
  validate(problem);

  const std::string header = header_line("probe", canonical_config(sub));
  if (const std::string path = resolve(a.trajectory_out, common, "trajectory.tsv");
      !path.empty()) {
    const ProbeSolution sol = pgd_fit(problem, a.options);
    Output t(path);
    t.get() << header << "\niter\tloss\tweight_norm\tbias_norm\n";
    for (std::size_t i = 0; i < sol.trajectory.size(); ++i) {
      const auto& it = sol.trajectory[i];
      t.get() << i << '\t' << fmt(it.loss, "%.10g") << '\t' << fmt(it.weight_norm, "%.10g")
              << '\t' << fmt(it.bias_norm, "%.10g") << '\n';
    }
    t.close();
  }

  Output table(resolve(a.table_out, common, "probe_accuracy.tsv"));
  table.get() << header << "\nshots\tdelta\tdelta_b\ttrain_loss\taccuracy\n";
  const double zero_shot = accuracy(predict(eval_x * w0), eval_y);
  table.get() << "zero-shot\t0\t0\t-\t" << fmt(zero_shot, "%.4f") << '\n';
  for (double shots_value : parse_list(a.shots)) {
    const auto k = static_cast<std::size_t>(shots_value);
    const auto subset = k_shot_subset(labels, k, common.seed);
    ProbeProblem sub_problem = problem;
    sub_problem.features.resize(static_cast<Eigen::Index>(subset.size()), features.cols());
    sub_problem.labels.clear();
    for (std::size_t r = 0; r < subset.size(); ++r) {
      sub_problem.features.row(static_cast<Eigen::Index>(r)) =
          features.row(static_cast<Eigen::Index>(subset[r]));
      sub_problem.labels.push_back(labels[subset[r]]);
    }
    for (const GridPoint& g :
         grid_search(sub_problem, a.options, deltas, delta_bs, eval_x, eval_y, a.threads)) {
      table.get() << (k == 0 ? std::string("all") : std::to_string(k)) << '\t'
                  << fmt(g.delta, "%g") << '\t' << fmt(g.delta_bias, "%g") << '\t'
                  << fmt(g.train_loss, "%.6f") << '\t' << fmt(g.eval_accuracy, "%.4f") << '\n';
    }
  }
  table.close();
  return 0;
}

// --- graph ----------------------------------------------------------------

int cmd_graph(const std::string& input) {
  std::ifstream file;
  if (input != "-") file = open_input(input);
  std::istream& in = input == "-" ? std::cin : file;
  std::size_t index = 0;
  for (const DependencyParse& parse : read_conllu(in)) {
    const SemanticGraph g = build_graph(parse);
    std::cout << "# sentence " << index++ << " complexity=C" << complexity(g)
              << " actions=" << action_count(g) << '\n'
              << serialize(g) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vlcurate: caption filtering, concept labels and contrastive objectives"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Config file (TOML/INI); flags override it");
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--out", common.out_dir, "Output directory");
  };

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "Apply score/complexity/action/text filters");
  add_common(filter_cmd);
  filter_cmd->add_option("--input", filter.input, "Line-delimited records ('-' = stdin)");
  filter_cmd->add_option("--output", filter.output, "Kept records (default stdout)");
  filter_cmd->add_option("--filters", filter.filters, "Ordered subset of score,c,a,t");
  filter_cmd->add_option("--min-complexity", filter.min_complexity, "Minimum caption level");
  filter_cmd->add_option("--spot-conf", filter.spot_conf, "Text-spot confidence threshold")
      ->check(CLI::Range(0.0, 1.0));
  filter_cmd->add_option("--spot-chars", filter.spot_chars, "Matching characters to drop")
      ->check(CLI::PositiveNumber);
  filter_cmd->add_option("--min-score", filter.min_score, "Minimum alignment score")
      ->check(CLI::Range(0.0, 1.0));
  filter_cmd->add_option("--stats-out", filter.stats_out, "Statistics table path");
  filter_cmd->add_option("--threads", filter.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  VocabArgs vocab;
  auto* vocab_cmd = app.add_subcommand("vocab", "Build a concept vocabulary from records");
  add_common(vocab_cmd);
  vocab_cmd->add_option("--input", vocab.input, "Line-delimited records")->required();
  vocab_cmd->add_option("--lexicon", vocab.lexicon, "lemma<TAB>key canonicalization file");
  vocab_cmd->add_option("--kind", vocab.kind, "object or attribute")
      ->check(CLI::IsMember({"object", "attribute"}));
  vocab_cmd->add_option("--min-count", vocab.min_count, "Minimum caption count");
  vocab_cmd->add_option("--output", vocab.output, "Vocabulary path");

  PseudoArgs pseudo;
  auto* pseudo_cmd = app.add_subcommand("pseudolabel", "Top-k sparsify teacher predictions");
  add_common(pseudo_cmd);
  pseudo_cmd->add_option("--predictions", pseudo.predictions,
                         "Lines of {id, obj: [probs], attr: [probs]}")
      ->required();
  pseudo_cmd->add_option("--obj-vocab", pseudo.obj_vocab, "Object vocabulary")->required();
  pseudo_cmd->add_option("--attr-vocab", pseudo.attr_vocab, "Attribute vocabulary");
  pseudo_cmd->add_option("-k,--top-k", pseudo.top_k, "Entries kept per label")
      ->check(CLI::PositiveNumber);
  pseudo_cmd->add_option("--output", pseudo.output, "Pseudo-label path (default stdout)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-toy", "Synthetic contrastive training runs");
  add_common(train_cmd);
  train_cmd->add_option("--n-concepts", train.spec.n_concepts);
  train_cmd->add_option("--n-attributes", train.spec.n_attributes);
  train_cmd->add_option("--input-dim", train.spec.input_dim);
  train_cmd->add_option("--d", train.spec.d, "Embedding dimension");
  train_cmd->add_option("--noise", train.spec.noise);
  train_cmd->add_option("--alignment", train.spec.alignment, "Planted alignment strength");
  train_cmd->add_option("--dup-rate", train.spec.duplicate_rate, "False-negative rate");
  train_cmd->add_option("--train-pairs", train.spec.train_pairs);
  train_cmd->add_option("--test-pairs", train.spec.test_pairs);
  train_cmd->add_option("--steps", train.steps);
  train_cmd->add_option("--lr", train.lr)->check(CLI::PositiveNumber);
  train_cmd->add_option("--tau-lr", train.tau_lr)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--tau-init", train.tau_init);
  train_cmd->add_option("--alpha", train.alpha);
  train_cmd->add_option("--beta", train.beta);
  train_cmd->add_option("-k,--top-k", train.top_k)->check(CLI::PositiveNumber);

  GradArgs grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  add_common(grad_cmd);
  grad_cmd->add_option("--n", grad.options.n, "Batch size");
  grad_cmd->add_option("--d", grad.options.d, "Embedding dimension");
  grad_cmd->add_option("--tau", grad.options.tau, "Temperature");
  grad_cmd->add_option("--report", grad.report, "Report path (default stdout)");
  grad_cmd->add_flag("--inject-sign-flip", grad.options.inject_sign_flip,
                     "Negate analytic gradients (harness self-test)");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Prompt-initialized PGD linear probe");
  add_common(probe_cmd);
  probe_cmd->add_option("--features", probe.features, "n x d matrix file")->required();
  probe_cmd->add_option("--labels", probe.labels, "Label file")->required();
  probe_cmd->add_option("--prompts", probe.prompts, "n_c x d prompt embeddings")->required();
  probe_cmd->add_option("--eval-features", probe.eval_features);
  probe_cmd->add_option("--eval-labels", probe.eval_labels);
  probe_cmd->add_option("--delta", probe.delta, "Weight radius")->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--delta-b", probe.delta_b, "Bias radius")
      ->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--delta-grid", probe.delta_grid, "Comma-separated weight radii");
  probe_cmd->add_option("--delta-b-grid", probe.delta_b_grid, "Comma-separated bias radii");
  probe_cmd->add_option("--shots", probe.shots, "Comma-separated k per class (0 = all)");
  probe_cmd->add_option("--lr", probe.options.step_size)->check(CLI::PositiveNumber);
  probe_cmd->add_option("--iters", probe.options.iterations);
  probe_cmd->add_option("--batch-size", probe.options.batch_size, "0 = full batch");
  probe_cmd->add_flag("--cosine", probe.options.cosine_decay, "Cosine step decay");
  probe_cmd->add_option("--threads", probe.threads)->check(CLI::PositiveNumber);
  probe_cmd->add_option("--trajectory-out", probe.trajectory_out);
  probe_cmd->add_option("--table-out", probe.table_out);

  std::string graph_input = "-";
  auto* graph_cmd = app.add_subcommand("graph", "Print semantic graphs for CoNLL-U input");
  graph_cmd->add_option("--input", graph_input, "CoNLL-U file ('-' = stdin)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*filter_cmd) return cmd_filter(filter, common, *filter_cmd);
    if (*vocab_cmd) return cmd_vocab(vocab, common, *vocab_cmd);
    if (*pseudo_cmd) return cmd_pseudolabel(pseudo, common, *pseudo_cmd);
    if (*train_cmd) return cmd_train_toy(train, common, *train_cmd);
    if (*grad_cmd) return cmd_gradcheck(grad, common, *grad_cmd);
    if (*probe_cmd) return cmd_probe(probe, common, *probe_cmd);
    if (*graph_cmd) return cmd_graph(graph_input);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
