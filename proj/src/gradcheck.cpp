#include "vlcurate/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vlcurate/synthetic.hpp"

namespace vlcurate {

namespace {

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Matrix unflatten(std::span<const double> v, Eigen::Index rows, Eigen::Index cols,
                 std::size_t offset = 0) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[offset++];
  }
  return m;
}

std::vector<double> maybe_flip(std::vector<double> g, bool flip) {
  if (flip) {
    for (double& v : g) v = -v;
  }
  return g;
}

GradCheckEntry entry(std::string block, std::optional<double> alpha,
                     std::optional<double> beta, WeightGradient mode, double err,
                     double tolerance) {
  return {std::move(block), alpha, beta, mode, err, err < tolerance};
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kRelErrorFloor});
  return std::abs(analytic - numeric) / scale;
}

double max_fd_error(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> x, std::span<const double> analytic,
                    double step) {
  if (x.size() != analytic.size()) throw InputError("gradient size mismatch");
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + step;
    const double up = f(probe);
    probe[i] = saved - step;
    const double down = f(probe);
    probe[i] = saved;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * step)));
  }
  return worst;
}

std::vector<GradCheckEntry> run_gradcheck(const GradCheckOptions& options) {
  Rng rng(options.seed);
  const Eigen::Index n = options.n;
  const Eigen::Index d = options.d;
  EmbeddingBatch batch{random_unit_rows(n, d, rng), random_unit_rows(n, d, rng), options.tau};
  // Pull positives together a little so the positive terms are not negligible.
  batch.texts = (batch.texts + 0.5 * batch.images).rowwise().normalized();
  const bool flip = options.inject_sign_flip;
  const double tol = options.tolerance;

  std::vector<GradCheckEntry> out;
  std::vector<WeightGradient> modes = {WeightGradient::kStop};
  if (options.include_full_gradient) modes.push_back(WeightGradient::kFull);

  for (WeightGradient mode : modes) {
    for (double alpha : options.alphas) {
      for (double beta : options.betas) {
        const HnConfig cfg{alpha, beta};
        LossOptions lo;
        lo.weight_gradient = mode;
        const LossResult r = hn_nce_loss(batch, cfg, lo);
        // Stop-gradient treats the weights as constants of the base point.
        const HardNegativeWeights frozen = hn_weights(similarity_matrix(batch), beta);
        LossOptions raw = lo;
        raw.check_batch = false;
        auto value = [&](const Matrix& x, const Matrix& t, double tau) {
          if (mode == WeightGradient::kStop) {
            return hn_nce_loss_fixed_weights(x, t, tau, alpha, frozen);
          }
          return hn_nce_loss(EmbeddingBatch{x, t, tau}, cfg, raw).loss;
        };

        const auto fx = [&](std::span<const double> v) {
          return value(unflatten(v, n, d), batch.texts, batch.tau);
        };
        const auto ft = [&](std::span<const double> v) {
          return value(batch.images, unflatten(v, n, d), batch.tau);
        };
        const auto ftau = [&](std::span<const double> v) {
          return value(batch.images, batch.texts, v[0]);
        };
        const std::vector<double> tau0 = {batch.tau};
        out.push_back(entry("images", alpha, beta, mode,
                            max_fd_error(fx, flatten(batch.images),
                                         maybe_flip(flatten(r.grad_images), flip),
                                         options.step),
                            tol));
        out.push_back(entry("texts", alpha, beta, mode,
                            max_fd_error(ft, flatten(batch.texts),
                                         maybe_flip(flatten(r.grad_texts), flip),
                                         options.step),
                            tol));
        out.push_back(entry("tau", alpha, beta, mode,
                            max_fd_error(ftau, tau0, maybe_flip({r.grad_tau}, flip),
                                         options.step),
                            tol));
      }
    }
  }

  // Pseudo-label cross-entropy on its own.
  const Eigen::Index classes = 12;
  const Matrix logits = random_gaussian(1, classes, 2.0, rng);
  std::vector<double> teacher = flatten(random_gaussian(1, classes, 1.0, rng));
  for (double& v : teacher) v = std::exp(v);
  const PseudoLabel label = topk_sparsify(teacher, 5);
  const CeResult ce = ce_pseudo_loss(flatten(logits), label);
  out.push_back(entry(
      "ce_logits", std::nullopt, std::nullopt, WeightGradient::kStop,
      max_fd_error([&](std::span<const double> z) { return ce_pseudo_loss(z, label).loss; },
                   flatten(logits), maybe_flip(ce.grad, flip), options.step),
      tol));

  // Combined objective over the concatenated (images, texts, tau, object
  // logits, attribute logits) vector.
  const Eigen::Index obj_classes = 7;
  const Eigen::Index attr_classes = 4;
  ClassifierTerm objects{random_gaussian(n, obj_classes, 1.0, rng), {}};
  ClassifierTerm attributes{random_gaussian(n, attr_classes, 1.0, rng), {}};
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> p = flatten(random_gaussian(1, obj_classes, 1.0, rng).array().exp().matrix());
    objects.labels.push_back(topk_sparsify(p, 3));
    std::vector<double> q = flatten(random_gaussian(1, attr_classes, 1.0, rng).array().exp().matrix());
    // Leave one row unlabelled to exercise the disabled-row path.
    attributes.labels.push_back(i == 0 ? std::nullopt
                                       : std::optional<PseudoLabel>(topk_sparsify(q, 2)));
  }
  const HnConfig cfg = HnConfig::small_clean();
  const ObjectiveResult total = total_objective(batch, cfg, objects, attributes);
  const HardNegativeWeights frozen = hn_weights(similarity_matrix(batch), cfg.beta);

  std::vector<double> params = flatten(batch.images);
  const std::vector<double> t_flat = flatten(batch.texts);
  params.insert(params.end(), t_flat.begin(), t_flat.end());
  params.push_back(batch.tau);
  const std::vector<double> o_flat = flatten(objects.logits);
  params.insert(params.end(), o_flat.begin(), o_flat.end());
  const std::vector<double> a_flat = flatten(attributes.logits);
  params.insert(params.end(), a_flat.begin(), a_flat.end());

  std::vector<double> grad = flatten(total.grad_images);
  const std::vector<double> gt = flatten(total.grad_texts);
  grad.insert(grad.end(), gt.begin(), gt.end());
  grad.push_back(total.grad_tau);
  const std::vector<double> go = flatten(total.grad_object_logits);
  grad.insert(grad.end(), go.begin(), go.end());
  const std::vector<double> ga = flatten(total.grad_attribute_logits);
  grad.insert(grad.end(), ga.begin(), ga.end());

  const auto f_total = [&](std::span<const double> v) {
    const std::size_t block = static_cast<std::size_t>(n * d);
    const Matrix x = unflatten(v, n, d, 0);
    const Matrix t = unflatten(v, n, d, block);
    const double tau = v[2 * block];
    ClassifierTerm o{unflatten(v, n, obj_classes, 2 * block + 1), objects.labels};
    ClassifierTerm a{unflatten(v, n, attr_classes,
                               2 * block + 1 + static_cast<std::size_t>(n * obj_classes)),
                     attributes.labels};
    Matrix unused;
    return hn_nce_loss_fixed_weights(x, t, tau, cfg.alpha, frozen) +
           pseudo_label_ce(o, n, unused) + pseudo_label_ce(a, n, unused);
  };
  out.push_back(entry("objective", cfg.alpha, cfg.beta, WeightGradient::kStop,
                      max_fd_error(f_total, params, maybe_flip(grad, flip), options.step),
                      tol));
  return out;
}

bool all_passed(const std::vector<GradCheckEntry>& entries) {
  return std::all_of(entries.begin(), entries.end(),
                     [](const GradCheckEntry& e) { return e.pass; });
}

void write_gradcheck_report(std::ostream& out, const std::vector<GradCheckEntry>& entries) {
  auto num = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", *v);
    return std::string(buf);
  };
  out << "block\talpha\tbeta\tweights\tmax_rel_err\tstatus\n";
  for (const auto& e : entries) {
    char err[32];
    std::snprintf(err, sizeof(err), "%.3e", e.max_rel_error);
    out << e.block << '\t' << num(e.alpha) << '\t' << num(e.beta) << '\t'
        << (e.mode == WeightGradient::kStop ? "stop" : "full") << '\t' << err << '\t'
        << (e.pass ? "pass" : "FAIL") << '\n';
  }
}

}  // namespace vlcurate
