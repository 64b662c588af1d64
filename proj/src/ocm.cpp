#include "confpred/ocm.hpp"

#include <algorithm>

#include "confpred/errors.hpp"

namespace confpred {

ModelKind model_by_name(const std::string& name) {
  if (name == "plain" || name == "exchangeability") return ModelKind::exchangeability;
  if (name == "within-label") return ModelKind::within_label;
  if (name == "gaussian") return ModelKind::gaussian;
  throw InputError("unknown model '" + name +
                   "'; known models: plain within-label gaussian");
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::exchangeability: return "plain";
    case ModelKind::within_label: return "within-label";
    case ModelKind::gaussian: return "gaussian";
  }
  return "?";
}

void WithinLabelSummary::update(const Example& z) {
  if (!z.has_cat()) throw ModelError("within-label model requires categorical labels");
  label_seq.push_back(z.cat());
  object_bags[z.cat()].add(Example{z.x, std::nullopt});
}

ClassifyResult within_label_classify(const std::vector<Example>& old_examples,
                                     const std::vector<double>& x_new,
                                     const std::vector<std::string>& label_space,
                                     const Measure& measure,
                                     const std::vector<double>& epsilons) {
  if (label_space.empty()) throw InputError("within_label_classify: empty label space");
  ClassifyResult res;
  std::vector<std::string> labels = label_space;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  for (const auto& lab : labels) {
    std::vector<Example> bag = old_examples;
    bag.push_back(Example::with_cat(x_new, lab));
    PValue p;
    try {
      std::vector<double> scores = measure.score_all(bag);
      const double an = scores.back();
      long long count = 0, total = 0;
      for (std::size_t i = 0; i < bag.size(); ++i) {
        if (bag[i].cat() != lab) continue;
        ++total;
        if (scores[i] >= an) ++count;
      }
      p = PValue{count, total};
    } catch (const MeasureError& e) {
      // failed candidate counts as maximally strange within its label category
      p = PValue{1, 1 + static_cast<long long>(std::count_if(
                        old_examples.begin(), old_examples.end(),
                        [&](const Example& z) { return z.has_cat() && z.cat() == lab; }))};
      res.warnings.push_back("candidate '" + lab + "': " + e.what());
    }
    res.report.candidates.emplace_back(lab, p);
  }

  auto [conf, cred] = confidence_credibility(res.report);
  res.report.confidence = conf;
  res.report.credibility = cred;
  for (double eps : epsilons) {
    LabelSet region = region_from_pvalues(res.report, eps);
    if (region.empty())
      res.warnings.push_back("empty region at epsilon " + std::to_string(eps));
    res.regions.push_back(std::move(region));
  }
  return res;
}

ClassifyResult ocm_conformal(ModelKind model, const std::vector<Example>& old_examples,
                             const std::vector<double>& x_new,
                             const std::vector<std::string>& label_space,
                             const Measure& measure, const std::vector<double>& epsilons) {
  switch (model) {
    case ModelKind::exchangeability:
      return conformal_classify(old_examples, x_new, label_space, measure, epsilons);
    case ModelKind::within_label:
      return within_label_classify(old_examples, x_new, label_space, measure, epsilons);
    case ModelKind::gaussian:
      throw ModelError("ocm_conformal: the Gaussian model predicts real labels; "
                       "use gaussian_linear_interval");
  }
  throw ModelError("unreachable model kind");
}

}  // namespace confpred
