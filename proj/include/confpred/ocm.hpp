#pragma once

#include <map>
#include <string>
#include <vector>

#include "confpred/bag.hpp"
#include "confpred/engine.hpp"
#include "confpred/gaussian.hpp"

namespace confpred {

// the three on-line compression models
enum class ModelKind { exchangeability, within_label, gaussian };

ModelKind model_by_name(const std::string& name);  // "plain" | "within-label" | "gaussian"
std::string model_name(ModelKind kind);

// summary of the exchangeability-within-label model: the label sequence plus
// one bag of objects per label
struct WithinLabelSummary {
  std::vector<std::string> label_seq;
  std::map<std::string, Bag> object_bags;

  void update(const Example& z);
  std::size_t n() const { return label_seq.size(); }
};

// label-conditional classification: scores come from the full mixed bag, but
// each candidate label's p-value counts only the positions carrying that label
ClassifyResult within_label_classify(const std::vector<Example>& old_examples,
                                     const std::vector<double>& x_new,
                                     const std::vector<std::string>& label_space,
                                     const Measure& measure,
                                     const std::vector<double>& epsilons);

// generic one-step conformal prediction under a compression model; the
// exchangeability instance coincides with conformal_classify exactly
ClassifyResult ocm_conformal(ModelKind model, const std::vector<Example>& old_examples,
                             const std::vector<double>& x_new,
                             const std::vector<std::string>& label_space,
                             const Measure& measure, const std::vector<double>& epsilons);

}  // namespace confpred
