#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "confpred/engine.hpp"
#include "confpred/ocm.hpp"
#include "confpred/region.hpp"

namespace confpred {

// five-way step taxonomy by region size class and hit; empty regions are
// always errors, so there is no empty-hit category
enum class OutcomeClass {
  singleton_hit,
  singleton_error,
  uncertain_hit,
  uncertain_error,
  empty_error,
};

std::string outcome_name(OutcomeClass c);
OutcomeClass classify_outcome(std::size_t region_size, bool hit);

struct StepOutcome {
  std::size_t step = 0;  // 1-based position in the stream
  bool warmup = false;   // fewer than 2 prior examples: full space emitted
  OutcomeClass cls = OutcomeClass::uncertain_hit;
  bool hit = true;
  std::size_t region_size = 0;
  std::string true_label;
  std::vector<std::pair<std::string, PValue>> pvalues;
};

struct ValidityLedger {
  std::vector<StepOutcome> steps;
  double epsilon = 0;

  std::size_t warmup_count() const;
  std::size_t scored_count() const;           // steps excluding warm-up
  std::size_t error_count() const;            // errors excluding warm-up
  double freq() const;                        // error rate excluding warm-up
  double freq_label(const std::string& lab) const;
  std::map<OutcomeClass, std::size_t> tally() const;  // excluding warm-up
  std::size_t singleton_count() const;
  double empty_share_of_errors() const;
};

// successive prediction over an ordered stream: predict each label from the
// prior examples, then reveal; steps 1 and 2 emit the full label space and are
// flagged warm-up, excluded from the rate aggregates
ValidityLedger online_eval(const std::vector<Example>& stream, const Measure& measure,
                           ModelKind model, double epsilon);

struct PermutationResult {
  std::vector<ValidityLedger> ledgers;  // trial 0 is the identity order
  std::vector<double> rates;            // per-trial error rates
  double mean_rate = 0;
};

// rerun online_eval over seeded shuffles; trial 0 keeps the original order
PermutationResult permutation_experiment(const std::vector<Example>& stream,
                                         const Measure& measure, ModelKind model,
                                         double epsilon, std::size_t trials,
                                         std::uint64_t seed);

// backward betting audit of an error sequence: starting from capital 1 at the
// far end, stake (2/N) * S_n on step n at price epsilon whenever the suffix
// sum S_n = sum_{j>n} (e_j - epsilon) is at least epsilon
struct CapitalTrajectory {
  std::vector<double> capital;  // capital[n] after settling steps n+1..N
  std::vector<double> stakes;   // stakes[n-1] wagered on step n
  double epsilon = 0;
  double final_capital = 0;     // capital[0]
  double freq = 0;              // error frequency of the sequence
  bool lower_bound_ok = true;   // capital[n] >= n/N + (S_n^+)^2 / N at every n
};

CapitalTrajectory betting_audit(const std::vector<int>& errors, double epsilon);

// capital certificate from an observed frequency excess delta2:
// freq >= epsilon + delta2 forces final capital >= N * delta2^2
bool prop3_bound_holds(const CapitalTrajectory& traj, double delta2);

struct Lemma1Result {
  long long strange_count = 0;
  double bound = 0;  // n * epsilon
  bool pass = false;
};

// count the bag elements falling outside the region predicted from the rest
using RealEngine = std::function<RealRegion(const std::vector<double>&, double)>;
Lemma1Result lemma1_strangeness_check(const std::vector<double>& values, double epsilon,
                                      const RealEngine& engine);
Lemma1Result lemma1_strangeness_check(const std::vector<double>& values, double epsilon);

}  // namespace confpred
