#include "confpred/validity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confpred/errors.hpp"
#include "confpred/rng.hpp"

namespace confpred {

std::string outcome_name(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::singleton_hit: return "singleton-hit";
    case OutcomeClass::singleton_error: return "singleton-error";
    case OutcomeClass::uncertain_hit: return "uncertain-hit";
    case OutcomeClass::uncertain_error: return "uncertain-error";
    case OutcomeClass::empty_error: return "empty-error";
  }
  return "?";
}

OutcomeClass classify_outcome(std::size_t region_size, bool hit) {
  if (region_size == 0) return OutcomeClass::empty_error;
  if (region_size == 1) return hit ? OutcomeClass::singleton_hit : OutcomeClass::singleton_error;
  return hit ? OutcomeClass::uncertain_hit : OutcomeClass::uncertain_error;
}

std::size_t ValidityLedger::warmup_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const StepOutcome& s) { return s.warmup; }));
}

std::size_t ValidityLedger::scored_count() const { return steps.size() - warmup_count(); }

std::size_t ValidityLedger::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      steps.begin(), steps.end(), [](const StepOutcome& s) { return !s.warmup && !s.hit; }));
}

double ValidityLedger::freq() const {
  std::size_t n = scored_count();
  return n == 0 ? 0.0 : static_cast<double>(error_count()) / static_cast<double>(n);
}

double ValidityLedger::freq_label(const std::string& lab) const {
  std::size_t n = 0, errs = 0;
  for (const auto& s : steps) {
    if (s.warmup || s.true_label != lab) continue;
    ++n;
    if (!s.hit) ++errs;
  }
  return n == 0 ? 0.0 : static_cast<double>(errs) / static_cast<double>(n);
}

std::map<OutcomeClass, std::size_t> ValidityLedger::tally() const {
  std::map<OutcomeClass, std::size_t> out;
  for (const auto& s : steps)
    if (!s.warmup) ++out[s.cls];
  return out;
}

std::size_t ValidityLedger::singleton_count() const {
  std::size_t n = 0;
  for (const auto& s : steps)
    if (!s.warmup && s.region_size == 1) ++n;
  return n;
}

double ValidityLedger::empty_share_of_errors() const {
  std::size_t errs = error_count();
  if (errs == 0) return 0.0;
  std::size_t empties = 0;
  for (const auto& s : steps)
    if (!s.warmup && s.cls == OutcomeClass::empty_error) ++empties;
  return static_cast<double>(empties) / static_cast<double>(errs);
}

ValidityLedger online_eval(const std::vector<Example>& stream, const Measure& measure,
                           ModelKind model, double epsilon) {
  ValidityLedger ledger;
  ledger.epsilon = epsilon;
  // label space gathered from the whole stream
  std::vector<std::string> space;
  for (const auto& e : stream) {
    if (!e.has_cat()) throw InputError("online_eval: categorical label streams only");
    if (std::find(space.begin(), space.end(), e.cat()) == space.end())
      space.push_back(e.cat());
  }
  std::sort(space.begin(), space.end());

  std::vector<Example> seen;
  seen.reserve(stream.size());
  for (std::size_t n = 1; n <= stream.size(); ++n) {
    const Example& z = stream[n - 1];
    StepOutcome step;
    step.step = n;
    step.true_label = z.cat();
    if (n <= 2) {
      // warm-up: emit the full label space
      step.warmup = true;
      step.region_size = space.size();
      step.hit = true;
      step.cls = classify_outcome(space.size(), true);
    } else {
      ClassifyResult res = ocm_conformal(model, seen, z.x, space, measure, {epsilon});
      const LabelSet& region = res.regions.front();
      step.region_size = region.size();
      step.hit = region.contains(z.cat());
      step.cls = classify_outcome(region.size(), step.hit);
      step.pvalues = res.report.candidates;
    }
    ledger.steps.push_back(std::move(step));
    seen.push_back(z);
  }
  return ledger;
}

PermutationResult permutation_experiment(const std::vector<Example>& stream,
                                         const Measure& measure, ModelKind model,
                                         double epsilon, std::size_t trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw InputError("permutation_experiment: trials must be >= 1");
  PermutationResult out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Example> order = stream;
    if (t > 0) {
      Rng rng(Rng::mix(seed, t));
      shuffle(order, rng);
    }
    ValidityLedger led = online_eval(order, measure, model, epsilon);
    out.rates.push_back(led.freq());
    out.ledgers.push_back(std::move(led));
  }
  out.mean_rate = std::accumulate(out.rates.begin(), out.rates.end(), 0.0) /
                  static_cast<double>(out.rates.size());
  return out;
}

CapitalTrajectory betting_audit(const std::vector<int>& errors, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ModelError("betting_audit: epsilon must lie strictly in (0, 1/2)");
  if (errors.empty()) throw ModelError("betting_audit: empty error sequence");
  const std::size_t N = errors.size();
  CapitalTrajectory traj;
  traj.epsilon = epsilon;
  traj.capital.assign(N + 1, 0.0);
  traj.stakes.assign(N, 0.0);

  std::vector<double> suffix(N + 1, 0.0);  // suffix[n] = sum_{j>n} (e_j - epsilon)
  for (std::size_t n = N; n-- > 0;)
    suffix[n] = suffix[n + 1] + (static_cast<double>(errors[n]) - epsilon);

  traj.capital[N] = 1.0;
  for (std::size_t n = N; n >= 1; --n) {
    double S = suffix[n];
    double stake = S >= epsilon ? (2.0 / static_cast<double>(N)) * S : 0.0;
    traj.stakes[n - 1] = stake;
    traj.capital[n - 1] =
        traj.capital[n] + stake * (static_cast<double>(errors[n - 1]) - epsilon);
  }
  traj.final_capital = traj.capital[0];
  double total_err = 0;
  for (int e : errors) total_err += static_cast<double>(e);
  traj.freq = N == 0 ? 0.0 : total_err / static_cast<double>(N);

  // deterministic lower bound: capital[n] >= n/N + (S_n^+)^2 / N
  traj.lower_bound_ok = true;
  for (std::size_t n = 0; n <= N; ++n) {
    double Sp = std::max(0.0, suffix[n]);
    double bound = static_cast<double>(n) / static_cast<double>(N) +
                   Sp * Sp / static_cast<double>(N);
    if (traj.capital[n] < bound - 1e-9) {
      traj.lower_bound_ok = false;
      break;
    }
  }
  return traj;
}

bool prop3_bound_holds(const CapitalTrajectory& traj, double delta2) {
  double N = static_cast<double>(traj.capital.size() - 1);
  if (traj.freq < traj.epsilon + delta2) return true;  // hypothesis not triggered
  return traj.final_capital >= N * delta2 * delta2 - 1e-9;
}

Lemma1Result lemma1_strangeness_check(const std::vector<double>& values, double epsilon,
                                      const RealEngine& engine) {
  Lemma1Result out;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> rest;
    rest.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) rest.push_back(values[j]);
    RealRegion region = engine(rest, epsilon);
    // membership at a closed boundary is inclusive; allow for the endpoint
    // double being a few ulps away from the data value
    double tol = 1e-9 * std::max(1.0, std::fabs(values[i]));
    if (!region.contains(values[i], tol)) ++out.strange_count;
  }
  out.bound = epsilon * static_cast<double>(n);
  out.pass = static_cast<double>(out.strange_count) <= out.bound + 1e-12;
  return out;
}

Lemma1Result lemma1_strangeness_check(const std::vector<double>& values, double epsilon) {
  return lemma1_strangeness_check(values, epsilon, [](const std::vector<double>& v, double e) {
    return conformal_old_examples(v, e);
  });
}

}  // namespace confpred
