#include "confpred/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "confpred/dataset.hpp"
#include "confpred/engine.hpp"
#include "confpred/errors.hpp"
#include "confpred/fixtures.hpp"
#include "confpred/gaussian.hpp"
#include "confpred/measures.hpp"
#include "confpred/ocm.hpp"
#include "confpred/report.hpp"
#include "confpred/rng.hpp"
#include "confpred/tdist.hpp"
#include "confpred/validity.hpp"

namespace confpred {
namespace {

using nlohmann::json;

struct Opts {
  std::string data_path;
  std::string measure;
  std::string model = "plain";
  std::vector<double> epsilons;
  double grid = -1.0;  // negative = take the dataset metadata
  std::string label_column;
  std::vector<std::string> features;
  std::string format = "table";
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  std::string curves_path;
  std::string target;  // replicate study name
};

bool json_mode(const Opts& o) { return o.format == "json-lines"; }

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return std::string(buf);
}

std::string resolve_label(const Dataset& d, const Opts& o) {
  if (!o.label_column.empty()) return o.label_column;
  if (!d.label_column.empty()) return d.label_column;
  throw InputError(d.name + ": no --label-column given and none set in the metadata");
}

double resolve_grid(const Dataset& d, const Opts& o) {
  if (o.grid >= 0.0) return o.grid;
  return d.has_grid() ? d.grid_step : 0.0;
}

std::vector<double> resolve_eps(const Opts& o, double fallback = 0.05) {
  std::vector<double> eps = o.epsilons;
  if (eps.empty()) eps.push_back(fallback);
  for (double e : eps)
    if (!(e >= 0.0 && e <= 1.0)) throw InputError("epsilon must lie in [0, 1]");
  return eps;
}

std::vector<std::string> label_space_of(const std::vector<Example>& all,
                                        const std::string& dataset_name) {
  std::set<std::string> labs;
  for (const auto& e : all) {
    if (!e.has_cat())
      throw InputError(dataset_name + ": labels must be categorical here; " +
                       "set label_kind or pick another label column");
    labs.insert(e.cat());
  }
  return {labs.begin(), labs.end()};
}

void print_header(std::ostream& out, const std::string& command, const Dataset& d) {
  out << "command: " << command << "\n";
  out << "data: " << d.name << " (" << d.rows.size() << " rows)\n";
}

// ---- predict-class ----

int cmd_predict_class(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto examples = to_examples(d, lab, o.features);
  if (examples.size() < 2) throw InputError(d.name + ": need at least 2 rows");
  auto eps = resolve_eps(o);

  Example target = examples.back();
  std::vector<Example> old(examples.begin(), examples.end() - 1);
  auto space = label_space_of(examples, d.name);

  ModelKind kind = model_by_name(o.model);
  if (kind == ModelKind::gaussian)
    throw InputError("the gaussian model predicts real labels; use the gaussian command");
  Measure measure = Measure::by_name(o.measure.empty() ? "knn-ratio" : o.measure);

  auto res = ocm_conformal(kind, old, target.x, space, measure, eps);
  auto [conf, cred] = confidence_credibility(res.report);
  const std::string actual = target.has_cat() ? target.cat() : label_str(*target.y);

  if (json_mode(o)) {
    json rec;
    rec["command"] = "predict-class";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["measure"] = measure.name();
    rec["model"] = model_name(kind);
    rec["actual"] = actual;
    json pv = json::array();
    for (const auto& [l, p] : res.report.candidates)
      pv.push_back({{"label", l}, {"count", p.count}, {"total", p.total}});
    rec["p_values"] = pv;
    rec["confidence"] = conf;
    rec["credibility"] = cred;
    json regs = json::array();
    for (std::size_t i = 0; i < eps.size(); ++i)
      regs.push_back({{"epsilon", eps[i]},
                      {"labels", res.regions[i].labels},
                      {"hit", res.regions[i].contains(actual)}});
    rec["regions"] = regs;
    rec["warnings"] = res.warnings;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "predict-class", d);
  out << "measure: " << measure.name() << "\n";
  out << "model: " << model_name(kind) << "\n";
  for (const auto& w : res.warnings) out << "warning: " << w << "\n";
  for (const auto& [l, p] : res.report.candidates)
    out << "p-value " << l << ": " << pvalue_str(p) << "\n";
  out << "confidence: " << fmt_fixed(conf, 2) << "\n";
  out << "credibility: " << fmt_fixed(cred, 2) << "\n";
  for (std::size_t i = 0; i < eps.size(); ++i)
    out << "region at epsilon " << fmt_g(eps[i]) << ": " << label_set_str(res.regions[i])
        << " (actual " << actual << ": "
        << (res.regions[i].contains(actual) ? "hit" : "miss") << ")\n";
  return 0;
}

// ---- regression helpers ----

void print_real_region(std::ostream& out, const RealRegion& region, double eps,
                       double grid, double origin, const Label& actual) {
  const std::string actual_s = label_str(actual);
  bool hit = !region.empty() && region.contains(std::get<double>(actual));
  out << "region at epsilon " << fmt_g(eps) << ": " << region_str(region, 2) << " (actual "
      << actual_s << ": " << (hit ? "hit" : "miss") << ")\n";
  if (region.has_gaps())
    out << "gaps at epsilon " << fmt_g(eps) << ": yes (hull " << interval_str(region.hull(), 2)
        << ")\n";
  if (grid > 0.0 && !region.empty()) {
    RealRegion snapped = grid_snap(region, grid, origin);
    out << "grid region at epsilon " << fmt_g(eps) << ": "
        << region_str(snapped, grid_decimals(grid)) << "\n";
  }
}

json region_record(const RealRegion& region, double eps, double grid, double origin,
                   double actual) {
  json parts = json::array();
  for (const auto& iv : region.parts()) parts.push_back({iv.lo, iv.hi});
  json rec = {{"epsilon", eps},
              {"parts", parts},
              {"gaps", region.has_gaps()},
              {"hit", !region.empty() && region.contains(actual)}};
  if (grid > 0.0 && !region.empty()) {
    json gparts = json::array();
    for (const auto& iv : grid_snap(region, grid, origin).parts())
      gparts.push_back({iv.lo, iv.hi});
    rec["grid_parts"] = gparts;
  }
  return rec;
}

// ---- predict-reg ----

int cmd_predict_reg(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto examples = to_examples(d, lab, o.features);
  if (examples.size() < 2) throw InputError(d.name + ": need at least 2 rows");
  for (const auto& e : examples)
    if (!e.has_real())
      throw InputError(d.name + ": column \"" + lab + "\" must be real-valued here");
  auto eps = resolve_eps(o);
  double grid = resolve_grid(d, o);

  Example target = examples.back();
  std::vector<Example> old(examples.begin(), examples.end() - 1);

  std::string mname = o.measure.empty() ? "least-squares" : o.measure;
  AffineScoreForm fam;
  if (mname == "least-squares") {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& e : old) {
      xs.push_back(e.x);
      ys.push_back(e.real());
    }
    xs.push_back(target.x);
    fam = least_squares_affine(xs, ys);
  } else if (mname == "knn-reg") {
    fam = nn_regression_family(old, target.x);
  } else {
    throw InputError("predict-reg supports measures least-squares and knn-reg");
  }

  auto regions = conformal_regress_exact(fam, eps);
  double point = fam.c.back() > 0.0 ? -fam.d.back() / fam.c.back() : 0.0;
  bool have_point = fam.c.back() > 0.0;

  if (json_mode(o)) {
    json rec;
    rec["command"] = "predict-reg";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["measure"] = mname;
    rec["actual"] = target.real();
    if (have_point) rec["point"] = point;
    json regs = json::array();
    for (std::size_t i = 0; i < eps.size(); ++i)
      regs.push_back(region_record(regions[i], eps[i], grid, d.grid_origin, target.real()));
    rec["regions"] = regs;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "predict-reg", d);
  out << "measure: " << mname << "\n";
  if (have_point) out << "point prediction: " << fmt_fixed(point, 2) << "\n";
  for (std::size_t i = 0; i < eps.size(); ++i)
    print_real_region(out, regions[i], eps[i], grid, d.grid_origin, *target.y);
  return 0;
}

// ---- predict-old ----

int cmd_predict_old(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  if (!o.measure.empty() && o.measure != "average")
    throw InputError("predict-old supports the average measure only");
  auto values = numeric_column(d, lab);
  if (values.size() < 3) throw InputError(d.name + ": need at least 3 rows");
  auto eps = resolve_eps(o);
  double grid = resolve_grid(d, o);

  double actual = values.back();
  std::vector<double> old(values.begin(), values.end() - 1);
  double mean = 0;
  for (double v : old) mean += v;
  mean /= static_cast<double>(old.size());

  if (json_mode(o)) {
    json rec;
    rec["command"] = "predict-old";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["measure"] = "average";
    rec["actual"] = actual;
    rec["previous_mean"] = mean;
    json regs = json::array();
    for (double e : eps)
      regs.push_back(
          region_record(conformal_old_examples(old, e), e, grid, d.grid_origin, actual));
    rec["regions"] = regs;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "predict-old", d);
  out << "measure: average\n";
  out << "previous mean: " << fmt_fixed(mean, 2) << "\n";
  for (double e : eps)
    print_real_region(out, conformal_old_examples(old, e), e, grid, d.grid_origin,
                      Label{actual});
  return 0;
}

// ---- fisher ----

int cmd_fisher(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto values = numeric_column(d, lab);
  if (values.size() < 2) throw InputError(d.name + ": need at least 2 rows");
  auto eps = resolve_eps(o);
  double grid = resolve_grid(d, o);

  double actual = values.back();
  std::vector<double> old(values.begin(), values.end() - 1);

  if (json_mode(o)) {
    json rec;
    rec["command"] = "fisher";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["actual"] = actual;
    json regs = json::array();
    for (double e : eps) {
      auto res = fisher_interval(old, e);
      json r = region_record(RealRegion({res.interval}), e, grid, d.grid_origin, actual);
      r["center"] = res.center;
      r["half_width"] = res.half_width;
      r["scale"] = res.s;
      r["warnings"] = res.warnings;
      regs.push_back(r);
    }
    rec["regions"] = regs;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "fisher", d);
  bool first = true;
  for (double e : eps) {
    auto res = fisher_interval(old, e);
    if (first) {
      out << "center: " << fmt_fixed(res.center, 2) << "\n";
      out << "scale: " << fmt_fixed(res.s, 2) << "\n";
      first = false;
    }
    for (const auto& w : res.warnings) out << "warning: " << w << "\n";
    out << "half width at epsilon " << fmt_g(e) << ": " << fmt_fixed(res.half_width, 2)
        << "\n";
    print_real_region(out, RealRegion({res.interval}), e, grid, d.grid_origin,
                      Label{actual});
  }
  return 0;
}

// ---- gaussian ----

int cmd_gaussian(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto examples = to_examples(d, lab, o.features);
  if (examples.size() < 2) throw InputError(d.name + ": need at least 2 rows");
  for (const auto& e : examples)
    if (!e.has_real())
      throw InputError(d.name + ": column \"" + lab + "\" must be real-valued here");
  auto eps = resolve_eps(o);
  double grid = resolve_grid(d, o);

  Example target = examples.back();
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i + 1 < examples.size(); ++i) {
    std::vector<double> row{1.0};
    for (double v : examples[i].x) row.push_back(v);
    xs.push_back(std::move(row));
    ys.push_back(examples[i].real());
  }
  std::vector<double> x_new{1.0};
  for (double v : target.x) x_new.push_back(v);

  if (json_mode(o)) {
    json rec;
    rec["command"] = "gaussian";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["actual"] = target.real();
    json regs = json::array();
    for (double e : eps) {
      auto res = gaussian_linear_interval(xs, ys, x_new, e);
      json r = region_record(RealRegion({res.interval}), e, grid, d.grid_origin,
                             target.real());
      r["center"] = res.center;
      r["half_width"] = res.half_width;
      r["scale"] = res.s;
      r["leverage"] = res.leverage;
      r["warnings"] = res.warnings;
      regs.push_back(r);
    }
    rec["regions"] = regs;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "gaussian", d);
  bool first = true;
  for (double e : eps) {
    auto res = gaussian_linear_interval(xs, ys, x_new, e);
    if (first) {
      out << "center: " << fmt_fixed(res.center, 2) << "\n";
      out << "scale: " << fmt_fixed(res.s, 2) << "\n";
      out << "leverage: " << fmt_fixed(res.leverage, 4) << "\n";
      first = false;
    }
    for (const auto& w : res.warnings) out << "warning: " << w << "\n";
    out << "half width at epsilon " << fmt_g(e) << ": " << fmt_fixed(res.half_width, 2)
        << "\n";
    print_real_region(out, RealRegion({res.interval}), e, grid, d.grid_origin,
                      Label{target.real()});
  }
  return 0;
}

// ---- evaluate ----

int cmd_evaluate(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto stream = to_examples(d, lab, o.features);
  label_space_of(stream, d.name);  // validate categorical labels
  auto eps = resolve_eps(o);
  if (eps.size() != 1) throw InputError("evaluate takes a single epsilon");
  Measure measure = Measure::by_name(o.measure.empty() ? "knn-ratio" : o.measure);
  ModelKind kind = model_by_name(o.model);

  auto ledger = online_eval(stream, measure, kind, eps[0]);

  if (json_mode(o)) {
    for (const auto& s : ledger.steps) {
      json rec;
      rec["command"] = "evaluate-step";
      rec["step"] = s.step;
      rec["warmup"] = s.warmup;
      rec["actual"] = s.true_label;
      rec["region_size"] = s.region_size;
      rec["hit"] = s.hit;
      rec["outcome"] = outcome_name(s.cls);
      out << rec.dump() << "\n";
    }
    json rec;
    rec["command"] = "evaluate";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["measure"] = measure.name();
    rec["model"] = model_name(kind);
    rec["epsilon"] = eps[0];
    rec["warmup"] = ledger.warmup_count();
    rec["scored"] = ledger.scored_count();
    rec["errors"] = ledger.error_count();
    rec["rate"] = ledger.freq();
    json tally;
    for (const auto& [cls, n] : ledger.tally()) tally[outcome_name(cls)] = n;
    rec["tally"] = tally;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "evaluate", d);
  out << "measure: " << measure.name() << "\n";
  out << "model: " << model_name(kind) << "\n";
  out << "epsilon: " << fmt_g(eps[0]) << "\n";
  for (const auto& s : ledger.steps) {
    if (s.warmup) {
      out << "step " << s.step << ": warm-up (full label space)\n";
    } else {
      out << "step " << s.step << ": size " << s.region_size << " actual " << s.true_label
          << " " << outcome_name(s.cls) << "\n";
    }
  }
  out << "steps: " << ledger.steps.size() << " (" << ledger.warmup_count() << " warm-up)\n";
  PValue err{static_cast<long long>(ledger.error_count()),
             static_cast<long long>(ledger.scored_count())};
  out << "errors: " << pvalue_str(err) << "\n";
  for (const auto& [cls, n] : ledger.tally())
    out << "outcome " << outcome_name(cls) << ": " << n << "\n";
  return 0;
}

// ---- permute ----

int cmd_permute(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = resolve_label(d, o);
  auto stream = to_examples(d, lab, o.features);
  label_space_of(stream, d.name);
  auto eps = resolve_eps(o);
  if (eps.size() != 1) throw InputError("permute takes a single epsilon");
  if (o.trials == 0) throw InputError("trials must be positive");
  Measure measure = Measure::by_name(o.measure.empty() ? "knn-ratio" : o.measure);
  ModelKind kind = model_by_name(o.model);

  auto res = permutation_experiment(stream, measure, kind, eps[0], o.trials, o.seed);

  if (!o.curves_path.empty()) {
    std::ofstream f(o.curves_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + o.curves_path);
    f << "trial,step,cumulative_errors\n";
    for (std::size_t t = 0; t < res.ledgers.size(); ++t) {
      std::size_t cum = 0;
      for (const auto& s : res.ledgers[t].steps) {
        if (!s.warmup && !s.hit) ++cum;
        f << t << "," << s.step << "," << cum << "\n";
      }
    }
  }

  if (json_mode(o)) {
    for (std::size_t t = 0; t < res.rates.size(); ++t) {
      json rec;
      rec["command"] = "permute-trial";
      rec["trial"] = t;
      rec["rate"] = res.rates[t];
      rec["errors"] = res.ledgers[t].error_count();
      out << rec.dump() << "\n";
    }
    json rec;
    rec["command"] = "permute";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["measure"] = measure.name();
    rec["model"] = model_name(kind);
    rec["epsilon"] = eps[0];
    rec["trials"] = o.trials;
    rec["seed"] = o.seed;
    rec["mean_rate"] = res.mean_rate;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "permute", d);
  out << "measure: " << measure.name() << "\n";
  out << "model: " << model_name(kind) << "\n";
  out << "epsilon: " << fmt_g(eps[0]) << "\n";
  out << "trials: " << o.trials << "\n";
  out << "seed: " << o.seed << "\n";
  for (std::size_t t = 0; t < res.rates.size(); ++t)
    out << "trial " << t << " rate: " << fmt_fixed(res.rates[t], 4) << "\n";
  out << "mean rate: " << fmt_fixed(res.mean_rate, 4) << "\n";
  if (!o.curves_path.empty()) out << "curves written: " << o.curves_path << "\n";
  return 0;
}

// ---- bet-audit ----

int cmd_bet_audit(const Opts& o, std::ostream& out) {
  Dataset d = ingest(o.data_path);
  std::string lab = o.label_column.empty()
                        ? (d.label_column.empty() && d.columns.size() == 1 ? d.columns[0]
                                                                          : resolve_label(d, o))
                        : o.label_column;
  std::size_t c = column_index(d, lab);
  std::vector<int> errors;
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const std::string& cell = d.rows[r][c];
    if (cell == "0")
      errors.push_back(0);
    else if (cell == "1")
      errors.push_back(1);
    else
      throw InputError(d.name + ": row " + std::to_string(r + 2) + " column \"" + lab +
                       "\": \"" + cell + "\" is not 0 or 1");
  }
  auto eps = resolve_eps(o);
  if (eps.size() != 1) throw InputError("bet-audit takes a single epsilon");

  auto traj = betting_audit(errors, eps[0]);

  if (json_mode(o)) {
    for (std::size_t n = 1; n <= errors.size(); ++n) {
      json rec;
      rec["command"] = "bet-audit-step";
      rec["step"] = n;
      rec["error"] = errors[n - 1];
      rec["stake"] = traj.stakes[n - 1];
      rec["capital"] = traj.capital[n - 1];
      out << rec.dump() << "\n";
    }
    json rec;
    rec["command"] = "bet-audit";
    rec["data"] = d.name;
    rec["rows"] = d.rows.size();
    rec["epsilon"] = eps[0];
    rec["frequency"] = traj.freq;
    rec["final_capital"] = traj.final_capital;
    rec["lower_bound_ok"] = traj.lower_bound_ok;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "bet-audit", d);
  out << "epsilon: " << fmt_g(eps[0]) << "\n";
  out << "steps: " << errors.size() << "\n";
  out << "error frequency: " << fmt_fixed(traj.freq, 4) << "\n";
  out << "final capital: " << fmt_fixed(traj.final_capital, 2) << "\n";
  out << "lower bound check: " << (traj.lower_bound_ok ? "ok" : "violated") << "\n";
  return 0;
}

// ---- replicate ----

const std::vector<std::string> kClassMeasures = {"knn-ratio", "label-mean", "band"};

int replicate_czuber_fisher(const Opts& o, std::ostream& out) {
  Dataset d = fixture_czuber();
  auto values = numeric_column(d, "z");
  double actual = values.back();
  std::vector<double> old(values.begin(), values.end() - 1);
  auto res = fisher_interval(old, 0.05);
  double tq = t_quantile(static_cast<double>(old.size() - 1), 0.025);

  if (json_mode(o)) {
    json rec;
    rec["command"] = "replicate";
    rec["target"] = "czuber-fisher";
    rec["data"] = d.name;
    rec["center"] = res.center;
    rec["scale"] = res.s;
    rec["t_quantile"] = tq;
    rec["interval"] = {res.interval.lo, res.interval.hi};
    auto g = grid_snap(RealRegion({res.interval}), 1.0).hull();
    rec["grid_interval"] = {g.lo, g.hi};
    rec["actual"] = actual;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "replicate czuber-fisher", d);
  out << "previous mean: " << fmt_fixed(res.center, 2) << "\n";
  out << "previous scale: " << fmt_fixed(res.s, 2) << "\n";
  out << "t quantile (18 df, 0.025 tail): " << fmt_fixed(tq, 2) << "\n";
  print_real_region(out, RealRegion({res.interval}), 0.05, 1.0, 0.0, Label{actual});
  return 0;
}

int replicate_czuber_conformal(const Opts& o, std::ostream& out) {
  Dataset d = fixture_czuber();
  auto values = numeric_column(d, "z");
  double actual = values.back();
  std::vector<double> old(values.begin(), values.end() - 1);
  RealRegion region = conformal_old_examples(old, 0.05);

  if (json_mode(o)) {
    json rec;
    rec["command"] = "replicate";
    rec["target"] = "czuber-conformal";
    rec["data"] = d.name;
    rec["measure"] = "average";
    json parts = json::array();
    for (const auto& iv : region.parts()) parts.push_back({iv.lo, iv.hi});
    rec["parts"] = parts;
    json gparts = json::array();
    for (const auto& iv : grid_snap(region, 1.0).parts()) gparts.push_back({iv.lo, iv.hi});
    rec["grid_parts"] = gparts;
    rec["actual"] = actual;
    out << rec.dump() << "\n";
    return 0;
  }

  print_header(out, "replicate czuber-conformal", d);
  out << "measure: average\n";
  print_real_region(out, region, 0.05, 1.0, 0.0, Label{actual});
  return 0;
}

int replicate_iris_class(const Opts& o, std::ostream& out) {
  Dataset d = fixture_iris25();
  auto examples = to_examples(d, "species", {"sepal_length"});
  Example target = examples.back();
  std::vector<Example> old(examples.begin(), examples.end() - 1);
  auto space = label_space_of(examples, d.name);
  const double eps = 0.08;

  if (!json_mode(o)) print_header(out, "replicate iris-class", d);
  for (const auto& mname : kClassMeasures) {
    Measure m = Measure::by_name(mname);
    auto res = conformal_classify(old, target.x, space, m, {eps});
    auto [conf, cred] = confidence_credibility(res.report);
    if (json_mode(o)) {
      json rec;
      rec["command"] = "replicate";
      rec["target"] = "iris-class";
      rec["measure"] = mname;
      json pv = json::array();
      for (const auto& [l, p] : res.report.candidates)
        pv.push_back({{"label", l}, {"count", p.count}, {"total", p.total}});
      rec["p_values"] = pv;
      rec["confidence"] = conf;
      rec["credibility"] = cred;
      rec["epsilon"] = eps;
      rec["labels"] = res.regions[0].labels;
      rec["actual"] = target.cat();
      out << rec.dump() << "\n";
    } else {
      out << "measure " << mname << ":";
      for (const auto& [l, p] : res.report.candidates)
        out << " p " << l << " " << pvalue_str(p) << ",";
      out << " confidence " << fmt_fixed(conf, 2) << ", credibility " << fmt_fixed(cred, 2)
          << ", region at 0.08 " << label_set_str(res.regions[0]) << "\n";
    }
  }
  if (!json_mode(o)) out << "actual: " << target.cat() << "\n";
  return 0;
}

int replicate_iris_reg(const Opts& o, std::ostream& out) {
  Dataset d = fixture_iris25();
  auto examples = to_examples(d, "petal_width", {"sepal_length"});
  Example target = examples.back();
  std::vector<Example> old(examples.begin(), examples.end() - 1);
  const std::vector<double> eps = {0.04, 0.08};
  const double grid = 0.1;

  std::vector<std::vector<double>> xs1, xs;
  std::vector<double> ys;
  for (const auto& e : old) {
    xs1.push_back({1.0, e.x[0]});
    xs.push_back(e.x);
    ys.push_back(e.real());
  }
  xs.push_back(target.x);
  auto fam_ls = least_squares_affine(xs, ys);
  auto fam_nn = nn_regression_family(old, target.x);

  json lines = json::array();
  if (!json_mode(o)) {
    print_header(out, "replicate iris-reg", d);
  }

  // old-only straight-line fit reported for reference
  auto fit = gaussian_linear_interval(xs1, ys, {1.0, target.x[0]}, 0.04);
  double slope =
      (gaussian_linear_interval(xs1, ys, {1.0, target.x[0] + 1.0}, 0.04).center - fit.center);
  double intercept = fit.center - slope * target.x[0];
  double s2 = fit.s * fit.s;

  if (!json_mode(o)) {
    out << "intercept: " << fmt_fixed(intercept, 2) << "\n";
    out << "slope: " << fmt_fixed(slope, 2) << "\n";
    out << "residual variance: " << fmt_fixed(s2, 4) << "\n";
  }

  auto emit_region = [&](const std::string& method, double e, const RealRegion& region) {
    if (json_mode(o)) {
      json rec;
      rec["command"] = "replicate";
      rec["target"] = "iris-reg";
      rec["method"] = method;
      rec["epsilon"] = e;
      json parts = json::array();
      for (const auto& iv : region.parts()) parts.push_back({iv.lo, iv.hi});
      rec["parts"] = parts;
      json gparts = json::array();
      for (const auto& iv : grid_snap(region, grid).parts())
        gparts.push_back({iv.lo, iv.hi});
      rec["grid_parts"] = gparts;
      rec["actual"] = target.real();
      out << rec.dump() << "\n";
    } else {
      out << method << " region at epsilon " << fmt_g(e) << ": " << region_str(region, 2)
          << ", grid " << region_str(grid_snap(region, grid), 1) << "\n";
    }
  };

  for (double e : eps) {
    auto res = gaussian_linear_interval(xs1, ys, {1.0, target.x[0]}, e);
    emit_region("gaussian", e, RealRegion({res.interval}));
  }
  for (double e : eps) emit_region("least-squares", e, conformal_regress_exact(fam_ls, e));
  if (!json_mode(o))
    out << "knn-reg point prediction: "
        << fmt_fixed(-fam_nn.d.back() / fam_nn.c.back(), 2) << "\n";
  for (double e : eps) emit_region("knn-reg", e, conformal_regress_exact(fam_nn, e));
  if (!json_mode(o)) out << "actual: " << label_str(*target.y) << "\n";
  return 0;
}

int replicate_table3(const Opts& o, std::ostream& out) {
  if (o.data_path.empty())
    throw InputError(
        "replicate table3 needs --data pointing at a 100-flower file with columns "
        "sepal_length and species");
  Dataset d = ingest(o.data_path);
  auto examples = to_examples(d, "species", {"sepal_length"});
  if (examples.size() < 25) throw InputError(d.name + ": need at least 25 rows");
  auto space = label_space_of(examples, d.name);
  const double eps = o.epsilons.empty() ? 0.08 : resolve_eps(o)[0];
  const std::size_t trials = o.trials;
  if (trials == 0) throw InputError("trials must be positive");

  if (!json_mode(o)) {
    print_header(out, "replicate table3", d);
    out << "trials: " << trials << "\n";
    out << "seed: " << o.seed << "\n";
    out << "epsilon: " << fmt_g(eps) << "\n";
  }

  std::vector<Measure> measures;
  for (const auto& n : kClassMeasures) measures.push_back(Measure::by_name(n));
  std::vector<std::size_t> hits(measures.size(), 0);

  std::vector<std::size_t> idx(examples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(o.seed, t));
    auto order = idx;
    shuffle(order, rng);
    std::vector<Example> sample;
    for (std::size_t i = 0; i < 25; ++i) sample.push_back(examples[order[i]]);
    Example target = sample.back();
    sample.pop_back();
    for (std::size_t m = 0; m < measures.size(); ++m) {
      auto res = conformal_classify(sample, target.x, space, measures[m], {eps});
      if (res.regions[0].contains(target.cat())) ++hits[m];
    }
  }

  for (std::size_t m = 0; m < measures.size(); ++m) {
    double pct = 100.0 * static_cast<double>(hits[m]) / static_cast<double>(trials);
    if (json_mode(o)) {
      json rec;
      rec["command"] = "replicate";
      rec["target"] = "table3";
      rec["measure"] = measures[m].name();
      rec["epsilon"] = eps;
      rec["trials"] = trials;
      rec["seed"] = o.seed;
      rec["hit_rate_percent"] = pct;
      out << rec.dump() << "\n";
    } else {
      out << "hit rate " << measures[m].name() << ": " << fmt_fixed(pct, 1) << "%\n";
    }
  }
  return 0;
}

int cmd_replicate(const Opts& o, std::ostream& out) {
  if (o.target == "czuber-fisher") return replicate_czuber_fisher(o, out);
  if (o.target == "czuber-conformal") return replicate_czuber_conformal(o, out);
  if (o.target == "iris-class") return replicate_iris_class(o, out);
  if (o.target == "iris-reg") return replicate_iris_reg(o, out);
  if (o.target == "table3") return replicate_table3(o, out);
  throw InputError("unknown replication target \"" + o.target +
                   "\" (have: czuber-fisher, czuber-conformal, iris-class, iris-reg, "
                   "table3)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact prediction regions with per-step validity tooling"};
  app.require_subcommand(1);
  Opts o;

  auto add_common = [&](CLI::App* sub, bool need_data) {
    auto* opt = sub->add_option("--data", o.data_path, "csv file with a header row");
    if (need_data) opt->required();
    sub->add_option("--label-column", o.label_column, "label column name");
    sub->add_option("--features", o.features, "feature column names")->delimiter(',');
    sub->add_option("--epsilon", o.epsilons, "significance level, repeatable")
        ->delimiter(',');
    sub->add_option("--grid", o.grid, "reporting lattice step (0 disables)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"table", "json-lines"}));
    return sub;
  };
  auto add_measure = [&](CLI::App* sub) {
    sub->add_option("--measure", o.measure, "nonconformity measure name");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "plain, within-label, or gaussian");
  };

  auto* c1 = add_common(app.add_subcommand("predict-class",
                                           "finite-label region for the last row"),
                        true);
  add_measure(c1);
  add_model(c1);
  auto* c2 = add_common(
      app.add_subcommand("predict-reg", "real-label region for the last row"), true);
  add_measure(c2);
  auto* c3 = add_common(
      app.add_subcommand("predict-old", "label-only region for the last row"), true);
  add_measure(c3);
  add_common(app.add_subcommand("fisher", "t-interval for the last row"), true);
  add_common(app.add_subcommand("gaussian", "linear-model interval for the last row"),
             true);
  auto* c6 = add_common(
      app.add_subcommand("evaluate", "successive prediction over the whole stream"), true);
  add_measure(c6);
  add_model(c6);
  auto* c7 = add_common(
      app.add_subcommand("permute", "error rates across seeded reorderings"), true);
  add_measure(c7);
  add_model(c7);
  c7->add_option("--trials", o.trials, "number of reorderings");
  c7->add_option("--seed", o.seed, "base seed");
  c7->add_option("--curves", o.curves_path, "write cumulative error curves (csv)");
  add_common(app.add_subcommand("bet-audit", "betting check of a 0/1 error column"), true);
  auto* c9 = add_common(app.add_subcommand("replicate", "rerun a bundled study"), false);
  c9->add_option("target", o.target, "study name")->required();
  c9->add_option("--trials", o.trials, "number of resamples (table3)");
  c9->add_option("--seed", o.seed, "base seed (table3)");

  std::vector<const char*> argv;
  argv.push_back("confpred");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("predict-class")) return cmd_predict_class(o, out);
    if (app.got_subcommand("predict-reg")) return cmd_predict_reg(o, out);
    if (app.got_subcommand("predict-old")) return cmd_predict_old(o, out);
    if (app.got_subcommand("fisher")) return cmd_fisher(o, out);
    if (app.got_subcommand("gaussian")) return cmd_gaussian(o, out);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(o, out);
    if (app.got_subcommand("permute")) return cmd_permute(o, out);
    if (app.got_subcommand("bet-audit")) return cmd_bet_audit(o, out);
    if (app.got_subcommand("replicate")) return cmd_replicate(o, out);
    err << "error: no subcommand\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const MeasureError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace confpred
