#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "surmodel/assimilation/posterior.hpp"
#include "surmodel/core/parallel.hpp"
#include "surmodel/dataset/dataset.hpp"
#include "surmodel/dataset/design.hpp"
#include "surmodel/nn/random_search.hpp"
#include "surmodel/oracle/calibration.hpp"
#include "surmodel/pipeline/artifacts.hpp"
#include "surmodel/pipeline/manifest.hpp"
#include "surmodel/sensitivity/analyze.hpp"
#include "surmodel/surrogate/metrics.hpp"
#include "surmodel/surrogate/training.hpp"

namespace surmodel::pipeline {

using io::CsvWriter;

/// Progress messages; silent unless a sink is installed.
inline std::function<void(const std::string&)>& log_sink() {
  static std::function<void(const std::string&)> sink;
  return sink;
}
inline void log(const std::string& msg) {
  if (log_sink()) log_sink()(msg);
}

// ---------------------------------------------------------------------------
// calibrate

inline oracle::CalibrationResult stage_calibrate(const RunConfig& c, const RunLayout& L) {
  Manifest m("calibrate", c, L.root, std::nullopt);
  if (c.oracle_config) m.input(c.resolve(*c.oracle_config));
  const auto res = oracle::calibrate(c.load_oracle(), c.candidates, c.cube);
  Json report;
  report["success"] = res.success;
  report["candidate_sets"] = c.candidates.size();
  report["tried"] = res.tried;
  if (res.success) {
    report["selected"] = {{"shear_load_coeff", res.config.shear_load_coeff},
                          {"normal_unload_coeff", res.config.normal_unload_coeff},
                          {"patch_shear_stiffness", res.config.patch_shear_stiffness},
                          {"decay_length", res.config.decay_length},
                          {"pressure_cap", res.config.pressure_cap},
                          {"vertical_stress_gradient", res.config.vertical_stress_gradient},
                          {"storativity", res.config.storativity}};
    report["criteria"] = oracle::to_json(res.report);
  }
  report["trials"] = res.trials;
  const fs::path rep = L.calibrate() / "calibration_report.json";
  io::write_json(rep, report);
  m.output(rep);
  if (res.success) {
    const fs::path out = L.calibrate() / "oracle_calibrated.json";
    oracle::save_oracle_config(out, res.config);
    m.output(out);
  }
  m.write(L.calibrate(), "calibrate");
  if (!res.success)
    throw CalibrationFailure("no candidate set passed the phenomenology criteria; see " + rep.string());
  return res;
}

// ---------------------------------------------------------------------------
// dataset

inline std::vector<ParameterVector> design_points(const RunConfig& c, std::uint64_t seed) {
  if (c.design == "gauss") {
    const int k = dataset::cube_root_exact(c.n_p);
    if (k == 0) throw ConfigError("dataset.n_p must be a perfect cube for the Gauss design");
    return dataset::tensor_grid(c.cube, k);
  }
  return dataset::monte_carlo(c.cube, c.n_p, derive_seed(seed, "dataset.design"));
}

inline dataset::SplitDataset stage_dataset(const RunConfig& c, const RunLayout& L) {
  const std::uint64_t seed = c.require_seed();
  const std::uint64_t sub = derive_seed(seed, "dataset");
  Manifest m("dataset", c, L.root, sub);
  if (c.oracle_config) m.input(c.resolve(*c.oracle_config));
  const oracle::OracleConfig ocfg = c.load_oracle();
  const oracle::FaultModel model(ocfg);
  const auto pvs = design_points(c, sub);
  log("dataset: running the oracle on " + std::to_string(pvs.size()) + " parameter vectors");
  const auto samples = dataset::generate(pvs, model);
  auto ds = dataset::split(samples, ocfg.n_steps, derive_seed(sub, "split"));
  dataset::save_dataset(L.dataset_csv(), L.dataset_json(), ds);
  oracle::save_oracle_config(L.dataset_oracle(), ocfg);
  for (const auto& p : {L.dataset_csv(), L.dataset_json(), L.dataset_oracle()}) m.output(p);
  std::size_t opened = 0;
  for (std::size_t k = 0; k < samples.size(); k += static_cast<std::size_t>(ocfg.n_steps)) opened += samples[k].f_o;
  m.set("summary", {{"n_p", pvs.size()},
                    {"n_samples", samples.size()},
                    {"train", ds.train.size()},
                    {"validation", ds.validation.size()},
                    {"test", ds.test.size()},
                    {"opened_trajectories", opened}});
  m.write(L.dataset(), "dataset");
  return ds;
}

// ---------------------------------------------------------------------------
// train

inline void write_search_csv(const fs::path& path, const nn::SearchResult& s) {
  CsvWriter w(path);
  w.header({"arm", "layers", "width", "hidden", "output", "parameters", "val_loss", "epochs", "selected"});
  for (std::size_t k = 0; k < s.arms.size(); ++k) {
    const auto& a = s.arms[k];
    w.row({CsvWriter::num(k), CsvWriter::num(a.spec.hidden_layers()), CsvWriter::num(a.spec.widths.front()),
           std::string(nn::to_string(a.spec.hidden)), std::string(nn::to_string(a.spec.output)),
           CsvWriter::num(a.spec.parameter_count()), CsvWriter::num(a.val_loss), CsvWriter::num(a.epochs),
           k == s.best ? "1" : "0"});
  }
}

inline void save_trained(const RunLayout& L, Manifest& m, const std::string& name, const nn::ModelFile& mf,
                         const nn::TrainResult& run) {
  nn::save_model(L.model(name), mf);
  write_history_csv(L.history(name), run);
  m.output(L.model(name));
  m.output(L.history(name));
  log("train: " + name + " stopped after " + std::to_string(run.val_loss.size()) + " epochs (best " +
      std::to_string(run.best_epoch) + ", val loss " + io::format_double(run.best_val_loss) + ")");
}

/// which: baseline | classifier | surmodel2 | pair
inline void stage_train(const RunConfig& c, const RunLayout& L, const std::string& which) {
  const std::uint64_t seed = c.require_seed();
  const std::uint64_t sub = derive_seed(seed, "train." + which);
  Manifest m("train." + which, c, L.root, sub);
  const auto ds = load_run_dataset(L);
  m.input(L.dataset_csv());
  m.input(L.dataset_json());

  if (which == "baseline") {
    const auto cfg = c.train_config(c.baseline, sub);
    if (c.search_budget > 0) {
      const auto& norm = ds.normalization;
      log("train: random search over " + std::to_string(c.search_budget) + " architectures");
      const auto s = nn::random_search(nn::HyperparameterSpace{}, c.search_budget, 4, 2,
                                       surrogate::regression_data(ds.train, norm),
                                       surrogate::regression_data(ds.validation, norm), cfg);
      const fs::path sp = L.models() / "search.csv";
      write_search_csv(sp, s);
      m.output(sp);
      save_trained(L, m, "baseline", surrogate::wrap("baseline", s.best_run, norm, cfg.seed), s.best_run);
    } else {
      const auto t = surrogate::train_baseline(ds, c.baseline.spec(4, 2), cfg);
      save_trained(L, m, "baseline", t.model.model, t.run);
    }
  } else if (which == "classifier") {
    const auto t = surrogate::train_classifier(ds, c.classifier.spec(3, 1), c.train_config(c.classifier, sub),
                                               c.threshold);
    save_trained(L, m, "classifier", t.model.model, t.run);
  } else if (which == "surmodel2") {
    const auto cls = load_classifier(L, c);
    m.input(L.model("classifier"));
    const auto t = surrogate::train_surrogate_ii(ds, cls, c.surmodel2.spec(5, 2), c.train_config(c.surmodel2, sub));
    save_trained(L, m, "surmodel2", t.model.model, t.run);
  } else if (which == "pair") {
    const auto cls = load_classifier(L, c);
    m.input(L.model("classifier"));
    const auto t = surrogate::train_pair(ds, cls, c.pair.spec(4, 2), c.train_config(c.pair, sub));
    save_trained(L, m, "pair0", t.model.model0, t.run0);
    save_trained(L, m, "pair1", t.model.model1, t.run1);
  } else {
    throw ConfigError("unknown model '" + which + "' (baseline, classifier, surmodel2, pair)");
  }
  m.write(L.models(), which);
}

// ---------------------------------------------------------------------------
// evaluate

inline std::string step_label(int t) { return "t" + std::to_string(t); }
inline std::string range_label(int n) { return "t1-t" + std::to_string(n); }

struct EvaluationResult {
  std::map<std::string, surrogate::AccuracyReport> models;            // at full training size
  std::map<std::size_t, std::vector<surrogate::AccuracyReport>> by_np;  // baseline, per repeat
  surrogate::ConfusionMatrix confusion_test, confusion_mc;
  bool has_classifier = false;
  surrogate::Trajectories oracle_mc;
  std::map<std::string, surrogate::Trajectories> predictions;
};

inline void append_accuracy_rows(CsvWriter& w, const std::string& model, std::size_t n_p,
                                 const std::vector<surrogate::AccuracyReport>& reps) {
  const std::array<const char*, 2> qoi{"a_a", "delta_s"};
  const double n = static_cast<double>(reps.size());
  const auto& first = reps.front();
  for (std::size_t q = 0; q < 2; ++q) {
    auto emit = [&](const std::string& metric, const std::string& steps, auto get) {
      double sum = 0.0;
      for (const auto& r : reps) sum += get(r);
      w.row({model, CsvWriter::num(n_p), qoi[q], metric, steps, CsvWriter::num(sum / n), CsvWriter::num(reps.size())});
    };
    for (std::size_t k = 0; k < first.e_per_step[q].size(); ++k)
      emit("E", step_label(static_cast<int>(k) + 3), [&](const auto& r) { return r.e_per_step[q][k]; });
    emit("E", range_label(first.n_steps), [&](const auto& r) { return r.e_total[q]; });
    emit("R2", range_label(first.n_steps), [&](const auto& r) { return r.r2[q]; });
  }
}

inline void write_quantiles(CsvWriter& w, const std::string& source, const surrogate::Trajectories& tr, int n_steps) {
  for (int q = 0; q < 2; ++q) {
    const auto qoi = static_cast<surrogate::Qoi>(q);
    for (const auto& s : surrogate::ensemble_summary(tr, qoi, n_steps)) {
      const std::string name = q == 0 ? "a_a" : "delta_s";
      w.row({name, CsvWriter::num(s.step), "median", source, CsvWriter::num(s.median)});
      w.row({name, CsvWriter::num(s.step), "q025", source, CsvWriter::num(s.q025)});
      w.row({name, CsvWriter::num(s.step), "q975", source, CsvWriter::num(s.q975)});
    }
  }
}

inline void write_cdfs(CsvWriter& w, const std::string& source, const surrogate::Trajectories& tr, int n_steps) {
  for (int q = 0; q < 2; ++q)
    for (const auto& s : surrogate::ensemble_summary(tr, static_cast<surrogate::Qoi>(q), n_steps))
      for (const auto& [v, f] : s.cdf)
        w.row({q == 0 ? "a_a" : "delta_s", CsvWriter::num(s.step), source, CsvWriter::num(v), CsvWriter::num(f)});
}

inline EvaluationResult stage_evaluate(const RunConfig& c, const RunLayout& L) {
  const std::uint64_t seed = c.require_seed();
  const std::uint64_t sub = derive_seed(seed, "evaluate");
  Manifest m("evaluate", c, L.root, sub);
  const auto ds = load_run_dataset(L);
  const auto ocfg = load_run_oracle(L);
  for (const auto& p : {L.dataset_csv(), L.dataset_json(), L.dataset_oracle()}) m.input(p);
  const oracle::FaultModel model(ocfg);
  const int n_t = ocfg.n_steps;

  EvaluationResult out;
  const auto mc = dataset::monte_carlo(c.cube, c.eval_n_mc, derive_seed(sub, "mc"));
  std::vector<oracle::SeriesResult> series(mc.size());
  parallel_for(mc.size(), [&](std::size_t k) { series[k] = model.run_series(mc[k]); });
  for (const auto& s : series) out.oracle_mc.push_back(s.states);

  // Models present in the run directory.
  const auto baseline = load_baseline(L);
  m.input(L.model("baseline"));
  out.predictions["baseline"] = surrogate::trajectories(baseline, mc, n_t);
  if (fs::exists(L.model("classifier"))) {
    out.has_classifier = true;
    const auto cls = load_classifier(L, c);
    m.input(L.model("classifier"));
    std::vector<int> y_mc, p_mc = cls.classify_batch(mc);
    for (const auto& s : series) y_mc.push_back(s.opened ? 1 : 0);
    out.confusion_mc = surrogate::confusion_matrix(y_mc, p_mc);
    std::vector<ParameterVector> test_p;
    std::vector<int> y_test;
    for (std::size_t k = 0; k < ds.test.size(); k += static_cast<std::size_t>(ds.n_steps)) {
      test_p.push_back(ds.test[k].p);
      y_test.push_back(ds.test[k].f_o);
    }
    out.confusion_test = surrogate::confusion_matrix(y_test, cls.classify_batch(test_p));
    if (fs::exists(L.model("surmodel2"))) {
      m.input(L.model("surmodel2"));
      out.predictions["surmodel2"] = surrogate::trajectories(load_surmodel2(L, c), mc, n_t);
    }
    if (fs::exists(L.model("pair0")) && fs::exists(L.model("pair1"))) {
      m.input(L.model("pair0"));
      m.input(L.model("pair1"));
      out.predictions["pair"] = surrogate::trajectories(load_pair(L, c), mc, n_t);
    }
  }
  for (const auto& [name, pred] : out.predictions) out.models[name] = surrogate::accuracy(out.oracle_mc, pred, n_t);

  // Training-size study on the baseline architecture.
  const auto all = dataset::all_samples(ds);
  const std::size_t n_traj = all.size() / static_cast<std::size_t>(ds.n_steps);
  for (std::size_t n_p : c.np_subsets) {
    if (n_p > n_traj || n_p < 10) {
      m.note("skipped N_p=" + std::to_string(n_p) + " (dataset has " + std::to_string(n_traj) + " trajectories)");
      continue;
    }
    for (std::size_t r = 0; r < c.eval_repeats; ++r) {
      if (n_p == n_traj && r == 0) {
        out.by_np[n_p].push_back(out.models.at("baseline"));
        continue;
      }
      const std::uint64_t rs = derive_seed(sub, "np" + std::to_string(n_p) + "." + std::to_string(r));
      const auto part = n_p == n_traj ? ds
                                      : dataset::split(dataset::subsample_trajectories(all, ds.n_steps, n_p, rs),
                                                       ds.n_steps, derive_seed(rs, "split"));
      log("evaluate: retraining the baseline on N_p=" + std::to_string(n_p) + " (repeat " + std::to_string(r) + ")");
      const auto spec = baseline.model.network.spec();
      const auto t = surrogate::train_baseline(part, spec, c.train_config(c.baseline, derive_seed(rs, "train")));
      out.by_np[n_p].push_back(surrogate::accuracy(out.oracle_mc, surrogate::trajectories(t.model, mc, n_t), n_t));
    }
  }

  // Outputs.
  {
    const fs::path p = L.evaluate() / "accuracy.csv";
    {
      CsvWriter w(p);
      w.header({"model", "n_p", "qoi", "metric", "steps", "value", "repeats"});
      for (auto it = out.by_np.rbegin(); it != out.by_np.rend(); ++it)
        append_accuracy_rows(w, "baseline", it->first, it->second);
      for (const auto& [name, rep] : out.models)
        if (name != "baseline") append_accuracy_rows(w, name, n_traj, {rep});
    }
    m.output(p);
  }
  if (out.has_classifier) {
    const fs::path p = L.evaluate() / "confusion.csv";
    {
      CsvWriter w(p);
      w.header({"set", "tn", "fp", "fn", "tp", "accuracy"});
      for (const auto& [name, cm] : {std::pair{"test", out.confusion_test}, std::pair{"mc", out.confusion_mc}})
        w.row({name, CsvWriter::num(cm.tn), CsvWriter::num(cm.fp), CsvWriter::num(cm.fn), CsvWriter::num(cm.tp),
               CsvWriter::num(cm.accuracy())});
    }
    m.output(p);
  }
  {
    const fs::path p = L.evaluate() / "quantiles.csv";
    {
      CsvWriter w(p);
      w.header({"qoi", "step", "statistic", "source", "value"});
      write_quantiles(w, "oracle", out.oracle_mc, n_t);
      for (const auto& [name, pred] : out.predictions) write_quantiles(w, name, pred, n_t);
    }
    m.output(p);
  }
  {
    const fs::path p = L.evaluate() / "cdf.csv";
    {
      CsvWriter w(p);
      w.header({"qoi", "step", "source", "value", "cdf"});
      write_cdfs(w, "oracle", out.oracle_mc, n_t);
      for (const auto& [name, pred] : out.predictions) write_cdfs(w, name, pred, n_t);
    }
    m.output(p);
  }
  m.write(L.evaluate(), "evaluate");
  return out;
}

// ---------------------------------------------------------------------------
// sensitivity

inline sensitivity::SensitivityReport stage_sensitivity(const RunConfig& c, const RunLayout& L) {
  const std::uint64_t seed = c.require_seed();
  const std::uint64_t sub = derive_seed(seed, "sensitivity");
  Manifest m("sensitivity", c, L.root, sub);
  const auto design = sensitivity::saltelli_sample(sensitivity::cube_axes(c.cube), c.sobol_base,
                                                   c.sobol_second_order, sub, c.sobol_scramble);
  const auto ocfg = load_run_oracle(L);
  m.input(L.dataset_oracle());
  sensitivity::SensitivityReport rep;
  log("sensitivity: " + std::to_string(design.n_rows()) + " design rows through " + c.sobol_model);
  if (c.sobol_model == "oracle") {
    const oracle::FaultModel model(ocfg);
    rep = sensitivity::analyze(surrogate::OracleModel{&model}, design, ocfg.n_steps);
  } else {
    for (const auto& p : model_files(L, c.sobol_model)) m.input(p);
    rep = with_surrogate(L, c, c.sobol_model,
                         [&](const auto& s) { return sensitivity::analyze(s, design, ocfg.n_steps); });
  }
  const fs::path p = L.sensitivity() / "sobol_indices.csv";
  sensitivity::write_index_csv(p, rep.rows);
  m.output(p);
  m.set("design", {{"base_count", design.base}, {"rows", design.n_rows()}, {"second_order", design.second_order},
                   {"scrambled", c.sobol_scramble}, {"model", c.sobol_model}});
  for (const auto& n : rep.notes) m.note(n);
  m.write(L.sensitivity(), "sensitivity");
  return rep;
}

// ---------------------------------------------------------------------------
// assimilate

struct WindowResult {
  int last_step = 0;
  assimilation::Chain chain;
  assimilation::PosteriorSummary summary;
};

inline std::vector<WindowResult> stage_assimilate(const RunConfig& c, const RunLayout& L) {
  const std::uint64_t seed = c.require_seed();
  const std::uint64_t sub = derive_seed(seed, "assimilate");
  Manifest m("assimilate", c, L.root, sub);
  const auto ocfg = load_run_oracle(L);
  m.input(L.dataset_oracle());
  const oracle::FaultModel model(ocfg);
  const int last = *std::max_element(c.windows.begin(), c.windows.end());
  if (last > ocfg.n_steps) throw ConfigError("assimilate.windows exceed the number of time steps");
  std::vector<int> steps;
  for (int t = 1; t <= last; ++t) steps.push_back(t);
  const auto obs = assimilation::synthesize_observations(c.truth, steps, c.sigma, model, derive_seed(sub, "noise"));
  const double G = ocfg.shear_modulus();

  auto run_windows = [&](const auto& surrogate_model) {
    std::vector<WindowResult> res;
    for (int w : c.windows) {
      assimilation::AssimilationConfig ac{c.mcmc_iterations, c.scale_fraction, derive_seed(sub, "chain")};
      log("assimilate: window t1-t" + std::to_string(w));
      WindowResult r;
      r.last_step = w;
      r.chain = assimilation::assimilate(obs.window(w), surrogate_model, G, c.cube, ac);
      r.summary = assimilation::posterior_summary(r.chain, c.cube);
      res.push_back(std::move(r));
    }
    // Seismic moment at the truth for the observation plot.
    const fs::path p = L.assimilate() / "seismic_moment.csv";
    {
      CsvWriter w(p);
      w.header({"step", "oracle_m0_nm", "model_m0_nm", "observed_m0_nm"});
      for (std::size_t k = 0; k < obs.steps.size(); ++k) {
        const StateVector y = surrogate::predict(surrogate_model, c.truth, obs.steps[k]);
        w.row({CsvWriter::num(obs.steps[k]), CsvWriter::num(obs.noiseless[k]),
               CsvWriter::num(G * y.a_a * y.delta_s), CsvWriter::num(obs.m0[k])});
      }
    }
    m.output(p);
    return res;
  };

  std::vector<WindowResult> results;
  if (c.likelihood == "oracle") {
    results = run_windows(surrogate::OracleModel{&model});
  } else {
    for (const auto& p : model_files(L, c.assim_model)) m.input(p);
    results = with_surrogate(L, c, c.assim_model, run_windows);
  }

  const fs::path op = L.assimilate() / "observations.csv";
  assimilation::write_observations_csv(op, obs);
  m.output(op);
  for (const auto& r : results) {
    const std::string tag = range_label(r.last_step);
    const fs::path cp = L.assimilate() / ("chain_" + tag + ".csv");
    const fs::path sp = L.assimilate() / ("posterior_" + tag + ".json");
    const fs::path hp = L.assimilate() / ("histogram_" + tag + ".csv");
    assimilation::write_chain_csv(cp, r.chain);
    Json sj = assimilation::to_json(r.summary, r.chain);
    sj["window"] = tag;
    sj["likelihood"] = c.likelihood == "oracle" ? "oracle" : c.assim_model;
    sj["truth"] = {{"tau0_pa", c.truth.tau0}, {"phi_deg", c.truth.phi}, {"m2", c.truth.m2}};
    sj["sigma_nm"] = c.sigma;
    io::write_json(sp, sj);
    assimilation::write_histogram_csv(hp, r.summary);
    for (const auto& p : {cp, sp, hp}) m.output(p);
    for (const auto& wmsg : r.chain.warnings) m.note(tag + ": " + wmsg);
  }
  m.write(L.assimilate(), "assimilate");
  return results;
}

}  // namespace surmodel::pipeline
