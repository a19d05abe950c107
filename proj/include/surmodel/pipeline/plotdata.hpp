#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "surmodel/io/csv.hpp"
#include "surmodel/pipeline/artifacts.hpp"
#include "surmodel/pipeline/manifest.hpp"

namespace surmodel::pipeline {

using io::CsvWriter;

namespace detail {

/// Files in `dir` named prefix*suffix, sorted by name.
inline std::vector<fs::path> matching(const fs::path& dir, const std::string& prefix, const std::string& suffix) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string n = e.path().filename().string();
    if (n.size() >= prefix.size() + suffix.size() && n.rfind(prefix, 0) == 0 &&
        n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0)
      out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string middle(const fs::path& p, const std::string& prefix, const std::string& suffix) {
  const std::string n = p.filename().string();
  return n.substr(prefix.size(), n.size() - prefix.size() - suffix.size());
}

}  // namespace detail

/// Consolidates the run's curves into tidy long-format CSVs, one per figure
/// analogue. Missing upstream files yield header-only outputs.
inline void stage_plotdata(const RunConfig& c, const RunLayout& L) {
  Manifest m("plotdata", c, L.root, std::nullopt);
  const fs::path dir = L.plotdata();
  auto track = [&](const fs::path& p) {
    if (fs::exists(p)) m.input(p);
    return fs::exists(p);
  };

  {  // quantile bands: qoi, step, statistic, source, value
    const fs::path p = dir / "quantile_bands.csv";
    {
      CsvWriter w(p);
      w.header({"qoi", "step", "statistic", "source", "value"});
      const fs::path src = L.evaluate() / "quantiles.csv";
      if (track(src))
        for (const auto& r : io::read_csv(src).rows) w.row(r);
    }
    m.output(p);
  }
  {  // empirical CDFs
    const fs::path p = dir / "cdfs.csv";
    {
      CsvWriter w(p);
      w.header({"qoi", "step", "source", "value", "cdf"});
      const fs::path src = L.evaluate() / "cdf.csv";
      if (track(src))
        for (const auto& r : io::read_csv(src).rows) w.row(r);
    }
    m.output(p);
  }
  {  // training loss curves
    const fs::path p = dir / "loss_curves.csv";
    {
      CsvWriter w(p);
      w.header({"model", "epoch", "split", "value"});
      for (const auto& f : detail::matching(L.models(), "", "_history.csv")) {
        track(f);
        const std::string name = detail::middle(f, "", "_history.csv");
        const auto t = io::read_csv(f);
        const auto ce = t.column("epoch"), ct = t.column("train_loss"), cv = t.column("val_loss");
        for (const auto& r : t.rows) {
          w.row({name, r[ce], "train", r[ct]});
          w.row({name, r[ce], "validation", r[cv]});
        }
      }
    }
    m.output(p);
  }
  {  // accuracy table and confusion counts
    const fs::path p = dir / "accuracy.csv";
    {
      CsvWriter w(p);
      w.header({"model", "n_p", "qoi", "metric", "steps", "value", "repeats"});
      const fs::path src = L.evaluate() / "accuracy.csv";
      if (track(src))
        for (const auto& r : io::read_csv(src).rows) w.row(r);
    }
    m.output(p);
    const fs::path q = dir / "confusion.csv";
    {
      CsvWriter w(q);
      w.header({"set", "truth", "predicted", "count"});
      const fs::path src = L.evaluate() / "confusion.csv";
      if (track(src)) {
        const auto t = io::read_csv(src);
        for (const auto& r : t.rows) {
          w.row({r[t.column("set")], "0", "0", r[t.column("tn")]});
          w.row({r[t.column("set")], "0", "1", r[t.column("fp")]});
          w.row({r[t.column("set")], "1", "0", r[t.column("fn")]});
          w.row({r[t.column("set")], "1", "1", r[t.column("tp")]});
        }
      }
    }
    m.output(q);
  }
  {  // Sobol bars and total-effect curves
    const fs::path bars = dir / "sobol_bars.csv";
    const fs::path totals = dir / "total_effects.csv";
    {
      CsvWriter wb(bars), wt(totals);
      wb.header({"output", "step", "index_type", "i", "j", "value"});
      wt.header({"output", "step", "parameter", "value"});
      const fs::path src = L.sensitivity() / "sobol_indices.csv";
      if (track(src)) {
        const auto t = io::read_csv(src);
        const auto co = t.column("output"), cs = t.column("step"), ct = t.column("index_type"), ci = t.column("i"),
                   cv = t.column("value");
        for (const auto& r : t.rows) {
          wb.row(r);
          if (r[ct] == "ST") wt.row({r[co], r[cs], r[ci], r[cv]});
        }
      }
    }
    m.output(bars);
    m.output(totals);
  }
  {  // prior and posterior densities
    const fs::path p = dir / "posterior_histograms.csv";
    {
      CsvWriter w(p);
      w.header({"window", "parameter", "source", "bin_lo", "bin_hi", "density"});
      for (const auto& f : detail::matching(L.assimilate(), "histogram_", ".csv")) {
        track(f);
        const std::string window = detail::middle(f, "histogram_", ".csv");
        const auto t = io::read_csv(f);
        const auto cp = t.column("parameter"), cl = t.column("bin_lo"), ch = t.column("bin_hi"),
                   cd = t.column("density");
        for (const auto& r : t.rows) {
          w.row({window, r[cp], "posterior", r[cl], r[ch], r[cd]});
        }
        // uniform prior on the same bins
        std::string current;
        double lo = 0.0, hi = 0.0;
        std::vector<std::vector<std::string>> bins;
        auto flush = [&] {
          if (current.empty()) return;
          const double dens = hi > lo ? 1.0 / (hi - lo) : 0.0;
          for (const auto& b : bins) w.row({window, current, "prior", b[0], b[1], CsvWriter::num(dens)});
          bins.clear();
        };
        for (const auto& r : t.rows) {
          if (r[cp] != current) {
            flush();
            current = r[cp];
            lo = io::parse_double(r[cl]);
          }
          hi = io::parse_double(r[ch]);
          bins.push_back({r[cl], r[ch]});
        }
        flush();
      }
    }
    m.output(p);
  }
  {  // seismic moment in time
    const fs::path p = dir / "seismic_moment.csv";
    {
      CsvWriter w(p);
      w.header({"step", "source", "value"});
      const fs::path src = L.assimilate() / "seismic_moment.csv";
      if (track(src)) {
        const auto t = io::read_csv(src);
        const auto cs = t.column("step");
        for (const auto& r : t.rows) {
          w.row({r[cs], "oracle", r[t.column("oracle_m0_nm")]});
          w.row({r[cs], "model", r[t.column("model_m0_nm")]});
          w.row({r[cs], "observed", r[t.column("observed_m0_nm")]});
        }
      }
    }
    m.output(p);
  }
  m.write(dir, "plotdata");
}

}  // namespace surmodel::pipeline
