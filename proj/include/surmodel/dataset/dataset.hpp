#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "surmodel/core/errors.hpp"
#include "surmodel/core/normalization.hpp"
#include "surmodel/core/parallel.hpp"
#include "surmodel/core/random.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/io/files.hpp"
#include "surmodel/oracle/fault_model.hpp"

namespace surmodel::dataset {

struct Sample {
  ParameterVector p;
  int t = 1;
  StateVector y;
  int f_o = 0;
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Runs the oracle for every parameter vector; N_p * N_t samples ordered by
/// trajectory, then by step. The opening label is per trajectory.
inline std::vector<Sample> generate(const std::vector<ParameterVector>& pvs,
                                    const oracle::FaultModel& model) {
  const auto n_t = static_cast<std::size_t>(model.n_steps());
  std::vector<Sample> out(pvs.size() * n_t);
  parallel_for(pvs.size(), [&](std::size_t n) {
    const auto series = model.run_series(pvs[n]);
    for (std::size_t i = 0; i < n_t; ++i)
      out[n * n_t + i] = Sample{pvs[n], static_cast<int>(i + 1), series.states[i], series.opened ? 1 : 0};
  });
  return out;
}

/// Number of model inputs of the baseline regression: tau0, phi, m2, t.
inline constexpr std::size_t kBaseInputs = 4;
inline constexpr std::size_t kOutputs = 2;

inline std::array<double, kBaseInputs> base_inputs(const Sample& s) {
  return {s.p.tau0, s.p.phi, s.p.m2, static_cast<double>(s.t)};
}

struct SplitDataset {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
  Normalization normalization;
  std::uint64_t seed = 0;
  int n_steps = 10;

  friend bool operator==(const SplitDataset&, const SplitDataset&) = default;
};

/// Normalization statistics from a (training) sample set: inputs min-max,
/// outputs scaled by their maximum.
inline Normalization fit_normalization(const std::vector<Sample>& train) {
  if (train.empty()) throw std::invalid_argument("fit_normalization: empty training set");
  Normalization n;
  n.input_min.assign(kBaseInputs, 0.0);
  n.input_max.assign(kBaseInputs, 0.0);
  n.output_scale.assign(kOutputs, 0.0);
  const auto first = base_inputs(train.front());
  for (std::size_t i = 0; i < kBaseInputs; ++i) n.input_min[i] = n.input_max[i] = first[i];
  for (const auto& s : train) {
    const auto x = base_inputs(s);
    for (std::size_t i = 0; i < kBaseInputs; ++i) {
      n.input_min[i] = std::min(n.input_min[i], x[i]);
      n.input_max[i] = std::max(n.input_max[i], x[i]);
    }
    n.output_scale[0] = std::max(n.output_scale[0], s.y.a_a);
    n.output_scale[1] = std::max(n.output_scale[1], s.y.delta_s);
  }
  for (double& s : n.output_scale)
    if (!(s > 0.0)) s = 1.0;
  return n;
}

/// Trajectory-level split: 20% test, the remainder 9:1 train:validation.
/// Trajectories are shuffled with the seed; each split keeps the original
/// trajectory order.
inline SplitDataset split(const std::vector<Sample>& samples, int n_steps, std::uint64_t seed) {
  if (n_steps < 1) throw std::invalid_argument("split: n_steps must be >= 1");
  const auto nt = static_cast<std::size_t>(n_steps);
  if (samples.size() % nt != 0) throw std::invalid_argument("split: sample count not divisible by N_t");
  const std::size_t n_traj = samples.size() / nt;
  if (n_traj < 10) throw std::invalid_argument("split: need at least 10 trajectories");

  std::vector<std::size_t> order(n_traj);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle_in_place(order, rng);

  const auto n_test = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n_traj)));
  const std::size_t rest = n_traj - n_test;
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(rest) / 10.0));

  std::vector<int> label(n_traj, 0);  // 0 train, 1 validation, 2 test
  for (std::size_t k = 0; k < n_test; ++k) label[order[k]] = 2;
  for (std::size_t k = n_test; k < n_test + n_val; ++k) label[order[k]] = 1;

  SplitDataset d;
  d.seed = seed;
  d.n_steps = n_steps;
  for (std::size_t n = 0; n < n_traj; ++n) {
    auto& dst = label[n] == 0 ? d.train : (label[n] == 1 ? d.validation : d.test);
    dst.insert(dst.end(), samples.begin() + static_cast<std::ptrdiff_t>(n * nt),
               samples.begin() + static_cast<std::ptrdiff_t>((n + 1) * nt));
  }
  d.normalization = fit_normalization(d.train);
  return d;
}

/// Keeps n_keep randomly chosen trajectories (training-size experiments).
inline std::vector<Sample> subsample_trajectories(const std::vector<Sample>& samples, int n_steps,
                                                  std::size_t n_keep, std::uint64_t seed) {
  const auto nt = static_cast<std::size_t>(n_steps);
  const std::size_t n_traj = samples.size() / nt;
  if (n_keep > n_traj) throw std::invalid_argument("subsample: more trajectories requested than available");
  std::vector<std::size_t> order(n_traj);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle_in_place(order, rng);
  order.resize(n_keep);
  std::sort(order.begin(), order.end());
  std::vector<Sample> out;
  out.reserve(n_keep * nt);
  for (std::size_t n : order)
    out.insert(out.end(), samples.begin() + static_cast<std::ptrdiff_t>(n * nt),
               samples.begin() + static_cast<std::ptrdiff_t>((n + 1) * nt));
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: CSV with the oracle columns plus `split`, and a JSON sidecar
// holding the normalization statistics and the seed.

inline io::Json normalization_to_json(const Normalization& n) {
  return io::Json{{"input_min", n.input_min}, {"input_max", n.input_max}, {"output_scale", n.output_scale}};
}

inline Normalization normalization_from_json(const io::Json& j) {
  try {
    Normalization n;
    n.input_min = j.at("input_min").get<std::vector<double>>();
    n.input_max = j.at("input_max").get<std::vector<double>>();
    n.output_scale = j.at("output_scale").get<std::vector<double>>();
    n.check();
    return n;
  } catch (const io::Json::exception& e) {
    throw FormatError(std::string("normalization: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("normalization: ") + e.what());
  }
}

inline void write_samples_csv(const std::filesystem::path& path, const SplitDataset& d) {
  io::CsvWriter w(path);
  auto header = oracle::series_csv_header();
  header.push_back("split");
  w.header(header);
  using io::CsvWriter;
  auto emit = [&](const std::vector<Sample>& v, const char* name) {
    for (const auto& s : v)
      w.row({CsvWriter::num(s.p.tau0), CsvWriter::num(s.p.phi), CsvWriter::num(s.p.m2),
             CsvWriter::num(s.t), CsvWriter::num(s.y.a_a), CsvWriter::num(s.y.delta_s),
             CsvWriter::num(s.f_o), name});
  };
  emit(d.train, "train");
  emit(d.validation, "validation");
  emit(d.test, "test");
}

inline void save_dataset(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar,
                         const SplitDataset& d) {
  write_samples_csv(csv_path, d);
  io::Json j;
  j["format"] = "surmodel-dataset";
  j["version"] = 1;
  j["seed"] = d.seed;
  j["n_steps"] = d.n_steps;
  j["inputs"] = {"tau0_pa", "phi_deg", "m2", "t"};
  j["outputs"] = {"a_a_m2", "delta_s_m"};
  j["normalization"] = normalization_to_json(d.normalization);
  io::write_json(sidecar, j);
}

inline SplitDataset load_dataset(const std::filesystem::path& csv_path,
                                 const std::filesystem::path& sidecar) {
  const io::Json j = io::read_json(sidecar);
  SplitDataset d;
  try {
    if (j.at("format") != "surmodel-dataset" || j.at("version") != 1)
      throw FormatError("unsupported dataset sidecar " + sidecar.string());
    d.seed = j.at("seed").get<std::uint64_t>();
    d.n_steps = j.at("n_steps").get<int>();
  } catch (const io::Json::exception& e) {
    throw FormatError(sidecar.string() + ": " + e.what());
  }
  d.normalization = normalization_from_json(j.at("normalization"));
  const auto table = io::read_csv(csv_path);
  const std::size_t c_tau = table.column("tau0_pa"), c_phi = table.column("phi_deg"),
                    c_m2 = table.column("m2"), c_t = table.column("t"), c_a = table.column("a_a_m2"),
                    c_d = table.column("delta_s_m"), c_f = table.column("f_o"),
                    c_s = table.column("split");
  try {
    for (const auto& r : table.rows) {
      Sample s;
      s.p = {io::parse_double(r[c_tau]), io::parse_double(r[c_phi]), io::parse_double(r[c_m2])};
      s.t = static_cast<int>(io::parse_int(r[c_t]));
      s.y = {io::parse_double(r[c_a]), io::parse_double(r[c_d])};
      s.f_o = static_cast<int>(io::parse_int(r[c_f]));
      if (r[c_s] == "train") d.train.push_back(s);
      else if (r[c_s] == "validation") d.validation.push_back(s);
      else if (r[c_s] == "test") d.test.push_back(s);
      else throw FormatError("unknown split label '" + r[c_s] + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw FormatError(csv_path.string() + ": " + e.what());
  }
  return d;
}

inline std::vector<Sample> all_samples(const SplitDataset& d) {
  std::vector<Sample> out = d.train;
  out.insert(out.end(), d.validation.begin(), d.validation.end());
  out.insert(out.end(), d.test.begin(), d.test.end());
  return out;
}

}  // namespace surmodel::dataset
