#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "surmodel/core/errors.hpp"
#include "surmodel/core/normalization.hpp"
#include "surmodel/io/files.hpp"
#include "surmodel/io/format.hpp"
#include "surmodel/nn/network.hpp"

namespace surmodel::nn {

inline constexpr int kModelFormatVersion = 1;

/// A network plus everything needed to use it on raw inputs.
struct ModelFile {
  std::string role;  // free-form tag, e.g. "baseline", "classifier"
  Network network;
  Normalization normalization;
  std::uint64_t seed = 0;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

inline io::Json spec_to_json(const NetworkSpec& s) {
  return io::Json{{"n0", s.n0},
                  {"widths", s.widths},
                  {"hidden", std::string(to_string(s.hidden))},
                  {"output", std::string(to_string(s.output))}};
}

inline NetworkSpec spec_from_json(const io::Json& j) {
  NetworkSpec s;
  s.n0 = j.at("n0").get<std::size_t>();
  s.widths = j.at("widths").get<std::vector<std::size_t>>();
  s.hidden = parse_activation(j.at("hidden").get<std::string>());
  s.output = parse_activation(j.at("output").get<std::string>());
  s.validate();
  return s;
}

inline std::string encode_hex(const double* data, std::size_t n) {
  std::string out;
  out.reserve(16 * n);
  for (std::size_t i = 0; i < n; ++i) out += io::double_to_hex(data[i]);
  return out;
}

inline void decode_hex(const std::string& hex, double* data, std::size_t n) {
  if (hex.size() != 16 * n) throw FormatError("weight payload has wrong length");
  for (std::size_t i = 0; i < n; ++i) data[i] = io::hex_to_double(std::string_view(hex).substr(16 * i, 16));
}

/// Row-major weights, then biases, each as 16 hex digits per IEEE-754 double.
inline io::Json model_to_json(const ModelFile& m) {
  io::Json j;
  j["format"] = "surmodel-nn";
  j["version"] = kModelFormatVersion;
  j["role"] = m.role;
  j["seed"] = m.seed;
  j["spec"] = spec_to_json(m.network.spec());
  j["normalization"] = {{"input_min", m.normalization.input_min},
                        {"input_max", m.normalization.input_max},
                        {"output_scale", m.normalization.output_scale}};
  io::Json layers = io::Json::array();
  for (const auto& L : m.network.layers()) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W = L.W;
    layers.push_back({{"rows", L.W.rows()},
                      {"cols", L.W.cols()},
                      {"weights_hex", encode_hex(W.data(), static_cast<std::size_t>(W.size()))},
                      {"bias_hex", encode_hex(L.b.data(), static_cast<std::size_t>(L.b.size()))}});
  }
  j["layers"] = std::move(layers);
  return j;
}

inline ModelFile model_from_json(const io::Json& j) {
  try {
    if (j.at("format") != "surmodel-nn") throw FormatError("not a surmodel-nn model file");
    if (j.at("version") != kModelFormatVersion)
      throw FormatError("unsupported model version " + j.at("version").dump());
    ModelFile m;
    m.role = j.at("role").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.network = Network(spec_from_json(j.at("spec")));
    const auto& nj = j.at("normalization");
    m.normalization.input_min = nj.at("input_min").get<std::vector<double>>();
    m.normalization.input_max = nj.at("input_max").get<std::vector<double>>();
    m.normalization.output_scale = nj.at("output_scale").get<std::vector<double>>();
    const auto& lj = j.at("layers");
    auto& layers = m.network.layers();
    if (lj.size() != layers.size()) throw FormatError("layer count does not match the spec");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto& e = lj[l];
      if (e.at("rows").get<Eigen::Index>() != layers[l].W.rows() ||
          e.at("cols").get<Eigen::Index>() != layers[l].W.cols())
        throw FormatError("layer " + std::to_string(l) + " shape does not match the spec");
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W(layers[l].W.rows(),
                                                                                layers[l].W.cols());
      decode_hex(e.at("weights_hex").get<std::string>(), W.data(), static_cast<std::size_t>(W.size()));
      layers[l].W = W;
      decode_hex(e.at("bias_hex").get<std::string>(), layers[l].b.data(),
                 static_cast<std::size_t>(layers[l].b.size()));
    }
    if (!m.network.finite()) throw FormatError("non-finite weights");
    return m;
  } catch (const io::Json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

inline void save_model(const std::filesystem::path& path, const ModelFile& m) {
  io::write_json(path, model_to_json(m));
}

inline ModelFile load_model(const std::filesystem::path& path) {
  return model_from_json(io::read_json(path));
}

}  // namespace surmodel::nn
