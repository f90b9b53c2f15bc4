// Copyright 2026 The qsqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsqed/noise.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace qsqed {

namespace {

std::vector<Mat> pauli_terms(int d) {
  std::vector<Mat> out;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z})
        out.push_back(subspace_pauli(axis, i, j, d, PauliMode::Embedded));
  return out;
}

Mat kron2(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

double pair_probability(const PauliChannelSpec& spec, int i, int j) {
  const auto it = spec.one_qudit.find({i, j});
  const double value = it == spec.one_qudit.end() ? 0.0 : it->second;
  return spec.axis_interpretation == OneQuditAxisInterpretation::PerAxis ? value : value / 3.0;
}

}  // namespace

std::string to_string(TwoQuditMode mode) {
  switch (mode) {
    case TwoQuditMode::PerTerm: return "per-term";
    case TwoQuditMode::Total: return "total";
    case TwoQuditMode::Factored: return "factored";
    case TwoQuditMode::Off: return "off";
  }
  return "?";
}

TwoQuditMode two_qudit_mode_from_string(const std::string& name) {
  if (name == "per-term" || name == "per_term") return TwoQuditMode::PerTerm;
  if (name == "total") return TwoQuditMode::Total;
  if (name == "factored") return TwoQuditMode::Factored;
  if (name == "off") return TwoQuditMode::Off;
  throw std::invalid_argument("unknown two-qudit noise mode: " + name);
}

std::string PauliChannelSpec::to_json() const {
  nlohmann::json j;
  nlohmann::json oq = nlohmann::json::object();
  for (const auto& [pair, p] : one_qudit)
    oq[std::to_string(pair.first) + std::to_string(pair.second)] = p;
  j["one_qudit"] = oq;
  j["two_qudit"] = {{"mode", to_string(two_qudit_mode)}, {"p", two_qudit_p}};
  j["axis_interpretation"] =
      axis_interpretation == OneQuditAxisInterpretation::PerAxis ? "per-axis" : "total-split-3";
  j["d"] = d;
  return j.dump();
}

PauliChannelSpec PauliChannelSpec::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PauliChannelSpec spec;
  spec.one_qudit.clear();
  for (const auto& [key, value] : j.at("one_qudit").items()) {
    if (key.size() != 2) throw std::invalid_argument("bad one_qudit pair key: " + key);
    spec.one_qudit[{key[0] - '0', key[1] - '0'}] = value.get<double>();
  }
  spec.two_qudit_mode = two_qudit_mode_from_string(j.at("two_qudit").at("mode").get<std::string>());
  spec.two_qudit_p = j.at("two_qudit").at("p").get<double>();
  if (j.contains("axis_interpretation"))
    spec.axis_interpretation = j["axis_interpretation"] == "total-split-3"
                                   ? OneQuditAxisInterpretation::TotalSplit3
                                   : OneQuditAxisInterpretation::PerAxis;
  if (j.contains("d")) spec.d = j["d"].get<int>();
  return spec;
}

PauliChannelSpec PauliChannelSpec::scaled(double factor) const {
  PauliChannelSpec out = *this;
  for (auto& [pair, p] : out.one_qudit) p *= factor;
  out.two_qudit_p *= factor;
  return out;
}

bool PauliChannelSpec::is_zero() const {
  if (two_qudit_mode != TwoQuditMode::Off && two_qudit_p != 0.0) return false;
  for (const auto& [pair, p] : one_qudit)
    if (p != 0.0) return false;
  return true;
}

Channel build_1q_channel(const PauliChannelSpec& spec) {
  const int d = spec.d;
  std::vector<Mat> kraus;
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double p = pair_probability(spec, i, j);
      if (p < 0.0) throw std::invalid_argument("build_1q_channel: negative probability");
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        if (p == 0.0) continue;
        kraus.push_back(std::sqrt(p) * subspace_pauli(axis, i, j, d, PauliMode::Embedded));
        total += p;
      }
    }
  }
  if (total >= 1.0)
    throw std::invalid_argument("build_1q_channel: total error probability >= 1");
  kraus.insert(kraus.begin(), std::sqrt(1.0 - total) * Mat::Identity(d, d));
  return Channel(std::move(kraus), 1);
}

Channel build_2q_channel(const PauliChannelSpec& spec) {
  const int d = spec.d;
  const std::vector<Mat> paulis = pauli_terms(d);
  const std::size_t n_terms = paulis.size() * paulis.size();
  std::vector<Mat> kraus;
  const double p = spec.two_qudit_p;
  if (p < 0.0) throw std::invalid_argument("build_2q_channel: negative probability");

  switch (spec.two_qudit_mode) {
    case TwoQuditMode::Off:
      kraus.push_back(Mat::Identity(d * d, d * d));
      break;
    case TwoQuditMode::PerTerm: {
      const double total = p * static_cast<double>(n_terms);
      if (total >= 1.0)
        throw std::invalid_argument("build_2q_channel: per-term total probability >= 1");
      kraus.push_back(std::sqrt(1.0 - total) * Mat::Identity(d * d, d * d));
      for (const Mat& a : paulis)
        for (const Mat& b : paulis) kraus.push_back(std::sqrt(p) * kron2(a, b));
      break;
    }
    case TwoQuditMode::Total: {
      if (p >= 1.0) throw std::invalid_argument("build_2q_channel: total probability >= 1");
      kraus.push_back(std::sqrt(1.0 - p) * Mat::Identity(d * d, d * d));
      const double per = p / static_cast<double>(n_terms);
      for (const Mat& a : paulis)
        for (const Mat& b : paulis) kraus.push_back(std::sqrt(per) * kron2(a, b));
      break;
    }
    case TwoQuditMode::Factored: {
      const double side_total = p * static_cast<double>(paulis.size());
      if (side_total >= 1.0)
        throw std::invalid_argument("build_2q_channel: factored per-side probability >= 1");
      std::vector<std::pair<double, Mat>> side;
      side.emplace_back(1.0 - side_total, Mat::Identity(d, d));
      for (const Mat& a : paulis) side.emplace_back(p, a);
      for (const auto& [pa, a] : side)
        for (const auto& [pb, b] : side) kraus.push_back(std::sqrt(pa * pb) * kron2(a, b));
      break;
    }
  }
  return Channel(std::move(kraus), 2);
}

std::vector<NoisyOp> attach_noise(const GateSequence& seq, const PauliChannelSpec& spec,
                                  const NoisePolicy& policy) {
  std::shared_ptr<const Channel> chan1, chan2;
  if (policy.one_qudit_noisy) chan1 = std::make_shared<Channel>(build_1q_channel(spec));
  if (policy.two_qudit_noisy && spec.two_qudit_mode != TwoQuditMode::Off)
    chan2 = std::make_shared<Channel>(build_2q_channel(spec));

  std::vector<NoisyOp> out;
  out.reserve(seq.ops.size());
  for (const GateOp& op : seq.ops) {
    NoisyOp item;
    item.op = &op;
    switch (op.noise) {
      case NoiseClass::RzVirtual:
        break;
      case NoiseClass::OneQuditNoisy:
        item.channel = chan1;
        break;
      case NoiseClass::TwoQudit:
        item.channel = chan2;
        break;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace qsqed
