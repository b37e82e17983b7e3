// Copyright 2026 The mpent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpent/network.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

constexpr double kUnitarityTol = 1e-12;
constexpr double kLeakageTol = 1e-10;

NetworkElement splitter(std::string label, std::vector<std::string> in,
                        std::vector<std::string> out) {
  NetworkElement e;
  e.kind = ElementKind::splitter;
  e.label = std::move(label);
  e.inputs = std::move(in);
  e.outputs = std::move(out);
  return e;
}

NetworkElement shifter(std::string label, std::string in, std::string out, double phase) {
  NetworkElement e;
  e.kind = ElementKind::phase_shifter;
  e.label = std::move(label);
  e.inputs = {std::move(in)};
  e.outputs = {std::move(out)};
  e.phase = phase;
  return e;
}

NetworkElement qubit(int index, std::string in, std::string out) {
  NetworkElement e;
  e.kind = ElementKind::qubit;
  e.label = "qubit-" + std::to_string(index);
  e.qubit = index;
  e.inputs = {std::move(in)};
  e.outputs = {std::move(out)};
  return e;
}

std::size_t expected_inputs(ElementKind kind) {
  switch (kind) {
    case ElementKind::source:
      return 0;
    case ElementKind::splitter:
      return 2;
    default:
      return 1;
  }
}

std::size_t expected_outputs(ElementKind kind) {
  return kind == ElementKind::splitter ? 2 : 1;
}

ModeAmplitude scaled(const ModeAmplitude& a, Complex s) {
  return {a.laser * s, {a.fluorescence[0] * s, a.fluorescence[1] * s}};
}

ModeAmplitude sum(const ModeAmplitude& a, const ModeAmplitude& b) {
  return {a.laser + b.laser,
          {a.fluorescence[0] + b.fluorescence[0], a.fluorescence[1] + b.fluorescence[1]}};
}

}  // namespace

Eigen::Matrix2cd fifty_fifty_splitter() {
  const double r = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd t;
  t << Complex(r, 0.0), Complex(0.0, r), Complex(0.0, r), Complex(r, 0.0);
  return t;
}

ModeNetwork ModeNetwork::standard() {
  constexpr double quarter_turn = std::numbers::pi / 2.0;
  ModeNetwork net;
  NetworkElement laser;
  laser.kind = ElementKind::source;
  laser.label = "laser";
  laser.outputs = {"in"};
  net.elements = {
      laser,
      splitter("BS-1", {"in", "vac1"}, {"m", "c"}),
      splitter("BS-2", {"m", "vac2"}, {"p1", "p2"}),
      shifter("PS-a1", "p1", "p1s", quarter_turn),
      qubit(1, "p1s", "a1r"),
      shifter("PS-a1", "a1r", "a1", quarter_turn),
      qubit(2, "p2", "a2"),
      splitter("BS-2", {"a1", "a2"}, {"b1", "b2"}),
      shifter("PS-c", "c", "c1", quarter_turn),
      shifter("PS-c", "c1", "c2", quarter_turn),
      splitter("BS-1", {"b1", "c2"}, {"d", "e"}),
  };
  net.detector = "d";
  return net;
}

ModeNetwork ModeNetwork::without(std::string_view label) const {
  ModeNetwork out = *this;
  bool found = false;
  for (auto& e : out.elements) {
    if (e.kind == ElementKind::phase_shifter && e.label == label) {
      e.phase = 0.0;
      found = true;
    }
  }
  if (!found) throw ValidationError("no phase shifter labelled '" + std::string(label) + "'");
  return out;
}

ModeNetwork ModeNetwork::with_qubits_swapped() const {
  ModeNetwork out = *this;
  for (auto& e : out.elements) {
    if (e.kind == ElementKind::qubit) {
      e.qubit = 3 - e.qubit;
      e.label = "qubit-" + std::to_string(e.qubit);
    }
  }
  return out;
}

void ModeNetwork::validate() const {
  std::set<std::string> produced;
  std::set<std::string> consumed;
  int sources = 0;
  std::array<int, 2> qubits{0, 0};
  for (const auto& e : elements) {
    const std::string where = "element '" + e.label + "'";
    if (e.inputs.size() != expected_inputs(e.kind) ||
        e.outputs.size() != expected_outputs(e.kind))
      throw ValidationError(where + " has the wrong number of ports");
    for (const auto& m : e.outputs)
      if (!produced.insert(m).second)
        throw ValidationError("mode '" + m + "' is produced twice");
    for (const auto& m : e.inputs)
      if (!consumed.insert(m).second)
        throw ValidationError("mode '" + m + "' is consumed twice");
    switch (e.kind) {
      case ElementKind::source:
        ++sources;
        break;
      case ElementKind::splitter: {
        const Eigen::Matrix2cd gram = e.transfer.adjoint() * e.transfer;
        if ((gram - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kUnitarityTol)
          throw NonUnitarySplitter(where + " is not unitary");
        break;
      }
      case ElementKind::phase_shifter:
        if (!std::isfinite(e.phase)) throw ValidationError(where + " has a non-finite phase");
        break;
      case ElementKind::qubit:
        if (e.qubit != 1 && e.qubit != 2)
          throw ValidationError(where + " must have qubit index 1 or 2");
        ++qubits[e.qubit - 1];
        break;
    }
  }
  if (sources != 1) throw ValidationError("network needs exactly one laser source");
  if (qubits[0] != 1 || qubits[1] != 1)
    throw ValidationError("network needs exactly one element for each of qubits 1 and 2");
  if (!produced.contains(detector) || consumed.contains(detector))
    throw ValidationError("detector mode '" + detector + "' must be a terminal output");

  const auto amps = propagate();
  const auto drive = drive_amplitudes();
  for (int s = 0; s < 2; ++s) {
    if (std::abs(drive[s]) < kLeakageTol)
      throw ValidationError("qubit " + std::to_string(s + 1) + " receives no laser drive");
    if (std::abs(amps.at(detector).fluorescence[s]) < kLeakageTol)
      throw ValidationError("fluorescence of qubit " + std::to_string(s + 1) +
                            " never reaches the detector");
  }
}

std::map<std::string, ModeAmplitude> ModeNetwork::propagate(Complex laser) const {
  std::map<std::string, ModeAmplitude> modes;
  std::set<std::string> produced;
  for (const auto& e : elements) produced.insert(e.outputs.begin(), e.outputs.end());
  // Inputs nobody produces are vacuum ports.
  for (const auto& e : elements)
    for (const auto& m : e.inputs)
      if (!produced.contains(m)) modes[m] = ModeAmplitude{};

  std::vector<bool> done(elements.size(), false);
  std::size_t remaining = elements.size();
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (done[i]) continue;
      const auto& e = elements[i];
      bool ready = true;
      for (const auto& m : e.inputs) ready = ready && modes.contains(m);
      if (!ready) continue;
      switch (e.kind) {
        case ElementKind::source:
          modes[e.outputs[0]] = ModeAmplitude{laser, {}};
          break;
        case ElementKind::splitter: {
          const auto& in0 = modes.at(e.inputs[0]);
          const auto& in1 = modes.at(e.inputs[1]);
          for (int r = 0; r < 2; ++r)
            modes[e.outputs[r]] = sum(scaled(in0, e.transfer(r, 0)), scaled(in1, e.transfer(r, 1)));
          break;
        }
        case ElementKind::phase_shifter:
          modes[e.outputs[0]] = scaled(modes.at(e.inputs[0]), std::polar(1.0, e.phase));
          break;
        case ElementKind::qubit: {
          ModeAmplitude out = modes.at(e.inputs[0]);
          out.fluorescence[e.qubit - 1] += 1.0;
          modes[e.outputs[0]] = out;
          break;
        }
      }
      done[i] = true;
      --remaining;
      progressed = true;
    }
    if (!progressed) throw ValidationError("network wiring contains a cycle or a dangling input");
  }
  return modes;
}

std::vector<std::string> ModeNetwork::terminal_modes() const {
  std::set<std::string> consumed;
  for (const auto& e : elements) consumed.insert(e.inputs.begin(), e.inputs.end());
  std::vector<std::string> out;
  for (const auto& e : elements)
    for (const auto& m : e.outputs)
      if (!consumed.contains(m)) out.push_back(m);
  return out;
}

std::array<Complex, 2> ModeNetwork::drive_amplitudes(Complex laser) const {
  const auto modes = propagate(laser);
  std::array<Complex, 2> drive{};
  for (const auto& e : elements)
    if (e.kind == ElementKind::qubit && (e.qubit == 1 || e.qubit == 2))
      drive[e.qubit - 1] = modes.at(e.inputs[0]).laser;
  return drive;
}

DetectionModel build_network(const ModeNetwork& network, double efficiency, double t1) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0))
    throw ValidationError("efficiency must lie in [0, 1]");
  if (!(t1 > 0.0)) throw ValidationError("t1 must be > 0");
  network.validate();

  const auto modes = network.propagate();
  const auto drive = network.drive_amplitudes();
  const ModeAmplitude& at_d = modes.at(network.detector);

  DetectionModel model;
  model.laser_amp_at_d = at_d.laser;
  model.rate_prefactor = efficiency / t1;
  for (int s = 0; s < 2; ++s)
    model.amp[s] = at_d.fluorescence[s] * (drive[s] / std::abs(drive[s]));
  if (std::abs(at_d.laser) > kLeakageTol)
    throw LaserLeakage("laser amplitude " + std::to_string(std::abs(at_d.laser)) +
                       " reaches detector mode '" + network.detector + "'");
  return model;
}

std::array<bool, 2> state_participation(JointSpinState state) {
  switch (state) {
    case JointSpinState::PP:
      return {false, false};
    case JointSpinState::PM:
      return {false, true};
    case JointSpinState::MP:
      return {true, false};
    case JointSpinState::MM:
      return {true, true};
  }
  return {false, false};
}

}  // namespace mpent
