#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "planloop/loop.hpp"
#include "planloop/trajectory.hpp"

namespace planloop::testing {

inline Trajectory line(double dx, double dy, std::size_t n = kDefaultQueryCount) {
  Trajectory t;
  for (std::size_t i = 1; i <= n; ++i) {
    const double s = static_cast<double>(i);
    t.waypoints.push_back({0.5 * s, dx * s, dy * s});
  }
  return t;
}

inline Trajectory scaled(const Trajectory& in, double k) {
  Trajectory out = in;
  for (auto& w : out.waypoints) {
    w.x *= k;
    w.y *= k;
  }
  return out;
}

/// Returns outputs[call] (the last one once exhausted) and records calls.
class ScriptedAgent : public DrivingAgent {
 public:
  explicit ScriptedAgent(std::vector<Trajectory> outputs) : outputs_(std::move(outputs)) {}

  Trajectory plan(const SceneState&, double, std::optional<std::span<const SceneState>> keyframes) override {
    keyframe_counts.push_back(keyframes ? keyframes->size() : 0);
    const std::size_t i = std::min(calls, outputs_.size() - 1);
    ++calls;
    if (fail_on_call && *fail_on_call == calls - 1) throw std::runtime_error("scripted failure");
    return outputs_[i];
  }

  std::size_t calls = 0;
  std::vector<std::size_t> keyframe_counts;
  std::optional<std::size_t> fail_on_call;

 private:
  std::vector<Trajectory> outputs_;
};

/// base + perturbation * 0.5^k on call k.
class HalvingAgent : public DrivingAgent {
 public:
  HalvingAgent(Trajectory base, Trajectory perturbation) : base_(std::move(base)), pert_(std::move(perturbation)) {}

  static Trajectory output(const Trajectory& base, const Trajectory& pert, std::size_t k) {
    Trajectory out = base;
    const double f = std::ldexp(1.0, -static_cast<int>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].x += f * pert[i].x;
      out[i].y += f * pert[i].y;
    }
    return out;
  }

  Trajectory plan(const SceneState&, double, std::optional<std::span<const SceneState>>) override {
    return output(base_, pert_, calls++);
  }

  std::size_t calls = 0;

 private:
  Trajectory base_;
  Trajectory pert_;
};

/// Replays a fixed frame sequence (25 frames at 10 Hz by default).
class ReplayImaginer : public SceneImaginer {
 public:
  explicit ReplayImaginer(std::size_t frames = 25, double rate_hz = 10.0) {
    for (std::size_t k = 0; k < frames; ++k) {
      SceneState s;
      s.time = static_cast<double>(k + 1) / rate_hz;
      seq_.frames.push_back(s);
    }
  }

  ImaginedSequence imagine(const ObservationHistory&, const Trajectory& conditioning) override {
    ++calls;
    conditionings.push_back(conditioning);
    if (fail_on_call && *fail_on_call == calls) throw std::runtime_error("replay failure");
    return seq_;
  }

  std::size_t calls = 0;
  std::vector<Trajectory> conditionings;
  std::optional<std::size_t> fail_on_call;

 private:
  ImaginedSequence seq_;
};

inline ObservationHistory still_history(std::size_t frames = 4, double dt = 0.1) {
  ObservationHistory h;
  for (std::size_t i = 0; i < frames; ++i) {
    SceneState s;
    s.time = static_cast<double>(i) * dt;
    h.frames.push_back(s);
  }
  return h;
}

}  // namespace planloop::testing
