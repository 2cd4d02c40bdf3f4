#include "planloop/scene.hpp"

#include <cmath>
#include <numbers>

namespace planloop {

double Vec2::norm() const noexcept { return std::hypot(x, y); }

Vec2 AgentState::velocity() const noexcept { return {speed * std::cos(heading), speed * std::sin(heading)}; }

double normalize_angle(double angle) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a > std::numbers::pi) a -= two_pi;
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

Vec2 to_local(const AgentState& origin, const Vec2& world) noexcept {
  const Vec2 d = world - origin.position;
  const double c = std::cos(origin.heading);
  const double s = std::sin(origin.heading);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

Vec2 to_world(const AgentState& origin, const Vec2& local) noexcept {
  const double c = std::cos(origin.heading);
  const double s = std::sin(origin.heading);
  return {origin.position.x + c * local.x - s * local.y, origin.position.y + s * local.x + c * local.y};
}

}  // namespace planloop
