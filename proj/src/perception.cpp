#include "spsnav/perception.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace spsnav {

namespace {

// Absorbs rounding in log(b) - log(a) so an exact multiple of C yields that many events.
constexpr double kContrastSlack = 1e-9;

}  // namespace

BinaryEventMask encode_bem(const EventWindow& window) {
  if (window.height <= 0 || window.width <= 0)
    throw InputError("encode_bem: sensor size must be positive");
  Eigen::MatrixXi polarity_sum = Eigen::MatrixXi::Zero(window.height, window.width);
  for (const Event& e : window.events) {
    if (e.x < 0 || e.x >= window.width || e.y < 0 || e.y >= window.height)
      throw InputError("encode_bem: event at (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                       ") lies outside the sensor");
    if (e.t < window.t_start || e.t >= window.t_end)
      throw InputError("encode_bem: event timestamp outside the window");
    if (e.polarity != 1 && e.polarity != -1) throw InputError("encode_bem: polarity must be +1 or -1");
    polarity_sum(e.y, e.x) += e.polarity;
  }
  return (polarity_sum.array() != 0).cast<std::uint8_t>().matrix();
}

EventWindow synth_events(const Image& frame_a, const Image& frame_b, double contrast_threshold,
                         std::int64_t t_start, std::int64_t t_end) {
  if (frame_a.rows() != frame_b.rows() || frame_a.cols() != frame_b.cols())
    throw InputError("synth_events: frames differ in shape");
  if (!(contrast_threshold > 0.0)) throw InputError("synth_events: contrast threshold must be positive");
  if (t_end <= t_start) throw InputError("synth_events: empty time window");
  if (!(frame_a > 0.0).all() || !(frame_b > 0.0).all())
    throw InputError("synth_events: intensities must be positive");

  EventWindow w;
  w.height = static_cast<int>(frame_a.rows());
  w.width = static_cast<int>(frame_a.cols());
  w.t_start = t_start;
  w.t_end = t_end;
  const double span = static_cast<double>(t_end - t_start);
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      const double change = std::log(frame_b(y, x)) - std::log(frame_a(y, x));
      const auto count = static_cast<long>(std::floor(std::abs(change) / contrast_threshold + kContrastSlack));
      const int polarity = change > 0.0 ? 1 : -1;
      for (long i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i + 1) / static_cast<double>(count + 1);
        const auto t = t_start + static_cast<std::int64_t>(std::floor(frac * span));
        w.events.push_back({x, y, std::min(t, t_end - 1), polarity});
      }
    }
  }
  std::stable_sort(w.events.begin(), w.events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return w;
}

void write_pgm(std::ostream& out, const BinaryEventMask& mask) {
  out << "P5\n" << mask.cols() << ' ' << mask.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c) out.put(mask(r, c) ? static_cast<char>(255) : '\0');
}

double penalty(double d_near) {
  if (std::isnan(d_near) || d_near < 0.0)
    throw InputError("penalty: d_near must be non-negative (penetration is a collision)");
  return d_near <= 0.5 ? 2.0 * std::exp(-3.0 * d_near) : 0.0;
}

LossTerms total_loss(const VelocityCommand& v_expert, const VelocityCommand& v_pred, double d_near) {
  const Vec3 diff = v_expert.vec() - v_pred.vec();
  if (!diff.allFinite()) throw InputError("total_loss: non-finite velocity command");
  LossTerms l;
  l.velocity = diff.squaredNorm();
  l.penalty = penalty(d_near);
  l.total = kLossVelocityWeight * l.velocity + kLossPenaltyWeight * l.penalty;
  return l;
}

VelocityCommand normalize_command_xy(const Vec3& raw) {
  const double planar = std::hypot(raw.x(), raw.y());
  if (!(planar > 0.0) || !std::isfinite(planar))
    throw InputError("normalize_command_xy: command has no horizontal component");
  return {raw.x() / planar, raw.y() / planar, 0.0};
}

}  // namespace spsnav
