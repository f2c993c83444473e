#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spsnav/errors.hpp"
#include "spsnav/geometry.hpp"

namespace spsnav {

// ---------------------------------------------------------------------------
// Event encoding

struct Event {
  int x = 0;
  int y = 0;
  std::int64_t t = 0;  // microseconds
  int polarity = 1;    // +1 or -1
};

struct EventWindow {
  std::vector<Event> events;
  std::int64_t t_start = 0;  // inclusive [us]
  std::int64_t t_end = 0;    // exclusive [us]
  int height = 0;
  int width = 0;
};

inline constexpr std::int64_t kDefaultWindowUs = 10'000;

// Rows are image rows (y), columns are image columns (x).
using BinaryEventMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using Image = Eigen::ArrayXXd;

// 1 where positive and negative event counts differ within the window.
BinaryEventMask encode_bem(const EventWindow& window);

// Two-frame log-contrast event generator: floor(|log b - log a| / C) events per
// pixel with the sign of the change, evenly spaced inside [t_start, t_end).
EventWindow synth_events(const Image& frame_a, const Image& frame_b, double contrast_threshold,
                         std::int64_t t_start = 0, std::int64_t t_end = kDefaultWindowUs);

// Binary PGM (P5), mask values scaled 1 -> 255.
void write_pgm(std::ostream& out, const BinaryEventMask& mask);

// ---------------------------------------------------------------------------
// Cross-attention. Tokens are columns: Q, K are d_k x N, V is d_v x N.

template <typename Scalar>
using FeatureMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct AttentionInputs {
  FeatureMatrix<Scalar> query;
  FeatureMatrix<Scalar> key;
  FeatureMatrix<Scalar> value;
};

template <typename Scalar>
struct AttentionGradients {
  FeatureMatrix<Scalar> d_query;
  FeatureMatrix<Scalar> d_key;
  FeatureMatrix<Scalar> d_value;
};

namespace detail {

template <typename Scalar>
void check_attention_shapes(const FeatureMatrix<Scalar>& q, const FeatureMatrix<Scalar>& k,
                            const FeatureMatrix<Scalar>& v) {
  if (q.rows() != k.rows())
    throw ContractViolation("attention: query and key feature dimensions differ");
  if (k.cols() != v.cols()) throw ContractViolation("attention: key and value token counts differ");
  if (q.rows() == 0 || q.cols() == 0 || k.cols() == 0)
    throw ContractViolation("attention: empty feature matrix");
}

}  // namespace detail

// Row j holds query j's softmax weights over the keys (N_q x N_k).
template <typename Scalar>
FeatureMatrix<Scalar> attention_weights(const FeatureMatrix<Scalar>& q,
                                        const FeatureMatrix<Scalar>& k) {
  using std::sqrt;
  using std::exp;
  FeatureMatrix<Scalar> a = (q.transpose() * k) / sqrt(Scalar(q.rows()));
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const Scalar peak = a.row(j).maxCoeff();
    a.row(j) = (a.row(j).array() - peak).unaryExpr([](Scalar s) { return exp(s); }).matrix();
    a.row(j) /= a.row(j).sum();
  }
  return a;
}

// Output column j = sum_k softmax_k(q_j . k_k / sqrt(d_k)) v_k; shape d_v x N_q.
template <typename Scalar>
FeatureMatrix<Scalar> attention_forward(const FeatureMatrix<Scalar>& q,
                                        const FeatureMatrix<Scalar>& k,
                                        const FeatureMatrix<Scalar>& v) {
  detail::check_attention_shapes(q, k, v);
  return v * attention_weights(q, k).transpose();
}

// Gradients of <upstream, attention_forward(q, k, v)>.
template <typename Scalar>
AttentionGradients<Scalar> attention_gradients(const FeatureMatrix<Scalar>& q,
                                               const FeatureMatrix<Scalar>& k,
                                               const FeatureMatrix<Scalar>& v,
                                               const FeatureMatrix<Scalar>& upstream) {
  using std::sqrt;
  detail::check_attention_shapes(q, k, v);
  if (upstream.rows() != v.rows() || upstream.cols() != q.cols())
    throw ContractViolation("attention: upstream gradient shape differs from the output");

  const FeatureMatrix<Scalar> a = attention_weights(q, k);
  const FeatureMatrix<Scalar> d_a = upstream.transpose() * v;
  // Softmax backward, row by row: dS = A o (dA - rowsum(A o dA)).
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_dot = a.cwiseProduct(d_a).rowwise().sum();
  const FeatureMatrix<Scalar> d_s =
      a.cwiseProduct(d_a - row_dot.replicate(1, a.cols())) / sqrt(Scalar(q.rows()));

  AttentionGradients<Scalar> g;
  g.d_value = upstream * a;
  g.d_query = k * d_s.transpose();
  g.d_key = q * d_s;
  return g;
}

// depth queries attend over event keys/values, event queries over depth
// keys/values, and the two outputs are summed.
template <typename Scalar>
FeatureMatrix<Scalar> bidirectional_fuse(const AttentionInputs<Scalar>& depth,
                                         const AttentionInputs<Scalar>& event) {
  FeatureMatrix<Scalar> depth2event = attention_forward(depth.query, event.key, event.value);
  FeatureMatrix<Scalar> event2depth = attention_forward(event.query, depth.key, depth.value);
  if (depth2event.rows() != event2depth.rows() || depth2event.cols() != event2depth.cols())
    throw ContractViolation("bidirectional_fuse: directional outputs differ in shape");
  return depth2event + event2depth;
}

// ---------------------------------------------------------------------------
// Losses and command normalization

struct VelocityCommand {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  Vec3 vec() const { return {vx, vy, vz}; }
};

inline constexpr double kLossVelocityWeight = 0.7;
inline constexpr double kLossPenaltyWeight = 0.3;

// 2 exp(-3 d) within 0.5 m of an obstacle, zero beyond. Throws InputError for d < 0.
double penalty(double d_near);

struct LossTerms {
  double velocity = 0.0;  // squared L2 distance between commands
  double penalty = 0.0;
  double total = 0.0;
};

LossTerms total_loss(const VelocityCommand& v_expert, const VelocityCommand& v_pred,
                     double d_near);

// Drops z and rescales (x, y) to unit length. Throws InputError on a zero xy projection.
VelocityCommand normalize_command_xy(const Vec3& raw);

// Physical velocity v_set * command.
inline Vec3 scale_command(const VelocityCommand& command, double v_set) {
  return v_set * command.vec();
}

}  // namespace spsnav
