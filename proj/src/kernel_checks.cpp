#include "spsnav/kernel_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "spsnav/perception.hpp"
#include "spsnav/rng.hpp"

namespace spsnav {

namespace {

using Mat = FeatureMatrix<double>;

constexpr int kFeatureDim = 8;
constexpr int kTokens = 16;
constexpr int kInstances = 20;
constexpr double kFiniteDiffStep = 1e-6;
// Gradient entries below this magnitude are compared absolutely.
constexpr double kRelativeFloor = 1e-3;

Mat random_matrix(SplitMix64& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.uniform(-1.0, 1.0);
  return m;
}

// Straight loops in long double; shares nothing with the Eigen path.
std::vector<std::vector<long double>> attention_reference(const Mat& q, const Mat& k, const Mat& v) {
  const auto d = static_cast<std::size_t>(q.rows());
  const auto nq = static_cast<std::size_t>(q.cols());
  const auto nk = static_cast<std::size_t>(k.cols());
  const auto dv = static_cast<std::size_t>(v.rows());
  const long double scale = std::sqrt(static_cast<long double>(d));
  std::vector<std::vector<long double>> out(dv, std::vector<long double>(nq, 0.0L));
  for (std::size_t j = 0; j < nq; ++j) {
    std::vector<long double> s(nk);
    for (std::size_t kk = 0; kk < nk; ++kk) {
      long double acc = 0.0L;
      for (std::size_t i = 0; i < d; ++i)
        acc += static_cast<long double>(q(Eigen::Index(i), Eigen::Index(j))) *
               static_cast<long double>(k(Eigen::Index(i), Eigen::Index(kk)));
      s[kk] = acc / scale;
    }
    const long double peak = *std::max_element(s.begin(), s.end());
    long double total = 0.0L;
    for (long double& x : s) total += (x = std::exp(x - peak));
    for (std::size_t kk = 0; kk < nk; ++kk)
      for (std::size_t i = 0; i < dv; ++i)
        out[i][j] += (s[kk] / total) * static_cast<long double>(v(Eigen::Index(i), Eigen::Index(kk)));
  }
  return out;
}

double objective(const Mat& q, const Mat& k, const Mat& v, const Mat& g) {
  return attention_forward(q, k, v).cwiseProduct(g).sum();
}

// Central differences of <g, attention(q, k, v)> with respect to `which` (0=q, 1=k, 2=v).
Mat numeric_gradient(Mat q, Mat k, Mat v, const Mat& g, int which) {
  Mat& target = which == 0 ? q : (which == 1 ? k : v);
  Mat grad(target.rows(), target.cols());
  for (Eigen::Index c = 0; c < target.cols(); ++c) {
    for (Eigen::Index r = 0; r < target.rows(); ++r) {
      const double saved = target(r, c);
      target(r, c) = saved + kFiniteDiffStep;
      const double up = objective(q, k, v, g);
      target(r, c) = saved - kFiniteDiffStep;
      const double down = objective(q, k, v, g);
      target(r, c) = saved;
      grad(r, c) = (up - down) / (2.0 * kFiniteDiffStep);
    }
  }
  return grad;
}

double max_relative_error(const Mat& analytic, const Mat& numeric) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
    for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
      const double a = analytic(r, c), n = numeric(r, c);
      worst = std::max(worst, std::abs(a - n) / std::max({kRelativeFloor, std::abs(a), std::abs(n)}));
    }
  }
  return worst;
}

KernelCheck check(std::string name, double error, double tolerance) {
  return {std::move(name), error, tolerance, error <= tolerance};
}

}  // namespace

std::vector<KernelCheck> run_kernel_checks(std::uint64_t seed) {
  std::vector<KernelCheck> out;
  SplitMix64 rng(seed);

  // Penalty and loss values.
  out.push_back(check("penalty(0) == 2 [abs]", std::abs(penalty(0.0) - 2.0), 1e-12));
  out.push_back(check("penalty(0.51) == 0 [abs]", std::abs(penalty(0.51)), 1e-12));
  out.push_back(check("penalty(0.5) == 2exp(-1.5) [abs]", std::abs(penalty(0.5) - 0.44626), 1e-5));
  out.push_back(check("total_loss((1,0,0),(0,1,0),0.5) == 1.53388 [abs]",
                      std::abs(total_loss({1, 0, 0}, {0, 1, 0}, 0.5).total - 1.53388), 1e-4));
  out.push_back(check("total_loss(v,v,0.2) == 0.3*2exp(-0.6) [abs]",
                      std::abs(total_loss({0.6, 0.8, 0}, {0.6, 0.8, 0}, 0.2).total - 0.32929), 1e-4));

  // BEM against per-pixel polarity sums on random windows.
  {
    long mismatches = 0;
    SplitMix64 events_rng = rng.split();
    for (int w = 0; w < 100; ++w) {
      EventWindow win;
      win.height = 24;
      win.width = 32;
      win.t_end = kDefaultWindowUs;
      std::vector<int> sums(static_cast<std::size_t>(win.height * win.width), 0);
      const int n = 50 + static_cast<int>(events_rng.next() % 1000);
      for (int i = 0; i < n; ++i) {
        Event e;
        e.x = static_cast<int>(events_rng.next() % static_cast<std::uint64_t>(win.width));
        e.y = static_cast<int>(events_rng.next() % static_cast<std::uint64_t>(win.height));
        e.t = static_cast<std::int64_t>(events_rng.next() % static_cast<std::uint64_t>(win.t_end));
        e.polarity = (events_rng.next() & 1U) ? 1 : -1;
        sums[static_cast<std::size_t>(e.y * win.width + e.x)] += e.polarity;
        win.events.push_back(e);
      }
      const BinaryEventMask mask = encode_bem(win);
      for (int y = 0; y < win.height; ++y)
        for (int x = 0; x < win.width; ++x)
          mismatches += (mask(y, x) != 0) != (sums[static_cast<std::size_t>(y * win.width + x)] != 0);
    }
    out.push_back(check("BEM vs polarity-sum oracle, 100 windows [pixel mismatches]",
                        static_cast<double>(mismatches), 0.0));
  }

  // Attention forward, weights, fusion and gradients on random instances.
  double forward_err = 0.0, weight_err = 0.0, shift_err = 0.0, fusion_err = 0.0;
  double grad_q = 0.0, grad_k = 0.0, grad_v = 0.0;
  for (int inst = 0; inst < kInstances; ++inst) {
    const Mat q = random_matrix(rng, kFeatureDim, kTokens);
    const Mat k = random_matrix(rng, kFeatureDim, kTokens);
    const Mat v = random_matrix(rng, kFeatureDim, kTokens);
    const Mat g = random_matrix(rng, kFeatureDim, kTokens);

    const Mat fwd = attention_forward(q, k, v);
    const auto ref = attention_reference(q, k, v);
    for (Eigen::Index c = 0; c < fwd.cols(); ++c) {
      for (Eigen::Index r = 0; r < fwd.rows(); ++r) {
        const long double exact = ref[std::size_t(r)][std::size_t(c)];
        const long double denom = std::max(std::abs(exact), 1e-300L);
        forward_err = std::max(forward_err,
                               static_cast<double>(std::abs(static_cast<long double>(fwd(r, c)) - exact) / denom));
      }
    }

    const Mat weights = attention_weights(q, k);
    weight_err = std::max(weight_err, (weights.rowwise().sum().array() - 1.0).abs().maxCoeff());

    // Adding a constant to every score leaves the softmax unchanged.
    Mat a_shift = (q.transpose() * k) / std::sqrt(double(kFeatureDim));
    a_shift.array() += 3.75;
    for (Eigen::Index j = 0; j < a_shift.rows(); ++j) {
      a_shift.row(j) = (a_shift.row(j).array() - a_shift.row(j).maxCoeff()).exp().matrix();
      a_shift.row(j) /= a_shift.row(j).sum();
    }
    shift_err = std::max(shift_err, (v * a_shift.transpose() - fwd).cwiseAbs().maxCoeff());

    const Mat q2 = random_matrix(rng, kFeatureDim, kTokens);
    const Mat k2 = random_matrix(rng, kFeatureDim, kTokens);
    const Mat v2 = random_matrix(rng, kFeatureDim, kTokens);
    const Mat fused = bidirectional_fuse<double>({q2, k2, v2}, {q, k, v});
    const Mat expected = attention_forward(q2, k, v) + attention_forward(q, k2, v2);
    fusion_err = std::max(fusion_err, (fused - expected).cwiseAbs().maxCoeff());

    const AttentionGradients<double> grads = attention_gradients(q, k, v, g);
    grad_q = std::max(grad_q, max_relative_error(grads.d_query, numeric_gradient(q, k, v, g, 0)));
    grad_k = std::max(grad_k, max_relative_error(grads.d_key, numeric_gradient(q, k, v, g, 1)));
    grad_v = std::max(grad_v, max_relative_error(grads.d_value, numeric_gradient(q, k, v, g, 2)));
  }
  out.push_back(check("attention forward vs long-double loops, 20 instances [rel]", forward_err, 1e-10));
  out.push_back(check("attention weights sum to 1 per query [abs]", weight_err, 1e-12));
  out.push_back(check("softmax shift invariance [abs]", shift_err, 1e-12));
  out.push_back(check("fusion == depth2event + event2depth [abs]", fusion_err, 1e-12));
  out.push_back(check("dQ vs central differences h=1e-6 [max rel]", grad_q, 1e-5));
  out.push_back(check("dK vs central differences h=1e-6 [max rel]", grad_k, 1e-5));
  out.push_back(check("dV vs central differences h=1e-6 [max rel]", grad_v, 1e-5));

  // Two-frame synthesis followed by BEM on an all-brightening pair.
  {
    constexpr double contrast = 0.15;
    Image a(12, 20), b(12, 20);
    long mismatches = 0;
    for (int y = 0; y < a.rows(); ++y) {
      for (int x = 0; x < a.cols(); ++x) {
        a(y, x) = 0.2 + 0.03 * x + 0.01 * y;
        b(y, x) = a(y, x) * std::exp(0.02 * x * (1 + y % 3));
      }
    }
    const BinaryEventMask mask = encode_bem(synth_events(a, b, contrast));
    for (int y = 0; y < a.rows(); ++y)
      for (int x = 0; x < a.cols(); ++x) {
        const bool expect = std::floor((std::log(b(y, x)) - std::log(a(y, x))) / contrast + 1e-9) >= 1.0;
        mismatches += (mask(y, x) != 0) != expect;
      }
    out.push_back(check("synth_events + BEM marks floor(dlog/C) >= 1 [pixel mismatches]",
                        static_cast<double>(mismatches), 0.0));
  }
  return out;
}

void write_kernel_report(std::ostream& out, const std::vector<KernelCheck>& checks) {
  char buf[512];
  int failed = 0;
  for (const KernelCheck& c : checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-62s error=%.3e tol=%.1e\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.error, c.tolerance);
    out << buf;
    failed += c.passed ? 0 : 1;
  }
  out << (failed == 0 ? "kernels-check: all " + std::to_string(checks.size()) + " checks passed\n"
                      : "kernels-check: " + std::to_string(failed) + " of " +
                            std::to_string(checks.size()) + " checks FAILED\n");
}

}  // namespace spsnav
