#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spsnav {

struct KernelCheck {
  std::string name;
  double error = 0.0;      // measured error (absolute or relative, see name)
  double tolerance = 0.0;
  bool passed = false;
};

// Self-verification of the perception kernels against independent oracles:
// BEM vs per-pixel polarity sums, attention forward vs extended-precision
// loops, analytic gradients vs central differences, loss and penalty values.
std::vector<KernelCheck> run_kernel_checks(std::uint64_t seed = 2024);

// One line per check plus a final verdict line.
void write_kernel_report(std::ostream& out, const std::vector<KernelCheck>& checks);

}  // namespace spsnav
