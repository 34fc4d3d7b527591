#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latreg {

// Thrown when an iterative solver exhausts its iteration budget.
// Carries the last residual so callers can decide whether to retry.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Non-fatal diagnostics (out-of-range outcomes, degenerate signal sets).
void warn(std::string_view message);

}  // namespace latreg
