#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace polaron {

// Sobol low-discrepancy sequence (Joe-Kuo direction numbers) in up to 6
// dimensions, with optional digital-shift randomization. Deterministic in
// (dim, seed). Points lie strictly inside (0, 1): the generator adds half an
// ulp of the 32-bit lattice after the shift.
class SobolSequence {
 public:
  static constexpr int kMaxDim = 6;

  // seed == 0 gives the unshifted (deterministic) sequence; any other seed
  // draws one 32-bit digital shift per dimension.
  explicit SobolSequence(int dim, std::uint64_t seed = 0);

  Eigen::VectorXd next();         // one point in (0,1)^dim
  Eigen::MatrixXd block(int n);   // n points, one per row

 private:
  int dim_;
  std::uint32_t index_ = 0;
  std::vector<std::array<std::uint32_t, 32>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
};

// n standard-normal points (rows) in `dim` dimensions: scrambled Sobol
// mapped through the normal quantile. Falls back to plain Monte Carlo when
// dim exceeds SobolSequence::kMaxDim.
Eigen::MatrixXd normal_points(int dim, int n, std::uint64_t seed);

}  // namespace polaron
