#include "polaron/qmc.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include "polaron/rng.hpp"
#include "polaron/stats.hpp"

namespace polaron {

namespace {

struct JoeKuoRow {
  int s;
  std::uint32_t a;
  std::array<std::uint32_t, 4> m;
};

// new-joe-kuo-6 primitive polynomials and initial direction numbers for
// dimensions 2..6 (dimension 1 is the van der Corput sequence).
constexpr JoeKuoRow kRows[5] = {
    {1, 0, {1, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0}},
    {3, 1, {1, 3, 1, 0}},
    {3, 2, {1, 1, 1, 0}},
    {4, 1, {1, 1, 3, 3}},
};

std::array<std::uint32_t, 32> build_directions(int d) {
  std::array<std::uint32_t, 32> v{};
  if (d == 0) {
    for (int j = 0; j < 32; ++j) v[j] = 1u << (31 - j);
    return v;
  }
  const JoeKuoRow& row = kRows[d - 1];
  const int s = row.s;
  for (int j = 0; j < s; ++j) v[j] = row.m[j] << (31 - j);
  for (int j = s; j < 32; ++j) {
    v[j] = v[j - s] ^ (v[j - s] >> s);
    for (int k = 1; k < s; ++k)
      if ((row.a >> (s - 1 - k)) & 1u) v[j] ^= v[j - k];
  }
  return v;
}

int ctz32(std::uint32_t x) {
  int c = 0;
  while (!(x & 1u)) {
    x >>= 1;
    ++c;
  }
  return c;
}

}  // namespace

SobolSequence::SobolSequence(int dim, std::uint64_t seed) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("SobolSequence: dim must be in [1, 6]");
  directions_.reserve(dim);
  for (int d = 0; d < dim; ++d) directions_.push_back(build_directions(d));
  state_.assign(dim, 0u);
  shift_.assign(dim, 0u);
  if (seed != 0) {
    std::uint64_t s = seed;
    for (int d = 0; d < dim; ++d)
      shift_[d] = static_cast<std::uint32_t>(splitmix64(s) >> 32);
  }
}

Eigen::VectorXd SobolSequence::next() {
  Eigen::VectorXd p(dim_);
  if (index_ > 0) {
    int bit = ctz32(index_);
    for (int d = 0; d < dim_; ++d) state_[d] ^= directions_[d][bit];
  }
  ++index_;
  for (int d = 0; d < dim_; ++d) {
    std::uint32_t u = state_[d] ^ shift_[d];
    p(d) = (static_cast<double>(u) + 0.5) / 4294967296.0;
  }
  return p;
}

Eigen::MatrixXd SobolSequence::block(int n) {
  Eigen::MatrixXd out(n, dim_);
  for (int i = 0; i < n; ++i) out.row(i) = next().transpose();
  return out;
}

Eigen::MatrixXd normal_points(int dim, int n, std::uint64_t seed) {
  Eigen::MatrixXd out(n, dim);
  if (dim <= SobolSequence::kMaxDim) {
    SobolSequence seq(dim, seed == 0 ? 1 : seed);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd u = seq.next();
      for (int d = 0; d < dim; ++d) out(i, d) = normal_quantile(u(d));
    }
  } else {
    auto rng = make_rng(seed);
    std::normal_distribution<double> g;
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < dim; ++d) out(i, d) = g(rng);
  }
  return out;
}

}  // namespace polaron
