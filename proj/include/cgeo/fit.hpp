#pragma once

// Pooled least-squares decomposition of sampled (0,2) tensors on a fixed
// list of basis tensors, e.g. Ric = a g + b eta x eta. Components are taken
// in each sample's orthonormal frame so that all points weigh the same.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "cgeo/errors.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

template <int K>
struct FitSample {
  Mat<double> target;
  std::array<Mat<double>, K> basis;
  Mat<double> frame;
};

template <int K>
struct BasisFit {
  std::array<double, K> coefficients{};
  // max |target - sum c_k basis_k| over all samples and frame components
  double residual = 0.0;
  // max over samples and k of |c_k(point) - c_k(pooled)| / max(1, |c_k(pooled)|)
  double spread = 0.0;
  std::vector<std::array<double, K>> per_point;
};

namespace detail {

template <int K>
std::array<double, K> solve_fit(const std::vector<FitSample<K>>& samples, std::size_t first,
                                std::size_t last) {
  constexpr int M = Mat<double>::kSize;
  const auto rows = static_cast<Eigen::Index>((last - first) * M);
  Eigen::MatrixXd a(rows, K);
  Eigen::VectorXd b(rows);
  Eigen::Index r = 0;
  for (std::size_t s = first; s < last; ++s) {
    const auto& smp = samples[s];
    const auto t = to_frame(smp.target, smp.frame);
    std::array<Mat<double>, K> bf;
    for (int k = 0; k < K; ++k) bf[k] = to_frame(smp.basis[k], smp.frame);
    for (int c = 0; c < M; ++c, ++r) {
      b(r) = t.c[c];
      for (int k = 0; k < K; ++k) a(r, k) = bf[k].c[c];
    }
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  std::array<double, K> out{};
  for (int k = 0; k < K; ++k) out[k] = x(k);
  return out;
}

}  // namespace detail

template <int K>
BasisFit<K> fit_tensor_basis(const std::vector<FitSample<K>>& samples) {
  if (samples.empty()) throw ContractError("fit_tensor_basis: no samples");
  BasisFit<K> fit;
  fit.coefficients = detail::solve_fit<K>(samples, 0, samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& smp = samples[s];
    Mat<double> rest = smp.target;
    for (int k = 0; k < K; ++k) rest -= fit.coefficients[k] * smp.basis[k];
    fit.residual = std::max(fit.residual, frame_max(rest, smp.frame));
    const auto local = detail::solve_fit<K>(samples, s, s + 1);
    fit.per_point.push_back(local);
    for (int k = 0; k < K; ++k)
      fit.spread = std::max(fit.spread, std::abs(local[k] - fit.coefficients[k]) /
                                            std::max(1.0, std::abs(fit.coefficients[k])));
  }
  return fit;
}

struct EtaEinsteinFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  double spread = 0.0;
};

// Ric = a g + b eta x eta, pooled over samples of (Ric, g, eta).
struct RicciSample {
  Mat<double> ricci;
  Mat<double> g;
  Vec<double> eta;
};

inline constexpr std::size_t kMinFitSamples = 20;

inline EtaEinsteinFit eta_einstein_fit(const std::vector<RicciSample>& samples) {
  if (samples.size() < kMinFitSamples)
    throw ContractError("eta_einstein_fit: needs at least 20 sample points");
  std::vector<FitSample<2>> fs;
  fs.reserve(samples.size());
  for (const auto& s : samples) fs.push_back({s.ricci, {s.g, outer(s.eta, s.eta)}, orthonormal_frame(s.g)});
  const auto f = fit_tensor_basis<2>(fs);
  return {f.coefficients[0], f.coefficients[1], f.residual, f.spread};
}

}  // namespace cgeo
