#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hlab/rng.hpp"

namespace hlab::chaos {

/// Dense kernel of a multiple Wiener integral of order 1..4 on a grid of
/// `size` cells. Entries carry the measure weight: for cells of width h the
/// entry is f(x_1..x_m) h^(m/2), so norms and contractions are plain sums.
class ChaosKernel {
 public:
  ChaosKernel() = default;
  ChaosKernel(int order, std::size_t size);

  int order() const { return order_; }
  std::size_t size() const { return size_; }
  std::size_t entries() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }
  double& at(std::span<const std::size_t> idx);
  double at(std::span<const std::size_t> idx) const;
  double& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double squared_norm() const;
  double norm() const;

  /// Order-2 kernels viewed as a size x size matrix.
  Eigen::Map<const Eigen::MatrixXd> matrix() const;

  /// Splits a flat index into per-axis indices.
  void unflatten(std::size_t flat, std::span<std::size_t> idx) const;

 private:
  int order_ = 0;
  std::size_t size_ = 0;
  std::vector<double> data_;
};

ChaosKernel from_vector(std::span<const double> v);
ChaosKernel from_matrix(const Eigen::MatrixXd& m);

ChaosKernel symmetrize(const ChaosKernel& f);

/// f contracted with g on r shared arguments; result has order p + q - 2r
/// with f's free arguments first. r = p = q yields an order-0 kernel whose
/// single entry is the inner product.
ChaosKernel contract(const ChaosKernel& f, const ChaosKernel& g, int r);

/// Tensor product (contraction with r = 0).
ChaosKernel tensor(const ChaosKernel& f, const ChaosKernel& g);

/// Discrete I_m(f) on one Gaussian vector: sum over index tuples of
/// f(i_1..i_m) times the Wick product of zeta_{i_1}..zeta_{i_m}; repeated
/// indices contribute He_k(zeta_i) for multiplicity k.
double wiener_integral(const ChaosKernel& f, std::span<const double> zeta);

struct ProductFormulaReport {
  std::size_t samples = 0;
  /// max over samples of |I1(f) I1(g) - I2(sym(f x g)) - <f, g>|
  double max_residual = 0.0;
  double inner_product = 0.0;
  double mean_product = 0.0;
  double mean_product_se = 0.0;
  double mean_i2 = 0.0;
  double mean_i2_se = 0.0;
};

ProductFormulaReport product_formula_check(const ChaosKernel& f, const ChaosKernel& g, std::size_t samples,
                                           Rng& rng);

struct RosenblattSpec {
  double Hr = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
};

/// A1 = sqrt((Hr/2)(2Hr-1)) / beta(Hr/2, 1-Hr),
/// A2 = sqrt(Hr(2Hr-1)/2) / (2 Gamma(1-Hr) sin(Hr pi/2)).
RosenblattSpec rosenblatt_spec(double Hr);

/// The same constants written through D = (Hr + 1)/2:
///   A1 = sqrt((D - 1/2)(4D - 3)) / beta(D - 1/2, 2 - 2D),
///   A2 = sqrt((2D - 1)(4D - 3) / 2) / (2 Gamma(2 - 2D) sin(pi (D - 1/2))).
double rosenblatt_a1_from_d(double Hr);
double rosenblatt_a2_from_d(double Hr);

struct RosenblattGrid {
  std::size_t inner = 0;      // cells on [0, t]
  std::size_t outer = 0;      // cells on [-reach, 0]
  double reach = 0.0;
  double ratio = 0.0;         // growth of the outer cells
  double tail_bound = 0.0;    // bound on Var carried by y < -reach
  std::vector<double> lo, hi; // cell edges, outer cells first
};

/// Kernel A1 int_0^t (s-y1)_+^(Hr/2-1) (s-y2)_+^(Hr/2-1) ds averaged over a
/// cell grid of n cells: uniform on [0, t], geometric on (-reach, 0).
ChaosKernel rosenblatt_kernel(const RosenblattSpec& spec, double t, std::size_t n,
                              RosenblattGrid* grid = nullptr);

/// Cell-averaged kernel of the integral operator on L2[0, t] with kernel
/// A1 beta(Hr/2, 1-Hr) |s-u|^(Hr-1), n uniform cells. Its nonzero
/// spectrum is that of the time-domain kernel without the outer truncation.
ChaosKernel rosenblatt_gram_kernel(const RosenblattSpec& spec, double t, std::size_t n);

/// Eigenvalues of the symmetric part of an order-2 kernel, descending.
std::vector<double> kernel_eigenvalues(const ChaosKernel& f);

/// kappa_m(I2(f)) = 2^(m-1) (m-1)! trace(A^m), 2 <= m <= 6.
double chaos2_cumulant(const ChaosKernel& f, int m);
double chaos2_cumulant_from_eigenvalues(std::span<const double> eigenvalues, int m);

/// Exact samples of I2(f) = sum lambda_i (xi_i^2 - 1).
std::vector<double> chaos2_sample(const ChaosKernel& f, std::size_t count, Rng& rng);

class Chaos2Sampler {
 public:
  explicit Chaos2Sampler(const ChaosKernel& f, double eigen_floor = 0.0);
  explicit Chaos2Sampler(std::vector<double> eigenvalues);
  double sample(Rng& rng) const;
  const std::vector<double>& eigenvalues() const { return eig_; }

 private:
  std::vector<double> eig_;
};

}  // namespace hlab::chaos
