#include "hlab/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>

#include "hlab/hermite_sim.hpp"
#include "hlab/quadrature.hpp"
#include "hlab/special_math.hpp"

namespace hlab::chaos {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

ChaosKernel::ChaosKernel(int order, std::size_t size) : order_(order), size_(size) {
  if (order < 0 || order > 4) throw std::invalid_argument("ChaosKernel: order must lie in [0, 4]");
  if (size == 0) throw std::invalid_argument("ChaosKernel: empty grid");
  data_.assign(ipow(size, order), 0.0);
}

void ChaosKernel::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
  for (int a = order_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = flat % size_;
    flat /= size_;
  }
}

double& ChaosKernel::at(std::span<const std::size_t> idx) {
  std::size_t flat = 0;
  for (std::size_t i : idx) flat = flat * size_ + i;
  return data_.at(flat);
}

double ChaosKernel::at(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t i : idx) flat = flat * size_ + i;
  return data_.at(flat);
}

double ChaosKernel::squared_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

double ChaosKernel::norm() const { return std::sqrt(squared_norm()); }

Eigen::Map<const Eigen::MatrixXd> ChaosKernel::matrix() const {
  if (order_ != 2) throw std::logic_error("ChaosKernel::matrix: order-2 kernels only");
  // Row-major storage of a symmetric matrix; callers that need the
  // transpose for non-symmetric kernels use symmetrize first.
  const auto n = static_cast<Eigen::Index>(size_);
  return Eigen::Map<const Eigen::MatrixXd>(data_.data(), n, n);
}

ChaosKernel from_vector(std::span<const double> v) {
  ChaosKernel k(1, v.size());
  std::copy(v.begin(), v.end(), k.data().begin());
  return k;
}

ChaosKernel from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_matrix: matrix must be square");
  const auto n = static_cast<std::size_t>(m.rows());
  ChaosKernel k(2, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return k;
}

ChaosKernel symmetrize(const ChaosKernel& f) {
  const int m = f.order();
  if (m > 4) throw std::invalid_argument("symmetrize: order above 4");
  if (m <= 1) return f;
  ChaosKernel out(m, f.size());
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::vector<std::size_t> idx(static_cast<std::size_t>(m)), moved(static_cast<std::size_t>(m));
  double count = 0.0;
  std::iota(perm.begin(), perm.end(), 0);
  do {
    count += 1.0;
    for (std::size_t flat = 0; flat < f.entries(); ++flat) {
      f.unflatten(flat, idx);
      for (std::size_t a = 0; a < idx.size(); ++a) moved[a] = idx[static_cast<std::size_t>(perm[a])];
      out.at(moved) += f[flat];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : out.data()) v /= count;
  return out;
}

ChaosKernel contract(const ChaosKernel& f, const ChaosKernel& g, int r) {
  if (f.size() != g.size()) throw std::invalid_argument("contract: grid mismatch");
  if (r < 0 || r > std::min(f.order(), g.order())) throw std::invalid_argument("contract: r out of range");
  const int order = f.order() + g.order() - 2 * r;
  if (order > 4) throw std::invalid_argument("contract: result order above 4");
  const std::size_t n = f.size();
  const std::size_t shared = ipow(n, r);
  const std::size_t fa = ipow(n, f.order() - r);
  const std::size_t ga = ipow(n, g.order() - r);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> F(f.data().data(), static_cast<Eigen::Index>(fa), static_cast<Eigen::Index>(shared));
  Eigen::Map<const RowMat> G(g.data().data(), static_cast<Eigen::Index>(ga), static_cast<Eigen::Index>(shared));
  ChaosKernel out(order, n);
  Eigen::Map<RowMat> O(out.data().data(), static_cast<Eigen::Index>(fa), static_cast<Eigen::Index>(ga));
  O.noalias() = F * G.transpose();
  return out;
}

ChaosKernel tensor(const ChaosKernel& f, const ChaosKernel& g) { return contract(f, g, 0); }

double wiener_integral(const ChaosKernel& f, std::span<const double> zeta) {
  if (zeta.size() != f.size()) throw std::invalid_argument("wiener_integral: noise length mismatch");
  const int m = f.order();
  if (m == 0) return f[0];
  if (m == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * zeta[i];
    return s;
  }
  if (m == 2) {
    const std::size_t n = f.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += f(i, j) * zeta[j];
      s += zeta[i] * row - f(i, i);
    }
    return s;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(m));
  double s = 0.0;
  for (std::size_t flat = 0; flat < f.entries(); ++flat) {
    if (f[flat] == 0.0) continue;
    f.unflatten(flat, idx);
    std::sort(idx.begin(), idx.end());
    double wick = 1.0;
    for (std::size_t a = 0; a < idx.size();) {
      std::size_t b = a;
      while (b < idx.size() && idx[b] == idx[a]) ++b;
      wick *= hermite_polynomial(static_cast<int>(b - a), zeta[idx[a]]);
      a = b;
    }
    s += f[flat] * wick;
  }
  return s;
}

ProductFormulaReport product_formula_check(const ChaosKernel& f, const ChaosKernel& g, std::size_t samples,
                                           Rng& rng) {
  if (f.order() != 1 || g.order() != 1) throw std::invalid_argument("product_formula_check: order-1 kernels only");
  if (f.size() != g.size()) throw std::invalid_argument("product_formula_check: grid mismatch");
  if (f.size() > 512) throw std::invalid_argument("product_formula_check: grid above 512 points");
  if (samples < 2) throw std::invalid_argument("product_formula_check: need at least 2 samples");
  const ChaosKernel second = symmetrize(tensor(f, g));
  const double inner = contract(f, g, 1)[0];
  ProductFormulaReport rep;
  rep.samples = samples;
  rep.inner_product = inner;
  std::vector<double> zeta(f.size());
  double sp = 0.0, sp2 = 0.0, s2 = 0.0, s22 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    rng.fill_normal(zeta);
    const double prod = wiener_integral(f, zeta) * wiener_integral(g, zeta);
    const double i2 = wiener_integral(second, zeta);
    rep.max_residual = std::max(rep.max_residual, std::abs(prod - i2 - inner));
    sp += prod;
    sp2 += prod * prod;
    s2 += i2;
    s22 += i2 * i2;
  }
  const double n = static_cast<double>(samples);
  rep.mean_product = sp / n;
  rep.mean_product_se = std::sqrt(std::max(0.0, (sp2 / n - rep.mean_product * rep.mean_product)) / (n - 1.0));
  rep.mean_i2 = s2 / n;
  rep.mean_i2_se = std::sqrt(std::max(0.0, (s22 / n - rep.mean_i2 * rep.mean_i2)) / (n - 1.0));
  return rep;
}

RosenblattSpec rosenblatt_spec(double Hr) {
  if (!(Hr > 0.5 && Hr < 1.0)) throw std::invalid_argument("rosenblatt_spec: Hr must lie in (1/2, 1)");
  RosenblattSpec s;
  s.Hr = Hr;
  s.A1 = std::sqrt(0.5 * Hr * (2.0 * Hr - 1.0)) / beta_fn(0.5 * Hr, 1.0 - Hr);
  s.A2 = std::sqrt(0.5 * Hr * (2.0 * Hr - 1.0)) / (2.0 * std::tgamma(1.0 - Hr) * std::sin(0.5 * Hr * std::numbers::pi));
  return s;
}

double rosenblatt_a1_from_d(double Hr) {
  const double D = 0.5 * (Hr + 1.0);
  return std::sqrt((D - 0.5) * (4.0 * D - 3.0)) / beta_fn(D - 0.5, 2.0 - 2.0 * D);
}

double rosenblatt_a2_from_d(double Hr) {
  const double D = 0.5 * (Hr + 1.0);
  const double den = 2.0 * std::tgamma(2.0 - 2.0 * D) * std::sin(std::numbers::pi * (D - 0.5));
  return std::sqrt((2.0 * D - 1.0) * (4.0 * D - 3.0) / (2.0 * den * den));
}

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// phi(y) = int_{y-1}^{y} v_+^(p-1) dv = (y^p - (y-1)_+^p) / p for y >= 0.
double cell_profile(double y, double p) {
  if (y <= 0.0) return 0.0;
  if (y <= 1.0) return std::pow(y, p) / p;
  return -std::pow(y, p) * std::expm1(p * std::log1p(-1.0 / y)) / p;
}

}  // namespace

ChaosKernel rosenblatt_kernel(const RosenblattSpec& spec, double t, std::size_t n, RosenblattGrid* grid_out) {
  if (!(t > 0.0)) throw std::invalid_argument("rosenblatt_kernel: t must be > 0");
  if (n < 16 || n > 4096) throw std::invalid_argument("rosenblatt_kernel: n must lie in [16, 4096]");
  const double Hr = spec.Hr;
  const double p = 0.5 * Hr;

  RosenblattGrid grid;
  grid.outer = std::max<std::size_t>(8, n / 8);
  grid.inner = n - grid.outer;
  const std::size_t ni = grid.inner;
  const std::size_t no = grid.outer;
  const double h = t / static_cast<double>(ni);
  grid.reach = 1e16 * t;
  // Geometric widths h r^k, k < no, summing to reach.
  {
    const double target = grid.reach / h;
    double lo_r = 1.0 + 1e-12, hi_r = 4.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo_r + hi_r);
      const double sum = std::expm1(static_cast<double>(no) * std::log(mid)) / (mid - 1.0);
      (sum < target ? lo_r : hi_r) = mid;
    }
    grid.ratio = 0.5 * (lo_r + hi_r);
  }
  double edge = 0.0, width = h;
  for (std::size_t k = 0; k < no; ++k, width *= grid.ratio) {
    grid.hi.push_back(edge);
    grid.lo.push_back(edge - width);
    edge -= width;
  }
  for (std::size_t k = 0; k < ni; ++k) {
    grid.lo.push_back(h * static_cast<double>(k));
    grid.hi.push_back(h * static_cast<double>(k + 1));
  }
  const double beta = beta_fn(p, 1.0 - Hr);
  grid.tail_bound = 4.0 * spec.A1 * spec.A1 * std::pow(-grid.lo[no - 1], Hr - 1.0) / (1.0 - Hr) * beta * 2.0 *
                    std::pow(t, Hr + 1.0) / (Hr * (Hr + 1.0));

  // s-quadrature: per inner panel a 16-point Gauss rule graded as v^(1/p),
  // which turns the (s - edge)^p endpoint behaviour into a polynomial.
  const auto& rule = quad::gauss_legendre_unit(16);
  const std::size_t nq = rule.nodes.size();
  const double grade = 1.0 / p;
  std::vector<double> xq(nq), wq(nq);
  for (std::size_t j = 0; j < nq; ++j) {
    xq[j] = std::pow(rule.nodes[j], grade);
    wq[j] = rule.weights[j] * grade * std::pow(rule.nodes[j], grade - 1.0);
  }
  // table[m][j] = phi(m + x_j): inner cell i seen from panel i + m.
  std::vector<double> table(ni * nq);
  for (std::size_t m = 0; m < ni; ++m)
    for (std::size_t j = 0; j < nq; ++j) table[m * nq + j] = cell_profile(static_cast<double>(m) + xq[j], p);

  ChaosKernel out(2, n);
  const double scale_ii = spec.A1 * std::pow(h, 2.0 * p);

  // Inner x inner: entry (i, i + d) = scale * sum_{m < ni - i - d} g(d, m),
  // g(d, m) = sum_j w_j phi(m + d + x_j) phi(m + x_j).
  {
    std::vector<double> cumulative(ni + 1);
    for (std::size_t d = 0; d < ni; ++d) {
      cumulative[0] = 0.0;
      for (std::size_t m = 0; m + d < ni; ++m) {
        double g = 0.0;
        const double* a = &table[(m + d) * nq];
        const double* b = &table[m * nq];
        for (std::size_t j = 0; j < nq; ++j) g += wq[j] * a[j] * b[j];
        cumulative[m + 1] = cumulative[m] + g;
      }
      for (std::size_t i = 0; i + d < ni; ++i) {
        const double v = scale_ii * cumulative[ni - i - d];
        out(no + i, no + i + d) = v;
        out(no + i + d, no + i) = v;
      }
    }
  }

  // Outer cells: Phi_o(s) / sqrt(h_o) at every node, weighted by ds.
  const std::size_t rows = ni * nq;
  Eigen::MatrixXd outer(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(no));
  for (std::size_t o = 0; o < no; ++o) {
    const double a = grid.lo[o], b = grid.hi[o];
    const double inv = 1.0 / (p * std::sqrt(b - a));
    for (std::size_t k = 0; k < ni; ++k)
      for (std::size_t j = 0; j < nq; ++j) {
        const double s = h * (static_cast<double>(k) + xq[j]);
        const double up = std::pow(s - a, p);
        // (s-a)^p - (s-b)^p without cancellation for distant cells.
        const double down_ratio = (b - a) / (s - a);
        const double diff = b < s ? -up * std::expm1(p * std::log1p(-down_ratio)) : up;
        outer(static_cast<Eigen::Index>(k * nq + j), static_cast<Eigen::Index>(o)) = diff * inv;
      }
  }
  Eigen::VectorXd wrow(static_cast<Eigen::Index>(rows));
  for (std::size_t k = 0; k < ni; ++k)
    for (std::size_t j = 0; j < nq; ++j) wrow[static_cast<Eigen::Index>(k * nq + j)] = h * wq[j];

  // Outer x outer.
  const Eigen::MatrixXd oo = spec.A1 * (outer.transpose() * wrow.asDiagonal() * outer);
  for (std::size_t a = 0; a < no; ++a)
    for (std::size_t b = 0; b < no; ++b) out(a, b) = oo(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));

  // Outer x inner: E(o, i) = sum_{m} sum_j u_o(i + m, j) table[m][j], a
  // correlation in the panel index computed with FFTs of length 2 ni.
  {
    const std::size_t L = 2 * ni;
    const std::size_t half = L / 2 + 1;
    std::unique_ptr<double, FftwFree> rbuf(static_cast<double*>(fftw_malloc(sizeof(double) * L)));
    std::unique_ptr<fftw_complex, FftwFree> cbuf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half)));
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(L), rbuf.get(), cbuf.get(), FFTW_ESTIMATE);
    fftw_plan inv = fftw_plan_dft_c2r_1d(static_cast<int>(L), cbuf.get(), rbuf.get(), FFTW_ESTIMATE);
    std::vector<std::complex<double>> table_hat(nq * half);
    for (std::size_t j = 0; j < nq; ++j) {
      std::fill(rbuf.get(), rbuf.get() + L, 0.0);
      for (std::size_t m = 0; m < ni; ++m) rbuf.get()[m] = table[m * nq + j];
      fftw_execute(fwd);
      for (std::size_t f = 0; f < half; ++f) table_hat[j * half + f] = {cbuf.get()[f][0], cbuf.get()[f][1]};
    }
    std::vector<std::complex<double>> acc(half);
    const double scale_oi = spec.A1 * std::pow(h, p) / std::sqrt(h) / static_cast<double>(L);
    for (std::size_t o = 0; o < no; ++o) {
      std::fill(acc.begin(), acc.end(), std::complex<double>{});
      for (std::size_t j = 0; j < nq; ++j) {
        std::fill(rbuf.get(), rbuf.get() + L, 0.0);
        for (std::size_t k = 0; k < ni; ++k) {
          const auto row = static_cast<Eigen::Index>(k * nq + j);
          rbuf.get()[k] = wrow[row] * outer(row, static_cast<Eigen::Index>(o));
        }
        fftw_execute(fwd);
        for (std::size_t f = 0; f < half; ++f)
          acc[f] += std::complex<double>(cbuf.get()[f][0], cbuf.get()[f][1]) * std::conj(table_hat[j * half + f]);
      }
      for (std::size_t f = 0; f < half; ++f) {
        cbuf.get()[f][0] = acc[f].real();
        cbuf.get()[f][1] = acc[f].imag();
      }
      fftw_execute(inv);
      for (std::size_t i = 0; i < ni; ++i) {
        const double v = scale_oi * rbuf.get()[i];
        out(o, no + i) = v;
        out(no + i, o) = v;
      }
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  if (grid_out) *grid_out = std::move(grid);
  return out;
}

ChaosKernel rosenblatt_gram_kernel(const RosenblattSpec& spec, double t, std::size_t n) {
  if (!(t > 0.0)) throw std::invalid_argument("rosenblatt_gram_kernel: t must be > 0");
  if (n < 2 || n > 4096) throw std::invalid_argument("rosenblatt_gram_kernel: n must lie in [2, 4096]");
  const double Hr = spec.Hr;
  const double a = Hr - 1.0;
  const double h = t / static_cast<double>(n);
  const double scale = spec.A1 * beta_fn(0.5 * Hr, 1.0 - Hr) * std::pow(h, Hr) / ((a + 1.0) * (a + 2.0));
  // Cell-pair integral of |x - y + d|^a over [0,1]^2 as a second difference.
  auto cell = [a](double d) {
    const double e = a + 2.0;
    return std::pow(d + 1.0, e) + std::pow(std::abs(d - 1.0), e) - 2.0 * std::pow(d, e);
  };
  std::vector<double> row(n);
  for (std::size_t d = 0; d < n; ++d) row[d] = scale * cell(static_cast<double>(d));
  ChaosKernel out(2, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = row[i > j ? i - j : j - i];
  return out;
}

std::vector<double> kernel_eigenvalues(const ChaosKernel& f) {
  if (f.order() != 2) throw std::invalid_argument("kernel_eigenvalues: order-2 kernel required");
  const Eigen::MatrixXd m = f.matrix();
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("kernel_eigenvalues: eigensolver failed");
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

double chaos2_cumulant_from_eigenvalues(std::span<const double> eigenvalues, int m) {
  if (m < 2 || m > 6) throw std::invalid_argument("chaos2_cumulant: m must lie in [2, 6]");
  double tr = 0.0;
  for (double l : eigenvalues) tr += std::pow(l, m);
  return std::ldexp(std::tgamma(static_cast<double>(m)), m - 1) * tr;
}

double chaos2_cumulant(const ChaosKernel& f, int m) {
  if (f.order() != 2) throw std::invalid_argument("chaos2_cumulant: order-2 kernel required");
  if (m < 2 || m > 6) throw std::invalid_argument("chaos2_cumulant: m must lie in [2, 6]");
  if (m == 2) {
    // 2 trace(A_sym^2) = 2 sum ((a_ij + a_ji)/2)^2
    const std::size_t n = f.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = 0.5 * (f(i, j) + f(j, i));
        s += v * v;
      }
    return 2.0 * s;
  }
  const auto ev = kernel_eigenvalues(f);
  return chaos2_cumulant_from_eigenvalues(ev, m);
}

Chaos2Sampler::Chaos2Sampler(const ChaosKernel& f, double eigen_floor) {
  if (f.order() != 2) throw std::invalid_argument("Chaos2Sampler: order-2 kernel required");
  for (double l : kernel_eigenvalues(f))
    if (std::abs(l) > eigen_floor) eig_.push_back(l);
}

Chaos2Sampler::Chaos2Sampler(std::vector<double> eigenvalues) : eig_(std::move(eigenvalues)) {}

double Chaos2Sampler::sample(Rng& rng) const {
  double s = 0.0;
  for (double l : eig_) {
    const double z = rng.normal();
    s += l * (z * z - 1.0);
  }
  return s;
}

std::vector<double> chaos2_sample(const ChaosKernel& f, std::size_t count, Rng& rng) {
  const Chaos2Sampler sampler(f);
  std::vector<double> out(count);
  for (double& v : out) v = sampler.sample(rng);
  return out;
}

}  // namespace hlab::chaos
