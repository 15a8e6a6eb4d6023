#include "hlab/hermite_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hlab/quadrature.hpp"

namespace hlab {

double hermite_polynomial(int q, double x) {
  if (q < 0) throw std::invalid_argument("hermite_polynomial: q must be >= 0");
  switch (q) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x * x - 1.0;
    case 3: return x * (x * x - 3.0);
    default: break;
  }
  double prev = x * x - 1.0;
  double cur = x * (x * x - 3.0);
  for (int k = 3; k < q; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_sum_variance(int q, std::size_t N, const std::function<double(std::size_t)>& rho) {
  double acc = static_cast<double>(N);
  for (std::size_t k = 1; k < N; ++k) acc += 2.0 * static_cast<double>(N - k) * std::pow(rho(k), q);
  return std::tgamma(q + 1.0) * acc;
}

namespace {

FgnGenerator make_driver(const HurstParams& p, std::size_t N, DriverKind kind) {
  if (kind == DriverKind::fgn) return FgnGenerator(FgnSpec{p.H0, N, 1.0});
  const double H = p.H;
  const double inv_q = 1.0 / p.q;
  return FgnGenerator::from_autocovariance(
      [H, inv_q](std::size_t k) { return std::pow(fgn_autocovariance(static_cast<long long>(k), H), inv_q); }, N, 1.0);
}

}  // namespace

HermiteRankSimulator::HermiteRankSimulator(const HurstParams& p, std::size_t n, double horizon,
                                           HermiteRankOptions opt)
    : p_(p),
      n_(n),
      horizon_(horizon),
      opt_(opt),
      fgn_([&] {
        if (!(p.H > 0.5 && p.H < 1.0)) throw std::invalid_argument("HermiteRankSimulator: H must lie in (1/2, 1)");
        if (n < 1) throw std::invalid_argument("HermiteRankSimulator: n must be >= 1");
        if (opt.refine < 1) throw std::invalid_argument("HermiteRankSimulator: refine must be >= 1");
        if (!(horizon > 0.0)) throw std::invalid_argument("HermiteRankSimulator: horizon must be > 0");
        return make_driver(p, n * opt.refine, opt.driver);
      }()) {
  const std::size_t N = n_ * opt_.refine;
  double var = 0.0;
  if (opt_.driver == DriverKind::fgn) {
    const double h0 = p_.H0;
    var = hermite_sum_variance(p_.q, N, [h0](std::size_t k) { return fgn_autocovariance(static_cast<long long>(k), h0); });
  } else {
    var = std::tgamma(p_.q + 1.0) * std::pow(static_cast<double>(N), 2.0 * p_.H);
  }
  kappa_ = std::pow(horizon_, p_.H) / std::sqrt(var);
}

ProcessPath HermiteRankSimulator::sample(Rng& rng) const {
  const std::size_t m = opt_.refine;
  std::vector<double> xi = fgn_.sample(rng);
  ProcessPath path;
  path.delta = delta();
  path.meta.q = p_.q;
  path.meta.H = p_.H;
  path.meta.method = opt_.driver == DriverKind::fgn ? "hermite_rank" : "hermite_rank_matched";
  path.values.assign(n_ + 1, 0.0);
  double running = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    double block = 0.0;
    for (std::size_t i = k * m; i < (k + 1) * m; ++i) block += hermite_polynomial(p_.q, xi[i]);
    running += block;
    path.values[k + 1] = kappa_ * running;
  }
  return path;
}

ProcessPath simulate_hermite_path(const HurstParams& p, std::size_t n, double horizon, Rng& rng,
                                  HermiteRankOptions opt) {
  if (n < 256) throw std::invalid_argument("simulate_hermite_path: n must be >= 256");
  if (opt.refine < 16) throw std::invalid_argument("simulate_hermite_path: refine must be >= 16");
  return HermiteRankSimulator(p, n, horizon, opt).sample(rng);
}

DirectHermiteSimulator::DirectHermiteSimulator(const HurstParams& p, std::size_t n, double horizon,
                                               DirectOptions opt)
    : p_(p), n_(n), horizon_(horizon) {
  if (p.q != 1 && p.q != 2) throw std::invalid_argument("DirectHermiteSimulator: only q = 1 or q = 2");
  if (!(p.H > 0.5 && p.H < 1.0)) throw std::invalid_argument("DirectHermiteSimulator: H must lie in (1/2, 1)");
  if (n < 1 || n > 512) throw std::invalid_argument("DirectHermiteSimulator: n must lie in [1, 512]");
  if (!(horizon > 0.0)) throw std::invalid_argument("DirectHermiteSimulator: horizon must be > 0");
  if (opt.cells_per_step < 1 || !(opt.outer_ratio > 1.0) || !(opt.outer_reach >= 0.0))
    throw std::invalid_argument("DirectHermiteSimulator: bad options");

  panels_ = n * opt.cells_per_step;
  const double hs = horizon / static_cast<double>(panels_);
  const double expo = p.H0 - 1.5;
  const double pw = expo + 1.0;

  // Cells: outer geometric ones (ordered away from 0), then the inner ones.
  std::vector<double> lo, hi;
  // The tail beyond R carries a fraction of order R^(2H0-2) of the variance.
  const double auto_reach = std::min(1e60, std::pow(10.0, 6.0 / (2.0 - 2.0 * p.H0)));
  const double reach = (opt.outer_reach > 0.0 ? opt.outer_reach : auto_reach) * horizon;
  for (double edge = 0.0, width = hs; edge > -reach; width *= opt.outer_ratio) {
    hi.push_back(edge);
    lo.push_back(edge - width);
    edge -= width;
  }
  for (std::size_t k = 0; k < panels_; ++k) {
    lo.push_back(hs * static_cast<double>(k));
    hi.push_back(hs * static_cast<double>(k + 1));
  }
  const double reach_used = -lo[lo.size() - panels_ - 1];
  widths_.resize(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) widths_[i] = hi[i] - lo[i];

  const auto& rule = quad::gauss_legendre_unit(16);
  nodes_per_panel_ = rule.nodes.size();
  const double grade = 1.0 / pw;
  const double c = hermite_scale_c(p);
  const std::size_t rows = panels_ * nodes_per_panel_;
  basis_.setZero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(widths_.size()));
  node_weight_.resize(static_cast<Eigen::Index>(rows));
  node_mean_sq_.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t k = 0; k < panels_; ++k) {
    const double left = hs * static_cast<double>(k);
    for (std::size_t j = 0; j < nodes_per_panel_; ++j) {
      const double v = rule.nodes[j];
      const double s = left + hs * std::pow(v, grade);
      const auto row = static_cast<Eigen::Index>(k * nodes_per_panel_ + j);
      node_weight_[row] = c * hs * rule.weights[j] * grade * std::pow(v, grade - 1.0);
      double msq = 0.0;
      for (std::size_t i = 0; i < widths_.size(); ++i) {
        if (lo[i] >= s) continue;
        const double up = std::pow(s - lo[i], pw);
        const double down = hi[i] < s ? std::pow(s - hi[i], pw) : 0.0;
        const double phi = (up - down) / pw / std::sqrt(widths_[i]);
        basis_(row, static_cast<Eigen::Index>(i)) = phi;
        msq += phi * phi;
      }
      node_mean_sq_[row] = msq;
    }
  }

  const double gamma_exp = (p.q - 1) * (2.0 * p.H0 - 2.0);
  const double square = 2.0 * std::pow(horizon, gamma_exp + 2.0) / ((gamma_exp + 1.0) * (gamma_exp + 2.0));
  const double one_tail = std::pow(reach_used, 2.0 * expo + 1.0) / (-2.0 * expo - 1.0);
  tail_bound_ = std::tgamma(p.q + 1.0) * p.q * c * c * one_tail *
                std::pow(beta_fn(p.H0 - 0.5, 2.0 - 2.0 * p.H0), p.q - 1) * square;
}

ProcessPath DirectHermiteSimulator::sample(Rng& rng) const {
  Eigen::VectorXd zeta(static_cast<Eigen::Index>(widths_.size()));
  for (Eigen::Index i = 0; i < zeta.size(); ++i) zeta[i] = rng.normal();
  const Eigen::VectorXd y = basis_ * zeta;
  ProcessPath path;
  path.delta = horizon_ / static_cast<double>(n_);
  path.meta.q = p_.q;
  path.meta.H = p_.H;
  path.meta.method = "direct_kernel";
  if (tail_bound_ > 1e-4 * std::pow(horizon_, 2.0 * p_.H))
    path.meta.warnings.push_back("truncated kernel tail carries more than 1e-4 of the variance");
  path.values.assign(n_ + 1, 0.0);
  const std::size_t per_step = panels_ / n_ * nodes_per_panel_;
  double running = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    double inc = 0.0;
    for (std::size_t r = k * per_step; r < (k + 1) * per_step; ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      const double integrand = p_.q == 1 ? y[row] : y[row] * y[row] - node_mean_sq_[row];
      inc += node_weight_[row] * integrand;
    }
    running += inc;
    path.values[k + 1] = running;
  }
  return path;
}

ProcessPath simulate_hermite_direct(const HurstParams& p, std::size_t n, double horizon, Rng& rng,
                                    DirectOptions opt) {
  return DirectHermiteSimulator(p, n, horizon, opt).sample(rng);
}

}  // namespace hlab
