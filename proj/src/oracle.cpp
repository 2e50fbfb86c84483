#include "ampcs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

#include "ampcs/errors.hpp"
#include "ampcs/linalg.hpp"

namespace ampcs {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<const Eigen::VectorXd>;

MatMap matrix_map(const ProblemInstance& inst) {
  return MatMap(inst.matrix.entries.data(), inst.matrix.rows,
                inst.matrix.cols);
}

double power_iteration_lipschitz(const MatMap& A) {
  const int N = static_cast<int>(A.cols());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N) / std::sqrt(double(N));
  double lam = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double norm = w.norm();
    if (!(norm > 0))
      throw ConfigError("fista_lasso: power iteration degenerate (A^T A v = 0)");
    const double lam_new = v.dot(w);
    v = w / norm;
    if (it > 10 && std::abs(lam_new - lam) <= 1e-12 * lam_new) {
      lam = lam_new;
      break;
    }
    lam = lam_new;
  }
  if (!(lam > 0) || !std::isfinite(lam))
    throw ConfigError("fista_lasso: power iteration failed");
  return lam;
}

}  // namespace

double lasso_objective(const ProblemInstance& inst, std::span<const double> x,
                       double lambda) {
  MatMap A = matrix_map(inst);
  VecMap y(inst.measurements.data(), inst.matrix.rows);
  VecMap xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return lambda * xv.lpNorm<1>() + 0.5 * (y - A * xv).squaredNorm();
}

double lasso_kkt_residual(const ProblemInstance& inst,
                          std::span<const double> x, double lambda) {
  MatMap A = matrix_map(inst);
  VecMap y(inst.measurements.data(), inst.matrix.rows);
  VecMap xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd c = A.transpose() * (y - A * xv);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (xv[i] != 0.0)
      worst = std::max(worst, std::abs(c[i] - lambda * (xv[i] > 0 ? 1.0 : -1.0)));
    else
      worst = std::max(worst, std::max(std::abs(c[i]) - lambda, 0.0));
  }
  return worst;
}

LassoSolution fista_lasso(
    const ProblemInstance& inst, double lambda, double tol, int max_iters,
    const std::function<void(int, std::span<const double>)>& on_iterate) {
  if (!(lambda > 0)) throw ConfigError("fista_lasso: lambda must be > 0");
  MatMap A = matrix_map(inst);
  VecMap y(inst.measurements.data(), inst.matrix.rows);
  const int N = static_cast<int>(A.cols());

  const double L = power_iteration_lipschitz(A) * 1.01;
  const double step = 1.0 / L;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd w = x;
  double tk = 1.0;

  LassoSolution sol;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd grad = A.transpose() * (A * w - y);
    Eigen::VectorXd xn(N);
    for (int i = 0; i < N; ++i)
      xn[i] = soft_threshold(w[i] - step * grad[i], lambda * step);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    w = xn + ((tk - 1.0) / tn) * (xn - x);
    x = xn;
    tk = tn;
    sol.iterations = it + 1;
    if (on_iterate)
      on_iterate(it, std::span<const double>(x.data(), static_cast<std::size_t>(N)));
    sol.kkt_residual = lasso_kkt_residual(
        inst, std::span<const double>(x.data(), static_cast<std::size_t>(N)),
        lambda);
    if (sol.kkt_residual <= tol) break;
  }
  sol.x.assign(x.data(), x.data() + N);
  sol.objective = lasso_objective(inst, sol.x, lambda);
  return sol;
}

LassoSolution coordinate_descent_lasso(const ProblemInstance& inst,
                                       double lambda, double tol,
                                       int max_iters) {
  if (!(lambda > 0))
    throw ConfigError("coordinate_descent_lasso: lambda must be > 0");
  MatMap A = matrix_map(inst);
  VecMap y(inst.measurements.data(), inst.matrix.rows);
  const int N = static_cast<int>(A.cols());

  Eigen::VectorXd colsq(N);
  for (int j = 0; j < N; ++j) colsq[j] = A.col(j).squaredNorm();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd r = y;  // y - A x

  LassoSolution sol;
  for (int sweep = 0; sweep < max_iters; ++sweep) {
    for (int j = 0; j < N; ++j) {
      if (colsq[j] == 0.0) continue;
      const double rho = A.col(j).dot(r) + colsq[j] * x[j];
      const double xj = soft_threshold(rho, lambda) / colsq[j];
      const double d = xj - x[j];
      if (d != 0.0) {
        r -= d * A.col(j);
        x[j] = xj;
      }
    }
    sol.iterations = sweep + 1;
    sol.kkt_residual = lasso_kkt_residual(
        inst, std::span<const double>(x.data(), static_cast<std::size_t>(N)),
        lambda);
    if (sol.kkt_residual <= tol) break;
  }
  sol.x.assign(x.data(), x.data() + N);
  sol.objective = lasso_objective(inst, sol.x, lambda);
  return sol;
}

std::vector<double> exhaustive_l1(const ProblemInstance& inst) {
  const int n = inst.matrix.rows, N = inst.matrix.cols;
  if (N > 12 || n > 6)
    throw ConfigError("exhaustive_l1: requires N <= 12 and n <= 6");
  MatMap A = matrix_map(inst);
  VecMap y(inst.measurements.data(), n);

  if (y.lpNorm<Eigen::Infinity>() == 0.0) return std::vector<double>(N, 0.0);

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  std::vector<double> best;
  double best_norm = std::numeric_limits<double>::infinity();
  bool any_feasible = false;

  // subsets in lexicographic order; strict improvement only, so ties keep the
  // lexicographically smallest support
  while (true) {
    Eigen::MatrixXd B(n, n);
    for (int c = 0; c < n; ++c) B.col(c) = A.col(idx[c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (smax > 0 && smin / smax >= 1e-10) {
      const Eigen::VectorXd xs = svd.solve(y);
      if ((B * xs - y).lpNorm<Eigen::Infinity>() <=
          1e-8 * std::max(1.0, y.lpNorm<Eigen::Infinity>())) {
        any_feasible = true;
        const double norm = xs.lpNorm<1>();
        if (norm < best_norm - 1e-12 * std::max(1.0, best_norm)) {
          best_norm = norm;
          best.assign(N, 0.0);
          for (int c = 0; c < n; ++c) best[idx[c]] = xs[c];
        }
      }
    }
    // next combination
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == N - n + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < n; ++q) idx[q] = idx[q - 1] + 1;
  }
  if (!any_feasible)
    throw InfeasibleError(
        "exhaustive_l1: no nonsingular column subset reproduces y");
  return best;
}

namespace {

// Gauss 7 / Kronrod 15 nodes and weights (positive half)
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double k15 = kWgk[7] * f0;
  double g7 = kWg[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double d = h * kXgk[i];
    const double fi = f(c - d) + f(c + d);
    k15 += kWgk[i] * fi;
    if (i % 2 == 1) g7 += kWg[i / 2] * fi;
  }
  k15 *= h;
  g7 *= h;
  return {a, b, k15, std::abs(k15 - g7)};
}

// globally adaptive refinement over the seeded panels
double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& splits, double abs_tol,
                          double rel_tol, int max_panels) {
  auto cmp = [](const Panel& lhs, const Panel& rhs) {
    return lhs.error < rhs.error;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  double total = 0.0, err = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    if (!(splits[i + 1] > splits[i])) continue;
    Panel p = gk15(f, splits[i], splits[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
    ++count;
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         count < max_panels && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // width exhausted
    for (Panel half : {gk15(f, worst.a, mid), gk15(f, mid, worst.b)}) {
      total += half.value;
      err += half.error;
      heap.push(half);
      ++count;
    }
  }
  if (err > std::max(abs_tol, rel_tol * std::abs(total)))
    throw QuadratureError("quadrature_moments: refinement stalled", err);
  return total;
}

}  // namespace

Moments quadrature_moments(const std::function<double(double)>& log_density,
                           double lo, double hi, double abs_tol,
                           std::vector<double> break_points,
                           double feature_scale) {
  if (!(lo < hi))
    throw std::invalid_argument("quadrature_moments: need lo < hi");
  if (!(abs_tol > 0))
    throw std::invalid_argument("quadrature_moments: abs_tol must be > 0");

  // split points: interval ends, the origin kink, user break points, and a
  // graded mesh around every break point so narrow peaks are never stepped
  // over by the initial panels
  if (feature_scale <= 0) feature_scale = (hi - lo) / 1024.0;
  std::vector<double> anchors = {lo, hi};
  if (lo < 0.0 && 0.0 < hi) anchors.push_back(0.0);
  for (double p : break_points)
    if (lo < p && p < hi) anchors.push_back(p);

  std::vector<double> splits = anchors;
  for (double p : anchors) {
    if (p == lo || p == hi) continue;
    for (double w = feature_scale; w < hi - lo; w *= 4.0) {
      if (p - w > lo) splits.push_back(p - w);
      if (p + w < hi) splits.push_back(p + w);
    }
  }
  // coarse background mesh
  for (int i = 1; i < 32; ++i) splits.push_back(lo + (hi - lo) * i / 32.0);
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  // shift so the max of the scanned density is ~1
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    for (int q = 0; q < 8; ++q) {
      const double s = splits[i] + (splits[i + 1] - splits[i]) * q / 8.0;
      peak = std::max(peak, log_density(s));
    }
  }
  peak = std::max(peak, log_density(hi));
  if (!std::isfinite(peak))
    throw std::invalid_argument(
        "quadrature_moments: log density has no finite values on the domain");

  const auto density = [&](double s) {
    const double l = log_density(s) - peak;
    return l > -745.0 ? std::exp(l) : 0.0;
  };

  constexpr double kRel = 5e-13;
  constexpr int kMaxPanels = 4000;
  const double mass =
      integrate_adaptive(density, splits, 1e-300, kRel, kMaxPanels);
  if (!(mass > 0))
    throw QuadratureError("quadrature_moments: zero mass on the domain", 0.0);

  const double first = integrate_adaptive(
      [&](double s) { return s * density(s); }, splits, 0.5 * abs_tol * mass,
      kRel, kMaxPanels);
  Moments out;
  out.mean = first / mass;
  const double second = integrate_adaptive(
      [&](double s) {
        const double d = s - out.mean;
        return d * d * density(s);
      },
      splits, 0.5 * abs_tol * mass, kRel, kMaxPanels);
  out.variance = second / mass;
  return out;
}

Moments f_beta_moments_quadrature(const LaplaceGaussianFamily& fam) {
  const double beta = fam.beta, x = fam.center, b = fam.width;
  if (!(beta > 0) || !(b > 0))
    throw std::invalid_argument("f_beta_moments_quadrature: bad parameters");
  const double sig = std::sqrt(b / beta);
  const double mode = soft_threshold(x, b);
  const double span = std::abs(x) + b + 14.0 * sig + 1.0;
  const double scale = std::min(sig, 1.0 / beta) * 0.5;
  return quadrature_moments(
      [beta, x, b](double s) {
        return -beta * std::abs(s) - beta / (2.0 * b) * (s - x) * (s - x);
      },
      -span, span, 1e-10, {mode}, scale);
}

namespace {

struct RawQuadrature {
  double log_mass;  // log of the raw integral of exp(log_density)
  double mean;
  double variance;
};

RawQuadrature raw_moments(const std::function<double(double)>& log_density,
                          double lo, double hi,
                          const std::vector<double>& break_points,
                          double feature_scale) {
  // same machinery as quadrature_moments but also reporting the raw mass,
  // needed to weigh a continuous component against point masses
  std::vector<double> anchors = {lo, hi};
  if (lo < 0.0 && 0.0 < hi) anchors.push_back(0.0);
  for (double p : break_points)
    if (lo < p && p < hi) anchors.push_back(p);
  std::vector<double> splits = anchors;
  for (double p : anchors) {
    if (p == lo || p == hi) continue;
    for (double w = feature_scale; w < hi - lo; w *= 4.0) {
      if (p - w > lo) splits.push_back(p - w);
      if (p + w < hi) splits.push_back(p + w);
    }
  }
  for (int i = 1; i < 32; ++i) splits.push_back(lo + (hi - lo) * i / 32.0);
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < splits.size(); ++i)
    for (int q = 0; q < 8; ++q)
      peak = std::max(peak, log_density(splits[i] +
                                        (splits[i + 1] - splits[i]) * q / 8.0));
  peak = std::max(peak, log_density(hi));
  const auto density = [&](double s) {
    const double l = log_density(s) - peak;
    return l > -745.0 ? std::exp(l) : 0.0;
  };
  constexpr double kRel = 5e-13;
  constexpr int kMaxPanels = 4000;
  const double mass =
      integrate_adaptive(density, splits, 1e-300, kRel, kMaxPanels);
  RawQuadrature out;
  out.log_mass = peak + std::log(mass);
  const double first = integrate_adaptive(
      [&](double s) { return s * density(s); }, splits, 1e-14 * mass, kRel,
      kMaxPanels);
  out.mean = first / mass;
  const double second = integrate_adaptive(
      [&](double s) {
        const double d = s - out.mean;
        return d * d * density(s);
      },
      splits, 1e-14 * mass, kRel, kMaxPanels);
  out.variance = second / mass;
  return out;
}

}  // namespace

Moments posterior_moments_quadrature(const Prior& prior, double x,
                                     double noise_var) {
  if (!(noise_var > 0))
    throw std::invalid_argument(
        "posterior_moments_quadrature: noise_var must be > 0");

  if (prior.kind == Prior::Kind::PointMassMixture) {
    // direct summation in extended precision, an arithmetic route independent
    // of the log-domain closed form
    long double mass = 0.0L, first = 0.0L, second = 0.0L;
    for (std::size_t k = 0; k < prior.atoms.size(); ++k) {
      const long double d = static_cast<long double>(x) - prior.atoms[k];
      const long double w =
          prior.weights[k] * expl(-d * d / (2.0L * noise_var));
      mass += w;
      first += w * prior.atoms[k];
      second += w * prior.atoms[k] * prior.atoms[k];
    }
    if (mass <= 0.0L) {
      // all atoms astronomically unlikely; renormalize via the closest atom
      return posterior_moments(prior, x, noise_var);
    }
    Moments out;
    out.mean = static_cast<double>(first / mass);
    out.variance = static_cast<double>(second / mass) - out.mean * out.mean;
    if (out.variance < 0) out.variance = 0;
    return out;
  }

  const double eps = prior.eps, svar = prior.variance;
  if (eps <= 0) return {0.0, 0.0};
  const double sd = std::sqrt(svar);
  const double span = std::abs(x) + 12.0 * (sd + std::sqrt(noise_var));
  const double post_mean = x * svar / (svar + noise_var);
  const double post_sd = std::sqrt(svar * noise_var / (svar + noise_var));
  // the common noise normalizer 1/sqrt(2 pi v) is dropped from both the atom
  // weight and the slab integrand; the slab keeps its own full prior density
  constexpr double kLog2Pi = 1.8378770664093454836;
  const RawQuadrature slab = raw_moments(
      [x, noise_var, svar, eps](double s) {
        return std::log(eps) - s * s / (2.0 * svar) -
               (x - s) * (x - s) / (2.0 * noise_var) -
               0.5 * (kLog2Pi + std::log(svar));
      },
      -span, span, {post_mean}, 0.5 * std::min(post_sd, std::min(sd, std::sqrt(noise_var))));
  if (eps >= 1) return {slab.mean, slab.variance};

  const double log_atom = std::log1p(-eps) - x * x / (2.0 * noise_var);
  const double m = std::max(log_atom, slab.log_mass);
  const double w_atom = std::exp(log_atom - m);
  const double w_slab = std::exp(slab.log_mass - m);
  const double p_slab = w_slab / (w_atom + w_slab);
  Moments out;
  out.mean = p_slab * slab.mean;
  out.variance = p_slab * slab.variance +
                 p_slab * (1.0 - p_slab) * slab.mean * slab.mean;
  return out;
}

}  // namespace ampcs
