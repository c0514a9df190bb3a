#include "speclyap/noise.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "speclyap/parallel.hpp"

namespace speclyap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using PointKernel = std::function<double(const GridPoint&, const GridPoint&)>;

double squared_distance(const GridPoint& a, const GridPoint& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = a.x[i] - b.x[i];
    s += d * d;
  }
  return s;
}

double separation(Geometry g, const GridPoint& a, const GridPoint& b) {
  if (g == Geometry::sphere) {
    double dot = a.x[0] * b.x[0] + a.x[1] * b.x[1] + a.x[2] * b.x[2];
    dot = std::clamp(dot, -1.0, 1.0);
    return std::acos(dot);
  }
  return std::sqrt(squared_distance(a, b));
}

bool kernel_looks_symmetric(const PointKernel& kernel, const NodeGrid& grid) {
  const std::size_t n = grid.size();
  if (n < 2) return true;
  // Deterministic sample of node pairs spread over the grid.
  for (std::size_t s = 0; s < 128; ++s) {
    const std::size_t a = (s * 7919u) % n;
    const std::size_t b = (s * 104729u + n / 3) % n;
    const double kab = kernel(grid.points[a], grid.points[b]);
    const double kba = kernel(grid.points[b], grid.points[a]);
    if (std::abs(kab - kba) > 1e-12 * (std::abs(kab) + std::abs(kba)) + 1e-300) return false;
  }
  return true;
}

SymMatrix project_kernel_on_grid(const PointKernel& kernel, const Basis& basis, const QuadratureOrders& orders,
                                 const ProjectionOptions& options, std::vector<std::string>& warnings) {
  const auto grid = make_grid(basis.geometry(), basis.params().d, orders);
  if (grid.size() > options.max_nodes)
    throw std::invalid_argument("project_noise: quadrature grid has " + std::to_string(grid.size()) +
                                " nodes, above the kernel projection limit of " +
                                std::to_string(options.max_nodes));
  if (!kernel_looks_symmetric(kernel, grid))
    warnings.emplace_back("kernel is not symmetric on sampled node pairs; projection is symmetrized");

  const std::size_t nm = basis.size();
  const std::size_t nn = grid.size();
  auto weighted = basis.evaluate(grid);
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t k = 0; k < nm; ++k) weighted[a * nm + k] *= grid.weights[a];

  // applied[a][k] = sum_b K(a, b) weighted[b][k]; rows are independent.
  std::vector<double> applied(nn * nm, 0.0);
  parallel_for(nn, options.threads, [&](std::size_t a) {
    double* row = &applied[a * nm];
    const GridPoint& pa = grid.points[a];
    for (std::size_t b = 0; b < nn; ++b) {
      const double kab = kernel(pa, grid.points[b]);
      if (kab == 0.0) continue;
      const double* src = &weighted[b * nm];
      for (std::size_t k = 0; k < nm; ++k) row[k] += kab * src[k];
    }
  });

  std::vector<double> q(nm * nm, 0.0);
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t j = 0; j < nm; ++j) {
      const double wj = weighted[a * nm + j];
      if (wj == 0.0) continue;
      for (std::size_t k = 0; k < nm; ++k) q[j * nm + k] += wj * applied[a * nm + k];
    }
  return SymMatrix::from_row_major(nm, q);
}

SymMatrix project_separable_gaussian(double lengthscale, const Basis& basis, const QuadratureOrders& orders) {
  const std::size_t nm = basis.size();
  int max_degree = 0;
  for (const auto& mode : basis.spectrum().modes())
    for (int v : std::get<OscillatorMode>(mode).n) max_degree = std::max(max_degree, v);
  const double inv_l2 = 1.0 / (lengthscale * lengthscale);
  // exp(-|x-y|^2/l^2) factorizes over coordinates, and so does the tensor rule.
  const auto k1 = hermite_kernel_table(max_degree, orders.hermite, [inv_l2](double x, double y) {
    return std::exp(-(x - y) * (x - y) * inv_l2);
  });
  const std::size_t nd = static_cast<std::size_t>(max_degree) + 1;
  SymMatrix Q(nm);
  for (std::size_t j = 0; j < nm; ++j)
    for (std::size_t k = j; k < nm; ++k) {
      const auto& a = std::get<OscillatorMode>(basis.spectrum().modes()[j]).n;
      const auto& b = std::get<OscillatorMode>(basis.spectrum().modes()[k]).n;
      double v = 1.0;
      for (std::size_t i = 0; i < a.size(); ++i) v *= 0.5 * (k1[a[i] * nd + b[i]] + k1[b[i] * nd + a[i]]);
      Q.set(j, k, v);
    }
  return Q;
}

SymMatrix clip_negative_eigenvalues(const SymMatrix& Q) {
  const auto e = jacobi_eigen(Q, true);
  const std::size_t n = Q.dim();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(0.0, e.values[k]);
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += lam * e.vectors[i * n + k] * e.vectors[j * n + k];
  }
  return SymMatrix::from_row_major(n, out);
}

}  // namespace

KernelNoise table_kernel(std::vector<double> values, std::size_t node_count) {
  if (values.size() != node_count * node_count)
    throw std::invalid_argument("table_kernel: table size does not match node_count^2");
  auto shared = std::make_shared<const std::vector<double>>(std::move(values));
  return KernelNoise{[shared, node_count](const GridPoint& a, const GridPoint& b) {
    if (a.index >= node_count || b.index >= node_count)
      throw std::out_of_range("table_kernel: grid node outside the table");
    return (*shared)[a.index * node_count + b.index];
  }};
}

NoiseProjection project_noise(const NoiseSpec& spec, const Basis& basis, const QuadratureOrders& orders,
                              const ProjectionOptions& options) {
  NoiseProjection out;
  const std::size_t nm = basis.size();
  const Geometry geom = basis.geometry();
  bool kernel_based = false;

  std::visit(overloaded{
                 [&](const WhiteNoise& w) {
                   if (!(w.sigma2 > 0.0)) throw std::invalid_argument("white noise: sigma2 must be > 0");
                   out.Q = SymMatrix::identity(nm, w.sigma2);
                 },
                 [&](const DiagonalNoise& d) {
                   std::vector<double> q(nm);
                   if (!d.values.empty()) {
                     if (d.values.size() != nm)
                       throw std::invalid_argument("diagonal noise: " + std::to_string(d.values.size()) +
                                                   " values for " + std::to_string(nm) + " modes");
                     q = d.values;
                   } else {
                     if (!(d.c > 0.0)) throw std::invalid_argument("diagonal noise: c must be > 0");
                     if (!(d.p >= 0.0)) throw std::invalid_argument("diagonal noise: p must be >= 0");
                     for (std::size_t k = 0; k < nm; ++k)
                       q[k] = d.c * std::pow(1.0 + std::abs(basis.spectrum().eigenvalue(k)), -d.p);
                   }
                   for (double v : q)
                     if (!(v > 0.0)) throw std::invalid_argument("diagonal noise: entries must be > 0");
                   out.Q = SymMatrix::diagonal(q);
                 },
                 [&](const KernelNoise& k) {
                   if (!k.kernel) throw std::invalid_argument("kernel noise: empty kernel");
                   kernel_based = true;
                   out.Q = project_kernel_on_grid(k.kernel, basis, orders, options, out.warnings);
                 },
                 [&](const IsotropicNoise& iso) {
                   if (!iso.profile) throw std::invalid_argument("isotropic noise: empty profile");
                   kernel_based = true;
                   auto profile = iso.profile;
                   PointKernel kernel = [profile, geom](const GridPoint& a, const GridPoint& b) {
                     return profile(separation(geom, a, b));
                   };
                   out.Q = project_kernel_on_grid(kernel, basis, orders, options, out.warnings);
                 },
                 [&](const GaussianNoise& g) {
                   if (!(g.lengthscale > 0.0)) throw std::invalid_argument("gaussian noise: lengthscale must be > 0");
                   kernel_based = true;
                   if (geom == Geometry::oscillator) {
                     out.Q = project_separable_gaussian(g.lengthscale, basis, orders);
                   } else {
                     const double inv_l2 = 1.0 / (g.lengthscale * g.lengthscale);
                     PointKernel kernel = [inv_l2](const GridPoint& a, const GridPoint& b) {
                       return std::exp(-squared_distance(a, b) * inv_l2);
                     };
                     out.Q = project_kernel_on_grid(kernel, basis, orders, options, out.warnings);
                   }
                 }},
             spec);

  const double qnorm = operator_norm_sym(out.Q);
  out.psd = psd_check(out.Q, 1e-8 * qnorm);
  if (kernel_based && !out.psd.ok) {
    out.warnings.push_back("projected noise matrix is not PSD within 1e-8 ||Q|| (min eigenvalue " +
                           std::to_string(out.psd.min_eigenvalue) + ")");
    if (options.clip_negative) {
      out.Q = clip_negative_eigenvalues(out.Q);
      out.psd = psd_check(out.Q, 1e-8 * qnorm);
      out.warnings.emplace_back("negative eigenvalues clipped to zero");
    }
  }
  return out;
}

BlockReport block_structure_report(const SymMatrix& M, const std::vector<ModeIndex>& modes) {
  if (M.dim() != modes.size()) throw std::invalid_argument("block_structure_report: dimension mismatch");
  std::vector<int> key(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (geometry_of(modes[i]) == Geometry::oscillator)
      throw std::invalid_argument("block_structure_report: oscillator modes have no azimuthal structure");
    key[i] = signed_azimuthal(modes[i]);
  }
  BlockReport r;
  r.max_entry = M.max_abs();
  r.threshold = 1e-8 * r.max_entry;
  double worst = -1.0;
  for (std::size_t j = 0; j < M.dim(); ++j)
    for (std::size_t k = j + 1; k < M.dim(); ++k) {
      const double v = std::abs(M(j, k));
      if (std::abs(key[j]) != std::abs(key[k])) {
        r.coupling_abs_m = std::max(r.coupling_abs_m, v);
      } else if (key[j] != key[k]) {
        r.coupling_signed = std::max(r.coupling_signed, v);
      } else {
        continue;
      }
      if (v > worst) {
        worst = v;
        r.worst = {j, k};
      }
    }
  r.block_diagonal = r.coupling_abs_m <= r.threshold && r.coupling_signed <= r.threshold;
  return r;
}

}  // namespace speclyap
