#include "speclyap/eigenbases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace speclyap {

void GeometryParams::validate(Geometry g) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (g == Geometry::oscillator && (d < 1 || d > 3))
    throw std::invalid_argument("oscillator dimension d must be 1, 2 or 3");
}

namespace {

double disk_radial_norm(int m, double zero) {
  const double jn1 = bessel_j(m + 1, zero);
  const double radial = 0.5 * jn1 * jn1;
  const double angular = m == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
  return 1.0 / std::sqrt(radial * angular);
}

double disk_angular(const DiskMode& mode, double theta) {
  if (mode.m == 0) return 1.0;
  return mode.parity == Parity::cos ? std::cos(mode.m * theta) : std::sin(mode.m * theta);
}

double sphere_angular(int m, double phi) {
  if (m == 0) return 1.0;
  return m > 0 ? std::numbers::sqrt2 * std::cos(m * phi) : std::numbers::sqrt2 * std::sin(-m * phi);
}

void enumerate_levels(int d, int remaining, std::vector<int>& prefix, std::vector<OscillatorMode>& out) {
  if (static_cast<int>(prefix.size()) == d - 1) {
    prefix.push_back(remaining);
    out.push_back(OscillatorMode{prefix});
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    prefix.push_back(v);
    enumerate_levels(d, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

DissipativeSpectrum disk_spectrum(const GeometryParams& params, int cutoff) {
  params.validate(Geometry::disk);
  if (cutoff < 1) throw std::invalid_argument("disk_spectrum: cutoff must be >= 1");

  struct Candidate {
    double zero;
    DiskMode mode;
  };
  // Weyl's law gives about T^2/4 modes with j < T; grow T until enough are found.
  double limit = 4.0 + 2.0 * std::sqrt(static_cast<double>(cutoff));
  std::vector<Candidate> cands;
  for (;;) {
    if (limit > 500.0) throw std::invalid_argument("disk_spectrum: cutoff too large for supported Bessel range");
    cands.clear();
    for (int m = 0; m < limit; ++m) {
      if (m > 60) throw std::invalid_argument("disk_spectrum: cutoff requires Bessel order > 60");
      const auto zeros = bessel_zeros_below(m, limit);
      for (std::size_t k = 0; k < zeros.size(); ++k) {
        cands.push_back({zeros[k], DiskMode{m, static_cast<int>(k) + 1, Parity::cos}});
        if (m > 0) cands.push_back({zeros[k], DiskMode{m, static_cast<int>(k) + 1, Parity::sin}});
      }
    }
    if (static_cast<int>(cands.size()) >= cutoff) break;
    limit *= 1.3;
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(a.zero, a.mode.m, a.mode.parity == Parity::sin, a.mode.k) <
           std::tuple(b.zero, b.mode.m, b.mode.parity == Parity::sin, b.mode.k);
  });
  std::vector<ModeIndex> modes;
  std::vector<double> eig;
  const double a2 = params.alpha * params.alpha;
  for (int i = 0; i < cutoff; ++i) {
    modes.emplace_back(cands[i].mode);
    eig.push_back(-(a2 * cands[i].zero * cands[i].zero) - params.gamma);
  }
  return DissipativeSpectrum(std::move(modes), std::move(eig));
}

DissipativeSpectrum oscillator_spectrum(const GeometryParams& params, int cutoff) {
  params.validate(Geometry::oscillator);
  if (cutoff < 1) throw std::invalid_argument("oscillator_spectrum: cutoff must be >= 1");
  std::vector<ModeIndex> modes;
  std::vector<double> eig;
  for (int level = 0; static_cast<int>(modes.size()) < cutoff; ++level) {
    std::vector<OscillatorMode> lvl;
    std::vector<int> prefix;
    enumerate_levels(params.d, level, prefix, lvl);
    const double lambda = -(level + 0.5 * params.d) - params.gamma;
    for (auto& mode : lvl) {
      if (static_cast<int>(modes.size()) == cutoff) break;
      modes.emplace_back(std::move(mode));
      eig.push_back(lambda);
    }
  }
  return DissipativeSpectrum(std::move(modes), std::move(eig));
}

DissipativeSpectrum sphere_spectrum(const GeometryParams& params, int L) {
  params.validate(Geometry::sphere);
  if (L < 0) throw std::invalid_argument("sphere_spectrum: L must be >= 0");
  std::vector<ModeIndex> modes;
  std::vector<double> eig;
  const double a2 = params.alpha * params.alpha;
  for (int l = 0; l <= L; ++l) {
    const double lambda = -a2 * l * (l + 1.0) - params.gamma;
    for (int m = -l; m <= l; ++m) {
      modes.emplace_back(SphereMode{l, m});
      eig.push_back(lambda);
    }
  }
  return DissipativeSpectrum(std::move(modes), std::move(eig));
}

DissipativeSpectrum make_spectrum(Geometry g, const GeometryParams& params, int count) {
  switch (g) {
    case Geometry::disk:
      return disk_spectrum(params, count);
    case Geometry::oscillator:
      return oscillator_spectrum(params, count);
    case Geometry::sphere: {
      if (count < 1) throw std::invalid_argument("make_spectrum: count must be >= 1");
      int L = 0;
      while ((L + 1) * (L + 1) < count) ++L;
      return sphere_spectrum(params, L).truncated(static_cast<std::size_t>(count));
    }
  }
  throw std::invalid_argument("make_spectrum: unknown geometry");
}

double disk_eigenfunction(const DiskMode& mode, double r, double theta) {
  validate(ModeIndex{mode});
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("disk_eigenfunction: r outside [0, 1]");
  const double zero = bessel_zero(mode.m, mode.k);
  return disk_radial_norm(mode.m, zero) * bessel_j(mode.m, zero * r) * disk_angular(mode, theta);
}

double sphere_eigenfunction(const SphereMode& mode, double theta, double phi) {
  validate(ModeIndex{mode});
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::invalid_argument("sphere_eigenfunction: theta outside [0, pi]");
  return normalized_legendre(mode.l, std::abs(mode.m), std::cos(theta)) * sphere_angular(mode.m, phi);
}

double oscillator_eigenfunction(const OscillatorMode& mode, std::span<const double> x) {
  validate(ModeIndex{mode});
  if (x.size() < mode.n.size()) throw std::invalid_argument("oscillator_eigenfunction: too few coordinates");
  double v = 1.0;
  for (std::size_t i = 0; i < mode.n.size(); ++i) v *= hermite_function(mode.n[i], x[i]);
  return v;
}

NodeGrid make_grid(Geometry g, int d, const QuadratureOrders& orders) {
  NodeGrid grid;
  grid.geometry = g;
  switch (g) {
    case Geometry::disk: {
      const auto radial = map_to_radial(gauss_legendre_rule(orders.radial));
      const auto angular = trapezoid_periodic_rule(orders.angular);
      for (std::size_t i = 0; i < radial.size(); ++i) {
        for (std::size_t j = 0; j < angular.size(); ++j) {
          const double r = radial.nodes[i];
          const double t = angular.nodes[j];
          grid.points.push_back({{r * std::cos(t), r * std::sin(t), 0.0}, grid.points.size()});
          grid.weights.push_back(radial.weights[i] * angular.weights[j]);
          grid.intrinsic.push_back({r, t});
        }
      }
      break;
    }
    case Geometry::sphere: {
      const auto polar = gauss_legendre_rule(orders.polar);
      const auto azimuth = trapezoid_periodic_rule(orders.angular);
      for (std::size_t i = 0; i < polar.size(); ++i) {
        const double c = polar.nodes[i];
        const double s = std::sqrt((1.0 - c) * (1.0 + c));
        const double theta = std::acos(c);
        for (std::size_t j = 0; j < azimuth.size(); ++j) {
          const double p = azimuth.nodes[j];
          grid.points.push_back({{s * std::cos(p), s * std::sin(p), c}, grid.points.size()});
          grid.weights.push_back(polar.weights[i] * azimuth.weights[j]);
          grid.intrinsic.push_back({theta, p});
        }
      }
      break;
    }
    case Geometry::oscillator: {
      if (d < 1 || d > 3) throw std::invalid_argument("make_grid: oscillator dimension must be 1..3");
      const auto rule = gauss_hermite_rule(orders.hermite);
      const auto w = gauss_hermite_compensated_weights(rule);
      const std::size_t n = rule.size();
      std::size_t total = 1;
      for (int i = 0; i < d; ++i) total *= n;
      grid.points.reserve(total);
      grid.weights.reserve(total);
      for (std::size_t flat = 0; flat < total; ++flat) {
        GridPoint p;
        p.index = flat;
        double weight = 1.0;
        std::size_t rem = flat;
        for (int axis = d - 1; axis >= 0; --axis) {
          const std::size_t idx = rem % n;
          rem /= n;
          p.x[axis] = rule.nodes[idx];
          weight *= w[idx];
        }
        grid.points.push_back(p);
        grid.weights.push_back(weight);
      }
      break;
    }
  }
  return grid;
}

Basis::Basis(Geometry g, GeometryParams params, DissipativeSpectrum spectrum)
    : geometry_(g), params_(params), spectrum_(std::move(spectrum)) {
  for (const auto& mode : spectrum_.modes()) {
    if (geometry_of(mode) != g) throw std::invalid_argument("Basis: mode geometry does not match basis");
  }
  if (g == Geometry::disk) {
    // Zeros are shared between cos/sin partners and successive k, so compute per order.
    int max_m = 0;
    for (const auto& mode : spectrum_.modes()) max_m = std::max(max_m, std::get<DiskMode>(mode).m);
    std::vector<std::vector<double>> zeros(max_m + 1);
    for (const auto& mode : spectrum_.modes()) {
      const auto& dm = std::get<DiskMode>(mode);
      if (static_cast<int>(zeros[dm.m].size()) < dm.k) zeros[dm.m] = bessel_zeros(dm.m, dm.k);
    }
    for (const auto& mode : spectrum_.modes()) {
      const auto& dm = std::get<DiskMode>(mode);
      const double z = zeros[dm.m][dm.k - 1];
      disk_zero_.push_back(z);
      disk_norm_.push_back(disk_radial_norm(dm.m, z));
    }
  }
}

double Basis::evaluate(std::size_t mode, const NodeGrid& grid, std::size_t node) const {
  const auto& idx = spectrum_.modes()[mode];
  switch (geometry_) {
    case Geometry::disk: {
      const auto& dm = std::get<DiskMode>(idx);
      const auto [r, t] = grid.intrinsic[node];
      return disk_norm_[mode] * bessel_j(dm.m, disk_zero_[mode] * r) * disk_angular(dm, t);
    }
    case Geometry::sphere: {
      const auto& sm = std::get<SphereMode>(idx);
      const auto [theta, phi] = grid.intrinsic[node];
      return normalized_legendre(sm.l, std::abs(sm.m), grid.points[node].x[2]) * sphere_angular(sm.m, phi);
    }
    case Geometry::oscillator: {
      const auto& om = std::get<OscillatorMode>(idx);
      double v = 1.0;
      for (std::size_t i = 0; i < om.n.size(); ++i) v *= hermite_function(om.n[i], grid.points[node].x[i]);
      return v;
    }
  }
  return 0.0;
}

std::vector<double> Basis::evaluate(const NodeGrid& grid) const {
  if (grid.geometry != geometry_) throw std::invalid_argument("Basis::evaluate: grid geometry mismatch");
  const std::size_t nm = size();
  std::vector<double> table(grid.size() * nm);
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (std::size_t k = 0; k < nm; ++k) table[a * nm + k] = evaluate(k, grid, a);
  return table;
}

namespace {

std::vector<double> hermite_values(int max_degree, const QuadratureRule& rule) {
  const std::size_t nd = static_cast<std::size_t>(max_degree) + 1;
  std::vector<double> v(rule.size() * nd);
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t a = 0; a < nd; ++a) v[i * nd + a] = hermite_function(static_cast<int>(a), rule.nodes[i]);
  return v;
}

}  // namespace

std::vector<double> hermite_gram_table(int max_degree, int order) {
  const auto rule = gauss_hermite_rule(order);
  const auto w = gauss_hermite_compensated_weights(rule);
  const auto psi = hermite_values(max_degree, rule);
  const std::size_t nd = static_cast<std::size_t>(max_degree) + 1;
  std::vector<double> g(nd * nd, 0.0);
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t b = 0; b < nd; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) s += w[i] * psi[i * nd + a] * psi[i * nd + b];
      g[a * nd + b] = s;
    }
  return g;
}

std::vector<double> hermite_kernel_table(int max_degree, int order,
                                         const std::function<double(double, double)>& kernel) {
  const auto rule = gauss_hermite_rule(order);
  const auto w = gauss_hermite_compensated_weights(rule);
  const auto psi = hermite_values(max_degree, rule);
  const std::size_t nd = static_cast<std::size_t>(max_degree) + 1;
  const std::size_t n = rule.size();
  // kw[x][b] = sum_y K(x, y) W_y psi_b(y)
  std::vector<double> kw(n * nd, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double k = kernel(rule.nodes[x], rule.nodes[y]) * w[y];
      for (std::size_t b = 0; b < nd; ++b) kw[x * nd + b] += k * psi[y * nd + b];
    }
  std::vector<double> t(nd * nd, 0.0);
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t b = 0; b < nd; ++b) {
      double s = 0.0;
      for (std::size_t x = 0; x < n; ++x) s += w[x] * psi[x * nd + a] * kw[x * nd + b];
      t[a * nd + b] = s;
    }
  return t;
}

GramResult gram_matrix(const Basis& basis, const QuadratureOrders& orders) {
  const std::size_t nm = basis.size();
  GramResult out{SymMatrix(nm)};
  if (basis.geometry() == Geometry::oscillator) {
    int max_degree = 0;
    for (const auto& mode : basis.spectrum().modes())
      for (int v : std::get<OscillatorMode>(mode).n) max_degree = std::max(max_degree, v);
    const auto g1 = hermite_gram_table(max_degree, orders.hermite);
    const std::size_t nd = static_cast<std::size_t>(max_degree) + 1;
    for (std::size_t j = 0; j < nm; ++j)
      for (std::size_t k = j; k < nm; ++k) {
        const auto& a = std::get<OscillatorMode>(basis.spectrum().modes()[j]).n;
        const auto& b = std::get<OscillatorMode>(basis.spectrum().modes()[k]).n;
        double v = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) v *= g1[a[i] * nd + b[i]];
        out.gram.set(j, k, v);
      }
  } else {
    const auto grid = make_grid(basis.geometry(), basis.params().d, orders);
    const auto phi = basis.evaluate(grid);
    for (std::size_t j = 0; j < nm; ++j)
      for (std::size_t k = j; k < nm; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < grid.size(); ++a) s += grid.weights[a] * phi[a * nm + j] * phi[a * nm + k];
        out.gram.set(j, k, s);
      }
  }
  for (std::size_t j = 0; j < nm; ++j)
    for (std::size_t k = 0; k < nm; ++k)
      out.defect = std::max(out.defect, std::abs(out.gram(j, k) - (j == k ? 1.0 : 0.0)));
  return out;
}

}  // namespace speclyap
