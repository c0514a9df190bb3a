#include "speclyap/mode_index.hpp"

#include <sstream>
#include <stdexcept>

namespace speclyap {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

const char* geometry_name(Geometry g) {
  switch (g) {
    case Geometry::disk:
      return "disk";
    case Geometry::oscillator:
      return "oscillator";
    case Geometry::sphere:
      return "sphere";
  }
  return "unknown";
}

int OscillatorMode::total_degree() const {
  int s = 0;
  for (int v : n) s += v;
  return s;
}

void validate(const ModeIndex& mode) {
  std::visit(overloaded{
                 [](const DiskMode& d) {
                   if (d.m < 0) throw std::invalid_argument("disk mode: m must be >= 0");
                   if (d.k < 1) throw std::invalid_argument("disk mode: k must be >= 1");
                   if (d.parity == Parity::sin && d.m < 1)
                     throw std::invalid_argument("disk mode: sin parity requires m >= 1");
                 },
                 [](const OscillatorMode& o) {
                   if (o.n.empty() || o.n.size() > 3)
                     throw std::invalid_argument("oscillator mode: dimension must be 1, 2 or 3");
                   for (int v : o.n)
                     if (v < 0) throw std::invalid_argument("oscillator mode: negative degree");
                 },
                 [](const SphereMode& s) {
                   if (s.l < 0) throw std::invalid_argument("sphere mode: l must be >= 0");
                   if (s.m < -s.l || s.m > s.l)
                     throw std::invalid_argument("sphere mode: |m| must be <= l");
                 }},
             mode);
}

Geometry geometry_of(const ModeIndex& mode) {
  return std::visit(overloaded{[](const DiskMode&) { return Geometry::disk; },
                               [](const OscillatorMode&) { return Geometry::oscillator; },
                               [](const SphereMode&) { return Geometry::sphere; }},
                    mode);
}

int signed_azimuthal(const ModeIndex& mode) {
  return std::visit(
      overloaded{[](const DiskMode& d) { return d.parity == Parity::cos ? d.m : -d.m; },
                 [](const OscillatorMode&) -> int {
                   throw std::invalid_argument("oscillator modes carry no azimuthal index");
                 },
                 [](const SphereMode& s) { return s.m; }},
      mode);
}

std::string to_string(const ModeIndex& mode) {
  std::ostringstream os;
  std::visit(overloaded{[&](const DiskMode& d) {
                          os << "disk(m=" << d.m << ",k=" << d.k << ','
                             << (d.parity == Parity::cos ? "cos" : "sin") << ')';
                        },
                        [&](const OscillatorMode& o) {
                          os << "oscillator(";
                          for (std::size_t i = 0; i < o.n.size(); ++i) os << (i ? "," : "") << o.n[i];
                          os << ')';
                        },
                        [&](const SphereMode& s) { os << "sphere(l=" << s.l << ",m=" << s.m << ')'; }},
             mode);
  return os.str();
}

}  // namespace speclyap
