#pragma once

#include <string>
#include <variant>
#include <vector>

namespace speclyap {

enum class Geometry { disk, oscillator, sphere };

const char* geometry_name(Geometry g);

enum class Parity { cos, sin };

/// Dirichlet disk mode J_|m|(j_{|m|,k} r) x {cos, sin}(|m| theta).
/// `m` is stored as the non-negative azimuthal order; parity sin requires m >= 1.
struct DiskMode {
  int m = 0;
  int k = 1;
  Parity parity = Parity::cos;

  friend bool operator==(const DiskMode&, const DiskMode&) = default;
};

/// Tensor Hermite function index, one degree per dimension (d = 1..3).
struct OscillatorMode {
  std::vector<int> n;

  int total_degree() const;
  friend bool operator==(const OscillatorMode&, const OscillatorMode&) = default;
};

/// Real spherical harmonic; m < 0 selects the sin(|m| phi) member.
struct SphereMode {
  int l = 0;
  int m = 0;

  friend bool operator==(const SphereMode&, const SphereMode&) = default;
};

using ModeIndex = std::variant<DiskMode, OscillatorMode, SphereMode>;

/// Throws std::invalid_argument when the index violates its variant's invariants.
void validate(const ModeIndex& mode);

Geometry geometry_of(const ModeIndex& mode);

/// Signed azimuthal label: +m for cos/positive-order members, -m for sin members.
/// Undefined for oscillator modes (throws std::invalid_argument).
int signed_azimuthal(const ModeIndex& mode);

/// Human readable label, e.g. "disk(m=1,k=2,sin)".
std::string to_string(const ModeIndex& mode);

}  // namespace speclyap
