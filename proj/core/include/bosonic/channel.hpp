#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace bosonic {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
}  // namespace constants

/// One bosonic mode. `omega` is an angular frequency in whatever unit the
/// caller works in (rad/s at the boundary, a reference frequency internally).
struct ModeSpec {
  double omega;
  double eta;

  bool operator==(const ModeSpec&) const = default;
};

/// DomainError unless omega > 0 and 0 <= eta <= 1.
void validate(const ModeSpec& mode);

/// Far-field free-space link between two apertures.
struct FarFieldGeometry {
  double area_t;    // m^2
  double area_r;    // m^2
  double path_len;  // m
  double omega_c;   // rad/s

  void validate() const;

  /// Unclamped Fresnel number at the cutoff frequency.
  double cutoff_fresnel() const;

  /// Far-field approximation is questionable above D(omega_c) = 0.1.
  bool far_field_warning() const { return cutoff_fresnel() > 0.1; }

  /// Geometry with unit apertures whose cutoff frequency yields the requested
  /// Fresnel number over `path_len`.
  static FarFieldGeometry with_cutoff_fresnel(double cutoff_fresnel, double path_len = 1.0e3,
                                              double area_t = 1.0, double area_r = 1.0);
};

struct FlatProfile {
  double eta;
};

struct TabulatedProfile {
  std::vector<ModeSpec> modes;
};

struct ModeGrid {
  double delta_omega;
  std::size_t n_modes;
};

using Profile = std::variant<FlatProfile, FarFieldGeometry, TabulatedProfile>;

/// Immutable channel description: a transmissivity profile plus an optional
/// grid for discretised evaluation of the parametric profiles.
class ChannelModel {
public:
  static ChannelModel flat(double eta, std::optional<ModeGrid> grid = std::nullopt);
  static ChannelModel far_field(const FarFieldGeometry& geometry,
                                std::optional<ModeGrid> grid = std::nullopt);
  static ChannelModel tabulated(std::vector<ModeSpec> modes,
                                std::optional<ModeGrid> grid = std::nullopt);

  const Profile& profile() const noexcept { return profile_; }
  const std::optional<ModeGrid>& grid() const noexcept { return grid_; }

  /// Frequency used to make the model dimensionless: omega_c for far-field,
  /// the grid spacing for flat, the lowest tabulated frequency otherwise.
  /// DomainError for a flat model without a grid.
  double reference_frequency() const;

private:
  ChannelModel(Profile profile, std::optional<ModeGrid> grid)
      : profile_(std::move(profile)), grid_(grid) {}

  Profile profile_;
  std::optional<ModeGrid> grid_;
};

/// Constraint side of the optimisation. Always reduces to a mean energy per
/// channel use E = P T.
class ResourceBudget {
public:
  struct EnergyPerUse {
    double energy;
  };
  struct PowerAndTime {
    double power;
    double time;
  };

  static ResourceBudget energy_per_use(double energy);
  static ResourceBudget power_and_time(double power, double time);

  double energy() const noexcept;
  const std::variant<EnergyPerUse, PowerAndTime>& form() const noexcept { return form_; }

private:
  explicit ResourceBudget(std::variant<EnergyPerUse, PowerAndTime> form) : form_(form) {}

  std::variant<EnergyPerUse, PowerAndTime> form_;
};

/// D(omega) = A_t A_r (omega / 2 pi c L)^2, clamped to 1.
double fresnel(const FarFieldGeometry& geometry, double omega);

/// True when the unclamped Fresnel number at omega exceeds 1.
bool fresnel_clamped(const FarFieldGeometry& geometry, double omega);

/// Modes at omega_k = k * delta_omega for k = 1..n_modes with the profile's
/// transmissivity. Tabulated models return their own modes.
std::vector<ModeSpec> discretize(const ChannelModel& model, double delta_omega,
                                 std::size_t n_modes);

/// Uses the model's own grid (or the tabulated modes).
std::vector<ModeSpec> discretize(const ChannelModel& model);

/// P0 = 2 pi hbar c^2 L^2 / (A_t A_r), in watts.
double reference_power(const FarFieldGeometry& geometry);

/// Conversion between SI and the internal hbar = 1, omega_ref = 1 unit system.
struct UnitScale {
  double omega_ref;  // rad/s

  double energy_to_internal(double joules) const;
  double energy_to_si(double internal) const;
  double power_to_internal(double watts) const;
  double time_to_internal(double seconds) const;

  std::vector<ModeSpec> normalize(std::span<const ModeSpec> modes) const;
};

}  // namespace bosonic
