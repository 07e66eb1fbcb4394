#include "bosonic/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bosonic/error.hpp"

namespace bosonic {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite (got " << value << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

void require_transmissivity(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream msg;
    msg << "transmissivity must lie in [0, 1] (got " << eta << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

double unclamped_fresnel(const FarFieldGeometry& g, double omega) {
  const double x = omega / (2.0 * std::numbers::pi * constants::speed_of_light * g.path_len);
  return g.area_t * g.area_r * x * x;
}

}  // namespace

void validate(const ModeSpec& mode) {
  require_positive(mode.omega, "mode frequency");
  require_transmissivity(mode.eta);
}

void FarFieldGeometry::validate() const {
  require_positive(area_t, "area_t");
  require_positive(area_r, "area_r");
  require_positive(path_len, "path_len");
  require_positive(omega_c, "omega_c");
}

double FarFieldGeometry::cutoff_fresnel() const { return unclamped_fresnel(*this, omega_c); }

FarFieldGeometry FarFieldGeometry::with_cutoff_fresnel(double cutoff_fresnel, double path_len,
                                                       double area_t, double area_r) {
  require_positive(cutoff_fresnel, "cutoff Fresnel number");
  const double omega_c = 2.0 * std::numbers::pi * constants::speed_of_light * path_len *
                         std::sqrt(cutoff_fresnel / (area_t * area_r));
  FarFieldGeometry g{area_t, area_r, path_len, omega_c};
  g.validate();
  return g;
}

ChannelModel ChannelModel::flat(double eta, std::optional<ModeGrid> grid) {
  require_transmissivity(eta);
  if (grid) require_positive(grid->delta_omega, "delta_omega");
  return ChannelModel(FlatProfile{eta}, grid);
}

ChannelModel ChannelModel::far_field(const FarFieldGeometry& geometry,
                                     std::optional<ModeGrid> grid) {
  geometry.validate();
  if (grid) require_positive(grid->delta_omega, "delta_omega");
  return ChannelModel(geometry, grid);
}

ChannelModel ChannelModel::tabulated(std::vector<ModeSpec> modes, std::optional<ModeGrid> grid) {
  if (modes.empty()) throw Error(Errc::DomainError, "tabulated channel needs at least one mode");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    validate(modes[i]);
    if (i > 0 && !(modes[i].omega > modes[i - 1].omega)) {
      throw Error(Errc::DomainError,
                  "tabulated modes must have strictly increasing frequencies");
    }
  }
  return ChannelModel(TabulatedProfile{std::move(modes)}, grid);
}

double ChannelModel::reference_frequency() const {
  if (const auto* ff = std::get_if<FarFieldGeometry>(&profile_)) return ff->omega_c;
  if (const auto* tab = std::get_if<TabulatedProfile>(&profile_)) return tab->modes.front().omega;
  if (!grid_) throw Error(Errc::DomainError, "flat channel needs delta_omega for normalisation");
  return grid_->delta_omega;
}

ResourceBudget ResourceBudget::energy_per_use(double energy) {
  if (!(energy >= 0.0) || !std::isfinite(energy)) {
    throw Error(Errc::DomainError, "energy budget must be finite and >= 0");
  }
  return ResourceBudget(EnergyPerUse{energy});
}

ResourceBudget ResourceBudget::power_and_time(double power, double time) {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw Error(Errc::DomainError, "power must be finite and >= 0");
  }
  require_positive(time, "transmission time");
  return ResourceBudget(PowerAndTime{power, time});
}

double ResourceBudget::energy() const noexcept {
  if (const auto* e = std::get_if<EnergyPerUse>(&form_)) return e->energy;
  const auto& pt = std::get<PowerAndTime>(form_);
  return pt.power * pt.time;
}

double fresnel(const FarFieldGeometry& geometry, double omega) {
  require_positive(omega, "frequency");
  return std::min(unclamped_fresnel(geometry, omega), 1.0);
}

bool fresnel_clamped(const FarFieldGeometry& geometry, double omega) {
  require_positive(omega, "frequency");
  return unclamped_fresnel(geometry, omega) > 1.0;
}

std::vector<ModeSpec> discretize(const ChannelModel& model, double delta_omega,
                                 std::size_t n_modes) {
  if (const auto* tab = std::get_if<TabulatedProfile>(&model.profile())) {
    // A tabulated model that also carries a grid is contradictory.
    if (model.grid()) {
      throw Error(Errc::ProfileMismatch, "tabulated channel cannot also carry a mode grid");
    }
    return tab->modes;
  }
  require_positive(delta_omega, "delta_omega");
  if (n_modes < 1) throw Error(Errc::DomainError, "n_modes must be at least 1");

  std::vector<ModeSpec> modes;
  modes.reserve(n_modes);
  if (const auto* flat = std::get_if<FlatProfile>(&model.profile())) {
    for (std::size_t k = 1; k <= n_modes; ++k) {
      modes.push_back({static_cast<double>(k) * delta_omega, flat->eta});
    }
    return modes;
  }
  const auto& geometry = std::get<FarFieldGeometry>(model.profile());
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const double omega = static_cast<double>(k) * delta_omega;
    modes.push_back({omega, fresnel(geometry, omega)});
  }
  return modes;
}

std::vector<ModeSpec> discretize(const ChannelModel& model) {
  if (std::holds_alternative<TabulatedProfile>(model.profile())) {
    return discretize(model, 0.0, 0);
  }
  if (!model.grid()) {
    throw Error(Errc::DomainError, "parametric channel needs a mode grid to discretize");
  }
  return discretize(model, model.grid()->delta_omega, model.grid()->n_modes);
}

double reference_power(const FarFieldGeometry& geometry) {
  geometry.validate();
  const double c = constants::speed_of_light;
  const double p0 = 2.0 * std::numbers::pi * constants::hbar * c * c * geometry.path_len *
                    geometry.path_len / (geometry.area_t * geometry.area_r);
  // Same quantity through the Fresnel number: hbar omega_c^2 / (2 pi D(omega_c)).
  const double via_fresnel = constants::hbar * geometry.omega_c * geometry.omega_c /
                             (2.0 * std::numbers::pi * geometry.cutoff_fresnel());
  if (std::abs(p0 - via_fresnel) > 1e-12 * p0) {
    throw std::logic_error("reference power identity violated");
  }
  return p0;
}

double UnitScale::energy_to_internal(double joules) const {
  return joules / (constants::hbar * omega_ref);
}

double UnitScale::energy_to_si(double internal) const {
  return internal * constants::hbar * omega_ref;
}

double UnitScale::power_to_internal(double watts) const {
  return watts / (constants::hbar * omega_ref * omega_ref);
}

double UnitScale::time_to_internal(double seconds) const { return seconds * omega_ref; }

std::vector<ModeSpec> UnitScale::normalize(std::span<const ModeSpec> modes) const {
  std::vector<ModeSpec> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back({m.omega / omega_ref, m.eta});
  return out;
}

}  // namespace bosonic
