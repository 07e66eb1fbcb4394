#include "bosonic/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bosonic/error.hpp"

namespace bosonic {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kExponentCutoff = 700.0;

void require_power(double power) {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    std::ostringstream msg;
    msg << "power must be finite and >= 0 (got " << power << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

// Mean photons of a unit-temperature thermal mode at x = y0 * omega / omega_c.
// The x -> 0+ limit is 0; return it before exp(1/x) overflows.
double occupation_at(double x) {
  if (x <= 1.0 / kExponentCutoff) return 0.0;
  return 1.0 / std::expm1(1.0 / x);
}

double power_integrand(double x) {
  const double n = occupation_at(x);
  return n == 0.0 ? 0.0 : n / x;
}

double entropy_integrand(double x) { return thermal_entropy(occupation_at(x)); }

void attach_geometry(FarFieldSolution& s, const FarFieldGeometry& geometry, double time) {
  s.rate_bits_per_sec = s.normalized_rate * geometry.omega_c / (2.0 * std::numbers::pi);
  s.total_bits = s.rate_bits_per_sec * time;
  if (s.omega_cut_ratio) s.omega_cut = *s.omega_cut_ratio * geometry.omega_c;
  s.far_field_warning = geometry.far_field_warning();
}

}  // namespace

double narrowband_capacity(double eta, double mean_photons) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::DomainError, "eta must lie in [0, 1]");
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw Error(Errc::DomainError, "mean photon number must be finite and >= 0");
  }
  return thermal_entropy(eta * mean_photons);
}

double flat_broadband_capacity_internal(double eta, double power, double time) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::DomainError, "eta must lie in [0, 1]");
  require_power(power);
  if (!(time > 0.0)) throw Error(Errc::DomainError, "time must be positive");
  return std::sqrt(eta) / kLn2 * std::sqrt(std::numbers::pi * power / 3.0) * time;
}

double flat_broadband_capacity(double eta, double power, double time) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::DomainError, "eta must lie in [0, 1]");
  require_power(power);
  if (!(time > 0.0)) throw Error(Errc::DomainError, "time must be positive");
  return std::sqrt(eta) / kLn2 * std::sqrt(std::numbers::pi * power / (3.0 * constants::hbar)) *
         time;
}

double flat_broadband_rate(double eta, double power) {
  return flat_broadband_capacity(eta, power, 1.0);
}

double farfield_power_integral(double y0, const numerics::Tolerance& tol) {
  if (y0 <= 0.0) return 0.0;
  return numerics::integrate(power_integrand, 0.0, y0, tol);
}

double farfield_entropy_integral(double y0, const numerics::Tolerance& tol) {
  if (y0 <= 0.0) return 0.0;
  return numerics::integrate(entropy_integrand, 0.0, y0, tol);
}

double hethom_power_factor(double y0) {
  const double d = y0 - 1.0;
  if (std::abs(d) < 1e-4) {
    // d - ln(1+d) = d^2/2 - d^3/3 + d^4/4 - d^5/5 + ...
    return d * d * (0.5 - d * (1.0 / 3.0 - d * (0.25 - d * 0.2)));
  }
  return d - std::log1p(d);
}

double hethom_rate_factor(double y0) {
  const double d = y0 - 1.0;
  if (std::abs(d) < 1e-4) {
    // 1/(1+d) - 1 + ln(1+d) = d^2/2 - 2d^3/3 + 3d^4/4 - 4d^5/5 + ...
    return d * d * (0.5 - d * (2.0 / 3.0 - d * (0.75 - d * 0.8)));
  }
  return std::log1p(d) - d / y0;
}

FarFieldSolution solve_farfield(double power_ratio, Detection detection,
                                const numerics::Tolerance& tol) {
  if (!(power_ratio >= 0.0) || !std::isfinite(power_ratio)) {
    throw Error(Errc::Infeasible, "power ratio must be finite and >= 0");
  }
  tol.validate();
  FarFieldSolution s;
  s.power_ratio = power_ratio;
  s.detection = detection;
  const numerics::Tolerance root_tol{1e-15, 0.0, 400};

  if (detection == Detection::Holevo) {
    if (power_ratio == 0.0) return s;
    // Power integral is strictly increasing in y0; expand_bracket wants a
    // decreasing curve, so negate.
    const auto neg_power = [&](double y) { return -farfield_power_integral(y, tol); };
    const numerics::Bracket b = numerics::expand_bracket(neg_power, 1.0, -power_ratio);
    s.y0 = numerics::find_root(
        [&](double y) { return farfield_power_integral(y, tol) - power_ratio; }, b, root_tol);
    s.normalized_rate = farfield_entropy_integral(s.y0, tol) / s.y0;
    return s;
  }

  const double xi = noise_factor(detection);
  s.y0 = 1.0;
  s.omega_cut_ratio = 1.0;
  if (power_ratio == 0.0) return s;
  // Solve in d = y0 - 1 > 0 so that small powers keep full precision.
  const double target = power_ratio / (xi * xi);
  const auto neg_factor = [](double d) { return -hethom_power_factor(1.0 + d); };
  const double seed = std::sqrt(2.0 * target);
  const numerics::Bracket b = numerics::expand_bracket(neg_factor, seed, -target);
  const double d = numerics::find_root(
      [&](double dd) { return hethom_power_factor(1.0 + dd) - target; }, b, root_tol);
  s.y0 = 1.0 + d;
  s.normalized_rate = xi * hethom_rate_factor(s.y0) / kLn2;
  s.omega_cut_ratio = 1.0 / s.y0;
  return s;
}

FarFieldSolution farfield_capacity(const FarFieldGeometry& geometry, double power, double time,
                                   const numerics::Tolerance& tol) {
  geometry.validate();
  require_power(power);
  if (!(time > 0.0)) throw Error(Errc::DomainError, "time must be positive");
  FarFieldSolution s = solve_farfield(power / reference_power(geometry), Detection::Holevo, tol);
  attach_geometry(s, geometry, time);
  return s;
}

FarFieldSolution farfield_hethom(const FarFieldGeometry& geometry, double power, double time,
                                 Detection detection, const numerics::Tolerance& tol) {
  if (detection == Detection::Holevo) {
    throw Error(Errc::DomainError, "farfield_hethom needs heterodyne or homodyne detection");
  }
  geometry.validate();
  if (!(power > 0.0)) throw Error(Errc::Infeasible, "power must be positive");
  if (!(time > 0.0)) throw Error(Errc::DomainError, "time must be positive");
  FarFieldSolution s = solve_farfield(power / reference_power(geometry), detection, tol);
  attach_geometry(s, geometry, time);
  return s;
}

std::vector<SpectrumPoint> spectrum(const FarFieldSolution& solution, std::size_t n_points) {
  if (n_points < 1) throw Error(Errc::DomainError, "spectrum needs at least one point");
  std::vector<SpectrumPoint> out;
  out.reserve(n_points);
  const double y0 = solution.y0;
  for (std::size_t i = 1; i <= n_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_points);
    double s = 0.0;
    if (y0 > 0.0) {
      if (solution.detection == Detection::Holevo) {
        // omega N with eta = D t^2 and beta = D / (y0 omega_c).
        s = occupation_at(y0 * t) / t;
      } else {
        const double xi = noise_factor(solution.detection);
        // omega N = (1/beta)(1 - omega_0/omega), zero below the cutoff.
        s = y0 * t > 1.0 ? xi * xi * y0 * (1.0 - 1.0 / (y0 * t)) : 0.0;
      }
    }
    out.push_back({t, s});
  }
  return out;
}

std::vector<SpectrumPoint> spectrum(std::span<const ModeSpec> modes, const Allocation& allocation,
                                    std::size_t n_points) {
  if (modes.size() != allocation.photon_numbers.size()) {
    throw Error(Errc::DimensionMismatch, "allocation does not match mode list");
  }
  const std::size_t n = std::min(n_points, modes.size());
  std::vector<SpectrumPoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back({modes[k].omega, modes[k].omega * allocation.photon_numbers[k]});
  }
  return out;
}

}  // namespace bosonic
