#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bosonic/allocator.hpp"
#include "bosonic/channel.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/numerics.hpp"

namespace bosonic {

/// g(eta N) for a single mode carrying N mean input photons.
double narrowband_capacity(double eta, double mean_photons);

/// Continuum capacity of a flat broadband channel, in bits over the whole
/// transmission time: (sqrt(eta)/ln 2) sqrt(pi P / 3 hbar) T. SI inputs.
double flat_broadband_capacity(double eta, double power, double time);

/// Same formula per second of transmission.
double flat_broadband_rate(double eta, double power);

/// flat_broadband_capacity with hbar = 1 (power in hbar omega_ref^2, time in
/// 1/omega_ref).
double flat_broadband_capacity_internal(double eta, double power, double time);

/// Solved far-field optimisation. `y0` is only meaningful together with its
/// detection tag: the Holevo and het/hom problems define it through different
/// constraints.
struct FarFieldSolution {
  double y0 = 0.0;
  double power_ratio = 0.0;        // P / P0
  double normalized_rate = 0.0;    // bits per (omega_c T / 2 pi)
  double rate_bits_per_sec = 0.0;  // SI; 0 when solved without a geometry
  double total_bits = 0.0;         // rate * T; 0 when solved without a geometry
  Detection detection = Detection::Holevo;
  std::optional<double> omega_cut;  // rad/s, het/hom only
  std::optional<double> omega_cut_ratio;  // omega_0 / omega_c, het/hom only
  bool far_field_warning = false;
};

/// int_0^y0 dx / (x (e^{1/x} - 1)).
double farfield_power_integral(double y0, const numerics::Tolerance& tol);

/// int_0^y0 dx g(1 / (e^{1/x} - 1)).
double farfield_entropy_integral(double y0, const numerics::Tolerance& tol);

/// y0 - 1 - ln y0, accurate near y0 = 1.
double hethom_power_factor(double y0);

/// 1/y0 - 1 + ln y0, accurate near y0 = 1.
double hethom_rate_factor(double y0);

/// Dimensionless far-field solve: everything depends on P/P0 only.
/// Holevo solves the power integral for y0; het/hom solve
/// xi^2 (y0 - 1 - ln y0) = P/P0 on y0 > 1. Infeasible for P/P0 < 0.
FarFieldSolution solve_farfield(double power_ratio, Detection detection,
                                const numerics::Tolerance& tol = numerics::kDefaultQuadratureTolerance);

/// Holevo capacity of the far-field channel.
FarFieldSolution farfield_capacity(const FarFieldGeometry& geometry, double power, double time,
                                   const numerics::Tolerance& tol = numerics::kDefaultQuadratureTolerance);

/// Heterodyne or homodyne rate of the far-field channel.
FarFieldSolution farfield_hethom(const FarFieldGeometry& geometry, double power, double time,
                                 Detection detection,
                                 const numerics::Tolerance& tol = numerics::kDefaultQuadratureTolerance);

struct SpectrumPoint {
  double omega;  // omega / omega_ref
  double power;  // S = omega N, in units of omega_ref (far-field: omega_c / D(omega_c))
};

/// Continuum far-field spectrum S = omega N(omega) on omega_i = (i/n) omega_c,
/// i = 1..n. Reported as S D(omega_c) / omega_c, which depends on y0 alone.
std::vector<SpectrumPoint> spectrum(const FarFieldSolution& solution, std::size_t n_points);

/// Discrete spectrum omega_k N_k of a solved allocation, first `n_points` modes.
std::vector<SpectrumPoint> spectrum(std::span<const ModeSpec> modes, const Allocation& allocation,
                                    std::size_t n_points);

}  // namespace bosonic
