#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bosonic/channel.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/numerics.hpp"

// Constrained maximisation of the summed per-mode kernel under a mean-energy
// budget. Everything in this header works in internal units: hbar = 1 and mode
// frequencies in units of some reference frequency, with the budget expressed
// in hbar * omega_ref. UnitScale converts from SI.
namespace bosonic {

struct Allocation {
  std::vector<double> photon_numbers;  // N_k per mode per use
  double beta = 0.0;                   // Lagrange multiplier; +inf for a zero budget
  double achieved_energy = 0.0;        // sum_k omega_k N_k
  Detection detection = Detection::Holevo;
  std::size_t active_modes = 0;        // modes with N_k > 0
};

enum class RateUnit { BitsPerUse, BitsPerSecond };

struct RateResult {
  double value = 0.0;
  RateUnit unit = RateUnit::BitsPerUse;
  Detection detection = Detection::Holevo;
  Allocation allocation;
};

/// Thermal allocation N_k = (1/eta_k) / (exp(beta omega_k / eta_k) - 1).
/// Modes with eta_k = 0 get N_k = 0, as do modes whose exponent exceeds 700.
std::vector<double> holevo_photon_numbers(std::span<const ModeSpec> modes, double beta);

/// Water-filling allocation N_k = max(1/(beta omega_k) - xi^2/eta_k, 0).
std::vector<double> waterfill_photon_numbers(std::span<const ModeSpec> modes, double beta,
                                             double xi);

/// Dispatches to holevo_photon_numbers or waterfill_photon_numbers.
std::vector<double> photon_numbers(std::span<const ModeSpec> modes, double beta,
                                   Detection detection);

/// sum_k omega_k N_k.
double allocated_energy(std::span<const ModeSpec> modes, std::span<const double> photons);

/// Finds beta such that the optimal allocation for `detection` spends exactly
/// the budget. Achieved energy is strictly decreasing in beta, so the solve is
/// a bracketed 1-D root find seeded at beta = 1/E.
///
/// A zero budget yields an all-zero allocation with beta = +inf. Infeasible
/// when every mode has eta = 0.
Allocation solve_beta(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                      Detection detection,
                      const numerics::Tolerance& tol = numerics::kDefaultRootTolerance);

/// Sum of the per-mode kernel at the given allocation. DimensionMismatch when
/// the allocation and mode list differ in length.
RateResult rate(std::span<const ModeSpec> modes, const Allocation& allocation);

/// rate(modes, solve_beta(...)).
RateResult capacity(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                    Detection detection,
                    const numerics::Tolerance& tol = numerics::kDefaultRootTolerance);

/// Brute-force reference for tests: enumerates energy splits on a simplex grid
/// with `grid_steps` divisions, then polishes the best split with a shrinking
/// pairwise pattern search. Independent of the beta machinery. At most 4
/// modes (TooManyModes otherwise).
RateResult oracle_grid_search(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                              Detection detection, std::size_t grid_steps);

/// Unbounded flat ladder omega_k = k * delta_omega, k >= 1, with uniform eta.
struct FlatLadder {
  double eta;
  double delta_omega;
};

struct LadderCapacity {
  std::vector<ModeSpec> modes;  // the truncated ladder actually used
  RateResult result;
};

/// Allocation on an infinite flat ladder. The thermal tail is truncated at the
/// first k with N_k < 1e-15 N_1; water-filling stops at the first empty mode.
/// The truncation is recomputed at every trial beta.
LadderCapacity flat_ladder_capacity(const FlatLadder& ladder, const ResourceBudget& budget,
                                    Detection detection,
                                    const numerics::Tolerance& tol = numerics::kDefaultRootTolerance);

}  // namespace bosonic
