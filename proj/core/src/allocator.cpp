#include "bosonic/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "bosonic/error.hpp"

namespace bosonic {

namespace {

constexpr double kExponentCutoff = 700.0;
constexpr double kLadderTailRatio = 1e-15;
constexpr std::size_t kMaxLadderModes = 100'000'000;

void require_beta(double beta) {
  if (!(beta > 0.0) || std::isnan(beta)) {
    std::ostringstream msg;
    msg << "beta must be positive (got " << beta << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

double thermal_occupation(const ModeSpec& m, double beta) {
  if (m.eta == 0.0) return 0.0;
  const double exponent = beta * m.omega / m.eta;
  if (exponent > kExponentCutoff) return 0.0;
  return (1.0 / m.eta) / std::expm1(exponent);
}

double waterfill_occupation(const ModeSpec& m, double beta, double xi) {
  if (m.eta == 0.0) return 0.0;
  return std::max(1.0 / (beta * m.omega) - xi * xi / m.eta, 0.0);
}

double occupation(const ModeSpec& m, double beta, Detection detection) {
  if (detection == Detection::Holevo) return thermal_occupation(m, beta);
  return waterfill_occupation(m, beta, noise_factor(detection));
}

std::size_t count_active(std::span<const double> photons) {
  return static_cast<std::size_t>(
      std::count_if(photons.begin(), photons.end(), [](double n) { return n > 0.0; }));
}

Allocation zero_allocation(std::size_t n, Detection detection) {
  Allocation a;
  a.photon_numbers.assign(n, 0.0);
  a.beta = std::numeric_limits<double>::infinity();
  a.detection = detection;
  return a;
}

Allocation make_allocation(std::span<const ModeSpec> modes, double beta, Detection detection) {
  Allocation a;
  a.photon_numbers = photon_numbers(modes, beta, detection);
  a.beta = beta;
  a.achieved_energy = allocated_energy(modes, a.photon_numbers);
  a.detection = detection;
  a.active_modes = count_active(a.photon_numbers);
  return a;
}

// Root of energy(beta) = target, given a strictly decreasing energy curve.
double solve_multiplier(const std::function<double(double)>& energy, double seed, double target,
                        const numerics::Tolerance& tol) {
  const numerics::Bracket bracket = numerics::expand_bracket(energy, seed, target);
  return numerics::find_root([&](double beta) { return energy(beta) - target; }, bracket, tol);
}

}  // namespace

std::vector<double> holevo_photon_numbers(std::span<const ModeSpec> modes, double beta) {
  require_beta(beta);
  std::vector<double> n;
  n.reserve(modes.size());
  for (const auto& m : modes) n.push_back(thermal_occupation(m, beta));
  return n;
}

std::vector<double> waterfill_photon_numbers(std::span<const ModeSpec> modes, double beta,
                                             double xi) {
  require_beta(beta);
  if (!(xi > 0.0)) throw Error(Errc::DomainError, "xi must be positive");
  std::vector<double> n;
  n.reserve(modes.size());
  for (const auto& m : modes) n.push_back(waterfill_occupation(m, beta, xi));
  return n;
}

std::vector<double> photon_numbers(std::span<const ModeSpec> modes, double beta,
                                   Detection detection) {
  if (detection == Detection::Holevo) return holevo_photon_numbers(modes, beta);
  return waterfill_photon_numbers(modes, beta, noise_factor(detection));
}

double allocated_energy(std::span<const ModeSpec> modes, std::span<const double> photons) {
  if (modes.size() != photons.size()) {
    throw Error(Errc::DimensionMismatch, "mode and photon-number lists differ in length");
  }
  double e = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) e += modes[k].omega * photons[k];
  return e;
}

Allocation solve_beta(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                      Detection detection, const numerics::Tolerance& tol) {
  if (modes.empty()) throw Error(Errc::DomainError, "channel has no modes");
  for (const auto& m : modes) validate(m);

  const double target = budget.energy();
  if (!(target >= 0.0)) throw Error(Errc::Infeasible, "energy budget must be non-negative");
  if (target == 0.0) return zero_allocation(modes.size(), detection);
  if (std::none_of(modes.begin(), modes.end(), [](const ModeSpec& m) { return m.eta > 0.0; })) {
    throw Error(Errc::Infeasible, "no mode has positive transmissivity");
  }

  const auto energy = [&](double beta) {
    double e = 0.0;
    for (const auto& m : modes) e += m.omega * occupation(m, beta, detection);
    return e;
  };
  const double beta = solve_multiplier(energy, 1.0 / target, target, tol);
  return make_allocation(modes, beta, detection);
}

RateResult rate(std::span<const ModeSpec> modes, const Allocation& allocation) {
  if (modes.size() != allocation.photon_numbers.size()) {
    std::ostringstream msg;
    msg << "allocation has " << allocation.photon_numbers.size() << " entries for "
        << modes.size() << " modes";
    throw Error(Errc::DimensionMismatch, msg.str());
  }
  double total = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    total += mode_rate(modes[k].eta * allocation.photon_numbers[k], allocation.detection);
  }
  return {total, RateUnit::BitsPerUse, allocation.detection, allocation};
}

RateResult capacity(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                    Detection detection, const numerics::Tolerance& tol) {
  return rate(modes, solve_beta(modes, budget, detection, tol));
}

RateResult oracle_grid_search(std::span<const ModeSpec> modes, const ResourceBudget& budget,
                              Detection detection, std::size_t grid_steps) {
  if (modes.empty()) throw Error(Errc::DomainError, "channel has no modes");
  if (modes.size() > 4) {
    throw Error(Errc::TooManyModes, "grid-search oracle supports at most 4 modes");
  }
  if (grid_steps < 1) throw Error(Errc::DomainError, "grid_steps must be at least 1");
  for (const auto& m : modes) validate(m);

  const double energy = budget.energy();
  const std::size_t n = modes.size();

  const auto objective = [&](std::span<const double> fractions) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double photons = fractions[k] * energy / modes[k].omega;
      total += mode_rate(modes[k].eta * photons, detection);
    }
    return total;
  };

  std::vector<double> best(n, 0.0);
  best[0] = 1.0;
  double best_value = objective(best);

  // Enumerate integer compositions of grid_steps into n parts.
  std::vector<std::size_t> parts(n, 0);
  std::vector<double> fractions(n, 0.0);
  const double inv_steps = 1.0 / static_cast<double>(grid_steps);
  std::function<void(std::size_t, std::size_t)> enumerate = [&](std::size_t index,
                                                                std::size_t remaining) {
    if (index + 1 == n) {
      parts[index] = remaining;
      for (std::size_t k = 0; k < n; ++k) fractions[k] = static_cast<double>(parts[k]) * inv_steps;
      const double value = objective(fractions);
      if (value > best_value) {
        best_value = value;
        best = fractions;
      }
      return;
    }
    for (std::size_t i = 0; i <= remaining; ++i) {
      parts[index] = i;
      enumerate(index + 1, remaining - i);
    }
  };
  enumerate(0, grid_steps);

  // Pairwise pattern search: move `step` of the budget from mode j to mode i.
  for (double step = inv_steps; step > 1e-13; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || best[j] < step) continue;
          std::vector<double> trial = best;
          trial[i] += step;
          trial[j] -= step;
          const double value = objective(trial);
          if (value > best_value) {
            best_value = value;
            best = std::move(trial);
            improved = true;
          }
        }
      }
    }
  }

  Allocation a;
  a.detection = detection;
  a.beta = std::numeric_limits<double>::quiet_NaN();
  a.photon_numbers.resize(n);
  for (std::size_t k = 0; k < n; ++k) a.photon_numbers[k] = best[k] * energy / modes[k].omega;
  a.achieved_energy = allocated_energy(modes, a.photon_numbers);
  a.active_modes = count_active(a.photon_numbers);
  return {best_value, RateUnit::BitsPerUse, detection, std::move(a)};
}

namespace {

// Number of ladder modes worth keeping at this beta.
std::size_t ladder_extent(const FlatLadder& ladder, double beta, Detection detection) {
  if (detection == Detection::Holevo) {
    const ModeSpec first{ladder.delta_omega, ladder.eta};
    const double n1 = thermal_occupation(first, beta);
    if (n1 == 0.0) return 0;
    // N_k is decreasing in k; first k with N_k < ratio * N_1.
    std::size_t k = 1;
    while (thermal_occupation({static_cast<double>(k + 1) * ladder.delta_omega, ladder.eta},
                              beta) >= kLadderTailRatio * n1) {
      if (++k > kMaxLadderModes) {
        throw Error(Errc::NoConvergence, "flat ladder truncation exceeds mode budget");
      }
    }
    return k;
  }
  const double xi = noise_factor(detection);
  // Mode k is active while k * delta_omega < eta / (xi^2 beta).
  const double limit = ladder.eta / (xi * xi * beta * ladder.delta_omega);
  if (limit > static_cast<double>(kMaxLadderModes)) {
    throw Error(Errc::NoConvergence, "flat ladder water-filling exceeds mode budget");
  }
  auto k = static_cast<std::size_t>(std::ceil(limit));
  while (k > 0 &&
         waterfill_occupation({static_cast<double>(k) * ladder.delta_omega, ladder.eta}, beta,
                              xi) == 0.0) {
    --k;
  }
  return k;
}

std::vector<ModeSpec> ladder_modes(const FlatLadder& ladder, std::size_t count) {
  std::vector<ModeSpec> modes;
  modes.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    modes.push_back({static_cast<double>(k) * ladder.delta_omega, ladder.eta});
  }
  return modes;
}

}  // namespace

LadderCapacity flat_ladder_capacity(const FlatLadder& ladder, const ResourceBudget& budget,
                                    Detection detection, const numerics::Tolerance& tol) {
  if (!(ladder.eta >= 0.0 && ladder.eta <= 1.0)) {
    throw Error(Errc::DomainError, "transmissivity must lie in [0, 1]");
  }
  if (!(ladder.delta_omega > 0.0)) throw Error(Errc::DomainError, "delta_omega must be positive");

  const double target = budget.energy();
  if (target == 0.0) {
    LadderCapacity out;
    out.result.detection = detection;
    out.result.allocation = zero_allocation(0, detection);
    return out;
  }
  if (ladder.eta == 0.0) throw Error(Errc::Infeasible, "flat channel has zero transmissivity");

  const auto energy = [&](double beta) {
    const std::size_t count = ladder_extent(ladder, beta, detection);
    double e = 0.0;
    for (std::size_t k = 1; k <= count; ++k) {
      const ModeSpec m{static_cast<double>(k) * ladder.delta_omega, ladder.eta};
      e += m.omega * occupation(m, beta, detection);
    }
    return e;
  };

  // Continuum estimates of beta keep the first trial ladders short.
  double seed = 0.0;
  if (detection == Detection::Holevo) {
    seed = std::numbers::pi * std::sqrt(ladder.eta / (6.0 * target * ladder.delta_omega));
  } else {
    const double xi = noise_factor(detection);
    seed = std::sqrt(ladder.eta / (2.0 * xi * xi * target * ladder.delta_omega));
  }

  const double beta = solve_multiplier(energy, seed, target, tol);
  LadderCapacity out;
  out.modes = ladder_modes(ladder, ladder_extent(ladder, beta, detection));
  out.result = rate(out.modes, make_allocation(out.modes, beta, detection));
  return out;
}

}  // namespace bosonic
