#pragma once

#include <optional>
#include <string_view>

namespace bosonic {

/// Receiver model. Heterodyne and homodyne carry a quadrature noise factor xi
/// (1 and 1/2 respectively); the Holevo case has none.
enum class Detection { Holevo, Heterodyne, Homodyne };

std::string_view to_string(Detection detection) noexcept;
std::optional<Detection> parse_detection(std::string_view name) noexcept;

/// xi for heterodyne (1) or homodyne (1/2). DomainError for Holevo.
double noise_factor(Detection detection);

/// Entropy in bits of a thermal mode holding `x` mean photons:
/// g(x) = (x+1) log2(x+1) - x log2 x, with g(0) = 0.
double thermal_entropy(double x);

/// Per-mode Shannon rate xi * log2(1 + etaN / xi^2) of a coherent receiver.
double shannon_term(double received_photons, double xi);

/// Smallest x >= 0 with thermal_entropy(x) == bits (relative tolerance 1e-10 or
/// better).
double thermal_entropy_inverse(double bits);

/// Per-mode kernel selected by detection: thermal_entropy for Holevo,
/// shannon_term for the coherent receivers.
double mode_rate(double received_photons, Detection detection);

}  // namespace bosonic
