#include "bosonic/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bosonic/error.hpp"
#include "bosonic/numerics.hpp"

namespace bosonic {

std::string_view to_string(Detection detection) noexcept {
  switch (detection) {
    case Detection::Holevo: return "holevo";
    case Detection::Heterodyne: return "heterodyne";
    case Detection::Homodyne: return "homodyne";
  }
  return "unknown";
}

std::optional<Detection> parse_detection(std::string_view name) noexcept {
  if (name == "holevo") return Detection::Holevo;
  if (name == "het" || name == "heterodyne") return Detection::Heterodyne;
  if (name == "hom" || name == "homodyne") return Detection::Homodyne;
  return std::nullopt;
}

double noise_factor(Detection detection) {
  switch (detection) {
    case Detection::Heterodyne: return 1.0;
    case Detection::Homodyne: return 0.5;
    case Detection::Holevo: break;
  }
  throw Error(Errc::DomainError, "Holevo detection has no quadrature noise factor");
}

namespace {

constexpr double kSmallPhotonBranch = 1e-8;

void require_photons(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << what << " must be finite and >= 0 (got " << x << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

}  // namespace

double thermal_entropy(double x) {
  require_photons(x, "mean photon number");
  if (x == 0.0) return 0.0;
  if (x < kSmallPhotonBranch) {
    // (1+x)ln(1+x) - x ln x = x(1 - ln x) + x^2/2 - x^3/6 + ...
    return (x * (1.0 - std::log(x)) + 0.5 * x * x) / std::numbers::ln2;
  }
  // Rearranged as ln(1+x) + x ln(1 + 1/x) to avoid cancellation at large x.
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / std::numbers::ln2;
}

double shannon_term(double received_photons, double xi) {
  require_photons(received_photons, "received photon number");
  if (!(xi > 0.0)) throw Error(Errc::DomainError, "xi must be positive");
  return xi * std::log1p(received_photons / (xi * xi)) / std::numbers::ln2;
}

double thermal_entropy_inverse(double bits) {
  if (!(bits >= 0.0) || !std::isfinite(bits)) {
    throw Error(Errc::DomainError, "entropy must be finite and >= 0");
  }
  if (bits == 0.0) return 0.0;
  // g is strictly increasing, so -g is a decreasing target for expand_bracket.
  const auto negated = [](double x) { return -thermal_entropy(x); };
  const numerics::Bracket bracket = numerics::expand_bracket(negated, 1.0, -bits);
  return numerics::find_root([bits](double x) { return thermal_entropy(x) - bits; },
                             bracket, {1e-15, 0.0, 400});
}

double mode_rate(double received_photons, Detection detection) {
  if (detection == Detection::Holevo) return thermal_entropy(received_photons);
  return shannon_term(received_photons, noise_factor(detection));
}

}  // namespace bosonic
