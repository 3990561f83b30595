#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroflow/dynamics.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/potential.hpp"

namespace entroflow {

// h_Lambda(nu|mu) = sum_omega nu(omega) log(nu(omega)/mu(omega)) over the
// cylinders of `region`, with 0 log 0 = 0. Returns +infinity when nu is not
// absolutely continuous w.r.t. mu on the region.
double local_relative_entropy(const ExactMeasure& nu, const ExactMeasure& mu,
                              const std::vector<std::int64_t>& region);

struct EntropyDensityEstimate {
    std::vector<std::int64_t> volume_sizes;
    std::vector<double> densities;  // h_Lambda / |Lambda|
    std::optional<double> extrapolated;
    std::string method;
};

// Densities over a schedule of nested regions; optional Richardson
// extrapolation in 1/|Lambda| from the last two volumes.
EntropyDensityEstimate entropy_density(const ExactMeasure& nu, const ExactMeasure& mu,
                                       const std::vector<std::vector<std::int64_t>>& schedule,
                                       bool extrapolate = false);

// g_P on the region: h(P nu | mu)/|Lambda| - h(nu | mu)/|Lambda| with the
// exact pushforward on the torus.
double discrete_loss_gP(const PcaKernel& kernel, const ExactMeasure& nu, const ExactMeasure& mu,
                        const std::vector<std::int64_t>& region);

// (1/|Lambda|) d/dt|_{t=0} h_Lambda(P_t nu | mu), evaluated exactly from the
// cylinder rates nu(L 1_omega). Throws PositivityError when a cylinder with
// nonzero rate has zero mass under nu or mu.
double continuous_loss_direct(const IpsRates& rates, const ExactMeasure& nu,
                              const ExactMeasure& mu, const std::vector<std::int64_t>& region);

// <nu, Phi>_L on the torus: expected jump-rate-weighted energy change of the
// periodic Hamiltonian, per site.
double pairing_L(const ExactMeasure& nu, const Potential& pot, const IpsRates& rates);

// Finite-volume g_L(nu): per-site expected jump-rate-weighted log-ratio of
// conditional probabilities. Throws NonNullViolation when nu has a vanishing
// single-site conditional.
double entropy_production_rep(const ExactMeasure& nu, const IpsRates& rates);

struct LossReport {
    double g_direct = 0.0;
    double g_representation = 0.0;
    double pairing = 0.0;
    double discrepancy = 0.0;  // |g_direct - (g_representation + pairing)|
};

LossReport loss_decomposition(const ExactMeasure& nu, const ExactMeasure& mu,
                              const Potential& pot, const IpsRates& rates);

// Residual of h(nu|mu)/|L| = p(Phi) + <nu,Phi> + (h(nu|u)/|L| - log q) with
// the torus conventions (periodic Hamiltonian; the energy term is
// E_nu[H_per]/|L|, which equals specific_energy for translation-invariant nu).
double pressure_decomposition_check(const ExactMeasure& nu, const ExactMeasure& mu,
                                    const Potential& pot);

}  // namespace entroflow
