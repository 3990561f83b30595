#pragma once

#include <optional>
#include <vector>

#include "entroflow/lattice.hpp"
#include "entroflow/measure.hpp"

namespace entroflow {

// One translation class of the interaction: an anchored shape together with
// its energy table, indexed base-q little-endian over the shape offsets in
// canonical (lexicographic) order.
struct PotentialTerm {
    Shape shape;
    std::vector<double> table;
};

// Finite-range translation-invariant potential. Each term is the canonical
// anchored representative of its class; translates are generated on demand.
struct Potential {
    int q = 2;
    std::vector<PotentialTerm> terms;

    Potential(int q_, std::vector<PotentialTerm> t);
    static Potential zero(int q_) { return Potential(q_, {}); }
    // nearest-neighbor Ising on +/-1 spins mapped to {0,1}:
    //   pair term -beta*s_i*s_j per bond, field term -h*s_i per site
    static Potential ising(int d, double beta, double h);

    int range() const;
    double term_value(std::size_t term_idx, const SpinConfig& cfg, std::int64_t base) const;
};

// ||Phi|| = sum over anchored sets A containing 0 of sup |Phi_A|
double norm_phi(const Potential& pot);
// same with 1/|A| weights
double norm_phi_zero(const Potential& pot);

// Sum of Phi_A over all translated terms whose support meets `volume`,
// evaluated on `interior` patched into `boundary` (or on `interior` alone
// with periodic wrap when no boundary is given).
double hamiltonian(const Potential& pot, const std::vector<std::int64_t>& volume,
                   const SpinConfig& interior, const std::optional<SpinConfig>& boundary);

// full-torus periodic Hamiltonian
double hamiltonian_periodic(const Potential& pot, const SpinConfig& cfg);

// Energy change when `region` of cfg is rewritten to `local`; only terms
// meeting the region are evaluated.
double local_energy_delta(const Potential& pot, const SpinConfig& cfg,
                          const std::vector<std::int64_t>& region,
                          const std::vector<int>& local);

// gamma^Phi_Delta(. | eta): strictly positive, sums to 1
LocalMeasure specification(const Potential& pot, const std::vector<std::int64_t>& delta,
                           const SpinConfig& eta);

// finite-size pressure |Lambda|^-1 log Z with periodic Hamiltonian
double pressure(const Potential& pot, const TorusGeometry& geom);

// <nu, Phi> = expectation of the anchored energy density
//   f_Phi(eta) = sum_{A ni 0} |A|^-1 Phi_A(eta)
double specific_energy(const ExactMeasure& nu, const Potential& pot);

// torus Gibbs measure, proportional to exp(-H_periodic)
ExactMeasure gibbs_measure(const Potential& pot, const TorusGeometry& geom);

}  // namespace entroflow
