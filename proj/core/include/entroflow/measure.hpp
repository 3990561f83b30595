#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entroflow/lattice.hpp"

namespace entroflow {

// Full probability vector over all q^{|Lambda|} configurations, indexed by
// ConfigIndex. The oracle representation of a measure on the torus.
struct ExactMeasure {
    TorusGeometry geom;
    std::vector<double> probs;

    ExactMeasure(TorusGeometry g, std::vector<double> p);

    static ExactMeasure uniform(const TorusGeometry& g);
    static ExactMeasure point_mass(const SpinConfig& cfg);
    // independent sites, site i takes value a with probability p[i][a]
    static ExactMeasure product(const TorusGeometry& g,
                                const std::vector<std::vector<double>>& p);
    // unnormalized weights -> normalized measure
    static ExactMeasure from_weights(const TorusGeometry& g, std::vector<double> w);

    double operator()(ConfigIndex i) const { return probs[static_cast<std::size_t>(i)]; }
};

// Measure on a sub-region of the torus, indexed base-q little-endian over
// `sites` in their stored order.
struct LocalMeasure {
    std::vector<std::int64_t> sites;
    int q = 2;
    std::vector<double> probs;
};

LocalMeasure marginal(const ExactMeasure& nu, const std::vector<std::int64_t>& region);

// nu(xi_Delta | eta_S); Delta and S disjoint. Throws ZeroConditioning when
// nu(eta_S) = 0.
double conditional(const ExactMeasure& nu, const std::vector<std::int64_t>& delta,
                   const std::vector<int>& xi, const std::vector<std::int64_t>& cond_sites,
                   const std::vector<int>& eta);

struct NonNullReport {
    double delta = 0.0;
    ConfigIndex witness_config = 0;
    std::int64_t witness_site = 0;
    int witness_state = 0;
};

// delta = min over sites s, boundary configs with positive probability, and
// states a of nu(a | eta_{Lambda \ s}). Returns delta = 0 with a witness if
// some conditional vanishes.
NonNullReport nonnullness(const ExactMeasure& nu);

// Verifies min multi-site conditional nu(xi_Delta | eta_{Lambda \ Delta})
// >= delta^{|Delta|} over positive-probability conditionings.
bool chain_rule_bound_check(const ExactMeasure& nu, const std::vector<std::int64_t>& delta_sites);

double total_variation(const ExactMeasure& a, const ExactMeasure& b);

struct SampleEnsemble {
    TorusGeometry geom;
    std::vector<std::vector<int>> samples;
    std::vector<double> weights;  // empty = equal weights

    SampleEnsemble(TorusGeometry g, std::vector<std::vector<int>> s,
                   std::vector<double> w = {});
};

SampleEnsemble empirical_measure(const TorusGeometry& geom,
                                 const std::vector<std::vector<int>>& samples);

struct EmpiricalMarginal {
    std::vector<std::int64_t> sites;
    int q = 2;
    std::vector<double> probs;
    std::vector<double> std_errors;
    std::size_t sample_count = 0;
};

EmpiricalMarginal estimate_marginal(const SampleEnsemble& ens,
                                    const std::vector<std::int64_t>& region);

}  // namespace entroflow
