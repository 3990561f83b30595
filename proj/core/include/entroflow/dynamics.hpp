#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "entroflow/lattice.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/potential.hpp"
#include "entroflow/rng.hpp"

namespace entroflow {

// Synchronous sitewise-independent update rule, identical at every site up
// to translation. The table row for a neighborhood assignment (base-q
// little-endian over the anchored offsets) is the distribution of the new
// state at the anchor site.
struct PcaKernel {
    Shape neighborhood;
    int q = 2;
    std::vector<std::vector<double>> table;  // q^{|N|} rows, each of length q

    PcaKernel(Shape n, int q_, std::vector<std::vector<double>> t);

    static PcaKernel identity(int d, int q);
    static PcaKernel uniform_resample(int d, int q);
    // noisy majority over {0, +/- e_k}, q = 2; eps = 1/2 is the uniform kernel
    static PcaKernel majority(int d, double eps);

    const std::vector<double>& row(const SpinConfig& cfg, std::int64_t site) const;
};

// One anchored family of jump rates c_Delta(eta, zeta_Delta).
struct IpsRule {
    Shape region;
    double sup_rate;  // sup_eta sum_zeta c(eta, zeta)
    // rate of rewriting `region_sites` of cfg to zeta (zeta != current
    // assignment; no-op entries are never queried)
    std::function<double(const SpinConfig& cfg, const std::vector<std::int64_t>& region_sites,
                         const std::vector<int>& zeta)>
        rate;
};

struct IpsRates {
    int q = 2;
    std::vector<IpsRule> rules;

    double sup_rate_total() const;

    static IpsRates inf_temp_flip(int d);                    // independent rate-1 spin flips
    static IpsRates glauber(const Potential& pot, int d);    // single-site heat bath for Phi
    static IpsRates site_jump(int d, const std::vector<std::vector<double>>& intensity);
};

using DynamicsModel = std::variant<PcaKernel, IpsRates>;

// Enumerate all enabled jumps out of `cfg` (ConfigIndex `idx`): calls
// fn(target_index, region_sites, zeta, rate) for every translated rule
// region and every non-trivial target assignment with positive rate.
template <typename Fn>
void for_each_jump(const IpsRates& rates, const SpinConfig& cfg, ConfigIndex idx, Fn&& fn) {
    const auto& g = cfg.geom;
    const auto q = static_cast<ConfigIndex>(g.q());
    for (const auto& rule : rates.rules) {
        for (std::int64_t base = 0; base < g.num_sites(); ++base) {
            const auto sites = rule.region.sites_at(g, base);
            const ConfigIndex m = pow_q(g.q(), sites.size());
            const ConfigIndex cur = local_index(g.q(), sites, cfg.states);
            for (ConfigIndex z = 0; z < m; ++z) {
                if (z == cur) continue;
                const auto zeta = local_assignment(g.q(), sites.size(), z);
                const double r = rule.rate(cfg, sites, zeta);
                if (r <= 0.0) continue;
                ConfigIndex target = idx;
                ConfigIndex zz = z, cc = cur;
                for (auto s : sites) {
                    const ConfigIndex pl = pow_q(g.q(), static_cast<std::size_t>(s));
                    target += (zz % q) * pl - (cc % q) * pl;
                    zz /= q;
                    cc /= q;
                }
                fn(target, sites, zeta, r);
            }
        }
    }
}

// Builtin models: "inf-temp-flip", "glauber" (needs potential), "pca-majority-eps"
// (needs eps), "site-jump-M" (needs intensity matrix). Throws UnknownModel.
struct BuiltinParams {
    int d = 1;
    double eps = 0.0;
    const Potential* potential = nullptr;
    std::vector<std::vector<double>> intensity;
};
DynamicsModel builtin_model(const std::string& name, const BuiltinParams& params);

ExactMeasure pca_pushforward(const PcaKernel& kernel, const ExactMeasure& nu);

SpinConfig pca_step_sample(const PcaKernel& kernel, const SpinConfig& sigma, CounterRng& rng);

struct GeneratorMatrix {
    ConfigIndex dim = 0;
    // per source state, (target, rate) with target != source, sorted by target
    std::vector<std::vector<std::pair<ConfigIndex, double>>> jumps;
    std::vector<double> exit_rate;

    std::vector<std::vector<double>> to_dense() const;
};

GeneratorMatrix build_generator(const IpsRates& rates, const TorusGeometry& geom);

// nu(L 1_omega) for every cylinder omega over `region` at once (base-q
// little-endian indexing over region)
std::vector<double> generator_cylinder_rates(const IpsRates& rates, const ExactMeasure& nu,
                                             const std::vector<std::int64_t>& region);

double generator_apply(const IpsRates& rates, const ExactMeasure& nu,
                       const std::vector<std::int64_t>& region, const std::vector<int>& omega);

// exp(tQ^T) nu via uniformization; Poisson tail truncated below 1e-12
ExactMeasure semigroup_evolve(const IpsRates& rates, const ExactMeasure& nu, double t);
ExactMeasure semigroup_evolve(const GeneratorMatrix& gen, const ExactMeasure& nu, double t);

struct JumpEvent {
    double time;
    std::vector<std::int64_t> sites;
    std::vector<int> new_values;
};

struct Trajectory {
    SpinConfig initial;
    double horizon = 0.0;
    std::vector<JumpEvent> events;

    SpinConfig state_at(double t) const;
};

Trajectory gillespie_run(const IpsRates& rates, const SpinConfig& sigma0, double horizon,
                         CounterRng& rng);

}  // namespace entroflow
