#include "entroflow/entropy.hpp"

#include <cmath>
#include <limits>

namespace entroflow {

double local_relative_entropy(const ExactMeasure& nu, const ExactMeasure& mu,
                              const std::vector<std::int64_t>& region) {
    const auto mn = marginal(nu, region);
    const auto mm = marginal(mu, region);
    double h = 0.0;
    for (std::size_t i = 0; i < mn.probs.size(); ++i) {
        const double p = mn.probs[i];
        if (p == 0.0) continue;
        if (mm.probs[i] == 0.0) return std::numeric_limits<double>::infinity();
        h += p * std::log(p / mm.probs[i]);
    }
    return std::max(h, 0.0);
}

EntropyDensityEstimate entropy_density(const ExactMeasure& nu, const ExactMeasure& mu,
                                       const std::vector<std::vector<std::int64_t>>& schedule,
                                       bool extrapolate) {
    EntropyDensityEstimate out;
    for (const auto& region : schedule) {
        out.volume_sizes.push_back(static_cast<std::int64_t>(region.size()));
        out.densities.push_back(local_relative_entropy(nu, mu, region) /
                                static_cast<double>(region.size()));
    }
    if (extrapolate && out.densities.size() >= 2) {
        const std::size_t k = out.densities.size() - 1;
        const double nk = static_cast<double>(out.volume_sizes[k]);
        const double nj = static_cast<double>(out.volume_sizes[k - 1]);
        if (nk != nj && std::isfinite(out.densities[k]) && std::isfinite(out.densities[k - 1])) {
            out.extrapolated = (nk * out.densities[k] - nj * out.densities[k - 1]) / (nk - nj);
            out.method = "richardson-1/volume";
        }
    }
    return out;
}

double discrete_loss_gP(const PcaKernel& kernel, const ExactMeasure& nu, const ExactMeasure& mu,
                        const std::vector<std::int64_t>& region) {
    const ExactMeasure pushed = pca_pushforward(kernel, nu);
    const double n = static_cast<double>(region.size());
    return local_relative_entropy(pushed, mu, region) / n -
           local_relative_entropy(nu, mu, region) / n;
}

double continuous_loss_direct(const IpsRates& rates, const ExactMeasure& nu,
                              const ExactMeasure& mu, const std::vector<std::int64_t>& region) {
    const auto cyl = generator_cylinder_rates(rates, nu, region);
    const auto mn = marginal(nu, region);
    const auto mm = marginal(mu, region);
    double loss = 0.0;
    for (std::size_t i = 0; i < cyl.size(); ++i) {
        if (cyl[i] == 0.0) continue;
        if (mn.probs[i] == 0.0 || mm.probs[i] == 0.0)
            throw PositivityError("continuous_loss_direct: cylinder with zero mass has "
                                  "nonzero generator rate");
        loss += cyl[i] * (std::log(mn.probs[i]) - std::log(mm.probs[i]));
    }
    return loss / static_cast<double>(region.size());
}

double pairing_L(const ExactMeasure& nu, const Potential& pot, const IpsRates& rates) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    double acc = 0.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        const double p = nu.probs[static_cast<std::size_t>(i)];
        if (p == 0.0) continue;
        const SpinConfig cfg = decode_config(g, i);
        for_each_jump(rates, cfg, i,
                      [&](ConfigIndex, const std::vector<std::int64_t>& sites,
                          const std::vector<int>& zeta, double r) {
                          acc += p * r * local_energy_delta(pot, cfg, sites, zeta);
                      });
    }
    return acc / static_cast<double>(g.num_sites());
}

double entropy_production_rep(const ExactMeasure& nu, const IpsRates& rates) {
    const auto rep = nonnullness(nu);
    if (rep.delta <= 0.0)
        throw NonNullViolation("entropy_production_rep: measure is not non-null");
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    double acc = 0.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        const double p = nu.probs[static_cast<std::size_t>(i)];
        if (p == 0.0) continue;
        const SpinConfig cfg = decode_config(g, i);
        for_each_jump(rates, cfg, i,
                      [&](ConfigIndex target, const std::vector<std::int64_t>& sites,
                          const std::vector<int>&, double r) {
                          // conditionals given the configuration off the
                          // update region; they share the marginal denominator
                          double denom = 0.0;
                          const ConfigIndex m = pow_q(g.q(), sites.size());
                          ConfigIndex base = i;
                          for (std::size_t k = 0; k < sites.size(); ++k) {
                              const ConfigIndex pl =
                                  pow_q(g.q(), static_cast<std::size_t>(sites[k]));
                              base -= ((i / pl) % static_cast<ConfigIndex>(g.q())) * pl;
                          }
                          for (ConfigIndex x = 0; x < m; ++x) {
                              ConfigIndex j = base, xx = x;
                              for (auto s : sites) {
                                  j += (xx % static_cast<ConfigIndex>(g.q())) *
                                       pow_q(g.q(), static_cast<std::size_t>(s));
                                  xx /= static_cast<ConfigIndex>(g.q());
                              }
                              denom += nu.probs[static_cast<std::size_t>(j)];
                          }
                          const double cond_target =
                              nu.probs[static_cast<std::size_t>(target)] / denom;
                          const double cond_current = p / denom;
                          acc += p * r * std::log(cond_target / cond_current);
                      });
    }
    return acc / static_cast<double>(g.num_sites());
}

LossReport loss_decomposition(const ExactMeasure& nu, const ExactMeasure& mu,
                              const Potential& pot, const IpsRates& rates) {
    std::vector<std::int64_t> full(static_cast<std::size_t>(nu.geom.num_sites()));
    for (std::size_t k = 0; k < full.size(); ++k) full[k] = static_cast<std::int64_t>(k);
    LossReport rep;
    rep.g_direct = continuous_loss_direct(rates, nu, mu, full);
    rep.g_representation = entropy_production_rep(nu, rates);
    rep.pairing = pairing_L(nu, pot, rates);
    rep.discrepancy = std::abs(rep.g_direct - (rep.g_representation + rep.pairing));
    return rep;
}

double pressure_decomposition_check(const ExactMeasure& nu, const ExactMeasure& mu,
                                    const Potential& pot) {
    const auto& g = nu.geom;
    const double nsites = static_cast<double>(g.num_sites());
    std::vector<std::int64_t> full(static_cast<std::size_t>(g.num_sites()));
    for (std::size_t k = 0; k < full.size(); ++k) full[k] = static_cast<std::int64_t>(k);
    const double lhs = local_relative_entropy(nu, mu, full) / nsites;
    const double p = pressure(pot, g);
    double energy = 0.0;
    const ConfigIndex n = g.num_configs();
    for (ConfigIndex i = 0; i < n; ++i) {
        const double w = nu.probs[static_cast<std::size_t>(i)];
        if (w != 0.0) energy += w * hamiltonian_periodic(pot, decode_config(g, i));
    }
    energy /= nsites;
    const ExactMeasure u = ExactMeasure::uniform(g);
    const double h_u = local_relative_entropy(nu, u, full) / nsites;
    const double rhs = p + energy + (h_u - std::log(static_cast<double>(g.q())));
    return std::abs(lhs - rhs);
}

}  // namespace entroflow
