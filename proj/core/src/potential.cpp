#include "entroflow/potential.hpp"

#include <algorithm>
#include <cmath>

namespace entroflow {

Potential::Potential(int q_, std::vector<PotentialTerm> t) : q(q_), terms(std::move(t)) {
    for (const auto& term : terms)
        if (term.table.size() != static_cast<std::size_t>(pow_q(q, term.shape.size())))
            throw BadValue("Potential: table size must be q^|shape|");
}

Potential Potential::ising(int d, double beta, double h) {
    std::vector<PotentialTerm> terms;
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    for (int k = 0; k < d; ++k) {
        std::vector<int> ek = zero;
        ek[static_cast<std::size_t>(k)] = 1;
        // table over (s0, s1), little-endian, spins mapped to +/-1
        std::vector<double> table(4);
        for (int s0 = 0; s0 < 2; ++s0)
            for (int s1 = 0; s1 < 2; ++s1)
                table[static_cast<std::size_t>(s0 + 2 * s1)] =
                    -beta * (2 * s0 - 1) * (2 * s1 - 1);
        terms.push_back({Shape({zero, ek}), std::move(table)});
    }
    if (h != 0.0) terms.push_back({Shape({zero}), {h, -h}});
    return Potential(2, std::move(terms));
}

int Potential::range() const {
    int r = 0;
    for (const auto& t : terms) r = std::max(r, t.shape.radius());
    return r;
}

double Potential::term_value(std::size_t term_idx, const SpinConfig& cfg,
                             std::int64_t base) const {
    const auto& t = terms[term_idx];
    const auto sites = t.shape.sites_at(cfg.geom, base);
    ConfigIndex idx = 0;
    for (auto it = sites.rbegin(); it != sites.rend(); ++it)
        idx = idx * static_cast<ConfigIndex>(q) +
              static_cast<ConfigIndex>(cfg.states[static_cast<std::size_t>(*it)]);
    return t.table[static_cast<std::size_t>(idx)];
}

double norm_phi(const Potential& pot) {
    double sum = 0.0;
    for (const auto& t : pot.terms) {
        double sup = 0.0;
        for (double v : t.table) sup = std::max(sup, std::abs(v));
        sum += static_cast<double>(t.shape.size()) * sup;  // |A| anchored translates
    }
    return sum;
}

double norm_phi_zero(const Potential& pot) {
    double sum = 0.0;
    for (const auto& t : pot.terms) {
        double sup = 0.0;
        for (double v : t.table) sup = std::max(sup, std::abs(v));
        sum += sup;  // |A| translates, each weighted 1/|A|
    }
    return sum;
}

double hamiltonian(const Potential& pot, const std::vector<std::int64_t>& volume,
                   const SpinConfig& interior, const std::optional<SpinConfig>& boundary) {
    const auto& g = interior.geom;
    SpinConfig omega = interior;
    if (boundary) {
        omega = *boundary;
        for (auto s : volume)
            omega.states[static_cast<std::size_t>(s)] =
                interior.states[static_cast<std::size_t>(s)];
    }
    std::vector<char> in_vol(static_cast<std::size_t>(g.num_sites()), 0);
    for (auto s : volume) in_vol[static_cast<std::size_t>(s)] = 1;
    double energy = 0.0;
    for (std::size_t ti = 0; ti < pot.terms.size(); ++ti) {
        for (std::int64_t base = 0; base < g.num_sites(); ++base) {
            const auto sites = pot.terms[ti].shape.sites_at(g, base);
            const bool meets = std::any_of(sites.begin(), sites.end(), [&](std::int64_t s) {
                return in_vol[static_cast<std::size_t>(s)] != 0;
            });
            if (meets) energy += pot.term_value(ti, omega, base);
        }
    }
    return energy;
}

double hamiltonian_periodic(const Potential& pot, const SpinConfig& cfg) {
    double energy = 0.0;
    for (std::size_t ti = 0; ti < pot.terms.size(); ++ti)
        for (std::int64_t base = 0; base < cfg.geom.num_sites(); ++base)
            energy += pot.term_value(ti, cfg, base);
    return energy;
}

double local_energy_delta(const Potential& pot, const SpinConfig& cfg,
                          const std::vector<std::int64_t>& region,
                          const std::vector<int>& local) {
    const auto& g = cfg.geom;
    std::vector<char> in_region(static_cast<std::size_t>(g.num_sites()), 0);
    for (auto s : region) in_region[static_cast<std::size_t>(s)] = 1;
    SpinConfig after = patch(cfg, region, local);
    double delta = 0.0;
    for (std::size_t ti = 0; ti < pot.terms.size(); ++ti) {
        for (std::int64_t base = 0; base < g.num_sites(); ++base) {
            const auto sites = pot.terms[ti].shape.sites_at(g, base);
            const bool meets = std::any_of(sites.begin(), sites.end(), [&](std::int64_t s) {
                return in_region[static_cast<std::size_t>(s)] != 0;
            });
            if (meets)
                delta += pot.term_value(ti, after, base) - pot.term_value(ti, cfg, base);
        }
    }
    return delta;
}

LocalMeasure specification(const Potential& pot, const std::vector<std::int64_t>& delta,
                           const SpinConfig& eta) {
    const auto& g = eta.geom;
    const ConfigIndex m = pow_q(g.q(), delta.size());
    if (static_cast<double>(delta.size()) * std::log2(static_cast<double>(g.q())) >
        static_cast<double>(enumeration_cap_bits()))
        throw CapExceeded("specification region exceeds enumeration cap");
    std::vector<double> energies(static_cast<std::size_t>(m));
    for (ConfigIndex x = 0; x < m; ++x) {
        const auto local = local_assignment(g.q(), delta.size(), x);
        energies[static_cast<std::size_t>(x)] =
            hamiltonian(pot, delta, patch(eta, delta, local), std::nullopt);
    }
    const double emin = *std::min_element(energies.begin(), energies.end());
    LocalMeasure out;
    out.sites = delta;
    out.q = g.q();
    out.probs.resize(static_cast<std::size_t>(m));
    double z = 0.0;
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
        out.probs[i] = std::exp(-(energies[i] - emin));
        z += out.probs[i];
    }
    for (auto& p : out.probs) p /= z;
    return out;
}

double pressure(const Potential& pot, const TorusGeometry& geom) {
    const ConfigIndex n = geom.num_configs();
    std::vector<double> energies(static_cast<std::size_t>(n));
    for (ConfigIndex i = 0; i < n; ++i)
        energies[static_cast<std::size_t>(i)] =
            hamiltonian_periodic(pot, decode_config(geom, i));
    const double emin = *std::min_element(energies.begin(), energies.end());
    double z = 0.0;
    for (double e : energies) z += std::exp(-(e - emin));
    return (std::log(z) - emin) / static_cast<double>(geom.num_sites());
}

double specific_energy(const ExactMeasure& nu, const Potential& pot) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    double acc = 0.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        const double p = nu.probs[static_cast<std::size_t>(i)];
        if (p == 0.0) continue;
        const SpinConfig cfg = decode_config(g, i);
        double f = 0.0;
        for (std::size_t ti = 0; ti < pot.terms.size(); ++ti) {
            const auto& shape = pot.terms[ti].shape;
            const double w = 1.0 / static_cast<double>(shape.size());
            for (const auto& a : shape.offsets) {
                std::vector<int> neg(a.size());
                for (std::size_t k = 0; k < a.size(); ++k) neg[k] = -a[k];
                f += w * pot.term_value(ti, cfg, g.site(neg));
            }
        }
        acc += p * f;
    }
    return acc;
}

ExactMeasure gibbs_measure(const Potential& pot, const TorusGeometry& geom) {
    const ConfigIndex n = geom.num_configs();
    std::vector<double> energies(static_cast<std::size_t>(n));
    for (ConfigIndex i = 0; i < n; ++i)
        energies[static_cast<std::size_t>(i)] =
            hamiltonian_periodic(pot, decode_config(geom, i));
    const double emin = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-(energies[i] - emin));
    return ExactMeasure::from_weights(geom, std::move(w));
}

}  // namespace entroflow
