#include "entroflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace entroflow {

namespace {

}  // namespace

PcaKernel::PcaKernel(Shape n, int q_, std::vector<std::vector<double>> t)
    : neighborhood(std::move(n)), q(q_), table(std::move(t)) {
    if (table.size() != static_cast<std::size_t>(pow_q(q, neighborhood.size())))
        throw BadValue("PcaKernel: need q^|N| table rows");
    for (const auto& row : table) {
        if (row.size() != static_cast<std::size_t>(q))
            throw BadValue("PcaKernel: row length must be q");
        double s = 0.0;
        for (double p : row) {
            if (p < 0.0) throw BadValue("PcaKernel: negative probability");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-12) throw BadValue("PcaKernel: row does not sum to 1");
    }
}

PcaKernel PcaKernel::identity(int d, int q) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    std::vector<std::vector<double>> table;
    for (int a = 0; a < q; ++a) {
        std::vector<double> row(static_cast<std::size_t>(q), 0.0);
        row[static_cast<std::size_t>(a)] = 1.0;
        table.push_back(std::move(row));
    }
    return PcaKernel(Shape({zero}), q, std::move(table));
}

PcaKernel PcaKernel::uniform_resample(int d, int q) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    std::vector<std::vector<double>> table(
        static_cast<std::size_t>(q),
        std::vector<double>(static_cast<std::size_t>(q), 1.0 / static_cast<double>(q)));
    return PcaKernel(Shape({zero}), q, std::move(table));
}

PcaKernel PcaKernel::majority(int d, double eps) {
    std::vector<std::vector<int>> offsets;
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    offsets.push_back(zero);
    for (int k = 0; k < d; ++k) {
        auto e = zero;
        e[static_cast<std::size_t>(k)] = 1;
        offsets.push_back(e);
        e[static_cast<std::size_t>(k)] = -1;
        offsets.push_back(e);
    }
    Shape nbhd(std::move(offsets));
    const std::size_t n = nbhd.size();  // 2d+1, odd
    std::vector<std::vector<double>> table;
    for (ConfigIndex a = 0; a < pow_q(2, n); ++a) {
        const auto vals = local_assignment(2, n, a);
        const int ones = static_cast<int>(std::count(vals.begin(), vals.end(), 1));
        const int maj = 2 * ones > static_cast<int>(n) ? 1 : 0;
        std::vector<double> row(2);
        row[static_cast<std::size_t>(maj)] = 1.0 - eps;
        row[static_cast<std::size_t>(1 - maj)] = eps;
        table.push_back(std::move(row));
    }
    return PcaKernel(std::move(nbhd), 2, std::move(table));
}

const std::vector<double>& PcaKernel::row(const SpinConfig& cfg, std::int64_t site) const {
    const auto sites = neighborhood.sites_at(cfg.geom, site);
    return table[static_cast<std::size_t>(local_index(q, sites, cfg.states))];
}

double IpsRates::sup_rate_total() const {
    double s = 0.0;
    for (const auto& r : rules) s += r.sup_rate;
    return s;
}

IpsRates IpsRates::inf_temp_flip(int d) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    IpsRule rule{Shape({zero}), 1.0,
                 [](const SpinConfig& cfg, const std::vector<std::int64_t>& sites,
                    const std::vector<int>& zeta) {
                     return zeta[0] != cfg.states[static_cast<std::size_t>(sites[0])] ? 1.0
                                                                                      : 0.0;
                 }};
    return IpsRates{2, {std::move(rule)}};
}

IpsRates IpsRates::glauber(const Potential& pot, int d) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    // heat-bath rates c_i(eta, a) = gamma_i^Phi(a | eta), computed from local
    // energy differences
    IpsRule rule{Shape({zero}), 1.0,
                 [pot](const SpinConfig& cfg, const std::vector<std::int64_t>& sites,
                       const std::vector<int>& zeta) {
                     double z = 0.0, num = 0.0;
                     for (int b = 0; b < pot.q; ++b) {
                         const double w =
                             std::exp(-local_energy_delta(pot, cfg, sites, {b}));
                         z += w;
                         if (b == zeta[0]) num = w;
                     }
                     return num / z;
                 }};
    return IpsRates{pot.q, {std::move(rule)}};
}

IpsRates IpsRates::site_jump(int d, const std::vector<std::vector<double>>& intensity) {
    const int q = static_cast<int>(intensity.size());
    double sup = 0.0;
    for (int a = 0; a < q; ++a) {
        double row = 0.0;
        for (int b = 0; b < q; ++b)
            if (b != a) row += intensity[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        sup = std::max(sup, row);
    }
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    IpsRule rule{Shape({zero}), sup,
                 [intensity](const SpinConfig& cfg, const std::vector<std::int64_t>& sites,
                             const std::vector<int>& zeta) {
                     const int cur = cfg.states[static_cast<std::size_t>(sites[0])];
                     return intensity[static_cast<std::size_t>(cur)]
                                     [static_cast<std::size_t>(zeta[0])];
                 }};
    return IpsRates{q, {std::move(rule)}};
}

DynamicsModel builtin_model(const std::string& name, const BuiltinParams& params) {
    if (name == "inf-temp-flip") return IpsRates::inf_temp_flip(params.d);
    if (name == "glauber") {
        if (!params.potential) throw UnknownModel("glauber model needs a potential");
        return IpsRates::glauber(*params.potential, params.d);
    }
    if (name == "pca-majority-eps") return PcaKernel::majority(params.d, params.eps);
    if (name == "site-jump-M") {
        if (params.intensity.empty()) throw UnknownModel("site-jump-M needs an intensity matrix");
        return IpsRates::site_jump(params.d, params.intensity);
    }
    throw UnknownModel("unknown dynamics model: " + name);
}

ExactMeasure pca_pushforward(const PcaKernel& kernel, const ExactMeasure& nu) {
    const auto& g = nu.geom;
    if (kernel.q != g.q()) throw BadValue("pca_pushforward: q mismatch");
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<std::size_t>(g.q());
    const auto nsites = static_cast<std::size_t>(g.num_sites());
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<double> acc, next;
    acc.reserve(static_cast<std::size_t>(n));
    next.reserve(static_cast<std::size_t>(n));
    for (ConfigIndex i = 0; i < n; ++i) {
        const double w = nu.probs[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const SpinConfig sigma = decode_config(g, i);
        // product expansion over sites, little-endian digit order
        acc.assign(1, w);
        for (std::size_t s = 0; s < nsites; ++s) {
            const auto& row = kernel.row(sigma, static_cast<std::int64_t>(s));
            next.assign(acc.size() * q, 0.0);
            for (std::size_t a = 0; a < q; ++a) {
                const double p = row[a];
                if (p == 0.0) continue;
                const std::size_t off = a * acc.size();
                for (std::size_t x = 0; x < acc.size(); ++x) next[off + x] += acc[x] * p;
            }
            acc.swap(next);
        }
        for (std::size_t j = 0; j < acc.size(); ++j) out[j] += acc[j];
    }
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) throw BadValue("pca_pushforward: normalization drift");
    for (auto& x : out) x /= sum;
    return ExactMeasure(g, std::move(out));
}

SpinConfig pca_step_sample(const PcaKernel& kernel, const SpinConfig& sigma, CounterRng& rng) {
    std::vector<int> states(sigma.states.size());
    for (std::int64_t s = 0; s < sigma.geom.num_sites(); ++s) {
        const auto& row = kernel.row(sigma, s);
        const double u = rng.uniform01();
        double c = 0.0;
        int a = kernel.q - 1;
        for (int b = 0; b < kernel.q; ++b) {
            c += row[static_cast<std::size_t>(b)];
            if (u < c) {
                a = b;
                break;
            }
        }
        states[static_cast<std::size_t>(s)] = a;
    }
    return SpinConfig(sigma.geom, std::move(states));
}

GeneratorMatrix build_generator(const IpsRates& rates, const TorusGeometry& geom) {
    const ConfigIndex n = geom.num_configs();
    GeneratorMatrix gen;
    gen.dim = n;
    gen.jumps.resize(static_cast<std::size_t>(n));
    gen.exit_rate.assign(static_cast<std::size_t>(n), 0.0);
    for (ConfigIndex i = 0; i < n; ++i) {
        const SpinConfig cfg = decode_config(geom, i);
        std::map<ConfigIndex, double> row;
        for_each_jump(rates, cfg, i,
                      [&](ConfigIndex target, const auto&, const auto&, double r) {
                          row[target] += r;
                      });
        auto& out = gen.jumps[static_cast<std::size_t>(i)];
        for (const auto& [target, r] : row) {
            out.emplace_back(target, r);
            gen.exit_rate[static_cast<std::size_t>(i)] += r;
        }
    }
    return gen;
}

std::vector<std::vector<double>> GeneratorMatrix::to_dense() const {
    std::vector<std::vector<double>> q(static_cast<std::size_t>(dim),
                                       std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        for (const auto& [j, r] : jumps[i]) q[i][static_cast<std::size_t>(j)] += r;
        q[i][i] = -exit_rate[i];
    }
    return q;
}

std::vector<double> generator_cylinder_rates(const IpsRates& rates, const ExactMeasure& nu,
                                             const std::vector<std::int64_t>& region) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    std::vector<double> out(static_cast<std::size_t>(pow_q(g.q(), region.size())), 0.0);
    for (ConfigIndex i = 0; i < n; ++i) {
        const double p = nu.probs[static_cast<std::size_t>(i)];
        if (p == 0.0) continue;
        const SpinConfig cfg = decode_config(g, i);
        const ConfigIndex from = local_index(g.q(), region, cfg.states);
        for_each_jump(rates, cfg, i,
                      [&](ConfigIndex target, const auto&, const auto&, double r) {
                          SpinConfig tgt = decode_config(g, target);
                          const ConfigIndex to = local_index(g.q(), region, tgt.states);
                          out[static_cast<std::size_t>(to)] += p * r;
                          out[static_cast<std::size_t>(from)] -= p * r;
                      });
    }
    return out;
}

double generator_apply(const IpsRates& rates, const ExactMeasure& nu,
                       const std::vector<std::int64_t>& region, const std::vector<int>& omega) {
    const auto cyl = generator_cylinder_rates(rates, nu, region);
    ConfigIndex key = 0;
    for (auto it = omega.rbegin(); it != omega.rend(); ++it)
        key = key * static_cast<ConfigIndex>(nu.geom.q()) + static_cast<ConfigIndex>(*it);
    return cyl[static_cast<std::size_t>(key)];
}

ExactMeasure semigroup_evolve(const GeneratorMatrix& gen, const ExactMeasure& nu, double t) {
    if (t < 0.0) throw BadValue("semigroup_evolve: negative time");
    const double lambda =
        gen.exit_rate.empty() ? 0.0 : *std::max_element(gen.exit_rate.begin(), gen.exit_rate.end());
    if (t == 0.0 || lambda == 0.0) return nu;
    const double lt = lambda * t;
    // Poisson truncation: tail below 1e-12
    std::size_t kmax = static_cast<std::size_t>(lt + 12.0 * std::sqrt(lt) + 40.0);
    std::vector<double> result(nu.probs.size(), 0.0);
    std::vector<double> v = nu.probs;
    std::vector<double> next(v.size());
    double cum = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double lw = -lt + static_cast<double>(k) * std::log(lt) -
                          std::lgamma(static_cast<double>(k) + 1.0);
        const double w = std::exp(lw);
        cum += w;
        if (w > 0.0)
            for (std::size_t i = 0; i < v.size(); ++i) result[i] += w * v[i];
        if (cum >= 1.0 - 1e-13) break;
        // next = P^T v with P = I + Q/lambda
        for (std::size_t i = 0; i < v.size(); ++i)
            next[i] = v[i] * (1.0 - gen.exit_rate[i] / lambda);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0.0) continue;
            for (const auto& [j, r] : gen.jumps[i])
                next[static_cast<std::size_t>(j)] += v[i] * r / lambda;
        }
        v.swap(next);
    }
    const double sum = std::accumulate(result.begin(), result.end(), 0.0);
    for (auto& x : result) x /= sum;
    return ExactMeasure(nu.geom, std::move(result));
}

ExactMeasure semigroup_evolve(const IpsRates& rates, const ExactMeasure& nu, double t) {
    return semigroup_evolve(build_generator(rates, nu.geom), nu, t);
}

SpinConfig Trajectory::state_at(double t) const {
    SpinConfig cfg = initial;
    for (const auto& ev : events) {
        if (ev.time > t) break;
        cfg = patch(cfg, ev.sites, ev.new_values);
    }
    return cfg;
}

Trajectory gillespie_run(const IpsRates& rates, const SpinConfig& sigma0, double horizon,
                         CounterRng& rng) {
    Trajectory traj{sigma0, horizon, {}};
    SpinConfig cfg = sigma0;
    double t = 0.0;
    struct Candidate {
        std::vector<std::int64_t> sites;
        std::vector<int> zeta;
        double rate;
    };
    while (true) {
        std::vector<Candidate> cand;
        double total = 0.0;
        for_each_jump(rates, cfg, 0,
                      [&](ConfigIndex, const std::vector<std::int64_t>& sites,
                          const std::vector<int>& zeta, double r) {
                          cand.push_back({sites, zeta, r});
                          total += r;
                      });
        if (total <= 0.0) break;
        t += -std::log(1.0 - rng.uniform01()) / total;
        if (t > horizon) break;
        double u = rng.uniform01() * total;
        std::size_t pick = cand.size() - 1;
        double c = 0.0;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            c += cand[k].rate;
            if (u < c) {
                pick = k;
                break;
            }
        }
        cfg = patch(cfg, cand[pick].sites, cand[pick].zeta);
        traj.events.push_back({t, cand[pick].sites, cand[pick].zeta});
    }
    return traj;
}

}  // namespace entroflow
