#include "entroflow/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entroflow {

namespace {

void validate(const TorusGeometry& g, const std::vector<double>& p) {
    if (p.size() != static_cast<std::size_t>(g.num_configs()))
        throw BadValue("ExactMeasure: probability vector length mismatch");
    double sum = 0.0;
    for (double x : p) {
        if (x < 0.0) throw BadValue("ExactMeasure: negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw BadValue("ExactMeasure: probabilities sum to " + std::to_string(sum));
}

// place value of a site digit in the ConfigIndex encoding
ConfigIndex place(const TorusGeometry& g, std::int64_t site) {
    return pow_q(g.q(), static_cast<std::size_t>(site));
}

}  // namespace

ExactMeasure::ExactMeasure(TorusGeometry g, std::vector<double> p)
    : geom(std::move(g)), probs(std::move(p)) {
    validate(geom, probs);
}

ExactMeasure ExactMeasure::uniform(const TorusGeometry& g) {
    const auto n = static_cast<std::size_t>(g.num_configs());
    return ExactMeasure(g, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ExactMeasure ExactMeasure::point_mass(const SpinConfig& cfg) {
    std::vector<double> p(static_cast<std::size_t>(cfg.geom.num_configs()), 0.0);
    p[static_cast<std::size_t>(encode_config(cfg))] = 1.0;
    return ExactMeasure(cfg.geom, std::move(p));
}

ExactMeasure ExactMeasure::product(const TorusGeometry& g,
                                   const std::vector<std::vector<double>>& p) {
    if (p.size() != static_cast<std::size_t>(g.num_sites()))
        throw BadValue("product measure: need one distribution per site");
    const auto n = static_cast<std::size_t>(g.num_configs());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        ConfigIndex idx = i;
        double w = 1.0;
        for (std::int64_t s = 0; s < g.num_sites(); ++s) {
            w *= p[static_cast<std::size_t>(s)][idx % static_cast<ConfigIndex>(g.q())];
            idx /= static_cast<ConfigIndex>(g.q());
        }
        out[i] = w;
    }
    double sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& x : out) x /= sum;
    return ExactMeasure(g, std::move(out));
}

ExactMeasure ExactMeasure::from_weights(const TorusGeometry& g, std::vector<double> w) {
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (sum <= 0.0) throw BadValue("from_weights: nonpositive total weight");
    for (auto& x : w) x /= sum;
    return ExactMeasure(g, std::move(w));
}

LocalMeasure marginal(const ExactMeasure& nu, const std::vector<std::int64_t>& region) {
    const auto& g = nu.geom;
    const ConfigIndex m = pow_q(g.q(), region.size());
    if (static_cast<double>(region.size()) * std::log2(static_cast<double>(g.q())) >
        static_cast<double>(enumeration_cap_bits()))
        throw CapExceeded("marginal region exceeds enumeration cap");
    LocalMeasure out;
    out.sites = region;
    out.q = g.q();
    out.probs.assign(static_cast<std::size_t>(m), 0.0);
    const ConfigIndex n = g.num_configs();
    for (ConfigIndex i = 0; i < n; ++i) {
        ConfigIndex key = 0;
        for (auto it = region.rbegin(); it != region.rend(); ++it)
            key = key * static_cast<ConfigIndex>(g.q()) +
                  (i / place(g, *it)) % static_cast<ConfigIndex>(g.q());
        out.probs[static_cast<std::size_t>(key)] += nu.probs[static_cast<std::size_t>(i)];
    }
    return out;
}

double conditional(const ExactMeasure& nu, const std::vector<std::int64_t>& delta,
                   const std::vector<int>& xi, const std::vector<std::int64_t>& cond_sites,
                   const std::vector<int>& eta) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    double denom = 0.0, num = 0.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        const double p = nu.probs[static_cast<std::size_t>(i)];
        if (p == 0.0) continue;
        bool cond_match = true;
        for (std::size_t k = 0; k < cond_sites.size(); ++k) {
            if (static_cast<int>((i / place(g, cond_sites[k])) %
                                 static_cast<ConfigIndex>(g.q())) != eta[k]) {
                cond_match = false;
                break;
            }
        }
        if (!cond_match) continue;
        denom += p;
        bool delta_match = true;
        for (std::size_t k = 0; k < delta.size(); ++k) {
            if (static_cast<int>((i / place(g, delta[k])) %
                                 static_cast<ConfigIndex>(g.q())) != xi[k]) {
                delta_match = false;
                break;
            }
        }
        if (delta_match) num += p;
    }
    if (denom == 0.0)
        throw ZeroConditioning("conditional: conditioning event has zero probability");
    return num / denom;
}

NonNullReport nonnullness(const ExactMeasure& nu) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<ConfigIndex>(g.q());
    NonNullReport best;
    best.delta = 1.0;
    bool found = false;
    for (std::int64_t s = 0; s < g.num_sites(); ++s) {
        const ConfigIndex pl = place(g, s);
        for (ConfigIndex i = 0; i < n; ++i) {
            if ((i / pl) % q != 0) continue;  // one representative per boundary config
            double denom = 0.0;
            for (ConfigIndex a = 0; a < q; ++a)
                denom += nu.probs[static_cast<std::size_t>(i + a * pl)];
            if (denom == 0.0) continue;
            for (ConfigIndex a = 0; a < q; ++a) {
                const double cond = nu.probs[static_cast<std::size_t>(i + a * pl)] / denom;
                if (!found || cond < best.delta) {
                    found = true;
                    best.delta = cond;
                    best.witness_config = i + a * pl;
                    best.witness_site = s;
                    best.witness_state = static_cast<int>(a);
                }
            }
        }
    }
    if (!found) best.delta = 0.0;
    return best;
}

bool chain_rule_bound_check(const ExactMeasure& nu,
                            const std::vector<std::int64_t>& delta_sites) {
    const double delta = nonnullness(nu).delta;
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<ConfigIndex>(g.q());
    std::vector<ConfigIndex> places;
    for (auto s : delta_sites) places.push_back(place(g, s));
    const ConfigIndex m = pow_q(g.q(), delta_sites.size());
    double min_cond = 1.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        bool rep = true;
        for (auto pl : places)
            if ((i / pl) % q != 0) { rep = false; break; }
        if (!rep) continue;
        double denom = 0.0;
        std::vector<double> vals(static_cast<std::size_t>(m));
        for (ConfigIndex x = 0; x < m; ++x) {
            ConfigIndex j = i, xx = x;
            for (auto pl : places) {
                j += (xx % q) * pl;
                xx /= q;
            }
            vals[static_cast<std::size_t>(x)] = nu.probs[static_cast<std::size_t>(j)];
            denom += vals[static_cast<std::size_t>(x)];
        }
        if (denom == 0.0) continue;
        for (double v : vals) min_cond = std::min(min_cond, v / denom);
    }
    return min_cond + 1e-12 >= std::pow(delta, static_cast<double>(delta_sites.size()));
}

double total_variation(const ExactMeasure& a, const ExactMeasure& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i) s += std::abs(a.probs[i] - b.probs[i]);
    return 0.5 * s;
}

SampleEnsemble::SampleEnsemble(TorusGeometry g, std::vector<std::vector<int>> s,
                               std::vector<double> w)
    : geom(std::move(g)), samples(std::move(s)), weights(std::move(w)) {
    if (samples.empty()) throw EmptyEnsemble("SampleEnsemble: no samples");
    if (!weights.empty() && weights.size() != samples.size())
        throw BadValue("SampleEnsemble: weight count mismatch");
}

SampleEnsemble empirical_measure(const TorusGeometry& geom,
                                 const std::vector<std::vector<int>>& samples) {
    return SampleEnsemble(geom, samples);
}

EmpiricalMarginal estimate_marginal(const SampleEnsemble& ens,
                                    const std::vector<std::int64_t>& region) {
    const int q = ens.geom.q();
    const ConfigIndex m = pow_q(q, region.size());
    EmpiricalMarginal out;
    out.sites = region;
    out.q = q;
    out.probs.assign(static_cast<std::size_t>(m), 0.0);
    out.std_errors.assign(static_cast<std::size_t>(m), 0.0);
    out.sample_count = ens.samples.size();
    const double nw = ens.weights.empty() ? 1.0 / static_cast<double>(ens.samples.size()) : 0.0;
    for (std::size_t k = 0; k < ens.samples.size(); ++k) {
        const ConfigIndex key = local_index(q, region, ens.samples[k]);
        out.probs[static_cast<std::size_t>(key)] +=
            ens.weights.empty() ? nw : ens.weights[k];
    }
    const auto n = static_cast<double>(ens.samples.size());
    for (std::size_t i = 0; i < out.probs.size(); ++i)
        out.std_errors[i] = std::sqrt(out.probs[i] * (1.0 - out.probs[i]) / n);
    return out;
}

}  // namespace entroflow
