#include "entroflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace entroflow {

namespace {

ConfigIndex place(const TorusGeometry& g, std::int64_t site) {
    return pow_q(g.q(), static_cast<std::size_t>(site));
}

// joint marginal over {0} u cond_sites, indexed a + q * key(cond_sites)
LocalMeasure origin_joint(const ExactMeasure& nu, const std::vector<std::int64_t>& cond_sites) {
    std::vector<std::int64_t> region;
    region.reserve(cond_sites.size() + 1);
    region.push_back(0);
    region.insert(region.end(), cond_sites.begin(), cond_sites.end());
    return marginal(nu, region);
}

// fills out with nu(a | eta_S) read off a precomputed origin_joint table
void origin_conditional(const LocalMeasure& joint, ConfigIndex skey, std::vector<double>& out) {
    const auto q = static_cast<ConfigIndex>(joint.q);
    const ConfigIndex base = skey * q;
    double denom = 0.0;
    for (ConfigIndex a = 0; a < q; ++a) denom += joint.probs[static_cast<std::size_t>(base + a)];
    for (ConfigIndex a = 0; a < q; ++a)
        out[static_cast<std::size_t>(a)] = joint.probs[static_cast<std::size_t>(base + a)] / denom;
}

ConfigIndex subset_key(const TorusGeometry& g, const std::vector<std::int64_t>& sites,
                       ConfigIndex full_cfg) {
    ConfigIndex key = 0;
    for (auto it = sites.rbegin(); it != sites.rend(); ++it)
        key = key * static_cast<ConfigIndex>(g.q()) +
              (full_cfg / place(g, *it)) % static_cast<ConfigIndex>(g.q());
    return key;
}

}  // namespace

DlrResidualReport dlr_residual(const ExactMeasure& nu, const Potential& pot) {
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<ConfigIndex>(g.q());
    DlrResidualReport rep;
    rep.per_site.assign(static_cast<std::size_t>(g.num_sites()), 0.0);
    for (std::int64_t s = 0; s < g.num_sites(); ++s) {
        const ConfigIndex pl = place(g, s);
        for (ConfigIndex i = 0; i < n; ++i) {
            if ((i / pl) % q != 0) continue;
            double denom = 0.0;
            for (ConfigIndex a = 0; a < q; ++a)
                denom += nu.probs[static_cast<std::size_t>(i + a * pl)];
            if (denom == 0.0) continue;  // null boundary, excluded
            const SpinConfig eta = decode_config(g, i);
            const auto gamma = specification(pot, {s}, eta);
            for (ConfigIndex a = 0; a < q; ++a) {
                const double cond = nu.probs[static_cast<std::size_t>(i + a * pl)] / denom;
                const double resid = std::abs(cond - gamma.probs[static_cast<std::size_t>(a)]);
                auto& site_max = rep.per_site[static_cast<std::size_t>(s)];
                site_max = std::max(site_max, resid);
                if (resid > rep.max_residual) {
                    rep.max_residual = resid;
                    rep.witness_config = i + a * pl;
                    rep.witness_site = s;
                    rep.witness_state = static_cast<int>(a);
                }
            }
        }
    }
    return rep;
}

std::vector<std::vector<std::int64_t>> annulus_schedule(const TorusGeometry& geom,
                                                        int max_radius) {
    std::vector<std::vector<std::int64_t>> schedule;
    for (int r = 1; r <= max_radius; ++r) {
        std::set<std::int64_t> sites;
        std::vector<int> offset(static_cast<std::size_t>(geom.dim()), -r);
        while (true) {
            const std::int64_t s = geom.shifted(0, offset);
            if (s != 0) sites.insert(s);
            int k = 0;
            for (; k < geom.dim(); ++k) {
                if (++offset[static_cast<std::size_t>(k)] <= r) break;
                offset[static_cast<std::size_t>(k)] = -r;
            }
            if (k == geom.dim()) break;
        }
        schedule.emplace_back(sites.begin(), sites.end());
    }
    std::vector<std::int64_t> complement;
    for (std::int64_t s = 1; s < geom.num_sites(); ++s) complement.push_back(s);
    schedule.push_back(std::move(complement));
    return schedule;
}

MartingaleDiagnostic martingale_diagnostic(
    const ExactMeasure& nu, const std::vector<std::vector<std::int64_t>>& schedule) {
    if (nonnullness(nu).delta <= 0.0)
        throw NonNullViolation("martingale_diagnostic: measure is not non-null");
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<std::size_t>(g.q());
    const auto& reference = schedule.back();
    const LocalMeasure ref_joint = origin_joint(nu, reference);
    MartingaleDiagnostic diag;
    std::vector<double> cond_k(q), cond_ref(q);
    for (const auto& cond_sites : schedule) {
        const LocalMeasure joint = origin_joint(nu, cond_sites);
        double m = 0.0;
        for (ConfigIndex i = 0; i < n; ++i) {
            const double p = nu.probs[static_cast<std::size_t>(i)];
            if (p == 0.0) continue;
            origin_conditional(joint, subset_key(g, cond_sites, i), cond_k);
            origin_conditional(ref_joint, subset_key(g, reference, i), cond_ref);
            double sum = 0.0;
            for (std::size_t a = 0; a < q; ++a) sum += std::abs(cond_k[a] - cond_ref[a]);
            m += p * sum;
        }
        diag.annulus_sizes.push_back(cond_sites.size());
        diag.rows.push_back(m);
    }
    return diag;
}

TrajectoryMartingaleTable uniform_martingale_over_trajectory(
    const std::vector<ExactMeasure>& trajectory,
    const std::vector<std::vector<std::int64_t>>& schedule, double decay_factor) {
    TrajectoryMartingaleTable table;
    for (const auto& s : schedule) table.annulus_sizes.push_back(s.size());
    table.column_sup.assign(schedule.size(), 0.0);
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        MartingaleDiagnostic diag;
        try {
            diag = martingale_diagnostic(trajectory[t], schedule);
        } catch (const NonNullViolation&) {
            throw NonNullViolation("uniform_martingale_over_trajectory: trajectory point " +
                                   std::to_string(t) + " is not non-null");
        }
        table.values.push_back(diag.rows);
        for (std::size_t k = 0; k < diag.rows.size(); ++k)
            table.column_sup[k] = std::max(table.column_sup[k], diag.rows[k]);
    }
    table.column_decay = true;
    for (std::size_t k = 0; k + 1 < table.column_sup.size(); ++k)
        if (table.column_sup[k + 1] > decay_factor * table.column_sup[k] &&
            table.column_sup[k + 1] > 1e-12)
            table.column_decay = false;
    return table;
}

double two_site_from_single(const ExactMeasure& nu, std::int64_t site1, std::int64_t site2) {
    if (nonnullness(nu).delta <= 0.0)
        throw NonNullViolation("two_site_from_single: measure is not non-null");
    const auto& g = nu.geom;
    const ConfigIndex n = g.num_configs();
    const auto q = static_cast<ConfigIndex>(g.q());
    const ConfigIndex pl1 = place(g, site1), pl2 = place(g, site2);
    double max_err = 0.0;
    for (ConfigIndex i = 0; i < n; ++i) {
        if ((i / pl1) % q != 0 || (i / pl2) % q != 0) continue;
        // joint over the two sites given the rest
        std::vector<double> joint(static_cast<std::size_t>(q * q));
        double denom = 0.0;
        for (ConfigIndex a = 0; a < q; ++a)
            for (ConfigIndex b = 0; b < q; ++b) {
                const double p = nu.probs[static_cast<std::size_t>(i + a * pl1 + b * pl2)];
                joint[static_cast<std::size_t>(a + q * b)] = p;
                denom += p;
            }
        if (denom == 0.0) continue;
        for (auto& x : joint) x /= denom;
        // single-site conditionals
        auto c1 = [&](ConfigIndex a, ConfigIndex b) {  // nu(site1=a | site2=b, rest)
            double col = 0.0;
            for (ConfigIndex aa = 0; aa < q; ++aa)
                col += joint[static_cast<std::size_t>(aa + q * b)];
            return joint[static_cast<std::size_t>(a + q * b)] / col;
        };
        auto c2 = [&](ConfigIndex b, ConfigIndex a) {  // nu(site2=b | site1=a, rest)
            double row = 0.0;
            for (ConfigIndex bb = 0; bb < q; ++bb)
                row += joint[static_cast<std::size_t>(a + q * bb)];
            return joint[static_cast<std::size_t>(a + q * b)] / row;
        };
        // chain-rule reconstruction anchored at (0, 0)
        std::vector<double> rec(static_cast<std::size_t>(q * q));
        double z = 0.0;
        for (ConfigIndex a = 0; a < q; ++a)
            for (ConfigIndex b = 0; b < q; ++b) {
                const double w = (c1(a, b) / c1(0, b)) * (c2(b, 0) / c2(0, 0));
                rec[static_cast<std::size_t>(a + q * b)] = w;
                z += w;
            }
        for (ConfigIndex a = 0; a < q; ++a)
            for (ConfigIndex b = 0; b < q; ++b) {
                const auto k = static_cast<std::size_t>(a + q * b);
                max_err = std::max(max_err, std::abs(rec[k] / z - joint[k]));
            }
    }
    return max_err;
}

double potential_distance(const ExactMeasure& nu1, const ExactMeasure& nu2,
                          const std::vector<std::int64_t>& region) {
    const auto m1 = marginal(nu1, region);
    const auto m2 = marginal(nu2, region);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m1.probs.size(); ++i) {
        if (m1.probs[i] <= 0.0 || m2.probs[i] <= 0.0)
            throw PositivityError("potential_distance: zero-mass cylinder");
        const double r = std::log(m1.probs[i] / m2.probs[i]);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return 0.5 * (hi - lo) / static_cast<double>(region.size());
}

EntropyTrace trajectory_report(const DynamicsModel& model, const ExactMeasure& nu0,
                               const ExactMeasure& mu, const Potential& pot,
                               const std::vector<double>& times,
                               const std::vector<std::vector<std::int64_t>>& volumes) {
    const auto& g = nu0.geom;
    EntropyTrace trace;
    const auto annuli = annulus_schedule(g, std::max(1, *std::max_element(g.sides().begin(),
                                                                          g.sides().end()) /
                                                            2));
    ExactMeasure current = nu0;
    ExactMeasure previous = nu0;
    double prev_t = 0.0;
    const IpsRates* rates = std::get_if<IpsRates>(&model);
    const PcaKernel* kernel = std::get_if<PcaKernel>(&model);
    GeneratorMatrix gen;
    if (rates) gen = build_generator(*rates, g);
    bool first = true;
    for (double t : times) {
        if (t < prev_t) throw BadValue("trajectory_report: time grid must be non-decreasing");
        if (rates) {
            current = semigroup_evolve(gen, current, t - prev_t);
        } else {
            const auto steps = static_cast<long>(std::llround(t - prev_t));
            for (long k = 0; k < steps; ++k) current = pca_pushforward(*kernel, current);
        }
        // time-level diagnostics, shared by all volume rows
        double delta = std::numeric_limits<double>::quiet_NaN();
        double dlr = std::numeric_limits<double>::quiet_NaN();
        double mart = std::numeric_limits<double>::quiet_NaN();
        double weak = 0.0;
        std::string err;
        try {
            delta = nonnullness(current).delta;
            dlr = dlr_residual(current, pot).max_residual;
            if (delta > 0.0) {
                // undefined (left NaN) when the measure is not non-null, e.g.
                // at a point-mass initial condition
                const auto diag = martingale_diagnostic(current, annuli);
                mart = 0.0;
                for (std::size_t k = 0; k + 1 < diag.rows.size(); ++k)
                    mart = std::max(mart, diag.rows[k]);
            }
            if (!first)
                for (std::int64_t s = 0; s < g.num_sites(); ++s) {
                    const auto a = marginal(current, {s});
                    const auto b = marginal(previous, {s});
                    double tv = 0.0;
                    for (std::size_t x = 0; x < a.probs.size(); ++x)
                        tv += std::abs(a.probs[x] - b.probs[x]);
                    weak = std::max(weak, 0.5 * tv);
                }
        } catch (const std::exception& e) {
            err = e.what();
        }
        for (const auto& region : volumes) {
            TraceRow row;
            row.t = t;
            row.volume = static_cast<std::int64_t>(region.size());
            row.delta = delta;
            row.dlr_residual = dlr;
            row.martingale_diag = mart;
            row.weak_dist = weak;
            row.error = err;
            try {
                row.h_density = local_relative_entropy(current, mu, region) /
                                static_cast<double>(region.size());
                if (rates) {
                    row.pairing = pairing_L(current, pot, *rates);
                    row.g_direct = continuous_loss_direct(*rates, current, mu, region);
                    row.g_rep = entropy_production_rep(current, *rates);
                } else {
                    row.g_direct = discrete_loss_gP(*kernel, current, mu, region);
                    row.g_rep = std::numeric_limits<double>::quiet_NaN();
                    row.pairing = std::numeric_limits<double>::quiet_NaN();
                }
            } catch (const PositivityError&) {
                // g_L is undefined where nu gives mass zero to a reachable
                // cylinder (e.g. a point-mass initial condition)
                row.g_direct = row.g_rep = std::numeric_limits<double>::quiet_NaN();
            } catch (const NonNullViolation&) {
                row.g_rep = std::numeric_limits<double>::quiet_NaN();
            } catch (const std::exception& e) {
                row.g_direct = row.g_rep = row.pairing =
                    std::numeric_limits<double>::quiet_NaN();
                if (row.error.empty()) row.error = e.what();
            }
            trace.rows.push_back(std::move(row));
        }
        previous = current;
        prev_t = t;
        first = false;
    }
    return trace;
}

}  // namespace entroflow
