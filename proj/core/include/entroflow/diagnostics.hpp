#pragma once

#include <string>
#include <vector>

#include "entroflow/dynamics.hpp"
#include "entroflow/entropy.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/potential.hpp"

namespace entroflow {

struct DlrResidualReport {
    double max_residual = 0.0;
    std::vector<double> per_site;
    ConfigIndex witness_config = 0;
    std::int64_t witness_site = 0;
    int witness_state = 0;
};

// max over sites s, positive-probability boundary configs eta and states a of
// |nu(a | eta_{Lambda\s}) - gamma_s^Phi(a | eta)|
DlrResidualReport dlr_residual(const ExactMeasure& nu, const Potential& pot);

struct MartingaleDiagnostic {
    std::vector<std::size_t> annulus_sizes;
    std::vector<double> rows;  // last row 0 by construction (full complement)
};

// Conditioning-site sets for growing boxes around the origin (radius 1..max),
// each minus the origin, followed by the full complement of the origin.
std::vector<std::vector<std::int64_t>> annulus_schedule(const TorusGeometry& geom,
                                                        int max_radius);

// m_k = sum_{xi_0} E_nu |nu(xi_0 | eta_{Lambda_k\0}) - nu(xi_0 | eta_{max\0})|
MartingaleDiagnostic martingale_diagnostic(const ExactMeasure& nu,
                                           const std::vector<std::vector<std::int64_t>>& schedule);

struct TrajectoryMartingaleTable {
    std::vector<std::size_t> annulus_sizes;
    std::vector<std::vector<double>> values;  // one row per time point
    std::vector<double> column_sup;
    bool column_decay = false;  // sup decays by `factor` per annulus step
};

TrajectoryMartingaleTable uniform_martingale_over_trajectory(
    const std::vector<ExactMeasure>& trajectory,
    const std::vector<std::vector<std::int64_t>>& schedule, double decay_factor = 0.5);

// Reconstructs two-site conditionals from single-site ones (chain-rule solve)
// and returns the max abs error against the directly computed conditional.
double two_site_from_single(const ExactMeasure& nu, std::int64_t site1, std::int64_t site2);

// (1/|Lambda|) * (max - min)/2 of log(nu1(omega)/nu2(omega)) over the region
// cylinders: the sup-seminorm distance to constants of the log density ratio.
double potential_distance(const ExactMeasure& nu1, const ExactMeasure& nu2,
                          const std::vector<std::int64_t>& region);

struct TraceRow {
    double t = 0.0;
    std::int64_t volume = 0;
    double h_density = 0.0;
    double g_direct = 0.0;
    double g_rep = 0.0;
    double pairing = 0.0;
    double delta = 0.0;
    double dlr_residual = 0.0;
    double martingale_diag = 0.0;
    double weak_dist = 0.0;
    std::string error;
};

struct EntropyTrace {
    std::vector<TraceRow> rows;
};

// Per time point: entropy density, loss columns (g_P or g_L direct +
// representation + pairing), non-nullness, DLR residual, martingale summary,
// weak distance between successive single-site marginals. Failures are
// recorded per row; the trace never aborts mid-run.
EntropyTrace trajectory_report(const DynamicsModel& model, const ExactMeasure& nu0,
                               const ExactMeasure& mu, const Potential& pot,
                               const std::vector<double>& times,
                               const std::vector<std::vector<std::int64_t>>& volumes);

}  // namespace entroflow
