// SPDX-License-Identifier: Apache-2.0
//
// holobeam: holographic beamforming models and optimizers for ISAC
// Copyright (C) 2026 The holobeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HOLOBEAM_BEAMOPT_HPP
#define HOLOBEAM_BEAMOPT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holobeam/metrics.hpp"
#include "holobeam/rhs_model.hpp"
#include "holobeam/types.hpp"

namespace holobeam {

enum class Sense { at_least, at_most };

/// psi^T form psi compared against `bound`; an infinite bound on the slack
/// side (+inf for at_most, -inf for at_least) makes the constraint vacuous.
struct QuadraticConstraint {
    CMat form;
    Sense sense = Sense::at_least;
    double bound = 0.0;
};

/// Pattern-level quadratic program
///   max psi^T Q0 psi  s.t.  quadratic constraints, lower <= psi <= upper,
///   sum_{n in row r} w_n psi_n^2 <= cap_r.
/// The digital beamformer is folded into the forms; the alternating
/// optimizers rebuild them whenever B changes.
struct QcqpSpec {
    CMat objective;
    std::vector<QuadraticConstraint> constraints;
    Vec lower;
    Vec upper;
    Vec leakage_weight;
    std::vector<std::size_t> leakage_row;
    Vec row_cap;

    /// Box [0, d_n], leakage weights eta_n d_n and unit row caps.
    static QcqpSpec for_surface(const RhsConfig& cfg, const ApertureWindow& window, CMat objective);

    std::size_t size() const { return static_cast<std::size_t>(objective.rows()); }
    void validate() const;

    double objective_value(const Vec& psi) const;
    double constraint_value(std::size_t i, const Vec& psi) const;
    /// Smallest signed constraint slack, relative to |bound| (the form norm for a zero bound).
    double min_constraint_slack(const Vec& psi) const;
    /// Smallest row slack cap_r - load_r.
    double min_leakage_slack(const Vec& psi) const;
    bool feasible(const Vec& psi, double tol = 1e-6) const;
};

/// Hermitian Q with psi^T Q psi = ||probe^T diag(psi) F B||^2.
CMat radiated_power_form(const RhsConfig& cfg, const CVec& probe, const CMat& digital);

struct SolveOptions {
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iter = 500;
    std::size_t rounds = 40;        // outer alternating rounds
    std::vector<Vec> warm_starts;   // tried before the random starts
};

struct SolveReport {
    HolographicPattern pattern;
    CMat digital;
    ApertureWindow window;
    std::vector<HolographicPattern> surfaces;  // every optimized surface, pattern first
    std::vector<HolographicPattern> alternatives;  // feasible end point of each restart (pattern QCQP only)
    CMat filters;                               // receive filters, one column per target
    std::vector<double> objective_trace;
    double objective = 0.0;
    double min_leakage_slack = inf;
    double min_constraint_slack = inf;
    std::uint64_t seed = 0;
    std::size_t restarts_used = 0;
    bool feasible = false;
    std::string status = "ok";
    std::vector<std::pair<std::string, double>> metrics;

    double metric(const std::string& name) const;
};

/// Best-of-restarts projected ascent. Returns a report with feasible = false
/// and status "infeasible" when no restart reaches the constraint set.
SolveReport solve_pattern_qcqp(const QcqpSpec& spec, const SolveOptions& options = {});

struct OracleResult {
    bool found = false;  // false: no feasible point on the grid
    HolographicPattern pattern;
    double value = -inf;
    std::size_t evaluated = 0;
};

/// Exhaustive search over {0, 1/(levels-1), ..., 1}^N.
OracleResult brute_force_oracle(const QcqpSpec& spec, std::size_t levels, std::size_t max_vars = 8);

/// Nearest-level quantization, leakage repair, then coordinate ascent over the
/// level grid.
HolographicPattern quantize_feasible(const QcqpSpec& spec, const HolographicPattern& pattern, std::size_t levels);
/// Quantizes every candidate and keeps the best feasible result.
HolographicPattern quantize_feasible(const QcqpSpec& spec, const std::vector<HolographicPattern>& candidates,
                                     std::size_t levels);

// Pareto case studies --------------------------------------------------------

struct ParetoPoint {
    double comm_level = 0.0;     // Gamma_c, linear
    double sensing_power = 0.0;  // watts
};

struct CommPath {
    double theta = 0.0;  // radians
    double gain = 1.0;   // G, linear power gain
};

struct ParetoScenario {
    RhsConfig cfg;
    double tx_power = 1.0;
    double noise_power = 0.01;
    std::vector<double> targets;       // one or two target angles (radians)
    std::vector<CommPath> comm_paths;  // LoS, optionally plus one scatter path

    void validate() const;
    /// Table-II surface: 50 elements at lambda/3, one feed, 1 W.
    static ParetoScenario table2(double wavelength = 0.01);
};

struct ParetoFront {
    std::vector<ParetoPoint> points;
    std::vector<double> infeasible;  // thresholds above the achievable SNR
    double max_comm_level = 0.0;
};

ParetoFront pareto_front(const ParetoScenario& scenario, const std::vector<double>& thresholds,
                         const SolveOptions& options = {});

/// Unit-modulus phased array at lambda/2 with the scenario's element count,
/// swept between the user and target conjugate-phase beams.
ParetoFront pa_reference_front(const ParetoScenario& scenario, const std::vector<double>& thresholds,
                               std::size_t sweep = 401);

// JCAS transmit --------------------------------------------------------------

struct CommUser {
    CVec channel;
    double sinr_floor = 0.0;  // linear
};

struct JcasProblem {
    RhsConfig cfg;
    ApertureWindow window;
    double tx_power = 1.0;
    double noise_power = 1e-3;
    std::vector<CommUser> users;
    RadarUtilityConfig radar;
};

/// Alternates psi and B = [B_c, B_s] (L x (U + L), tr(B B^H) = P_t) to
/// maximise the radar utility under user SINR floors and direction bands.
SolveReport jcas_transmit(const JcasProblem& problem, const SolveOptions& options = {});

// HDMA -----------------------------------------------------------------------

enum class HdmaObjective { sum_power, min_power, radar_utility };

struct HdmaProblem {
    RhsConfig cfg;
    std::vector<Location> directions;  // users first, then targets
    double tx_power = 1.0;
    HdmaObjective objective = HdmaObjective::sum_power;
    double alpha0 = 0.0;
};

struct HdmaResult {
    Vec weights;
    std::vector<HolographicPattern> basis;  // (U + J) x L, direction-major
    SolveReport report;
};

/// Per-(direction, feed) basis patterns, each confined to its feed's row.
std::vector<HolographicPattern> hdma_basis(const RhsConfig& cfg, const std::vector<Location>& directions);

HdmaResult hdma_weights(const HdmaProblem& problem, const SolveOptions& options = {});

/// The same objective optimized element-wise (reference for HDMA).
SolveReport hdma_elementwise(const HdmaProblem& problem, const SolveOptions& options = {});

/// Objective value of a pattern with B = sqrt(P_t / L) I.
double hdma_objective_value(const HdmaProblem& problem, const HolographicPattern& pattern);

// Quadratic transform --------------------------------------------------------

/// 2 Re(lambda^H a) - |lambda|^2 g.
double quadratic_transform(const CVec& lambda, const CVec& a, double g);
inline CVec optimal_auxiliary(const CVec& a, double g) { return a / g; }

// Transceiver co-design ------------------------------------------------------

struct SensingTarget {
    Location location;
    cd reflection{1.0, 0.0};
};

struct CodesignProblem {
    RhsConfig tx;
    RhsConfig rx;
    std::vector<SensingTarget> targets;
    std::vector<CommUser> users;
    double tx_power = 1.0;
    double comm_noise = 1e-3;
    double noise_ext = 1e-3;
    double noise_int = 1e-3;
    double efficiency_tx = 1.0;  // leakage cap of the transmit surface
    double efficiency_rx = 1.0;  // leakage cap of the receive surface

    void validate() const;
};

struct TransceiverState {
    HolographicPattern tx;
    HolographicPattern rx;
    CMat digital;  // L_t x (U + L_t)
    CMat filters;  // L_r x J
};

/// nu_j for every target.
std::vector<double> codesign_sinr(const CodesignProblem& problem, const TransceiverState& state);

/// Max-min target SINR by alternating W, psi_t, psi_r and B with quadratic
/// transform surrogates. surfaces = {psi_t, psi_r}.
SolveReport codesign_maxmin(const CodesignProblem& problem, const SolveOptions& options = {});

/// Largest single-user SNR P_t |h^T diag(psi) F|^2 / sigma^2 under a leakage
/// cap equal to `efficiency`.
double max_comm_snr(const RhsConfig& cfg, const CVec& channel, double tx_power, double noise, double efficiency,
                    const SolveOptions& options = {});

// Distributed sensing --------------------------------------------------------

struct DistTarget {
    std::vector<double> tx_angles;  // per transmit subarray, radians
    std::vector<double> rx_angles;  // per receive subarray, radians
    cd reflection{1.0, 0.0};
    std::size_t delay = 0;          // cyclic shift in samples
    bool clutter = false;           // clutter only interferes
};

struct DistsenseProblem {
    std::vector<RhsConfig> tx;
    std::vector<RhsConfig> rx;
    std::vector<DistTarget> scene;
    std::vector<CMat> waveforms;  // S_p, L_t x T each
    double noise_power = 1e-3;

    void validate() const;
};

/// Rows of the unitary T-point DFT, dealt out to P subarrays with `feeds` rows each.
std::vector<CMat> orthogonal_waveforms(std::size_t subarrays, std::size_t feeds, std::size_t length);

/// Average SINR of every target (clutter excluded) for the given patterns,
/// ordered transmit subarrays first.
std::vector<double> distsense_average_sinr(const DistsenseProblem& problem, const std::vector<HolographicPattern>& patterns);

/// Worst-case average SINR maximization. surfaces = transmit then receive.
SolveReport distsense_maxmin(const DistsenseProblem& problem, const SolveOptions& options = {});

}  // namespace holobeam

#endif
