#ifndef SFTID_EXPERIMENTS_HPP
#define SFTID_EXPERIMENTS_HPP

// Seeded Monte Carlo reproductions of the identification results: ML and
// minimum-entropy convergence, language change under an orbit-rewarding
// potential, finite-n misidentification, pressure/entropy monotonicity and
// the Shannon-McMillan-Breiman rate.

#include "sftid/gibbs.hpp"
#include "sftid/identification.hpp"
#include "sftid/symbolic.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sftid {

enum class ExperimentId { TheoremA, TheoremC, TheoremD, PropB, Monotonicity, Smb };

std::string_view to_string(ExperimentId id) noexcept;
/// Accepts "theorem-a", "theorem-c", "theorem-d", "prop-b", "monotonicity",
/// "smb". Throws InvalidArgument otherwise.
ExperimentId parse_experiment_id(std::string_view name);

/// Inputs of one experiment. Fields an experiment does not use are ignored;
/// default_config() fills in the harness defaults for each experiment.
struct ExperimentConfig {
    ExperimentId id = ExperimentId::TheoremA;

    /// Grammar the samples come from (theorem-a, theorem-c, smb, prop-b), or
    /// the smaller grammar g of the pair g < g' (theorem-d).
    std::optional<Grammar> grammar;
    /// theorem-d: the larger grammar g'. prop-b: the smaller grammar g'.
    std::optional<Grammar> comparison;
    /// Defaults to the zero potential of range 2.
    std::optional<Potential> potential;
    /// Defaults to every primitive grammar on the lexicon.
    std::optional<std::vector<Grammar>> candidates;

    /// theorem-d orbit reward / prop-b penalty. Unset with energy_auto on
    /// theorem-d means: bisect for the threshold E* and use E* + energy_margin.
    std::optional<double> energy;
    bool energy_auto = false;
    double energy_margin = 2.0;
    std::vector<double> energy_sweep; // prop-b

    std::vector<std::size_t> checkpoints;
    int seeds = 1;
    std::uint64_t base_seed = 1;
    double tie_tolerance = kDefaultTieTolerance;

    // monotonicity sweeps (monotonicity, theorem-c)
    int theta = 2;
    int random_potentials = 20;
    std::vector<int> potential_ranges;
    double potential_bound = 2.0;
    std::vector<double> scales;
    std::uint64_t potential_seed = 7;

    double smb_tolerance = 0.05;

    /// Worker threads; 0 picks the hardware concurrency. Never changes output.
    int threads = 0;
};

/// Harness defaults: theta = 2, golden-mean truth [[1,1],[1,0]], zero
/// potential, and the seed counts and checkpoints of each experiment.
ExperimentConfig default_config(ExperimentId id);

/// Throws InvalidArgument when the config cannot drive the experiment.
void validate(const ExperimentConfig& cfg);

struct CurvePoint {
    std::size_t n = 0;
    double frequency = 0.0;
    std::optional<double> mean_score_gap;
    std::optional<double> secondary_frequency;
};

struct CandidateSummary {
    Grammar grammar;
    double pressure = 0.0;
    double entropy = 0.0;
    double selected_frequency = 0.0;   // in the experiment's chosen set at the final checkpoint
    double admissible_frequency = 0.0; // admits the sample at the final checkpoint
};

struct SweepPoint {
    double parameter = 0.0; // energy (prop-b) or sup-norm scale (theorem-c)
    double frequency = 0.0;
    std::size_t violations = 0;
    std::size_t pairs = 0;
    std::optional<double> min_gap;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CurvePoint> curve;
    std::vector<CandidateSummary> candidates;
    std::vector<SweepPoint> sweep;
    /// Named thresholds found by the run (e.g. "energy_star").
    std::map<std::string, double> thresholds;
    /// Named scalar results (final frequency, violation counts, gaps).
    std::map<std::string, double> metrics;
    /// Outcome of the base seed at the largest checkpoint.
    std::optional<IdentificationOutcome> example;
    /// smb: per-seed entropy estimates at each checkpoint.
    std::vector<std::vector<double>> trajectories;
    /// Not part of the serialized report, which must be reproducible.
    double wall_seconds = 0.0;
};

ExperimentReport run_theorem_a(const ExperimentConfig& cfg);
ExperimentReport run_theorem_c(const ExperimentConfig& cfg);
ExperimentReport run_theorem_d(const ExperimentConfig& cfg);
ExperimentReport run_prop_b(const ExperimentConfig& cfg);
ExperimentReport run_monotonicity_scan(const ExperimentConfig& cfg);
ExperimentReport run_smb(const ExperimentConfig& cfg);

/// Dispatch on cfg.id.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Building blocks, exposed for tests and the acceptance suite.

struct MonotonicityResult {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    /// Least value(g') - value(g) over comparable pairs g < g'; unset when
    /// there are none.
    std::optional<double> min_gap;
};

/// Strict increase of P(phi, .) along the partial order.
MonotonicityResult pressure_monotonicity(const std::vector<Grammar>& grammars, const Potential& phi);
/// Strict increase of the Gibbs entropy h(mu_phi^G) along the partial order.
MonotonicityResult entropy_monotonicity(const std::vector<Grammar>& grammars, const Potential& phi);
/// Strict increase of the Perron eigenvalue of the 0/1 matrix.
MonotonicityResult eigenvalue_monotonicity(const std::vector<Grammar>& grammars);

/// Least E (to about 1e-10) at which the entropy of the orbit-potential Gibbs
/// state on g_prime drops below h_top(g). Scans E upward in steps of 0.25 to
/// bracket the first crossing, then bisects. Throws NumericalError if no
/// crossing is found below E = 200.
double threshold_energy(const Grammar& g, const Grammar& g_prime);

/// Range-2 potential equal to -energy on every transition allowed by
/// `larger` but not by `smaller`, and 0 elsewhere.
Potential penalty_potential(const Grammar& larger, const Grammar& smaller, double energy);

/// Random range-r potential rescaled to the given sup-norm.
Potential random_potential_with_norm(const Lexicon& lex, int range, double sup_norm, Rng& rng);

} // namespace sftid

#endif
