#include "sftid/experiments.hpp"

#include "sftid/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

namespace sftid {

namespace {

Grammar golden_mean() { return Grammar::from_rows({{1, 1}, {1, 0}}); }
Grammar full_shift(int theta) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(theta),
                                       std::vector<int>(static_cast<std::size_t>(theta), 1));
    return Grammar::from_rows(rows);
}

// Results land at their seed index, so the reduction order never depends on
// scheduling.
template <class Result>
std::vector<Result> map_seeds(int count, int threads, const std::function<Result(int)>& fn) {
    std::vector<Result> out(static_cast<std::size_t>(count));
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < count && !failed; i = next++) {
                    try {
                        out[static_cast<std::size_t>(i)] = fn(i);
                    } catch (...) {
                        if (!failed.exchange(true))
                            failure = std::current_exception();
                    }
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::size_t index_of(const std::vector<Grammar>& candidates, const Grammar& g, const char* what) {
    const auto it = std::find(candidates.begin(), candidates.end(), g);
    if (it == candidates.end())
        throw InvalidArgument(std::string(what) + " grammar is not among the candidates");
    return static_cast<std::size_t>(it - candidates.begin());
}

Potential potential_or_zero(const ExperimentConfig& cfg, const Lexicon& lex) {
    return cfg.potential ? *cfg.potential : Potential::zero(lex);
}

std::vector<Grammar> candidates_or_all(const ExperimentConfig& cfg, const Lexicon& lex) {
    return cfg.candidates ? *cfg.candidates : enumerate_grammars(lex);
}

bool is_singleton(const std::vector<std::size_t>& set, std::size_t i) {
    return set.size() == 1 && set.front() == i;
}

bool contains(const std::vector<std::size_t>& set, std::size_t i) {
    return std::find(set.begin(), set.end(), i) != set.end();
}

// Log-likelihood margin of candidate i over its best finite competitor.
std::optional<double> likelihood_gap(const IdentificationOutcome& o, std::size_t i) {
    const double own = o.scores[i].log_likelihood;
    if (!std::isfinite(own))
        return std::nullopt;
    double rival = kMinusInfinity;
    for (std::size_t k = 0; k < o.scores.size(); ++k)
        if (k != i)
            rival = std::max(rival, o.scores[k].log_likelihood);
    if (!std::isfinite(rival))
        return std::nullopt;
    return own - rival;
}

// Entropy margin of candidate i below its least admissible competitor.
std::optional<double> entropy_gap(const IdentificationOutcome& o, std::size_t i) {
    if (!o.scores[i].entropy)
        return std::nullopt;
    std::optional<double> rival;
    for (std::size_t k = 0; k < o.scores.size(); ++k)
        if (k != i && o.scores[k].entropy)
            rival = rival ? std::min(*rival, *o.scores[k].entropy) : *o.scores[k].entropy;
    if (!rival)
        return std::nullopt;
    return *rival - *o.scores[i].entropy;
}

struct CurveTally {
    std::vector<std::size_t> hits, secondary_hits, gap_count;
    std::vector<double> gap_sum;

    explicit CurveTally(std::size_t points)
        : hits(points, 0), secondary_hits(points, 0), gap_count(points, 0), gap_sum(points, 0.0) {}
};

std::vector<CurvePoint> finish_curve(const CurveTally& t, std::span<const std::size_t> checkpoints, int seeds,
                                     bool with_secondary) {
    std::vector<CurvePoint> curve;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        CurvePoint p;
        p.n = checkpoints[k];
        p.frequency = static_cast<double>(t.hits[k]) / seeds;
        if (t.gap_count[k] > 0)
            p.mean_score_gap = t.gap_sum[k] / static_cast<double>(t.gap_count[k]);
        if (with_secondary)
            p.secondary_frequency = static_cast<double>(t.secondary_hits[k]) / seeds;
        curve.push_back(p);
    }
    return curve;
}

bool nondecreasing(const std::vector<CurvePoint>& curve) {
    for (std::size_t k = 1; k < curve.size(); ++k)
        if (curve[k].frequency < curve[k - 1].frequency)
            return false;
    return true;
}

std::vector<CandidateSummary> summarize_candidates(const Scorer& scorer,
                                                   const std::vector<std::vector<IdentificationOutcome>>& runs,
                                                   bool use_entropy_set) {
    std::vector<CandidateSummary> out;
    const auto seeds = static_cast<double>(runs.size());
    for (std::size_t i = 0; i < scorer.size(); ++i) {
        const auto& chain = scorer.chains()[i];
        CandidateSummary c{chain.grammar(), chain.pressure(), chain.entropy(), 0.0, 0.0};
        for (const auto& run : runs) {
            const auto& last = run.back();
            const auto& set = use_entropy_set ? last.min_entropy_set : last.ml_set;
            c.selected_frequency += contains(set, i) ? 1.0 : 0.0;
            c.admissible_frequency += last.scores[i].admissible ? 1.0 : 0.0;
        }
        c.selected_frequency /= seeds;
        c.admissible_frequency /= seeds;
        out.push_back(std::move(c));
    }
    return out;
}

// Shared Monte Carlo loop of theorem-a and theorem-c: sample from the truth,
// score every prefix checkpoint against all candidates.
ExperimentReport identification_run(const ExperimentConfig& cfg, bool entropy_procedure) {
    const Grammar& truth = *cfg.grammar;
    const Potential phi = potential_or_zero(cfg, truth.lexicon());
    const auto candidates = candidates_or_all(cfg, truth.lexicon());
    const std::size_t target = index_of(candidates, truth, "true");
    const Scorer scorer(phi, candidates);
    const GibbsChain chain = gibbs_chain(truth, phi);

    const auto runs = map_seeds<std::vector<IdentificationOutcome>>(
        cfg.seeds, cfg.threads, [&](int s) {
            return identify_curve(chain, scorer, cfg.checkpoints, cfg.base_seed + static_cast<std::uint64_t>(s),
                                  cfg.tie_tolerance);
        });

    CurveTally tally(cfg.checkpoints.size());
    for (const auto& run : runs)
        for (std::size_t k = 0; k < run.size(); ++k) {
            const auto& o = run[k];
            const bool ml_hit = is_singleton(o.ml_set, target);
            const bool me_hit = is_singleton(o.min_entropy_set, target);
            tally.hits[k] += (entropy_procedure ? me_hit : ml_hit) ? 1 : 0;
            tally.secondary_hits[k] += (entropy_procedure ? ml_hit : me_hit) ? 1 : 0;
            if (auto gap = entropy_procedure ? entropy_gap(o, target) : likelihood_gap(o, target)) {
                tally.gap_sum[k] += *gap;
                ++tally.gap_count[k];
            }
        }

    ExperimentReport report;
    report.config = cfg;
    report.curve = finish_curve(tally, cfg.checkpoints, cfg.seeds, true);
    report.candidates = summarize_candidates(scorer, runs, entropy_procedure);
    report.example = runs.front().back();
    report.metrics["final_frequency"] = report.curve.back().frequency;
    report.metrics["curve_nondecreasing"] = nondecreasing(report.curve) ? 1.0 : 0.0;
    report.metrics["true_grammar_index"] = static_cast<double>(target);
    report.metrics["true_entropy"] = chain.entropy();
    report.metrics["true_pressure"] = chain.pressure();
    return report;
}

MonotonicityResult monotonicity(const std::vector<Grammar>& grammars, const std::vector<double>& value) {
    MonotonicityResult r;
    for (std::size_t i = 0; i < grammars.size(); ++i)
        for (std::size_t j = 0; j < grammars.size(); ++j) {
            if (compare(grammars[i], grammars[j]) != OrderRelation::Less)
                continue;
            const double gap = value[j] - value[i];
            ++r.pairs;
            if (!(gap > 0.0))
                ++r.violations;
            r.min_gap = r.min_gap ? std::min(*r.min_gap, gap) : gap;
        }
    return r;
}

} // namespace

std::string_view to_string(ExperimentId id) noexcept {
    switch (id) {
    case ExperimentId::TheoremA: return "theorem-a";
    case ExperimentId::TheoremC: return "theorem-c";
    case ExperimentId::TheoremD: return "theorem-d";
    case ExperimentId::PropB: return "prop-b";
    case ExperimentId::Monotonicity: return "monotonicity";
    case ExperimentId::Smb: return "smb";
    }
    return "?";
}

ExperimentId parse_experiment_id(std::string_view name) {
    for (auto id : {ExperimentId::TheoremA, ExperimentId::TheoremC, ExperimentId::TheoremD, ExperimentId::PropB,
                    ExperimentId::Monotonicity, ExperimentId::Smb})
        if (to_string(id) == name)
            return id;
    throw InvalidArgument("unknown experiment '" + std::string(name) +
                          "' (expected theorem-a, theorem-c, theorem-d, prop-b, monotonicity or smb)");
}

ExperimentConfig default_config(ExperimentId id) {
    ExperimentConfig cfg;
    cfg.id = id;
    cfg.grammar = golden_mean();
    cfg.checkpoints = {10, 50, 200, 2000};
    cfg.seeds = 200;
    switch (id) {
    case ExperimentId::TheoremA:
        break;
    case ExperimentId::TheoremC:
        cfg.random_potentials = 20;
        cfg.potential_ranges = {2};
        cfg.scales = {0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
        break;
    case ExperimentId::TheoremD:
        cfg.comparison = full_shift(2);
        cfg.energy_auto = true;
        break;
    case ExperimentId::PropB:
        cfg.grammar = full_shift(2);
        cfg.comparison = golden_mean();
        cfg.energy = 10.0;
        cfg.energy_sweep = {0.0, 1.0, 2.0, 5.0, 10.0};
        cfg.checkpoints = {50};
        cfg.seeds = 500;
        break;
    case ExperimentId::Monotonicity:
        cfg.grammar.reset();
        cfg.checkpoints.clear();
        cfg.seeds = 1;
        cfg.potential_ranges = {2, 3};
        break;
    case ExperimentId::Smb:
        cfg.checkpoints = {100, 1000, 10000};
        cfg.seeds = 50;
        break;
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.seeds < 1)
        throw InvalidArgument("seed count must be at least 1");
    if (!(cfg.tie_tolerance >= 0.0))
        throw InvalidArgument("tie tolerance must be nonnegative");
    if (cfg.id == ExperimentId::Monotonicity) {
        if (cfg.theta != 2 && cfg.theta != 3)
            throw InvalidArgument("monotonicity scan supports theta 2 or 3, got " + std::to_string(cfg.theta));
        if (cfg.random_potentials < 0)
            throw InvalidArgument("random potential count must be nonnegative");
        for (int r : cfg.potential_ranges)
            if (r < 2)
                throw InvalidArgument("potential ranges must be at least 2");
        return;
    }
    if (cfg.checkpoints.empty())
        throw InvalidArgument("experiment needs at least one checkpoint");
    if (cfg.checkpoints.front() < 1)
        throw InvalidArgument("checkpoints must be at least 1");
    for (std::size_t i = 1; i < cfg.checkpoints.size(); ++i)
        if (cfg.checkpoints[i] <= cfg.checkpoints[i - 1])
            throw InvalidArgument("checkpoints must be strictly ascending");
    if (!cfg.grammar)
        throw InvalidArgument("experiment " + std::string(to_string(cfg.id)) + " needs a grammar");
    const Lexicon lex = cfg.grammar->lexicon();
    if (cfg.potential && cfg.potential->lexicon() != lex)
        throw InvalidArgument("potential lexicon does not match the grammar");
    if (cfg.candidates) {
        if (cfg.candidates->empty())
            throw InvalidArgument("candidate list is empty");
        for (const auto& g : *cfg.candidates)
            if (g.lexicon() != lex)
                throw InvalidArgument("candidate lexicon does not match the grammar");
    }
    if (cfg.id == ExperimentId::TheoremD) {
        if (!cfg.comparison || compare(*cfg.grammar, *cfg.comparison) != OrderRelation::Less)
            throw InvalidArgument("theorem-d needs grammar < comparison_grammar");
        if (!cfg.energy_auto && !cfg.energy)
            throw InvalidArgument("theorem-d needs an energy or \"auto\"");
    }
    if (cfg.id == ExperimentId::PropB) {
        if (!cfg.comparison || compare(*cfg.comparison, *cfg.grammar) != OrderRelation::Less)
            throw InvalidArgument("prop-b needs comparison_grammar < grammar");
        if (!cfg.energy)
            throw InvalidArgument("prop-b needs a penalty energy");
    }
    if (cfg.id == ExperimentId::TheoremC)
        for (double s : cfg.scales)
            if (!(s >= 0.0) || !std::isfinite(s))
                throw InvalidArgument("monotonicity scales must be finite and nonnegative");
}

MonotonicityResult pressure_monotonicity(const std::vector<Grammar>& grammars, const Potential& phi) {
    std::vector<double> value;
    for (const auto& g : grammars)
        value.push_back(pressure(g, phi));
    return monotonicity(grammars, value);
}

MonotonicityResult entropy_monotonicity(const std::vector<Grammar>& grammars, const Potential& phi) {
    std::vector<double> value;
    for (const auto& g : grammars)
        value.push_back(ks_entropy(gibbs_chain(g, phi)));
    return monotonicity(grammars, value);
}

MonotonicityResult eigenvalue_monotonicity(const std::vector<Grammar>& grammars) {
    std::vector<double> value;
    for (const auto& g : grammars)
        value.push_back(perron(build_transfer(g, Potential::zero(g.lexicon()))).lambda);
    return monotonicity(grammars, value);
}

double threshold_energy(const Grammar& g, const Grammar& g_prime) {
    const Potential unit = periodic_orbit_potential(g, g_prime, 1.0).potential;
    const double target = topological_entropy(g);
    auto excess = [&](double e) { return ks_entropy(gibbs_chain(g_prime, unit.scaled(e))) - target; };

    constexpr double step = 0.25, ceiling = 200.0;
    double lo = 0.0;
    if (excess(lo) < 0.0)
        return 0.0;
    double hi = step;
    while (excess(hi) >= 0.0) {
        lo = hi;
        hi += step;
        if (hi > ceiling)
            throw NumericalError("no entropy crossing below E = " + std::to_string(ceiling));
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? hi : lo) = mid;
    }
    return hi;
}

Potential penalty_potential(const Grammar& larger, const Grammar& smaller, double energy) {
    if (compare(smaller, larger) != OrderRelation::Less)
        throw InvalidArgument("penalty potential needs smaller < larger");
    Potential phi(larger.lexicon(), 2);
    for (Symbol a = 0; a < larger.theta(); ++a)
        for (Symbol b = 0; b < larger.theta(); ++b)
            if (larger.allows(a, b) && !smaller.allows(a, b))
                phi.set(std::vector<Symbol>{a, b}, -energy);
    return phi;
}

Potential random_potential_with_norm(const Lexicon& lex, int range, double sup_norm, Rng& rng) {
    const Potential raw = Potential::random(lex, range, 1.0, rng);
    const double norm = raw.sup_norm();
    return norm > 0.0 ? raw.scaled(sup_norm / norm) : raw;
}

ExperimentReport run_theorem_a(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    auto report = identification_run(cfg, false);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_theorem_c(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    auto report = identification_run(cfg, true);

    const Lexicon lex = cfg.grammar->lexicon();
    const auto grammars = candidates_or_all(cfg, lex);
    const Potential phi = potential_or_zero(cfg, lex);
    const auto own = entropy_monotonicity(grammars, phi);
    report.metrics["potential_violations"] = static_cast<double>(own.violations);
    report.metrics["potential_pairs"] = static_cast<double>(own.pairs);
    if (own.min_gap)
        report.metrics["potential_min_gap"] = *own.min_gap;

    // Sweep the sup-norm of random potentials: the radius below which the
    // entropy stays strictly monotone is not known in advance.
    std::optional<double> largest_ok, first_failing;
    bool failed = false;
    auto scales = cfg.scales;
    std::sort(scales.begin(), scales.end());
    for (double scale : scales) {
        SweepPoint point;
        point.parameter = scale;
        Rng rng(cfg.potential_seed);
        for (int range : cfg.potential_ranges)
            for (int k = 0; k < cfg.random_potentials; ++k) {
                const auto r = entropy_monotonicity(grammars, random_potential_with_norm(lex, range, scale, rng));
                point.pairs += r.pairs;
                point.violations += r.violations;
                if (r.min_gap)
                    point.min_gap = point.min_gap ? std::min(*point.min_gap, *r.min_gap) : *r.min_gap;
            }
        point.frequency = point.pairs ? 1.0 - static_cast<double>(point.violations) / point.pairs : 1.0;
        if (point.violations == 0 && !failed)
            largest_ok = scale;
        if (point.violations > 0 && !failed) {
            failed = true;
            first_failing = scale;
        }
        report.sweep.push_back(point);
    }
    if (largest_ok)
        report.thresholds["largest_monotone_scale"] = *largest_ok;
    if (first_failing)
        report.thresholds["first_failing_scale"] = *first_failing;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_theorem_d(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const Grammar& g = *cfg.grammar;
    const Grammar& g_prime = *cfg.comparison;

    ExperimentReport report;
    report.config = cfg;
    const OrbitPotential orbit = periodic_orbit_potential(g, g_prime, 1.0);
    double energy = 0.0;
    if (cfg.energy_auto) {
        const double star = threshold_energy(g, g_prime);
        report.thresholds["energy_star"] = star;
        energy = star + cfg.energy_margin;
    } else {
        energy = *cfg.energy;
    }
    report.thresholds["energy"] = energy;
    report.metrics["orbit_period"] = orbit.period;

    const Potential phi = orbit.potential.scaled(energy);
    const auto candidates = candidates_or_all(cfg, g.lexicon());
    const std::size_t small = index_of(candidates, g, "smaller");
    const std::size_t large = index_of(candidates, g_prime, "larger");
    const Scorer scorer(phi, candidates);
    const GibbsChain truth = gibbs_chain(g, phi);

    struct SeedRun {
        std::vector<IdentificationOutcome> curve;
        double birkhoff = 0.0;
    };
    const auto runs = map_seeds<SeedRun>(cfg.seeds, cfg.threads, [&](int s) {
        const auto seed = cfg.base_seed + static_cast<std::uint64_t>(s);
        SeedRun r;
        r.curve = identify_curve(truth, scorer, cfg.checkpoints, seed, cfg.tie_tolerance);
        r.birkhoff = std::abs(phi.birkhoff_sum(sample(truth, cfg.checkpoints.back(), seed).word));
        return r;
    });

    CurveTally tally(cfg.checkpoints.size());
    std::vector<std::vector<IdentificationOutcome>> curves;
    double max_birkhoff = 0.0;
    std::size_t third_party = 0;
    for (const auto& run : runs) {
        for (std::size_t k = 0; k < run.curve.size(); ++k) {
            const auto& o = run.curve[k];
            tally.hits[k] += contains(o.min_entropy_set, large) && !contains(o.min_entropy_set, small) ? 1 : 0;
            tally.secondary_hits[k] += is_singleton(o.ml_set, small) ? 1 : 0;
            if (o.scores[small].entropy && o.scores[large].entropy) {
                tally.gap_sum[k] += *o.scores[small].entropy - *o.scores[large].entropy;
                ++tally.gap_count[k];
            }
        }
        const auto& last = run.curve.back();
        for (auto i : last.min_entropy_set)
            if (i != large) {
                ++third_party;
                break;
            }
        max_birkhoff = std::max(max_birkhoff, run.birkhoff);
        curves.push_back(run.curve);
    }

    report.curve = finish_curve(tally, cfg.checkpoints, cfg.seeds, true);
    report.candidates = summarize_candidates(scorer, curves, true);
    report.example = runs.front().curve.back();
    report.metrics["final_frequency"] = report.curve.back().frequency;
    report.metrics["ml_final_frequency"] = *report.curve.back().secondary_frequency;
    report.metrics["entropy_g"] = scorer.chains()[small].entropy();
    report.metrics["entropy_g_prime"] = scorer.chains()[large].entropy();
    report.metrics["topological_entropy_g"] = topological_entropy(g);
    report.metrics["max_abs_birkhoff_sum"] = max_birkhoff;
    report.metrics["other_grammar_in_min_set_frequency"] = static_cast<double>(third_party) / cfg.seeds;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_prop_b(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const Grammar& g = *cfg.grammar;
    const Grammar& g_prime = *cfg.comparison;
    const auto candidates = candidates_or_all(cfg, g.lexicon());
    const std::size_t larger = index_of(candidates, g, "true");
    const std::size_t smaller = index_of(candidates, g_prime, "smaller");

    struct Tally {
        CurveTally curve;
        std::size_t avoided = 0, gap_violations = 0;
        std::vector<std::vector<IdentificationOutcome>> runs;
    };
    auto simulate = [&](double energy) {
        const Potential phi = penalty_potential(g, g_prime, energy);
        const Scorer scorer(phi, candidates);
        const GibbsChain truth = gibbs_chain(g, phi);
        auto runs = map_seeds<std::vector<IdentificationOutcome>>(cfg.seeds, cfg.threads, [&](int s) {
            return identify_curve(truth, scorer, cfg.checkpoints, cfg.base_seed + static_cast<std::uint64_t>(s),
                                  cfg.tie_tolerance);
        });
        Tally t{CurveTally(cfg.checkpoints.size()), 0, 0, {}};
        for (const auto& run : runs) {
            for (std::size_t k = 0; k < run.size(); ++k) {
                const auto& o = run[k];
                const bool avoids = o.scores[smaller].admissible;
                t.curve.hits[k] +=
                    avoids && contains(o.ml_set, smaller) && !contains(o.ml_set, larger) ? 1 : 0;
                t.curve.secondary_hits[k] += avoids ? 1 : 0;
                if (avoids) {
                    t.curve.gap_sum[k] += o.scores[smaller].log_likelihood - o.scores[larger].log_likelihood;
                    ++t.curve.gap_count[k];
                }
            }
            const auto& last = run.back();
            if (last.scores[smaller].admissible) {
                ++t.avoided;
                if (!(last.scores[smaller].log_likelihood > last.scores[larger].log_likelihood))
                    ++t.gap_violations;
            }
        }
        t.runs = std::move(runs);
        return std::make_pair(std::move(t), Scorer(phi, candidates));
    };

    ExperimentReport report;
    report.config = cfg;
    auto [main, scorer] = simulate(*cfg.energy);
    report.curve = finish_curve(main.curve, cfg.checkpoints, cfg.seeds, true);
    report.candidates = summarize_candidates(scorer, main.runs, false);
    report.example = main.runs.front().back();
    report.thresholds["energy"] = *cfg.energy;
    report.metrics["final_frequency"] = report.curve.back().frequency;
    report.metrics["avoidance_frequency"] = static_cast<double>(main.avoided) / cfg.seeds;
    report.metrics["likelihood_gap_violations"] = static_cast<double>(main.gap_violations);

    for (double e : cfg.energy_sweep) {
        auto [t, unused] = simulate(e);
        SweepPoint p;
        p.parameter = e;
        p.frequency = static_cast<double>(t.curve.hits.back()) / cfg.seeds;
        p.violations = t.gap_violations;
        p.pairs = t.avoided;
        report.sweep.push_back(p);
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_monotonicity_scan(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const Lexicon lex(cfg.theta);
    const auto grammars = enumerate_grammars(lex);

    std::vector<Potential> sweep{Potential::zero(lex)};
    Rng rng(cfg.potential_seed);
    for (int range : cfg.potential_ranges)
        for (int k = 0; k < cfg.random_potentials; ++k)
            sweep.push_back(Potential::random(lex, range, cfg.potential_bound, rng));

    struct PotentialResult {
        MonotonicityResult mono;
        double identity_error = 0.0;
        double derivative_error = 0.0;
    };
    const auto results = map_seeds<PotentialResult>(static_cast<int>(sweep.size()), cfg.threads, [&](int k) {
        const Potential& phi = sweep[static_cast<std::size_t>(k)];
        PotentialResult r;
        std::vector<double> pressures;
        for (const auto& g : grammars) {
            const GibbsChain chain = gibbs_chain(g, phi);
            pressures.push_back(chain.pressure());
            const double h = ks_entropy(chain);
            r.identity_error =
                std::max(r.identity_error, std::abs(h - (chain.pressure() - expected_potential(chain, phi))));
            r.derivative_error =
                std::max(r.derivative_error, std::abs(h - entropy_via_pressure_derivative(g, phi)));
        }
        r.mono = monotonicity(grammars, pressures);
        return r;
    });

    ExperimentReport report;
    report.config = cfg;
    MonotonicityResult total;
    double identity_error = 0.0, derivative_error = 0.0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        total.pairs += r.mono.pairs;
        total.violations += r.mono.violations;
        if (r.mono.min_gap)
            total.min_gap = total.min_gap ? std::min(*total.min_gap, *r.mono.min_gap) : *r.mono.min_gap;
        identity_error = std::max(identity_error, r.identity_error);
        derivative_error = std::max(derivative_error, r.derivative_error);
        SweepPoint p;
        p.parameter = static_cast<double>(k);
        p.violations = r.mono.violations;
        p.pairs = r.mono.pairs;
        p.min_gap = r.mono.min_gap;
        p.frequency = r.mono.pairs ? 1.0 - static_cast<double>(r.mono.violations) / r.mono.pairs : 1.0;
        report.sweep.push_back(p);
    }
    const auto eigen = eigenvalue_monotonicity(grammars);

    report.metrics["grammars"] = static_cast<double>(grammars.size());
    report.metrics["potentials"] = static_cast<double>(sweep.size());
    report.metrics["pressure_pairs"] = static_cast<double>(total.pairs);
    report.metrics["pressure_violations"] = static_cast<double>(total.violations);
    if (total.min_gap)
        report.metrics["pressure_min_gap"] = *total.min_gap;
    report.metrics["eigenvalue_pairs"] = static_cast<double>(eigen.pairs);
    report.metrics["eigenvalue_violations"] = static_cast<double>(eigen.violations);
    if (eigen.min_gap)
        report.metrics["eigenvalue_min_gap"] = *eigen.min_gap;
    report.metrics["max_entropy_identity_error"] = identity_error;
    report.metrics["max_entropy_derivative_error"] = derivative_error;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_smb(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const Grammar& g = *cfg.grammar;
    const Potential phi = potential_or_zero(cfg, g.lexicon());
    const GibbsChain chain = gibbs_chain(g, phi);
    const double h = ks_entropy(chain);
    if (cfg.checkpoints.front() < static_cast<std::size_t>(chain.order()))
        throw InvalidArgument("smb checkpoints must be at least the potential's range - 1");

    const auto trajectories = map_seeds<std::vector<double>>(cfg.seeds, cfg.threads, [&](int s) {
        const Sample path = sample(chain, cfg.checkpoints.back(), cfg.base_seed + static_cast<std::uint64_t>(s));
        std::vector<double> t;
        for (auto n : cfg.checkpoints)
            t.push_back(-cylinder_log_measure(chain, std::span<const Symbol>(path.word).first(n)) /
                        static_cast<double>(n));
        return t;
    });

    CurveTally tally(cfg.checkpoints.size());
    for (const auto& t : trajectories)
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double err = std::abs(t[k] - h);
            tally.hits[k] += err <= cfg.smb_tolerance ? 1 : 0;
            tally.gap_sum[k] += err;
            ++tally.gap_count[k];
        }

    ExperimentReport report;
    report.config = cfg;
    report.curve = finish_curve(tally, cfg.checkpoints, cfg.seeds, false);
    report.trajectories = trajectories;
    report.metrics["entropy"] = h;
    report.metrics["pressure"] = chain.pressure();
    report.metrics["final_frequency"] = report.curve.back().frequency;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.id) {
    case ExperimentId::TheoremA: return run_theorem_a(cfg);
    case ExperimentId::TheoremC: return run_theorem_c(cfg);
    case ExperimentId::TheoremD: return run_theorem_d(cfg);
    case ExperimentId::PropB: return run_prop_b(cfg);
    case ExperimentId::Monotonicity: return run_monotonicity_scan(cfg);
    case ExperimentId::Smb: return run_smb(cfg);
    }
    throw InvalidArgument("unknown experiment");
}

} // namespace sftid
