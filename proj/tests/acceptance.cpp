// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "cli_runner.hpp"
#include "oracles.hpp"

#include "sftid/experiments.hpp"
#include "sftid/gibbs.hpp"
#include "sftid/identification.hpp"
#include "sftid/io.hpp"
#include "sftid/symbolic.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace sftid;

namespace {

const Grammar golden = Grammar::from_rows({{1, 1}, {1, 0}});
const Grammar reverse_golden = Grammar::from_rows({{0, 1}, {1, 1}});
const Grammar full2 = Grammar::from_rows({{1, 1}, {1, 1}});

struct Verdict {
    bool pass = false;
    std::string detail;
};

// 20 random potentials of each range in {2, 3}, values in [-2, 2].
std::vector<Potential> potential_sweep(int theta, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Potential> out;
    for (int range : {2, 3})
        for (int k = 0; k < 20; ++k)
            out.push_back(Potential::random(Lexicon(theta), range, 2.0, rng));
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Verdict enumeration() {
    const auto g2 = enumerate_grammars(Lexicon(2));
    bool ok = g2.size() == 3 && g2[0] == reverse_golden && g2[1] == golden && g2[2] == full2;
    const auto g3 = enumerate_grammars(Lexicon(3));
    std::size_t k = 0;
    int mismatches = 0;
    for (unsigned code = 0; code < 512; ++code) {
        const bool expected = oracle::primitive(oracle::matrix_from_code(3, code));
        const bool listed = k < g3.size() && g3[k].matrix().code() == code;
        if (listed)
            ++k;
        mismatches += expected != listed;
    }
    ok = ok && mismatches == 0 && k == g3.size();
    return {ok, "theta=2: " + std::to_string(g2.size()) + " grammars; theta=3: " + std::to_string(g3.size()) +
                    " listed, " + std::to_string(mismatches) + " disagreements with the graph oracle"};
}

Verdict eigenvalues() {
    const double pg = pressure(golden, Potential::zero(Lexicon(2)));
    const double pf = pressure(full2, Potential::zero(Lexicon(2)));
    const double eg = std::abs(pg - std::log((1.0 + std::sqrt(5.0)) / 2.0));
    const double ef = std::abs(pf - std::log(2.0));
    return {eg <= 1e-9 && ef <= 1e-12, "golden error " + fmt(eg) + ", full error " + fmt(ef)};
}

Verdict pressure_monotone() {
    std::size_t pairs = 0, violations = 0;
    double gap = INFINITY;
    for (int theta : {2, 3}) {
        const auto gs = enumerate_grammars(Lexicon(theta));
        for (const auto& phi : potential_sweep(theta, 100 + theta)) {
            const auto r = pressure_monotonicity(gs, phi);
            pairs += r.pairs;
            violations += r.violations;
            if (r.min_gap)
                gap = std::min(gap, *r.min_gap);
        }
    }
    return {violations == 0 && gap > 1e-12, std::to_string(pairs) + " comparable pairs, " +
                                                std::to_string(violations) + " violations, minimal gap " + fmt(gap)};
}

Verdict entropy_formulas() {
    double identity = 0.0, derivative = 0.0;
    std::size_t chains = 0;
    for (int theta : {2, 3}) {
        const auto gs = enumerate_grammars(Lexicon(theta));
        for (const auto& phi : potential_sweep(theta, 100 + theta))
            for (const auto& g : gs) {
                const auto chain = gibbs_chain(g, phi);
                const double h = ks_entropy(chain);
                identity = std::max(identity, std::abs(h - (chain.pressure() - expected_potential(chain, phi))));
                derivative = std::max(derivative, std::abs(h - entropy_via_pressure_derivative(g, phi)));
                ++chains;
            }
    }
    return {identity <= 1e-8 && derivative <= 1e-4, std::to_string(chains) + " chains, max |h-(P-E)| " +
                                                         fmt(identity) + ", max |h-(P-dP)| " + fmt(derivative)};
}

Verdict theorem_a() {
    const auto r = run_theorem_a(default_config(ExperimentId::TheoremA));
    const double f = r.metrics.at("final_frequency");
    const bool mono = r.metrics.at("curve_nondecreasing") == 1.0;
    std::string curve;
    for (const auto& p : r.curve)
        curve += (curve.empty() ? "" : " ") + std::to_string(p.n) + ":" + fmt(p.frequency);
    return {f >= 0.99 && mono, "ML frequency at n=2000 " + fmt(f) + ", curve " + curve};
}

Verdict theorem_c() {
    const auto r = run_theorem_c(default_config(ExperimentId::TheoremC));
    const double f = r.metrics.at("final_frequency");
    std::size_t pairs = 0, violations = 0;
    for (int theta : {2, 3}) {
        const auto gs = enumerate_grammars(Lexicon(theta));
        Rng rng(200 + theta);
        for (int range : {2, 3})
            for (int k = 0; k < 20; ++k) {
                const auto m = entropy_monotonicity(gs, random_potential_with_norm(Lexicon(theta), range, 0.01, rng));
                pairs += m.pairs;
                violations += m.violations;
            }
    }
    return {f >= 0.99 && violations == 0, "min-entropy frequency at n=2000 " + fmt(f) + "; sup-norm 0.01: " +
                                              std::to_string(pairs) + " pairs, " + std::to_string(violations) +
                                              " violations"};
}

double closed_form_threshold() {
    auto entropy = [](double e) {
        const double a = std::exp(e);
        const double lambda = 0.5 * (1.0 + a + std::sqrt((a - 1.0) * (a - 1.0) + 4.0));
        const double h1 = lambda - 1.0;
        return std::log(lambda) - e * h1 * h1 * a / (lambda * (1.0 + h1 * h1));
    };
    const double target = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (entropy(mid) >= target ? lo : hi) = mid;
    }
    return lo;
}

Verdict theorem_d() {
    auto cfg = default_config(ExperimentId::TheoremD);
    const auto r = run_theorem_d(cfg);
    const double star = r.thresholds.at("energy_star");
    const double err = std::abs(star - closed_form_threshold());
    const double me = r.metrics.at("final_frequency");
    const double ml = r.metrics.at("ml_final_frequency");
    return {std::isfinite(star) && err <= 1e-6 && me >= 0.95 && ml >= 0.95,
            "E* " + fmt(star) + " (closed-form error " + fmt(err) + "); at E*+2, n=2000: min-entropy switch " +
                fmt(me) + ", ML keeps truth " + fmt(ml)};
}

Verdict prop_b() {
    const auto r = run_prop_b(default_config(ExperimentId::PropB));
    const double f = r.metrics.at("final_frequency");
    double at_zero = NAN;
    for (const auto& p : r.sweep)
        if (p.parameter == 0.0)
            at_zero = p.frequency;
    return {f >= 0.9 && at_zero <= 0.1, "E=10: " + fmt(f) + ", E=0: " + fmt(at_zero)};
}

Verdict smb() {
    bool ok = true;
    std::string detail;
    for (const auto& g : enumerate_grammars(Lexicon(2))) {
        auto cfg = default_config(ExperimentId::Smb);
        cfg.grammar = g;
        const auto r = run_smb(cfg);
        const double f = r.metrics.at("final_frequency");
        ok = ok && f >= 0.9;
        detail += (detail.empty() ? "" : ", ") + std::to_string(g.matrix().code()) + ": " + fmt(f);
    }
    return {ok, "fraction within 0.05 at n=10^4 by grammar code " + detail};
}

Verdict determinism() {
    cli::Scratch s("acceptance");
    const auto g = s.write("golden.json", R"({"theta": 2, "matrix": [[1,1],[1,0]]})");
    const auto z = s.write("zero.json", R"({"theta": 2, "range": 2, "entries": []})");
    const auto phi = s.write("phi.json",
                             R"({"theta": 2, "range": 3, "entries": [{"word": "010", "value": 0.7}, {"word": "000", "value": -1.25}]})");
    const auto cfg_a = s.write("a.json", R"({"experiment": "theorem-a", "seeds": 50})");
    const auto cfg_d = s.write("d.json", R"({"experiment": "theorem-d", "seeds": 30})");
    const auto cfg_m = s.write("m.json", R"({"experiment": "monotonicity", "theta": 3})");
    const std::vector<std::string> invocations = {
        "pressure --grammar " + g + " --potential " + z,
        "entropy --grammar " + g + " --potential " + phi,
        "sample --grammar " + g + " --potential " + phi + " --length 500 --seed 42",
        "identify --grammar-set auto --sample 0110 --potential " + z,
        "identify --grammar-set auto --sample 0100100010 --potential " + phi,
        "enumerate --theta 3",
        "experiment --config " + cfg_a,
        "experiment --config " + cfg_a + " --format csv --seed 9",
        "experiment --config " + cfg_d,
        "experiment --config " + cfg_m,
        "pressure --grammar " + s.write("bad.json", R"({"theta": 2, "matrix": [[0,1],[1,0]]})"),
    };
    int differing = 0;
    for (const auto& args : invocations) {
        const auto a = cli::run(args);
        const auto b = cli::run(args);
        if (a.status != b.status || a.out != b.out)
            ++differing;
    }
    return {differing == 0, std::to_string(invocations.size()) + " invocations run twice, " +
                                std::to_string(differing) + " differed"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"enumeration matches the primitivity oracle", enumeration},
        {"closed-form Perron eigenvalues", eigenvalues},
        {"strict pressure monotonicity", pressure_monotone},
        {"entropy cross-formulas", entropy_formulas},
        {"maximum-likelihood identification", theorem_a},
        {"minimum-entropy identification and small-potential monotonicity", theorem_c},
        {"language change under an orbit reward", theorem_d},
        {"finite-sample misidentification under a penalty", prop_b},
        {"Shannon-McMillan-Breiman rate", smb},
        {"byte-identical CLI output", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s - %s: %s [%.2fs]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
