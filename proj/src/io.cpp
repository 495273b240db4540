#include "sftid/io.hpp"

#include "sftid/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace sftid::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw InvalidArgument("field '" + path + "': " + msg);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        bad(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        bad(path + "." + key, "missing");
    return *it;
}

long long as_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        bad(path, "expected an integer, got " + j.dump());
    return j.get<long long>();
}

int as_int(const Json& j, const std::string& path) {
    const long long v = as_integer(j, path);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        bad(path, "integer out of range");
    return static_cast<int>(v);
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    const long long v = as_integer(j, path);
    if (v < 0)
        bad(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

double as_double(const Json& j, const std::string& path) {
    if (!j.is_number())
        bad(path, "expected a number, got " + j.dump());
    return j.get<double>();
}

template <class Fn>
auto wrap(const std::string& path, Fn&& fn) -> decltype(fn()) {
    // library errors raised while building a value get the field path prefix
    try {
        return fn();
    } catch (const InvalidArgument& e) {
        const std::string what = e.what();
        if (what.rfind("field '", 0) == 0)
            throw;
        bad(path, what);
    }
}

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

} // namespace

Json parse_json(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw InvalidArgument(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                              ": malformed JSON: " + e.what());
    }
}

Json number(double x) {
    if (std::isnan(x))
        return nullptr;
    if (x == -std::numeric_limits<double>::infinity())
        return "-inf";
    if (x == std::numeric_limits<double>::infinity())
        return "inf";
    return x;
}

// ---------------------------------------------------------------------------

Json to_json(const Grammar& g) {
    Json j;
    j["theta"] = g.theta();
    j["matrix"] = g.matrix().rows();
    return j;
}

Grammar grammar_from_json(const Json& j, const std::string& path) {
    const int theta = as_int(field(j, "theta", path), path + ".theta");
    const Json& m = field(j, "matrix", path);
    if (!m.is_array())
        bad(path + ".matrix", "expected an array of rows");
    if (static_cast<int>(m.size()) != theta)
        bad(path + ".matrix", "has " + std::to_string(m.size()) + " rows but theta is " + std::to_string(theta));
    std::vector<std::vector<int>> rows;
    for (std::size_t a = 0; a < m.size(); ++a) {
        const std::string rp = indexed(path + ".matrix", a);
        if (!m[a].is_array())
            bad(rp, "expected an array");
        std::vector<int> row;
        for (std::size_t b = 0; b < m[a].size(); ++b)
            row.push_back(as_int(m[a][b], indexed(rp, b)));
        rows.push_back(std::move(row));
    }
    return wrap(path + ".matrix", [&] { return Grammar::from_rows(rows); });
}

Json to_json(const std::vector<Grammar>& gs) {
    Json arr = Json::array();
    for (const auto& g : gs)
        arr.push_back(to_json(g));
    return arr;
}

std::vector<Grammar> grammars_from_json(const Json& j, const std::string& path) {
    const Json& arr = j.is_object() ? field(j, "grammars", path) : j;
    if (!arr.is_array())
        bad(path, "expected an array of grammars");
    std::vector<Grammar> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(grammar_from_json(arr[i], indexed(path, i)));
    return out;
}

// ---------------------------------------------------------------------------

Json word_to_json(std::span<const Symbol> w, int theta) {
    if (theta <= 10)
        return format_word(w);
    return Json(std::vector<Symbol>(w.begin(), w.end()));
}

Word word_from_json(const Json& j, const std::string& path) {
    if (j.is_object())
        return word_from_json(field(j, "word", path), path + ".word");
    if (j.is_string())
        return wrap(path, [&] { return parse_word(j.get<std::string>()); });
    if (!j.is_array())
        bad(path, "expected a digit string or an array of symbols");
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int s = as_int(j[i], indexed(path, i));
        if (s < 0)
            bad(indexed(path, i), "symbols are nonnegative");
        w.push_back(s);
    }
    return w;
}

Json to_json(const Potential& phi) {
    Json j;
    j["theta"] = phi.theta();
    j["range"] = phi.range();
    Json entries = Json::array();
    const auto table = phi.table();
    for (std::size_t code = 0; code < table.size(); ++code) {
        if (table[code] == 0.0)
            continue;
        Word w(static_cast<std::size_t>(phi.range()));
        std::size_t c = code;
        for (int i = phi.range() - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % static_cast<std::size_t>(phi.theta()));
            c /= static_cast<std::size_t>(phi.theta());
        }
        Json e;
        e["word"] = word_to_json(w, phi.theta());
        e["value"] = table[code];
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

Potential potential_from_json(const Json& j, const std::string& path) {
    const int theta = as_int(field(j, "theta", path), path + ".theta");
    const int range = as_int(field(j, "range", path), path + ".range");
    Potential phi = wrap(path, [&] { return Potential(Lexicon(theta), range); });
    if (!j.contains("entries"))
        return phi;
    const Json& entries = j["entries"];
    if (!entries.is_array())
        bad(path + ".entries", "expected an array");
    std::set<Word> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ep = indexed(path + ".entries", i);
        const Word w = word_from_json(field(entries[i], "word", ep), ep + ".word");
        const double v = as_double(field(entries[i], "value", ep), ep + ".value");
        if (!seen.insert(w).second)
            bad(ep + ".word", "duplicate word");
        wrap(ep, [&] {
            phi.set(w, v);
            return 0;
        });
    }
    return phi;
}

// ---------------------------------------------------------------------------

Json to_json(const IdentificationOutcome& o) {
    Json j;
    j["n"] = o.n;
    Json scores = Json::array();
    for (const auto& s : o.scores) {
        Json e;
        e["grammar"] = to_json(s.grammar);
        e["admissible"] = s.admissible;
        e["log_likelihood"] = number(s.log_likelihood);
        e["entropy"] = s.entropy ? Json(*s.entropy) : Json(nullptr);
        scores.push_back(std::move(e));
    }
    j["scores"] = std::move(scores);
    j["ml_set"] = o.ml_set;
    j["min_entropy_set"] = o.min_entropy_set;
    j["tie_tolerance"] = o.tie_tolerance;
    j["no_admissible_candidate"] = o.no_admissible_candidate;
    return j;
}

Json chain_summary(const GibbsChain& chain) {
    Json j;
    j["pressure"] = chain.pressure();
    j["entropy"] = chain.entropy();
    j["lambda"] = chain.lambda();
    return j;
}

// ---------------------------------------------------------------------------

Json to_json(const ExperimentConfig& cfg) {
    Json j;
    j["experiment"] = std::string(to_string(cfg.id));
    if (cfg.grammar)
        j["grammar"] = to_json(*cfg.grammar);
    if (cfg.comparison)
        j["comparison_grammar"] = to_json(*cfg.comparison);
    if (cfg.potential)
        j["potential"] = to_json(*cfg.potential);
    if (cfg.candidates)
        j["candidates"] = to_json(*cfg.candidates);
    if (cfg.energy_auto)
        j["energy"] = "auto";
    else if (cfg.energy)
        j["energy"] = *cfg.energy;
    j["energy_margin"] = cfg.energy_margin;
    j["energy_sweep"] = cfg.energy_sweep;
    j["checkpoints"] = cfg.checkpoints;
    j["seeds"] = cfg.seeds;
    j["base_seed"] = cfg.base_seed;
    j["tie_tolerance"] = cfg.tie_tolerance;
    j["theta"] = cfg.theta;
    j["random_potentials"] = cfg.random_potentials;
    j["potential_ranges"] = cfg.potential_ranges;
    j["potential_bound"] = cfg.potential_bound;
    j["scales"] = cfg.scales;
    j["potential_seed"] = cfg.potential_seed;
    j["smb_tolerance"] = cfg.smb_tolerance;
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object())
        bad("config", "expected an object");
    const Json& id = field(j, "experiment", "config");
    if (!id.is_string())
        bad("config.experiment", "expected a string");
    ExperimentConfig cfg = wrap("config.experiment", [&] {
        return default_config(parse_experiment_id(id.get<std::string>()));
    });

    static const std::set<std::string> known = {
        "experiment", "grammar", "comparison_grammar", "potential", "candidates", "energy",
        "energy_margin", "energy_sweep", "checkpoints", "seeds", "base_seed", "tie_tolerance",
        "theta", "random_potentials", "potential_ranges", "potential_bound", "scales",
        "potential_seed", "smb_tolerance", "threads"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            bad("config." + key, "unknown field");

    auto doubles = [](const Json& arr, const std::string& path) {
        if (!arr.is_array())
            bad(path, "expected an array");
        std::vector<double> out;
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(as_double(arr[i], indexed(path, i)));
        return out;
    };

    if (j.contains("grammar"))
        cfg.grammar = grammar_from_json(j["grammar"], "config.grammar");
    if (j.contains("comparison_grammar"))
        cfg.comparison = grammar_from_json(j["comparison_grammar"], "config.comparison_grammar");
    if (j.contains("potential"))
        cfg.potential = potential_from_json(j["potential"], "config.potential");
    if (j.contains("candidates"))
        cfg.candidates = grammars_from_json(j["candidates"], "config.candidates");
    if (j.contains("energy")) {
        const Json& e = j["energy"];
        if (e.is_string()) {
            if (e.get<std::string>() != "auto")
                bad("config.energy", "expected a number or \"auto\"");
            cfg.energy_auto = true;
            cfg.energy.reset();
        } else {
            cfg.energy = as_double(e, "config.energy");
            cfg.energy_auto = false;
        }
    }
    if (j.contains("energy_margin"))
        cfg.energy_margin = as_double(j["energy_margin"], "config.energy_margin");
    if (j.contains("energy_sweep"))
        cfg.energy_sweep = doubles(j["energy_sweep"], "config.energy_sweep");
    if (j.contains("checkpoints")) {
        const Json& c = j["checkpoints"];
        if (!c.is_array())
            bad("config.checkpoints", "expected an array");
        cfg.checkpoints.clear();
        for (std::size_t i = 0; i < c.size(); ++i)
            cfg.checkpoints.push_back(static_cast<std::size_t>(as_u64(c[i], indexed("config.checkpoints", i))));
    }
    if (j.contains("seeds"))
        cfg.seeds = as_int(j["seeds"], "config.seeds");
    if (j.contains("base_seed"))
        cfg.base_seed = as_u64(j["base_seed"], "config.base_seed");
    if (j.contains("tie_tolerance"))
        cfg.tie_tolerance = as_double(j["tie_tolerance"], "config.tie_tolerance");
    if (j.contains("theta"))
        cfg.theta = as_int(j["theta"], "config.theta");
    if (j.contains("random_potentials"))
        cfg.random_potentials = as_int(j["random_potentials"], "config.random_potentials");
    if (j.contains("potential_ranges")) {
        const Json& r = j["potential_ranges"];
        if (!r.is_array())
            bad("config.potential_ranges", "expected an array");
        cfg.potential_ranges.clear();
        for (std::size_t i = 0; i < r.size(); ++i)
            cfg.potential_ranges.push_back(as_int(r[i], indexed("config.potential_ranges", i)));
    }
    if (j.contains("potential_bound"))
        cfg.potential_bound = as_double(j["potential_bound"], "config.potential_bound");
    if (j.contains("scales"))
        cfg.scales = doubles(j["scales"], "config.scales");
    if (j.contains("potential_seed"))
        cfg.potential_seed = as_u64(j["potential_seed"], "config.potential_seed");
    if (j.contains("smb_tolerance"))
        cfg.smb_tolerance = as_double(j["smb_tolerance"], "config.smb_tolerance");
    if (j.contains("threads"))
        cfg.threads = as_int(j["threads"], "config.threads");

    // A grammar on a bigger lexicon with no explicit potential needs no fixup:
    // the zero potential is built on the grammar's lexicon at run time.
    wrap("config", [&] {
        validate(cfg);
        return 0;
    });
    return cfg;
}

Json to_json(const ExperimentReport& r) {
    Json j;
    j["experiment"] = std::string(to_string(r.config.id));
    j["config"] = to_json(r.config);

    Json curve = Json::array();
    for (const auto& p : r.curve) {
        Json e;
        e["n"] = p.n;
        e["frequency"] = p.frequency;
        e["mean_score_gap"] = p.mean_score_gap ? number(*p.mean_score_gap) : Json(nullptr);
        if (p.secondary_frequency)
            e["secondary_frequency"] = *p.secondary_frequency;
        curve.push_back(std::move(e));
    }
    j["curve"] = std::move(curve);

    Json thresholds = Json::object();
    for (const auto& [k, v] : r.thresholds)
        thresholds[k] = number(v);
    j["thresholds"] = std::move(thresholds);
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics)
        metrics[k] = number(v);
    j["metrics"] = std::move(metrics);

    if (!r.candidates.empty()) {
        Json cands = Json::array();
        for (const auto& c : r.candidates) {
            Json e;
            e["grammar"] = to_json(c.grammar);
            e["pressure"] = c.pressure;
            e["entropy"] = c.entropy;
            e["selected_frequency"] = c.selected_frequency;
            e["admissible_frequency"] = c.admissible_frequency;
            cands.push_back(std::move(e));
        }
        j["candidates"] = std::move(cands);
    }
    if (!r.sweep.empty()) {
        Json sweep = Json::array();
        for (const auto& p : r.sweep) {
            Json e;
            e["parameter"] = p.parameter;
            e["frequency"] = p.frequency;
            e["violations"] = p.violations;
            e["pairs"] = p.pairs;
            e["min_gap"] = p.min_gap ? number(*p.min_gap) : Json(nullptr);
            sweep.push_back(std::move(e));
        }
        j["sweep"] = std::move(sweep);
    }
    if (r.example)
        j["example"] = to_json(*r.example);
    if (!r.trajectories.empty())
        j["trajectories"] = r.trajectories;
    return j;
}

namespace {

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string curve_csv(const ExperimentReport& r) {
    std::string out = "n,frequency,mean_score_gap\n";
    for (const auto& p : r.curve) {
        out += std::to_string(p.n);
        out += ',';
        out += csv_number(p.frequency);
        out += ',';
        if (p.mean_score_gap && std::isfinite(*p.mean_score_gap))
            out += csv_number(*p.mean_score_gap);
        out += '\n';
    }
    return out;
}

} // namespace sftid::io
