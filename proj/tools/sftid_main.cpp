// sftid command-line tool. Talks to the library only through the C API.

#include "sftid/sftid.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

// Exit codes: 0 success, 1 validation error, 2 numerical failure.
struct Failure {
    int code;
    std::string message;
};

int exit_code(sftid_status s) { return s == SFTID_ERR_INVALID ? 1 : 2; }

void check(sftid_status s, const std::string& context) {
    if (s != SFTID_OK)
        throw Failure{exit_code(s), context.empty() ? sftid_last_error() : context + ": " + sftid_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using GrammarPtr = std::unique_ptr<sftid_grammar, Deleter<sftid_grammar, sftid_grammar_free>>;
using ListPtr = std::unique_ptr<sftid_grammar_list, Deleter<sftid_grammar_list, sftid_grammar_list_free>>;
using PotentialPtr = std::unique_ptr<sftid_potential, Deleter<sftid_potential, sftid_potential_free>>;
using ChainPtr = std::unique_ptr<sftid_chain, Deleter<sftid_chain, sftid_chain_free>>;

struct CString {
    char* p = nullptr;
    ~CString() { sftid_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{1, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GrammarPtr load_grammar(const std::string& path) {
    sftid_grammar* g = nullptr;
    check(sftid_grammar_from_json(read_file(path).c_str(), &g), path);
    return GrammarPtr(g);
}

PotentialPtr load_potential(const std::string& path, int theta) {
    sftid_potential* phi = nullptr;
    if (path.empty()) {
        check(sftid_potential_zero(theta, 2, &phi), "zero potential");
    } else {
        check(sftid_potential_from_json(read_file(path).c_str(), &phi), path);
        if (sftid_potential_theta(phi) != theta) {
            sftid_potential_free(phi);
            throw Failure{1, path + ": potential lexicon size does not match (expected " +
                                 std::to_string(theta) + ")"};
        }
    }
    return PotentialPtr(phi);
}

Json parse_output(const CString& s) { return Json::parse(s.str()); }

std::vector<int> parse_word_arg(const std::string& digits) {
    std::vector<int> w;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        if (c < '0' || c > '9')
            throw Failure{1, "--sample: character '" + std::string(1, c) + "' at position " + std::to_string(i) +
                                 " is not a digit; use --sample-file for lexicons above 10 symbols"};
        w.push_back(c - '0');
    }
    return w;
}

std::vector<int> load_word_file(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw Failure{1, path + ": malformed JSON: " + e.what()};
    }
    if (j.is_object() && j.contains("word"))
        j = j["word"];
    if (j.is_string())
        return parse_word_arg(j.get<std::string>());
    if (!j.is_array())
        throw Failure{1, path + ": field 'word': expected a digit string or an integer array"};
    std::vector<int> w;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer())
            throw Failure{1, path + ": field 'word[" + std::to_string(i) + "]': expected an integer"};
        w.push_back(j[i].get<int>());
    }
    return w;
}

std::string word_text(const std::vector<int>& w, int theta) {
    if (theta > 10)
        return Json(w).dump();
    std::string s;
    for (int x : w)
        s.push_back(static_cast<char>('0' + x));
    return s;
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}

    void write(const std::string& text) const {
        if (path_.empty() || path_ == "-") {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream out(path_, std::ios::binary);
        if (!out)
            throw Failure{1, "cannot write '" + path_ + "'"};
        out << text;
    }
    void json(const Json& j) const { write(j.dump(2) + "\n"); }

private:
    std::string path_;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sftid: Gibbs-measure identification of subshift-of-finite-type grammars"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sftid_version()));

    std::string output;
    std::string grammar_path, potential_path, grammar_set = "auto", sample_digits, sample_file, config_path;
    std::string format = "json";
    std::uint64_t seed = 1;
    bool seed_given = false;
    double tie_tol = 1e-9;
    std::size_t length = 0;
    int theta = 2;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "Write to this file instead of standard output");
    };

    auto* pressure = app.add_subcommand("pressure", "Pressure of a potential on a grammar");
    pressure->add_option("--grammar", grammar_path, "Grammar JSON file")->required();
    pressure->add_option("--potential", potential_path, "Potential JSON file (default: zero, range 2)");
    add_output(pressure);

    auto* entropy = app.add_subcommand("entropy", "Pressure, entropy and Perron eigenvalue of the Gibbs state");
    entropy->add_option("--grammar", grammar_path, "Grammar JSON file")->required();
    entropy->add_option("--potential", potential_path, "Potential JSON file (default: zero, range 2)");
    add_output(entropy);

    auto* sample = app.add_subcommand("sample", "Draw a word from the Gibbs state");
    sample->add_option("--grammar", grammar_path, "Grammar JSON file")->required();
    sample->add_option("--potential", potential_path, "Potential JSON file (default: zero, range 2)");
    sample->add_option("-n,--length", length, "Word length")->required();
    sample->add_option("--seed", seed, "Random seed (default 1)");
    add_output(sample);

    auto* identify = app.add_subcommand("identify", "Maximum-likelihood and minimum-entropy grammar sets");
    identify->add_option("--grammar-set", grammar_set,
                         "\"auto\" (every primitive grammar on the lexicon) or a JSON file with a grammar array");
    auto* digits_opt = identify->add_option("--sample", sample_digits, "Observed word as digits, e.g. 0110");
    auto* file_opt = identify->add_option("--sample-file", sample_file, "JSON word: digit string or integer array");
    digits_opt->excludes(file_opt);
    identify->add_option("--potential", potential_path, "Potential JSON file (default: zero, range 2)");
    identify->add_option("--tie-tol", tie_tol, "Tie tolerance for both sets (default 1e-9)");
    add_output(identify);

    auto* experiment = app.add_subcommand("experiment", "Run a seeded Monte Carlo experiment");
    experiment->add_option("--config", config_path, "Experiment config JSON file")->required();
    experiment->add_option("--format", format, "Report format: json or csv (the checkpoint curve)")
        ->check(CLI::IsMember({"json", "csv"}));
    experiment->add_option("--seed", seed, "Override the config's base_seed");
    add_output(experiment);

    auto* enumerate = app.add_subcommand("enumerate", "List every primitive grammar on a lexicon");
    enumerate->add_option("--theta", theta, "Lexicon size (2..4)")->required();
    add_output(enumerate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        // top-level help shows every subcommand together with its flags
        if (app.get_subcommands().empty()) {
            std::cout << app.help("", CLI::AppFormatMode::All);
            return 0;
        }
        std::cout << app.get_subcommands().front()->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    seed_given = experiment->count("--seed") > 0;

    try {
        const Output out(output);

        if (*pressure || *entropy || *sample) {
            const auto g = load_grammar(grammar_path);
            const auto phi = load_potential(potential_path, sftid_grammar_theta(g.get()));
            sftid_chain* raw = nullptr;
            check(sftid_chain_create(g.get(), phi.get(), &raw), "");
            const ChainPtr chain(raw);

            if (*pressure) {
                Json j;
                j["pressure"] = sftid_chain_pressure(chain.get());
                out.json(j);
            } else if (*entropy) {
                CString summary;
                check(sftid_chain_summary_json(chain.get(), &summary.p), "");
                Json j = parse_output(summary);
                double expected = 0.0, derivative = 0.0;
                check(sftid_chain_expected_potential(chain.get(), &expected), "");
                check(sftid_entropy_via_pressure_derivative(g.get(), phi.get(), &derivative), "");
                j["expected_potential"] = expected;
                j["entropy_via_pressure_derivative"] = derivative;
                out.json(j);
            } else {
                std::vector<int> word(length);
                check(sftid_chain_sample(chain.get(), length, seed, word.data()), "");
                double logp = 0.0;
                check(sftid_chain_cylinder_log_measure(chain.get(), word.data(), word.size(), &logp), "");
                Json j;
                j["seed"] = seed;
                j["length"] = length;
                j["word"] = sftid_grammar_theta(g.get()) > 10 ? Json(word) : Json(word_text(word, 10));
                j["log_measure"] = logp;
                out.json(j);
            }
        } else if (*identify) {
            if (sample_digits.empty() && sample_file.empty())
                throw Failure{1, "identify needs --sample or --sample-file"};
            const std::vector<int> word = sample_file.empty() ? parse_word_arg(sample_digits)
                                                              : load_word_file(sample_file);
            ListPtr candidates;
            int lexicon = 2;
            if (grammar_set != "auto") {
                sftid_grammar_list* list = nullptr;
                check(sftid_grammar_list_from_json(read_file(grammar_set).c_str(), &list), grammar_set);
                candidates.reset(list);
                if (sftid_grammar_list_size(list) == 0)
                    throw Failure{1, grammar_set + ": candidate list is empty"};
                sftid_grammar* first = nullptr;
                check(sftid_grammar_list_get(list, 0, &first), grammar_set);
                lexicon = sftid_grammar_theta(first);
                sftid_grammar_free(first);
            } else if (!potential_path.empty()) {
                sftid_potential* phi = nullptr;
                check(sftid_potential_from_json(read_file(potential_path).c_str(), &phi), potential_path);
                lexicon = sftid_potential_theta(phi);
                sftid_potential_free(phi);
            } else {
                for (int x : word)
                    lexicon = std::max(lexicon, x + 1);
            }
            const auto phi = load_potential(potential_path, lexicon);
            CString result;
            check(sftid_identify_json(word.data(), word.size(), phi.get(), candidates.get(), tie_tol, &result.p), "");
            out.json(parse_output(result));
        } else if (*experiment) {
            std::string config_text = read_file(config_path);
            if (seed_given) {
                Json cfg;
                try {
                    cfg = Json::parse(config_text);
                } catch (const Json::parse_error&) {
                    // leave the text alone so the library reports line and column
                }
                if (cfg.is_object()) {
                    cfg["base_seed"] = seed;
                    config_text = cfg.dump();
                }
            }
            CString report, csv;
            double seconds = 0.0;
            check(sftid_experiment_run(config_text.c_str(), &report.p, &csv.p, &seconds), config_path);
            if (format == "csv")
                out.write(csv.str());
            else
                out.json(parse_output(report));
            std::fprintf(stderr, "sftid: experiment finished in %.3f s\n", seconds);
        } else if (*enumerate) {
            sftid_grammar_list* raw = nullptr;
            check(sftid_grammar_list_enumerate(theta, &raw), "");
            const ListPtr list(raw);
            CString text;
            check(sftid_grammar_list_to_json(list.get(), &text.p), "");
            out.json(parse_output(text));
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "sftid: error: %s\n", f.message.c_str());
        return f.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sftid: error: %s\n", e.what());
        return 2;
    }
    return 0;
}
