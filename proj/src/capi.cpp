// extern "C" surface over the C++ core. Exceptions never cross this
// boundary: each entry point maps them to a status and stores the message.

#include "sftid/sftid.h"

#include "sftid/errors.hpp"
#include "sftid/experiments.hpp"
#include "sftid/gibbs.hpp"
#include "sftid/identification.hpp"
#include "sftid/io.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

struct sftid_grammar {
    sftid::Grammar value;
};
struct sftid_grammar_list {
    std::vector<sftid::Grammar> value;
};
struct sftid_potential {
    sftid::Potential value;
};
struct sftid_chain {
    sftid::GibbsChain value;
};

namespace {

thread_local std::string last_error;

template <class Fn>
sftid_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        last_error.clear();
        return SFTID_OK;
    } catch (const sftid::InvalidArgument& e) {
        last_error = e.what();
        return SFTID_ERR_INVALID;
    } catch (const sftid::NumericalError& e) {
        last_error = e.what();
        return SFTID_ERR_NUMERICAL;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SFTID_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SFTID_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return SFTID_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr)
        throw sftid::InvalidArgument(std::string(what) + " must not be null");
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sftid::IncidenceMatrix matrix_from(int theta, const int* entries) {
    require(entries, "entries");
    const sftid::Lexicon lex(theta);
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(theta));
    for (int a = 0; a < theta; ++a)
        rows[static_cast<std::size_t>(a)].assign(entries + a * theta, entries + (a + 1) * theta);
    return sftid::IncidenceMatrix::from_rows(rows);
}

std::span<const sftid::Symbol> word_from(const int* word, size_t len) {
    if (len > 0)
        require(word, "word");
    return {word, len};
}

std::string dump(const sftid::io::Json& j) { return j.dump(); }

} // namespace

extern "C" {

const char* sftid_version(void) { return "1.0.0"; }

const char* sftid_last_error(void) { return last_error.c_str(); }

void sftid_string_free(char* s) { std::free(s); }

sftid_status sftid_grammar_create(int theta, const int* entries, sftid_grammar** out) {
    return guarded([&] {
        require(out, "out");
        *out = new sftid_grammar{sftid::Grammar(matrix_from(theta, entries))};
    });
}

sftid_status sftid_grammar_from_json(const char* json, sftid_grammar** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new sftid_grammar{sftid::io::grammar_from_json(sftid::io::parse_json(json, "grammar"))};
    });
}

sftid_status sftid_grammar_to_json(const sftid_grammar* g, char** out) {
    return guarded([&] {
        require(g, "grammar");
        require(out, "out");
        *out = duplicate(dump(sftid::io::to_json(g->value)));
    });
}

sftid_status sftid_grammar_clone(const sftid_grammar* g, sftid_grammar** out) {
    return guarded([&] {
        require(g, "grammar");
        require(out, "out");
        *out = new sftid_grammar{g->value};
    });
}

int sftid_grammar_theta(const sftid_grammar* g) { return g ? g->value.theta() : 0; }

sftid_status sftid_grammar_compare(const sftid_grammar* g, const sftid_grammar* h, sftid_order* out) {
    return guarded([&] {
        require(g, "g");
        require(h, "h");
        require(out, "out");
        switch (sftid::compare(g->value, h->value)) {
        case sftid::OrderRelation::Less: *out = SFTID_ORDER_LESS; break;
        case sftid::OrderRelation::Greater: *out = SFTID_ORDER_GREATER; break;
        case sftid::OrderRelation::Equal: *out = SFTID_ORDER_EQUAL; break;
        case sftid::OrderRelation::Incomparable: *out = SFTID_ORDER_INCOMPARABLE; break;
        }
    });
}

sftid_status sftid_grammar_admits(const sftid_grammar* g, const int* word, size_t len, int* out) {
    return guarded([&] {
        require(g, "grammar");
        require(out, "out");
        *out = sftid::admits(g->value, word_from(word, len)) ? 1 : 0;
    });
}

void sftid_grammar_free(sftid_grammar* g) { delete g; }

sftid_status sftid_is_primitive(int theta, const int* entries, int* out) {
    return guarded([&] {
        require(out, "out");
        *out = sftid::is_primitive(matrix_from(theta, entries)) ? 1 : 0;
    });
}

sftid_status sftid_transition_closure(int theta, const int* word, size_t len, int* entries) {
    return guarded([&] {
        require(entries, "entries");
        const auto m = sftid::transition_closure(word_from(word, len), sftid::Lexicon(theta));
        for (int a = 0; a < theta; ++a)
            for (int b = 0; b < theta; ++b)
                entries[a * theta + b] = m(a, b) ? 1 : 0;
    });
}

sftid_status sftid_grammar_list_enumerate(int theta, sftid_grammar_list** out) {
    return guarded([&] {
        require(out, "out");
        *out = new sftid_grammar_list{sftid::enumerate_grammars(sftid::Lexicon(theta))};
    });
}

sftid_status sftid_grammar_list_from_json(const char* json, sftid_grammar_list** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new sftid_grammar_list{sftid::io::grammars_from_json(sftid::io::parse_json(json, "grammars"))};
    });
}

sftid_status sftid_grammar_list_to_json(const sftid_grammar_list* list, char** out) {
    return guarded([&] {
        require(list, "list");
        require(out, "out");
        *out = duplicate(dump(sftid::io::to_json(list->value)));
    });
}

size_t sftid_grammar_list_size(const sftid_grammar_list* list) { return list ? list->value.size() : 0; }

sftid_status sftid_grammar_list_get(const sftid_grammar_list* list, size_t i, sftid_grammar** out) {
    return guarded([&] {
        require(list, "list");
        require(out, "out");
        if (i >= list->value.size())
            throw sftid::InvalidArgument("grammar list index out of range");
        *out = new sftid_grammar{list->value[i]};
    });
}

void sftid_grammar_list_free(sftid_grammar_list* list) { delete list; }

sftid_status sftid_potential_zero(int theta, int range, sftid_potential** out) {
    return guarded([&] {
        require(out, "out");
        *out = new sftid_potential{sftid::Potential(sftid::Lexicon(theta), range)};
    });
}

sftid_status sftid_potential_from_json(const char* json, sftid_potential** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new sftid_potential{sftid::io::potential_from_json(sftid::io::parse_json(json, "potential"))};
    });
}

sftid_status sftid_potential_to_json(const sftid_potential* phi, char** out) {
    return guarded([&] {
        require(phi, "potential");
        require(out, "out");
        *out = duplicate(dump(sftid::io::to_json(phi->value)));
    });
}

int sftid_potential_theta(const sftid_potential* phi) { return phi ? phi->value.theta() : 0; }
int sftid_potential_range(const sftid_potential* phi) { return phi ? phi->value.range() : 0; }

void sftid_potential_free(sftid_potential* phi) { delete phi; }

sftid_status sftid_chain_create(const sftid_grammar* g, const sftid_potential* phi, sftid_chain** out) {
    return guarded([&] {
        require(g, "grammar");
        require(phi, "potential");
        require(out, "out");
        *out = new sftid_chain{sftid::gibbs_chain(g->value, phi->value)};
    });
}

double sftid_chain_pressure(const sftid_chain* c) { return c ? c->value.pressure() : NAN; }
double sftid_chain_entropy(const sftid_chain* c) { return c ? c->value.entropy() : NAN; }
double sftid_chain_lambda(const sftid_chain* c) { return c ? c->value.lambda() : NAN; }

sftid_status sftid_chain_summary_json(const sftid_chain* c, char** out) {
    return guarded([&] {
        require(c, "chain");
        require(out, "out");
        *out = duplicate(dump(sftid::io::chain_summary(c->value)));
    });
}

sftid_status sftid_chain_sample(const sftid_chain* c, size_t n, uint64_t seed, int* word_out) {
    return guarded([&] {
        require(c, "chain");
        if (n > 0)
            require(word_out, "word_out");
        const auto s = sftid::sample(c->value, n, seed);
        std::copy(s.word.begin(), s.word.end(), word_out);
    });
}

sftid_status sftid_chain_cylinder_log_measure(const sftid_chain* c, const int* word, size_t len, double* out) {
    return guarded([&] {
        require(c, "chain");
        require(out, "out");
        *out = sftid::cylinder_log_measure(c->value, word_from(word, len));
    });
}

sftid_status sftid_chain_expected_potential(const sftid_chain* c, double* out) {
    return guarded([&] {
        require(c, "chain");
        require(out, "out");
        *out = sftid::expected_potential(c->value, c->value.potential());
    });
}

void sftid_chain_free(sftid_chain* c) { delete c; }

sftid_status sftid_entropy_via_pressure_derivative(const sftid_grammar* g, const sftid_potential* phi,
                                                   double* out) {
    return guarded([&] {
        require(g, "grammar");
        require(phi, "potential");
        require(out, "out");
        *out = sftid::entropy_via_pressure_derivative(g->value, phi->value);
    });
}

sftid_status sftid_identify_json(const int* word, size_t len, const sftid_potential* phi,
                                 const sftid_grammar_list* candidates, double tie_tolerance, char** out) {
    return guarded([&] {
        require(phi, "potential");
        require(out, "out");
        const auto w = word_from(word, len);
        const auto pool = candidates ? candidates->value : sftid::enumerate_grammars(phi->value.lexicon());
        const auto outcome = sftid::Scorer(phi->value, pool).identify(w, tie_tolerance);
        *out = duplicate(dump(sftid::io::to_json(outcome)));
    });
}

sftid_status sftid_experiment_run(const char* config_json, char** report_json, char** curve_csv,
                                  double* wall_seconds) {
    return guarded([&] {
        require(config_json, "config_json");
        const auto cfg = sftid::io::config_from_json(sftid::io::parse_json(config_json, "config"));
        const auto report = sftid::run_experiment(cfg);
        std::string json = dump(sftid::io::to_json(report));
        std::string csv = sftid::io::curve_csv(report);
        if (report_json)
            *report_json = duplicate(json);
        if (curve_csv) {
            try {
                *curve_csv = duplicate(csv);
            } catch (...) {
                if (report_json)
                    std::free(*report_json);
                throw;
            }
        }
        if (wall_seconds)
            *wall_seconds = report.wall_seconds;
    });
}

} // extern "C"
