#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sftid/errors.hpp"
#include "sftid/identification.hpp"

#include <algorithm>
#include <cmath>

using namespace sftid;

namespace {

const Grammar golden = Grammar::from_rows({{1, 1}, {1, 0}});
const Grammar reverse_golden = Grammar::from_rows({{0, 1}, {1, 1}});
const Grammar full2 = Grammar::from_rows({{1, 1}, {1, 1}});

std::vector<Grammar> selected(const IdentificationOutcome& o, const std::vector<std::size_t>& set) {
    std::vector<Grammar> out;
    for (auto i : set)
        out.push_back(o.scores[i].grammar);
    return out;
}

std::vector<std::uint64_t> codes(const std::vector<Grammar>& gs) {
    std::vector<std::uint64_t> out;
    for (const auto& g : gs)
        out.push_back(g.matrix().code());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_SUITE("identification") {

TEST_CASE("0110 selects the grammar forbidding 00") {
    const auto candidates = enumerate_grammars(Lexicon(2));
    const auto o = ml_set(parse_word("0110"), Potential::zero(Lexicon(2)), candidates);
    CHECK(o.n == 4);
    REQUIRE(o.ml_set.size() == 1);
    CHECK(o.scores[o.ml_set[0]].grammar == reverse_golden);
    CHECK(o.scores[o.ml_set[0]].log_likelihood == doctest::Approx(std::log(0.0652475842)).epsilon(1e-9));
    CHECK_FALSE(o.scores[1].admissible);
    CHECK(o.scores[1].log_likelihood == kMinusInfinity);
    CHECK_FALSE(o.scores[1].entropy.has_value());
    REQUIRE(o.min_entropy_set.size() == 1);
    CHECK(o.scores[o.min_entropy_set[0]].grammar == reverse_golden);
    CHECK(min_entropy_set(parse_word("0110"), Potential::zero(Lexicon(2)), candidates).min_entropy_set == o.min_entropy_set);
}

TEST_CASE("inadmissible candidates are never selected") {
    Rng rng(8);
    const auto candidates = enumerate_grammars(Lexicon(3));
    const auto phi = Potential::random(Lexicon(3), 2, 1.0, rng);
    const Scorer scorer(phi, candidates);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto truth = scorer.chains()[rng.below(scorer.size())];
        const auto w = sample(truth, 30, seed).word;
        const auto o = scorer.identify(w);
        CHECK_FALSE(o.ml_set.empty());
        for (auto i : o.ml_set)
            CHECK(o.scores[i].admissible);
        for (auto i : o.min_entropy_set)
            CHECK(o.scores[i].admissible);
        for (const auto& s : o.scores)
            CHECK(s.admissible == admits(s.grammar, w));
    }
}

TEST_CASE("no admissible candidate") {
    const auto o = ml_set(parse_word("0011"), Potential::zero(Lexicon(2)), {golden, reverse_golden});
    CHECK(o.no_admissible_candidate);
    CHECK(o.ml_set.empty());
    CHECK(o.min_entropy_set.empty());
}

TEST_CASE("at zero potential the least admitting grammar has least entropy") {
    // comparable admissible pairs are ordered strictly by entropy, so the
    // transition closure, when primitive, is the whole minimum-entropy set
    const auto candidates = enumerate_grammars(Lexicon(3));
    const Scorer scorer(Potential::zero(Lexicon(3)), candidates);
    int checked = 0;
    for (std::size_t k = 0; k < candidates.size(); k += 7) {
        const auto w = sample(scorer.chains()[k], 60, k + 1).word;
        const auto closure = transition_closure(w, Lexicon(3));
        const auto o = scorer.identify(w);
        for (auto i : o.min_entropy_set)
            for (const auto& s : o.scores)
                if (s.admissible && compare(s.grammar, o.scores[i].grammar) == OrderRelation::Less)
                    FAIL("a strictly smaller admissible grammar was left out");
        if (!is_primitive(closure))
            continue;
        ++checked;
        REQUIRE(o.min_entropy_set.size() == 1);
        CHECK(o.scores[o.min_entropy_set[0]].grammar.matrix() == closure);
    }
    CHECK(checked > 5);
}

TEST_CASE("ML prefers the smaller of two comparable admitting grammars on long samples") {
    const Scorer scorer(Potential::zero(Lexicon(2)), {golden, full2});
    const auto truth = gibbs_chain(golden, Potential::zero(Lexicon(2)));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto o = scorer.identify(sample(truth, 400, seed).word);
        REQUIRE(o.ml_set.size() == 1);
        CHECK(o.ml_set[0] == 0);
        CHECK(o.scores[0].log_likelihood > o.scores[1].log_likelihood);
    }
}

TEST_CASE("ties within tolerance are kept") {
    // both grammars give the word 01 measure 1/(1+phi^2) and share an entropy
    const auto o = ml_set(parse_word("01"), Potential::zero(Lexicon(2)), {golden, reverse_golden});
    CHECK(o.ml_set == std::vector<std::size_t>{0, 1});
    CHECK(o.min_entropy_set == std::vector<std::size_t>{0, 1});
    const auto strict = ml_set(parse_word("01"), Potential::zero(Lexicon(2)), {golden, reverse_golden}, 0.0);
    CHECK_FALSE(strict.ml_set.empty());
}

TEST_CASE("relabeling equivariance") {
    Rng rng(31);
    const auto candidates = enumerate_grammars(Lexicon(3));
    const Word perm{2, 0, 1};
    std::vector<Grammar> relabeled;
    for (const auto& g : candidates)
        relabeled.push_back(relabel(g, perm));
    const auto phi = Potential::random(Lexicon(3), 2, 1.0, rng);
    const Scorer a(phi, candidates);
    const Scorer b(phi.relabeled(perm), relabeled);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto w = sample(a.chains()[seed * 11], 40, seed).word;
        Word pw;
        for (auto x : w)
            pw.push_back(perm[static_cast<std::size_t>(x)]);
        const auto oa = a.identify(w);
        const auto ob = b.identify(pw);
        std::vector<Grammar> mapped;
        for (const auto& g : selected(oa, oa.ml_set))
            mapped.push_back(relabel(g, perm));
        CHECK(codes(mapped) == codes(selected(ob, ob.ml_set)));
        mapped.clear();
        for (const auto& g : selected(oa, oa.min_entropy_set))
            mapped.push_back(relabel(g, perm));
        CHECK(codes(mapped) == codes(selected(ob, ob.min_entropy_set)));
        for (std::size_t i = 0; i < oa.scores.size(); ++i)
            if (oa.scores[i].admissible)
                CHECK(oa.scores[i].log_likelihood == doctest::Approx(ob.scores[i].log_likelihood).epsilon(1e-10));
    }
}

TEST_CASE("constant shift of the potential changes nothing") {
    Rng rng(41);
    const auto candidates = enumerate_grammars(Lexicon(2));
    const auto phi = Potential::random(Lexicon(2), 3, 1.0, rng);
    const Scorer a(phi, candidates);
    const Scorer b(phi.shifted(2.5), candidates);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto w = sample(a.chains()[2], 50, seed).word;
        const auto oa = a.identify(w);
        const auto ob = b.identify(w);
        CHECK(oa.ml_set == ob.ml_set);
        CHECK(oa.min_entropy_set == ob.min_entropy_set);
        for (std::size_t i = 0; i < oa.scores.size(); ++i) {
            if (!oa.scores[i].admissible)
                continue;
            CHECK(oa.scores[i].log_likelihood == doctest::Approx(ob.scores[i].log_likelihood).epsilon(1e-10));
            CHECK(*oa.scores[i].entropy == doctest::Approx(*ob.scores[i].entropy).epsilon(1e-10));
        }
    }
}

TEST_CASE("scorer validation") {
    CHECK_THROWS_AS(Scorer(Potential::zero(Lexicon(2)), {}), InvalidArgument);
    CHECK_THROWS_AS(Scorer(Potential::zero(Lexicon(3)), {golden}), InvalidArgument);
    const Scorer s(Potential::zero(Lexicon(2)), {golden});
    CHECK_THROWS_AS(s.identify(Word{0, 2}), InvalidArgument);
    CHECK_THROWS_AS(s.identify(Word{0, 1}, -1.0), InvalidArgument);
}

TEST_CASE("identification curve agrees with scoring each prefix") {
    const auto candidates = enumerate_grammars(Lexicon(2));
    const auto phi = Potential::zero(Lexicon(2));
    const Scorer scorer(phi, candidates);
    const auto truth = gibbs_chain(golden, phi);
    const std::vector<std::size_t> checkpoints{1, 10, 100};
    const auto curve = identify_curve(truth, scorer, checkpoints, 5);
    REQUIRE(curve.size() == 3);
    const auto w = sample(truth, 100, 5).word;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const auto o = scorer.identify(std::span<const Symbol>(w).first(checkpoints[k]));
        CHECK(curve[k].n == checkpoints[k]);
        CHECK(curve[k].ml_set == o.ml_set);
        CHECK(curve[k].min_entropy_set == o.min_entropy_set);
    }
    const std::vector<std::size_t> bad{10, 10};
    CHECK_THROWS_AS(identify_curve(truth, scorer, bad, 1), InvalidArgument);
    const std::vector<std::size_t> zero{0, 10};
    CHECK_THROWS_AS(identify_curve(truth, scorer, zero, 1), InvalidArgument);
}

} // TEST_SUITE
