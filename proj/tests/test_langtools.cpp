#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "treelike/langtools.hpp"

using namespace treelike;

namespace {

std::vector<int> letters_of(const GroupOracle& g, const Word& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (const auto& s : w) out.push_back(g.letter_of(s));
    return out;
}

Word word_from_letters(const GroupOracle& g, const std::vector<int>& letters) {
    Word w;
    w.reserve(letters.size());
    for (int l : letters) w.push_back(g.letter_symbol(l));
    return w;
}

// Walks letters from the identity vertex; norms along the way are at most
// the walk length, so the walk never leaves a large enough ball.
VertexId walk(const CayleyBall& ball, const std::vector<int>& letters, int start, int len) {
    VertexId v = 0;
    for (int t = 0; t < len; ++t) {
        v = ball.neighbor(v, letters[static_cast<size_t>(start + t)]);
        REQUIRE(v != NO_VERTEX);
    }
    return v;
}

// Independent k-local geodesity: every contiguous factor of length at most
// k is geodesic, each one measured by its own walk.
bool brute_locally_geodesic(const CayleyBall& ball, const std::vector<int>& letters, int k) {
    const int n = static_cast<int>(letters.size());
    for (int start = 0; start < n; ++start)
        for (int len = 1; len <= k && start + len <= n; ++len)
            if (ball.radius_label(walk(ball, letters, start, len)) != len) return false;
    return true;
}

// All letter tuples of length exactly n, odometer order (= lexicographic).
template <typename Fn>
void for_each_tuple(int letters, int n, Fn fn) {
    std::vector<int> t(static_cast<size_t>(n), 0);
    while (true) {
        fn(t);
        int i = n - 1;
        while (i >= 0 && t[static_cast<size_t>(i)] == letters - 1) t[static_cast<size_t>(i--)] = 0;
        if (i < 0) return;
        ++t[static_cast<size_t>(i)];
    }
}

// One-pass cancellation with a stack; agrees with free_reduce by the
// bridging checks below, then scales to exhaustive sweeps cheaply.
std::vector<int> stack_reduce(int rank, const std::vector<int>& letters) {
    std::vector<int> out;
    for (int l : letters) {
        int inv = l < rank ? l + rank : l - rank;
        if (!out.empty() && out.back() == inv)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

// Exhaustive simultaneous walk of the PDA and a cancellation stack over
// every word up to maxLen, with agreement tallies checked at every node.
struct AgreementSweep {
    const PushdownAutomaton& pda;
    int rank;
    int maxLen;
    bool compareContent = false;  // full stack-content comparison per node
    long long nodes = 0;
    long long verdictMismatches = 0;
    long long shapeMismatches = 0;
    std::vector<int> pdaStack;
    std::vector<int> reduced;

    void run(int state, int depth) {
        ++nodes;
        const bool pdaAccepts = pda.accepting[static_cast<size_t>(state)] &&
                                pdaStack.size() == 1 && pdaStack[0] == pda.bottomSymbol;
        if (pdaAccepts != reduced.empty()) ++verdictMismatches;
        if (pdaStack.size() != reduced.size() + 1) ++shapeMismatches;
        if (compareContent) {
            for (std::size_t i = 0; i < reduced.size() && i + 1 < pdaStack.size(); ++i)
                if (pdaStack[i + 1] != reduced[i] + 1) ++shapeMismatches;
        }
        if (depth == maxLen) return;
        for (int l = 0; l < 2 * rank; ++l) {
            const int top = pdaStack.back();
            const PdaAction& a = pda.action(state, l, top);
            const bool popped = a.stack == PdaAction::Stack::Pop;
            if (popped)
                pdaStack.pop_back();
            else
                pdaStack.push_back(a.pushSymbol);
            const int inv = l < rank ? l + rank : l - rank;
            const bool cancel = !reduced.empty() && reduced.back() == inv;
            if (cancel)
                reduced.pop_back();
            else
                reduced.push_back(l);
            run(a.nextState, depth + 1);
            if (cancel)
                reduced.push_back(inv);
            else
                reduced.pop_back();
            if (popped)
                pdaStack.push_back(top);
            else
                pdaStack.pop_back();
        }
    }
};

// Same sweep against the group oracle itself: verdict = key is identity.
struct KeySweep {
    const PushdownAutomaton& pda;
    const GroupOracle& g;
    int maxLen;
    long long nodes = 0;
    long long mismatches = 0;
    std::vector<int> pdaStack;

    void run(int state, int depth, const GroupOracle::Key& key) {
        ++nodes;
        const bool pdaAccepts = pda.accepting[static_cast<size_t>(state)] &&
                                pdaStack.size() == 1 && pdaStack[0] == pda.bottomSymbol;
        if (pdaAccepts != (key == g.identity())) ++mismatches;
        if (depth == maxLen) return;
        for (int l = 0; l < g.letter_count(); ++l) {
            const int top = pdaStack.back();
            const PdaAction& a = pda.action(state, l, top);
            const bool popped = a.stack == PdaAction::Stack::Pop;
            if (popped)
                pdaStack.pop_back();
            else
                pdaStack.push_back(a.pushSymbol);
            run(a.nextState, depth + 1, g.right_multiply(key, l));
            if (popped)
                pdaStack.push_back(top);
            else
                pdaStack.pop_back();
        }
    }
};

std::set<std::string> word_set(const std::vector<Word>& words) {
    std::set<std::string> out;
    for (const Word& w : words) out.insert(word_to_string(w));
    return out;
}

}  // namespace

TEST_CASE("wp_member recognizes the word problem language") {
    auto f2 = make_oracle("free:2");
    auto zn = make_oracle("zn:2");

    CHECK(wp_member(*f2, Word{}));
    CHECK(wp_member(*zn, Word{}));
    CHECK_FALSE(wp_member(*f2, parse_word("a b a^-1 b^-1")));
    CHECK(wp_member(*zn, parse_word("x y x^-1 y^-1")));
    CHECK_FALSE(wp_member(*zn, parse_word("x x y")));
    CHECK(wp_member(*f2, parse_word("a b b^-1 a^-1")));

    auto c5 = make_oracle("cyclic:5");
    CHECK(wp_member(*c5, parse_word("a a a a a")));
    CHECK_FALSE(wp_member(*c5, parse_word("a a a")));

    auto lamp = make_oracle("lamplighter");
    CHECK(wp_member(*lamp, parse_word("a a")));
    CHECK_FALSE(wp_member(*lamp, parse_word("t a t^-1 a")));

    auto fp = make_oracle("freeprod:2,3");
    CHECK(wp_member(*fp, parse_word("a a")));
    CHECK_FALSE(wp_member(*fp, parse_word("b b")));
    CHECK(wp_member(*fp, parse_word("b b b")));

    CHECK_THROWS_AS(wp_member(*f2, parse_word("c")), Error);
    CHECK_THROWS_AS(wp_member(*f2, Word{GeneratorSymbol{"a", 2}}), Error);

    // Against the standalone reducer: membership in the free group is
    // exactly full cancellation. Every rank-2 word of length at most 5.
    long long disagreements = 0;
    for (int n = 0; n <= 5; ++n) {
        for_each_tuple(4, n, [&](const std::vector<int>& t) {
            Word w = word_from_letters(*f2, t);
            if (wp_member(*f2, w) != free_reduce(w).empty()) ++disagreements;
        });
    }
    CHECK(disagreements == 0);
}

TEST_CASE("is_geodesic measures words against the group norm") {
    auto f2 = make_oracle("free:2");
    auto zn = make_oracle("zn:2");

    CHECK(is_geodesic(f2, parse_word("a b a^-1")));
    CHECK_FALSE(is_geodesic(f2, parse_word("a a^-1")));
    CHECK(is_geodesic(f2, Word{}));
    CHECK_FALSE(is_geodesic(zn, parse_word("x y x^-1")));
    CHECK(is_geodesic(zn, parse_word("x x y y")));

    auto c12 = make_oracle("cyclic:12");
    CHECK(is_geodesic(c12, parse_word("a a a a a a")));
    CHECK_FALSE(is_geodesic(c12, parse_word("a a a a a a a")));

    CayleyBall ball(zn, 4);
    CHECK(is_geodesic(ball, parse_word("x y")));
    CHECK_FALSE(is_geodesic(ball, parse_word("x x^-1")));
    CHECK_THROWS_WITH_AS(is_geodesic(ball, parse_word("x x x x x")),
                         doctest::Contains("exceeds ball radius"), Error);

    // Ball and on-demand overloads agree on every word of length <= 3.
    long long disagreements = 0;
    for (int n = 0; n <= 3; ++n) {
        for_each_tuple(4, n, [&](const std::vector<int>& t) {
            Word w = word_from_letters(*zn, t);
            if (is_geodesic(ball, w) != is_geodesic(zn, w)) ++disagreements;
        });
    }
    CHECK(disagreements == 0);
}

TEST_CASE("factors of geodesics are geodesic") {
    auto zn = make_oracle("zn:2");
    CayleyBall znBall(zn, 6);
    long long geodesics = 0, badFactors = 0;
    for (int n = 0; n <= 6; ++n) {
        for_each_tuple(4, n, [&](const std::vector<int>& t) {
            if (znBall.radius_label(walk(znBall, t, 0, n)) != n) return;
            ++geodesics;
            for (int start = 0; start < n; ++start)
                for (int len = 1; start + len <= n; ++len)
                    if (znBall.radius_label(walk(znBall, t, start, len)) != len) ++badFactors;
        });
    }
    CHECK(geodesics > 100);
    CHECK(badFactors == 0);

    auto lamp = make_oracle("lamplighter");
    CayleyBall lampBall(lamp, 5);
    geodesics = 0;
    badFactors = 0;
    for (int n = 0; n <= 5; ++n) {
        for_each_tuple(4, n, [&](const std::vector<int>& t) {
            if (lampBall.radius_label(walk(lampBall, t, 0, n)) != n) return;
            ++geodesics;
            for (int start = 0; start < n; ++start)
                for (int len = 1; start + len <= n; ++len)
                    if (lampBall.radius_label(walk(lampBall, t, start, len)) != len) ++badFactors;
        });
    }
    CHECK(geodesics > 100);
    CHECK(badFactors == 0);
}

TEST_CASE("local survey finds nothing over a free basis") {
    auto f2 = make_oracle("free:2");

    auto rep = local_geodesic_survey(f2, 2, 8);
    CHECK(rep.k == 2);
    CHECK(rep.maxLength == 8);
    CHECK(rep.counterexamples.empty());
    CHECK(rep.complete);
    long long expected = 1;  // reduced words: 4 * 3^(n-1) per length n
    long long layer = 4;
    for (int n = 1; n <= 8; ++n) {
        expected += layer;
        layer *= 3;
    }
    CHECK(rep.wordsVisited == expected);
    CHECK(rep.wordsVisited == 13121);

    CHECK(local_geodesic_survey(f2, 2, 4).wordsVisited == 161);
    CHECK(local_geodesic_survey(f2, 3, 8).counterexamples.empty());

    auto f3 = make_oracle("free:3");
    auto rep3 = local_geodesic_survey(f3, 2, 6);
    CHECK(rep3.counterexamples.empty());
    long long expected3 = 1;
    layer = 6;
    for (int n = 1; n <= 6; ++n) {
        expected3 += layer;
        layer *= 5;
    }
    CHECK(rep3.wordsVisited == expected3);

    // k = 1 never prunes on norm-1 letters, so the list is every word
    // that fails to be freely reduced.
    auto rep1 = local_geodesic_survey(f2, 1, 8);
    long long allWords = 0, power = 1;
    for (int n = 0; n <= 8; ++n) {
        allWords += power;
        power *= 4;
    }
    CHECK(rep1.wordsVisited == allWords);
    CHECK(static_cast<long long>(rep1.counterexamples.size()) == allWords - 13121);
    CHECK(word_to_string(rep1.counterexamples[0]) == "a a^-1");
}

TEST_CASE("local survey pins the abelian staircase") {
    auto zn = make_oracle("zn:2");
    auto rep = local_geodesic_survey(zn, 2, 8);
    CHECK(rep.complete);
    CHECK(rep.wordsVisited == 13121);
    CHECK(rep.counterexamples.size() == 11112);
    CHECK(word_to_string(rep.counterexamples[0]) == "x y x^-1");

    auto found = word_set(rep.counterexamples);
    CHECK(found.count("x x y y x^-1 x^-1 y^-1 y^-1") == 1);
    CHECK(found.size() == rep.counterexamples.size());  // no duplicates

    // Every listed word is 2-locally geodesic yet not geodesic, each side
    // checked by independent ball walks.
    CayleyBall ball(zn, 8);
    long long bad = 0;
    for (const Word& w : rep.counterexamples) {
        auto letters = letters_of(*zn, w);
        const int n = static_cast<int>(letters.size());
        if (n > 8) ++bad;
        if (!brute_locally_geodesic(ball, letters, 2)) ++bad;
        if (ball.radius_label(walk(ball, letters, 0, n)) == n) ++bad;
    }
    CHECK(bad == 0);

    // Conservation: a surveyed word is either geodesic or listed, and the
    // k >= L run visits exactly the geodesic words.
    auto geo = local_geodesic_survey(zn, 8, 8);
    CHECK(geo.counterexamples.empty());
    CHECK(geo.wordsVisited == 2009);
    CHECK(static_cast<long long>(rep.counterexamples.size()) + geo.wordsVisited ==
          rep.wordsVisited);

    auto rep3 = local_geodesic_survey(zn, 3, 8);
    CHECK(rep3.counterexamples.size() == 1928);
    CHECK(word_to_string(rep3.counterexamples[0]) == "x y y x^-1");
    auto rep312 = local_geodesic_survey(zn, 3, 12);
    CHECK(word_set(rep312.counterexamples)
              .count("x x x y y y x^-1 x^-1 x^-1 y^-1 y^-1 y^-1") == 1);

    // Norm-1 letters again: k = 1 and k = 0 run unpruned and agree.
    auto repK1 = local_geodesic_survey(zn, 1, 4);
    auto repK0 = local_geodesic_survey(zn, 0, 4);
    CHECK(repK1.wordsVisited == 341);
    CHECK(repK0.wordsVisited == 341);
    CHECK(repK1.counterexamples.size() == 236);
    CHECK(word_set(repK1.counterexamples) == word_set(repK0.counterexamples));
}

TEST_CASE("local survey matches a brute-force recomputation at small length") {
    for (const char* spec : {"zn:2", "lamplighter", "freeprod:2,3", "cyclic:12"}) {
        auto g = make_oracle(spec);
        CayleyBall ball(g, 5);
        std::vector<std::string> expected;
        for (int n = 1; n <= 5; ++n) {
            for_each_tuple(g->letter_count(), n, [&](const std::vector<int>& t) {
                if (!brute_locally_geodesic(ball, t, 2)) return;
                if (ball.radius_label(walk(ball, t, 0, n)) == n) return;
                expected.push_back(word_to_string(word_from_letters(*g, t)));
            });
        }
        auto rep = local_geodesic_survey(g, 2, 5);
        std::vector<std::string> got;
        for (const Word& w : rep.counterexamples) got.push_back(word_to_string(w));
        // The odometer emits each length in lexicographic order, shorter
        // lengths first: the same order the survey promises.
        CHECK(got == expected);
    }
}

TEST_CASE("survey counterexamples shrink as the factor window grows") {
    auto zn = make_oracle("zn:2");
    auto k2 = word_set(local_geodesic_survey(zn, 2, 8).counterexamples);
    auto k3 = word_set(local_geodesic_survey(zn, 3, 8).counterexamples);
    auto k4 = word_set(local_geodesic_survey(zn, 4, 8).counterexamples);
    CHECK(std::includes(k2.begin(), k2.end(), k3.begin(), k3.end()));
    CHECK(std::includes(k3.begin(), k3.end(), k4.begin(), k4.end()));

    // Beyond the length bound the factor is the whole word.
    auto k8 = local_geodesic_survey(zn, 8, 8);
    auto k9 = local_geodesic_survey(zn, 9, 8);
    CHECK(k8.counterexamples.empty());
    CHECK(k9.counterexamples.empty());
    CHECK(k8.wordsVisited == k9.wordsVisited);

    auto c12 = make_oracle("cyclic:12");
    auto cRep = local_geodesic_survey(c12, 2, 8);
    std::set<std::string> expected;
    for (const char* w : {"a a a a a a a", "a a a a a a a a"}) expected.insert(w);
    for (const char* w : {"a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1",
                          "a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1"})
        expected.insert(w);
    CHECK(word_set(cRep.counterexamples) == expected);
    auto cClean = local_geodesic_survey(c12, 7, 8);
    CHECK(cClean.counterexamples.empty());
    CHECK(cClean.wordsVisited == 13);
}

TEST_CASE("survey handles torsion letters and free products") {
    auto lamp = make_oracle("lamplighter");
    auto rep = local_geodesic_survey(lamp, 2, 8);
    CHECK(rep.counterexamples.size() == 1560);
    CHECK(word_to_string(rep.counterexamples[0]) == "a t a t^-1 a");

    CayleyBall ball(lamp, 8);
    long long bad = 0;
    for (std::size_t i = 0; i < rep.counterexamples.size(); i += 97) {
        auto letters = letters_of(*lamp, rep.counterexamples[i]);
        if (!brute_locally_geodesic(ball, letters, 2)) ++bad;
        if (ball.radius_label(walk(ball, letters, 0, static_cast<int>(letters.size()))) ==
            static_cast<int>(letters.size()))
            ++bad;
    }
    CHECK(bad == 0);

    auto fp = make_oracle("freeprod:2,3");
    auto fpRep = local_geodesic_survey(fp, 2, 8);
    CHECK(fpRep.counterexamples.empty());
    CHECK(fpRep.wordsVisited == 1021);
    CHECK(fpRep.complete);
}

TEST_CASE("survey budget cuts to a clean enumeration prefix") {
    auto zn = make_oracle("zn:2");
    auto full = local_geodesic_survey(zn, 2, 8);

    auto cut = local_geodesic_survey(zn, 2, 8, 100);
    CHECK_FALSE(cut.complete);
    CHECK(cut.wordsVisited == 100);
    REQUIRE(cut.counterexamples.size() <= full.counterexamples.size());
    for (std::size_t i = 0; i < cut.counterexamples.size(); ++i)
        CHECK(word_to_string(cut.counterexamples[i]) ==
              word_to_string(full.counterexamples[i]));

    auto tiny = local_geodesic_survey(zn, 2, 8, 1);
    CHECK_FALSE(tiny.complete);
    CHECK(tiny.wordsVisited == 1);
    CHECK(tiny.counterexamples.empty());

    CHECK(local_geodesic_survey(zn, 2, 8, 13121).complete);
    auto justShort = local_geodesic_survey(zn, 2, 8, 13120);
    CHECK_FALSE(justShort.complete);
    CHECK(justShort.wordsVisited == 13120);

    auto empty = local_geodesic_survey(zn, 2, 0);
    CHECK(empty.wordsVisited == 1);
    CHECK(empty.counterexamples.empty());
    CHECK(empty.complete);

    CHECK_THROWS_AS(local_geodesic_survey(zn, -1, 8), Error);
    CHECK_THROWS_AS(local_geodesic_survey(zn, 2, -1), Error);
    CHECK_THROWS_AS(local_geodesic_survey(zn, 2, 8, 0), Error);
    CHECK_THROWS_AS(local_geodesic_survey(nullptr, 2, 8), Error);
}

TEST_CASE("survey lists counterexamples in length-lexicographic order") {
    auto check_order = [](std::shared_ptr<const GroupOracle> g, const GeodesicReport& rep) {
        long long outOfOrder = 0;
        for (std::size_t i = 1; i < rep.counterexamples.size(); ++i) {
            auto prev = letters_of(*g, rep.counterexamples[i - 1]);
            auto cur = letters_of(*g, rep.counterexamples[i]);
            if (prev.size() != cur.size()) {
                if (prev.size() > cur.size()) ++outOfOrder;
            } else if (!(prev < cur)) {
                ++outOfOrder;
            }
        }
        CHECK(outOfOrder == 0);
    };
    auto zn = make_oracle("zn:2");
    check_order(zn, local_geodesic_survey(zn, 2, 8));
    auto f2 = make_oracle("free:2");
    check_order(f2, local_geodesic_survey(f2, 1, 6));
}

TEST_CASE("free cancellation pda has the expected shape") {
    auto pda = free_wp_pda(2);
    CHECK(pda.stateCount == 1);
    CHECK(pda.initialState == 0);
    REQUIRE(pda.accepting.size() == 1);
    CHECK(pda.accepting[0]);
    CHECK(pda.generatorNames == std::vector<std::string>{"a", "b"});
    CHECK(pda.stackAlphabet == std::vector<std::string>{"$", "a", "b", "a^-1", "b^-1"});
    CHECK(pda.bottomSymbol == 0);
    CHECK(pda.letter_count() == 4);
    CHECK(pda.transitions.size() == 4u * 5u);

    // Reading x pops exactly when the top holds x's inverse.
    for (int l = 0; l < 4; ++l) {
        const int inverseTop = 1 + (l < 2 ? l + 2 : l - 2);
        for (int top = 0; top < 5; ++top) {
            const PdaAction& a = pda.action(0, l, top);
            REQUIRE(a.defined());
            CHECK(a.nextState == 0);
            if (top == inverseTop) {
                CHECK(a.stack == PdaAction::Stack::Pop);
            } else {
                CHECK(a.stack == PdaAction::Stack::Push);
                CHECK(a.pushSymbol == 1 + l);
            }
        }
    }

    CHECK(pda.letter_of(GeneratorSymbol{"a", 1}) == 0);
    CHECK(pda.letter_of(GeneratorSymbol{"b", -1}) == 3);
    CHECK_THROWS_WITH_AS(pda.letter_of(GeneratorSymbol{"c", 1}), doctest::Contains("alphabet"),
                         Error);
    CHECK_THROWS_AS(pda.letter_of(GeneratorSymbol{"a", 2}), Error);

    CHECK(free_wp_pda(1).stackAlphabet == std::vector<std::string>{"$", "a", "a^-1"});
    CHECK(free_wp_pda(3).generatorNames == std::vector<std::string>{"a", "b", "c"});
    CHECK_THROWS_AS(free_wp_pda(0), Error);
    CHECK_THROWS_AS(free_wp_pda(27), Error);

    CHECK_THROWS_AS(pda.action(0, 4, 0), Error);
    CHECK_THROWS_AS(pda.action(1, 0, 0), Error);
    auto broken = free_wp_pda(1);
    CHECK_THROWS_AS(broken.set_action(0, 0, 3, PdaAction{0, PdaAction::Stack::Keep, -1}), Error);
    CHECK_THROWS_AS(broken.set_action(0, 0, 0, PdaAction{0, PdaAction::Stack::Push, 9}), Error);
}

TEST_CASE("pda accepts exactly the words that cancel away") {
    auto pda = free_wp_pda(2);

    auto r = pda_run(pda, parse_word("a b b^-1 a^-1"));
    CHECK(r.accepted);
    CHECK(r.maxStackHeight == 2);
    REQUIRE(r.trace.size() == 5);
    std::vector<int> heights;
    for (const auto& step : r.trace) {
        CHECK(step.state == 0);
        heights.push_back(step.stackHeight);
    }
    CHECK(heights == std::vector<int>{0, 1, 2, 1, 0});

    CHECK(pda_run(pda, parse_word("a a^-1")).accepted);
    CHECK(pda_run(pda, parse_word("b^-1 b")).accepted);
    CHECK_FALSE(pda_run(pda, parse_word("a b")).accepted);
    CHECK_FALSE(pda_run(pda, parse_word("a a")).accepted);
    CHECK(pda_run(pda, parse_word("a a")).maxStackHeight == 2);

    auto commutator = pda_run(pda, parse_word("a b a^-1 b^-1"));
    CHECK_FALSE(commutator.accepted);
    CHECK(commutator.maxStackHeight == 4);  // nothing adjacent ever cancels

    auto empty = pda_run(pda, Word{});
    CHECK(empty.accepted);
    REQUIRE(empty.trace.size() == 1);
    CHECK(empty.trace[0].state == 0);
    CHECK(empty.trace[0].stackHeight == 0);
    CHECK(empty.maxStackHeight == 0);

    CHECK_THROWS_AS(pda_run(pda, parse_word("c")), Error);
}

TEST_CASE("pda agrees with free reduction on every short word") {
    // The cancellation stack is first bridged to the standalone reducer
    // and the oracle, then carried through exhaustive sweeps.
    auto f3 = make_oracle("free:3");
    long long bridgeBad = 0;
    for (int n = 0; n <= 5; ++n) {
        for_each_tuple(6, n, [&](const std::vector<int>& t) {
            Word w = word_from_letters(*f3, t);
            Word reducedWord = free_reduce(w);
            auto viaStack = stack_reduce(3, t);
            if (viaStack != letters_of(*f3, reducedWord)) ++bridgeBad;
            if (wp_member(*f3, w) != viaStack.empty()) ++bridgeBad;
        });
    }
    CHECK(bridgeBad == 0);

    for (int rank = 1; rank <= 3; ++rank) {
        auto pda = free_wp_pda(rank);
        AgreementSweep sweep{pda, rank, 10};
        sweep.pdaStack.push_back(pda.bottomSymbol);
        sweep.run(pda.initialState, 0);
        long long nodes = 0, layer = 1;
        for (int n = 0; n <= 10; ++n) {
            nodes += layer;
            layer *= 2 * rank;
        }
        CHECK(sweep.nodes == nodes);
        CHECK(sweep.verdictMismatches == 0);
        CHECK(sweep.shapeMismatches == 0);
    }

    // Full stack-content comparison at a smaller depth: above the marker
    // the pda stack holds exactly the freely reduced word.
    auto pda3 = free_wp_pda(3);
    AgreementSweep content{pda3, 3, 6};
    content.compareContent = true;
    content.pdaStack.push_back(pda3.bottomSymbol);
    content.run(pda3.initialState, 0);
    CHECK(content.verdictMismatches == 0);
    CHECK(content.shapeMismatches == 0);

    // Against the oracle keys directly.
    auto pda2 = free_wp_pda(2);
    auto f2 = make_oracle("free:2");
    KeySweep keys2{pda2, *f2, 10};
    keys2.pdaStack.push_back(pda2.bottomSymbol);
    keys2.run(pda2.initialState, 0, f2->identity());
    CHECK(keys2.nodes == 1398101);
    CHECK(keys2.mismatches == 0);

    KeySweep keys3{pda3, *f3, 7};
    keys3.pdaStack.push_back(pda3.bottomSymbol);
    keys3.run(pda3.initialState, 0, f3->identity());
    CHECK(keys3.mismatches == 0);
}

TEST_CASE("pda run reports undefined transitions and stack exhaustion") {
    // A hand-built counter machine for a^n a^-n with no rule once the
    // bottom marker is exposed to an inverse letter.
    PushdownAutomaton counter;
    counter.generatorNames = {"a"};
    counter.stateCount = 1;
    counter.initialState = 0;
    counter.accepting = {true};
    counter.stackAlphabet = {"$", "A"};
    counter.bottomSymbol = 0;
    counter.transitions.assign(2u * 2u, PdaAction{});
    counter.set_action(0, 0, 0, PdaAction{0, PdaAction::Stack::Push, 1});
    counter.set_action(0, 0, 1, PdaAction{0, PdaAction::Stack::Push, 1});
    counter.set_action(0, 1, 1, PdaAction{0, PdaAction::Stack::Pop, -1});

    CHECK(pda_run(counter, parse_word("a a a^-1 a^-1")).accepted);
    auto fail = pda_run(counter, parse_word("a^-1"));
    CHECK_FALSE(fail.accepted);
    CHECK(fail.undefinedTransition);
    CHECK(fail.failPosition == 1);
    auto late = pda_run(counter, parse_word("a a^-1 a^-1"));
    CHECK_FALSE(late.accepted);
    CHECK(late.undefinedTransition);
    CHECK(late.failPosition == 3);
    CHECK(late.trace.size() == 3);  // initial row plus the two defined steps
    auto unbalanced = pda_run(counter, parse_word("a a a^-1"));
    CHECK_FALSE(unbalanced.accepted);  // accepting state, but a symbol remains
    CHECK_FALSE(unbalanced.undefinedTransition);

    // Popping the bottom marker strands the machine: no top to read next,
    // and the bare-stack acceptance condition can no longer hold.
    PushdownAutomaton popper = counter;
    popper.set_action(0, 0, 0, PdaAction{0, PdaAction::Stack::Pop, -1});
    auto stranded = pda_run(popper, parse_word("a"));
    CHECK_FALSE(stranded.accepted);
    CHECK_FALSE(stranded.undefinedTransition);
    CHECK(stranded.trace.back().stackHeight == -1);
    auto starved = pda_run(popper, parse_word("a a"));
    CHECK(starved.undefinedTransition);
    CHECK(starved.failPosition == 2);

    // Keep leaves the stack alone; this machine accepts every a^n.
    PushdownAutomaton keeper;
    keeper.generatorNames = {"a"};
    keeper.stateCount = 1;
    keeper.initialState = 0;
    keeper.accepting = {true};
    keeper.stackAlphabet = {"$"};
    keeper.bottomSymbol = 0;
    keeper.transitions.assign(2u, PdaAction{});
    keeper.set_action(0, 0, 0, PdaAction{0, PdaAction::Stack::Keep, -1});
    auto kept = pda_run(keeper, parse_word("a a a"));
    CHECK(kept.accepted);
    CHECK(kept.maxStackHeight == 0);
    CHECK(pda_run(keeper, parse_word("a a^-1")).undefinedTransition);

    // State transitions show up in the trace.
    PushdownAutomaton twoState;
    twoState.generatorNames = {"a"};
    twoState.stateCount = 2;
    twoState.initialState = 0;
    twoState.accepting = {true, false};
    twoState.stackAlphabet = {"$", "A"};
    twoState.bottomSymbol = 0;
    twoState.transitions.assign(2u * 2u * 2u, PdaAction{});
    twoState.set_action(0, 0, 0, PdaAction{1, PdaAction::Stack::Push, 1});
    twoState.set_action(1, 1, 1, PdaAction{0, PdaAction::Stack::Pop, -1});
    auto swing = pda_run(twoState, parse_word("a a^-1"));
    CHECK(swing.accepted);
    std::vector<int> states;
    for (const auto& step : swing.trace) states.push_back(step.state);
    CHECK(states == std::vector<int>{0, 1, 0});
    CHECK_FALSE(pda_run(twoState, parse_word("a")).accepted);
    CHECK(pda_run(twoState, parse_word("a a")).failPosition == 2);

    PushdownAutomaton malformed = counter;
    malformed.accepting.clear();
    CHECK_THROWS_AS(pda_run(malformed, Word{}), Error);
    PushdownAutomaton badBottom = counter;
    badBottom.bottomSymbol = 7;
    CHECK_THROWS_AS(pda_run(badBottom, Word{}), Error);
}

TEST_CASE("language reports serialize the frozen shapes") {
    auto pdaText = pda_json(free_wp_pda(1));
    CHECK(pdaText == pda_json(free_wp_pda(1)));
    CHECK(pdaText.back() == '\n');
    auto pj = nlohmann::json::parse(pdaText);
    CHECK(pj["states"] == 1);
    CHECK(pj["initialState"] == 0);
    CHECK(pj["accepting"] == nlohmann::json::array({0}));
    CHECK(pj["generators"] == nlohmann::json::array({"a"}));
    CHECK(pj["stackAlphabet"] == nlohmann::json::array({"$", "a", "a^-1"}));
    CHECK(pj["bottomSymbol"] == "$");
    REQUIRE(pj["transitions"].size() == 6);
    CHECK(pj["transitions"][0]["letter"] == "a");
    CHECK(pj["transitions"][0]["top"] == "$");
    CHECK(pj["transitions"][0]["action"] == "push");
    CHECK(pj["transitions"][0]["push"] == "a");
    bool sawPop = false;
    for (const auto& t : pj["transitions"])
        if (t["letter"] == "a" && t["top"] == "a^-1") {
            sawPop = true;
            CHECK(t["action"] == "pop");
            CHECK_FALSE(t.contains("push"));
        }
    CHECK(sawPop);
    CHECK(nlohmann::json::parse(pda_json(free_wp_pda(2)))["transitions"].size() == 20);

    auto zn = make_oracle("zn:2");
    auto rep = local_geodesic_survey(zn, 2, 4);
    auto surveyText = survey_json(rep);
    CHECK(surveyText == survey_json(rep));
    CHECK(surveyText.back() == '\n');
    auto sj = nlohmann::json::parse(surveyText);
    CHECK(sj["k"] == 2);
    CHECK(sj["L"] == 4);
    CHECK(sj["complete"] == true);
    CHECK(sj["wordsVisited"] == 161);
    REQUIRE(sj["counterexamples"].size() == rep.counterexamples.size());
    CHECK(sj["counterexamples"][0] == "x y x^-1");
}
