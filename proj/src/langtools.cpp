#include "treelike/langtools.hpp"

#include <algorithm>
#include <utility>

#include "json.hpp"

namespace treelike {

namespace {

std::string letter_name(const std::vector<std::string>& names, int letter) {
    const int k = static_cast<int>(names.size());
    if (letter < k) return names[static_cast<size_t>(letter)];
    return names[static_cast<size_t>(letter - k)] + "^-1";
}

}  // namespace

bool wp_member(const GroupOracle& oracle, const Word& w) {
    return evaluate(oracle, w) == oracle.identity();
}

bool is_geodesic(std::shared_ptr<const GroupOracle> oracle, const Word& w) {
    if (!oracle) throw Error("is_geodesic: null oracle");
    if (w.empty()) return true;
    CayleyBall ball = build_ball(std::move(oracle), static_cast<int>(w.size()));
    return is_geodesic(ball, w);
}

bool is_geodesic(const CayleyBall& ball, const Word& w) {
    const int n = static_cast<int>(w.size());
    if (n > ball.radius())
        throw Error("is_geodesic: word length " + std::to_string(n) + " exceeds ball radius " +
                    std::to_string(ball.radius()));
    VertexId v = ball.require_vertex(evaluate(ball.oracle(), w));
    return ball.radius_label(v) == n;
}

GeodesicReport local_geodesic_survey(std::shared_ptr<const GroupOracle> oracle, int k,
                                     int maxLength, long long nodeBudget) {
    if (!oracle) throw Error("local_geodesic_survey: null oracle");
    if (k < 0) throw Error("local_geodesic_survey: k must be >= 0");
    if (maxLength < 0) throw Error("local_geodesic_survey: maxLength must be >= 0");
    if (nodeBudget < 1) throw Error("local_geodesic_survey: node budget must be >= 1");

    GeodesicReport report;
    report.k = k;
    report.maxLength = maxLength;

    const GroupOracle& group = *oracle;
    const int letters = group.letter_count();
    CayleyBall ball = build_ball(std::move(oracle), maxLength);

    // One arena node per k-locally geodesic word. Nodes are appended while
    // scanning the arena front to back, so arena order is breadth-first:
    // shorter words first, ties in lexicographic letter order. That is the
    // enumeration order, and it makes a budget cut a clean prefix.
    struct Node {
        int parent;  // arena index, -1 at the root
        int letter;  // last letter, -1 at the root
        VertexId vertex;
        int length;
    };
    std::vector<Node> arena;
    arena.push_back(Node{-1, -1, 0, 0});

    std::vector<std::size_t> hits;  // arena indices of counterexamples
    std::vector<int> factor;        // trailing-letter scratch, oldest first

    for (std::size_t i = 0; i < arena.size() && report.complete; ++i) {
        const int parentLength = arena[i].length;
        if (parentLength >= maxLength) continue;
        for (int l = 0; l < letters; ++l) {
            const Node parent = arena[i];  // arena may reallocate below
            VertexId child = ball.neighbor(parent.vertex, l);
            if (child == NO_VERTEX)
                throw Error("local_geodesic_survey: walk left the ball");  // norms <= maxLength
            const int length = parentLength + 1;

            // The only factor the extension adds that is not already inside
            // a checked one is the trailing factor of length min(k, length);
            // shorter trailing factors are suffixes of it, hence geodesic
            // whenever it is.
            const int f = std::min(k, length);
            if (f > 0) {
                VertexId factorVertex;
                if (f == length) {
                    factorVertex = child;
                } else {
                    factor.clear();
                    int a = static_cast<int>(i);
                    for (int t = 0; t < f - 1; ++t) {
                        factor.push_back(arena[static_cast<size_t>(a)].letter);
                        a = arena[static_cast<size_t>(a)].parent;
                    }
                    std::reverse(factor.begin(), factor.end());
                    factor.push_back(l);
                    factorVertex = 0;
                    for (int letter : factor) factorVertex = ball.neighbor(factorVertex, letter);
                }
                if (ball.radius_label(factorVertex) != f) continue;  // prune the subtree
            }

            if (arena.size() >= static_cast<std::size_t>(nodeBudget)) {
                report.complete = false;
                break;
            }
            arena.push_back(Node{static_cast<int>(i), l, child, length});
            if (ball.radius_label(child) != length) hits.push_back(arena.size() - 1);
        }
    }
    report.wordsVisited = static_cast<long long>(arena.size());

    report.counterexamples.reserve(hits.size());
    for (std::size_t idx : hits) {
        std::vector<int> rev;
        for (int a = static_cast<int>(idx); arena[static_cast<size_t>(a)].parent >= 0;
             a = arena[static_cast<size_t>(a)].parent)
            rev.push_back(arena[static_cast<size_t>(a)].letter);
        Word w;
        w.reserve(rev.size());
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) w.push_back(group.letter_symbol(*it));
        report.counterexamples.push_back(std::move(w));
    }
    return report;
}

int PushdownAutomaton::letter_of(const GeneratorSymbol& s) const {
    if (s.exponent != 1 && s.exponent != -1)
        throw Error("pda: unsupported exponent on symbol '" + s.name + "'");
    for (int i = 0; i < rank(); ++i) {
        if (generatorNames[static_cast<size_t>(i)] == s.name)
            return s.exponent == 1 ? i : i + rank();
    }
    throw Error("pda: symbol '" + s.name + "' is not over this automaton's alphabet");
}

const PdaAction& PushdownAutomaton::action(int state, int letter, int top) const {
    const int stackSize = static_cast<int>(stackAlphabet.size());
    if (state < 0 || state >= stateCount || letter < 0 || letter >= letter_count() || top < 0 ||
        top >= stackSize)
        throw Error("pda: transition lookup out of range");
    return transitions[static_cast<size_t>((state * letter_count() + letter) * stackSize + top)];
}

void PushdownAutomaton::set_action(int state, int letter, int top, PdaAction a) {
    const int stackSize = static_cast<int>(stackAlphabet.size());
    if (state < 0 || state >= stateCount || letter < 0 || letter >= letter_count() || top < 0 ||
        top >= stackSize)
        throw Error("pda: transition index out of range");
    if (a.stack == PdaAction::Stack::Push &&
        (a.pushSymbol < 0 || a.pushSymbol >= stackSize))
        throw Error("pda: push symbol out of range");
    transitions[static_cast<size_t>((state * letter_count() + letter) * stackSize + top)] = a;
}

PushdownAutomaton free_wp_pda(int k) {
    if (k < 1) throw Error("free_wp_pda: rank must be >= 1");
    if (k > 26) throw Error("free_wp_pda: at most 26 generators");

    PushdownAutomaton pda;
    for (int i = 0; i < k; ++i) pda.generatorNames.push_back(std::string(1, char('a' + i)));
    pda.stateCount = 1;
    pda.initialState = 0;
    pda.accepting = {true};
    pda.stackAlphabet.push_back("$");  // bottom marker
    const int letters = 2 * k;
    for (int l = 0; l < letters; ++l)
        pda.stackAlphabet.push_back(letter_name(pda.generatorNames, l));
    pda.bottomSymbol = 0;
    const int stackSize = letters + 1;
    pda.transitions.assign(static_cast<size_t>(letters) * static_cast<size_t>(stackSize),
                           PdaAction{});
    for (int l = 0; l < letters; ++l) {
        const int inverseTop = 1 + (l < k ? l + k : l - k);  // stack symbol of l's inverse
        for (int top = 0; top < stackSize; ++top) {
            PdaAction a;
            a.nextState = 0;
            if (top == inverseTop) {
                a.stack = PdaAction::Stack::Pop;
            } else {
                a.stack = PdaAction::Stack::Push;
                a.pushSymbol = 1 + l;
            }
            pda.set_action(0, l, top, a);
        }
    }
    return pda;
}

PdaRun pda_run(const PushdownAutomaton& pda, const Word& w) {
    if (pda.stateCount < 1 || static_cast<int>(pda.accepting.size()) != pda.stateCount)
        throw Error("pda_run: malformed automaton");
    if (pda.bottomSymbol < 0 || pda.bottomSymbol >= static_cast<int>(pda.stackAlphabet.size()))
        throw Error("pda_run: bottom symbol out of range");

    PdaRun run;
    int state = pda.initialState;
    std::vector<int> stack{pda.bottomSymbol};
    // Heights count symbols above the bottom marker.
    run.trace.push_back(PdaStep{state, 0});

    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        const int letter = pda.letter_of(w[pos]);
        if (stack.empty()) {  // bottom marker popped earlier: no top to read
            run.undefinedTransition = true;
            run.failPosition = static_cast<int>(pos) + 1;
            return run;
        }
        const PdaAction& a = pda.action(state, letter, stack.back());
        if (!a.defined()) {
            run.undefinedTransition = true;
            run.failPosition = static_cast<int>(pos) + 1;
            return run;
        }
        switch (a.stack) {
            case PdaAction::Stack::Push:
                stack.push_back(a.pushSymbol);
                break;
            case PdaAction::Stack::Pop:
                stack.pop_back();
                break;
            case PdaAction::Stack::Keep:
                break;
        }
        state = a.nextState;
        const int height = static_cast<int>(stack.size()) - 1;
        run.maxStackHeight = std::max(run.maxStackHeight, height);
        run.trace.push_back(PdaStep{state, height});
    }

    run.accepted = pda.accepting[static_cast<size_t>(state)] && stack.size() == 1 &&
                   stack.front() == pda.bottomSymbol;
    return run;
}

std::string pda_json(const PushdownAutomaton& pda) {
    nlohmann::ordered_json j;
    j["states"] = pda.stateCount;
    j["initialState"] = pda.initialState;
    nlohmann::ordered_json acc = nlohmann::ordered_json::array();
    for (int s = 0; s < pda.stateCount; ++s)
        if (pda.accepting[static_cast<size_t>(s)]) acc.push_back(s);
    j["accepting"] = std::move(acc);
    j["generators"] = pda.generatorNames;
    j["stackAlphabet"] = pda.stackAlphabet;
    j["bottomSymbol"] = pda.stackAlphabet[static_cast<size_t>(pda.bottomSymbol)];
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    const int stackSize = static_cast<int>(pda.stackAlphabet.size());
    for (int s = 0; s < pda.stateCount; ++s) {
        for (int l = 0; l < pda.letter_count(); ++l) {
            for (int top = 0; top < stackSize; ++top) {
                const PdaAction& a = pda.action(s, l, top);
                if (!a.defined()) continue;
                nlohmann::ordered_json t;
                t["state"] = s;
                t["letter"] = letter_name(pda.generatorNames, l);
                t["top"] = pda.stackAlphabet[static_cast<size_t>(top)];
                t["next"] = a.nextState;
                switch (a.stack) {
                    case PdaAction::Stack::Push:
                        t["action"] = "push";
                        t["push"] = pda.stackAlphabet[static_cast<size_t>(a.pushSymbol)];
                        break;
                    case PdaAction::Stack::Pop:
                        t["action"] = "pop";
                        break;
                    case PdaAction::Stack::Keep:
                        t["action"] = "keep";
                        break;
                }
                ts.push_back(std::move(t));
            }
        }
    }
    j["transitions"] = std::move(ts);
    return j.dump(2) + "\n";
}

std::string survey_json(const GeodesicReport& report) {
    nlohmann::ordered_json j;
    j["k"] = report.k;
    j["L"] = report.maxLength;
    nlohmann::ordered_json words = nlohmann::ordered_json::array();
    for (const Word& w : report.counterexamples) words.push_back(word_to_string(w));
    j["counterexamples"] = std::move(words);
    j["complete"] = report.complete;
    j["wordsVisited"] = report.wordsVisited;
    return j.dump(2) + "\n";
}

}  // namespace treelike
