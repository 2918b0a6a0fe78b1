#pragma once

// Word-language checks: membership in the word-problem language, geodesic
// and locally geodesic words, and a deterministic pushdown recognizer for
// the free-group word problem.

#include <memory>
#include <string>
#include <vector>

#include "treelike/cayley.hpp"
#include "treelike/common.hpp"
#include "treelike/groups.hpp"

namespace treelike {

// True iff the word multiplies out to the identity, i.e. lies in the
// word-problem language of the oracle's group over its generators.
bool wp_member(const GroupOracle& oracle, const Word& w);

// True iff the word's length equals the norm of its product, measured in
// a ball of radius |w| built on demand.
bool is_geodesic(std::shared_ptr<const GroupOracle> oracle, const Word& w);

// Same check against an existing ball; |w| must fit inside its radius.
bool is_geodesic(const CayleyBall& ball, const Word& w);

// Words that are k-locally geodesic (every factor of length at most k is
// geodesic) yet fail to be geodesic themselves. A group presentation is
// tree-like exactly when some k makes this list empty at every length.
struct GeodesicReport {
    int k = 0;
    int maxLength = 0;
    std::vector<Word> counterexamples;  // length-lexicographic order
    // False when the node budget cut enumeration short; the list then
    // covers only a length-lexicographic prefix of the word tree.
    bool complete = true;
    long long wordsVisited = 0;
};

// Enumerates words of length <= maxLength in length-lexicographic order
// with the declared generator order, pruning any branch whose trailing
// length-k factor already fails to be geodesic: no such extension can be
// k-locally geodesic again. Factors of geodesics are geodesic, so the
// trailing check is exact, not a heuristic.
GeodesicReport local_geodesic_survey(std::shared_ptr<const GroupOracle> oracle, int k,
                                     int maxLength, long long nodeBudget = 10'000'000);

// One pushdown transition outcome: successor state plus the stack edit,
// which touches only the top symbol.
struct PdaAction {
    enum class Stack { Push, Pop, Keep };

    int nextState = -1;  // -1 marks an undefined transition
    Stack stack = Stack::Keep;
    int pushSymbol = -1;  // used only when stack == Push

    bool defined() const { return nextState >= 0; }
};

// Deterministic pushdown automaton over the letter alphabet of a group
// presentation: states, an initial state, accepting states, a stack
// alphabet with a bottom marker, and transitions keyed on (state, input
// letter, stack top). Acceptance requires an accepting final state AND
// the stack reduced back to the bare bottom marker; the stack condition
// is what lets a single-state machine recognize free cancellation.
struct PushdownAutomaton {
    std::vector<std::string> generatorNames;  // letters follow the oracle convention
    int stateCount = 1;
    int initialState = 0;
    std::vector<bool> accepting;             // per state
    std::vector<std::string> stackAlphabet;  // index 0 is the bottom marker
    int bottomSymbol = 0;
    std::vector<PdaAction> transitions;  // [(state * letters + letter) * stackSize + top]

    int rank() const { return static_cast<int>(generatorNames.size()); }
    int letter_count() const { return 2 * rank(); }
    // Maps a symbol to its letter code; throws naming the symbol when it
    // is not over this automaton's alphabet.
    int letter_of(const GeneratorSymbol& s) const;

    const PdaAction& action(int state, int letter, int top) const;
    void set_action(int state, int letter, int top, PdaAction a);
};

// Single-state recognizer for the free-group word problem on k free
// generators: reading x pops when the top is x's inverse and pushes x
// otherwise, so the stack above the marker always holds the freely
// reduced input, and the word multiplies to 1 iff the stack ends bare.
PushdownAutomaton free_wp_pda(int k);

// One trace row per configuration: before any input, then after each
// letter. Stack height counts symbols above the bottom marker.
struct PdaStep {
    int state = 0;
    int stackHeight = 0;
};

struct PdaRun {
    bool accepted = false;
    bool undefinedTransition = false;
    int failPosition = -1;  // 1-based input position of the undefined step
    int maxStackHeight = 0;
    std::vector<PdaStep> trace;
};

// Simulates the automaton on a word: deterministic, one step per letter.
// An undefined transition rejects at its position instead of throwing.
PdaRun pda_run(const PushdownAutomaton& pda, const Word& w);

// {states, initialState, accepting, stackAlphabet, transitions: [...]}
std::string pda_json(const PushdownAutomaton& pda);

// {k, L, counterexamples: [words], complete, wordsVisited}
std::string survey_json(const GeodesicReport& report);

}  // namespace treelike
