#pragma once

// Closed-sequence triangulation machinery: m-sequences, m-reductions, an
// exhaustive memoized search for triangulability, the constructive
// prefix-cancellation triangulation available on trees, and a survey
// driver that sweeps all short closed paths at the identity.

#include <optional>
#include <string>
#include <vector>

#include "treelike/cayley.hpp"

namespace treelike {

// Closed vertex sequence v_0..v_n (v_n == v_0, stored with the closing
// duplicate) whose consecutive distances are all <= stepBound.
struct MSequence {
    std::vector<VertexId> vertices;
    int stepBound = 1;

    int length() const { return static_cast<int>(vertices.size()) - 1; }
};

// Validates closedness and every consecutive distance before returning
// the sequence; throws Error / UncertifiedDistanceError otherwise.
MSequence make_msequence(const CayleyBall& ball, std::vector<VertexId> vertices, int stepBound);

// One m-reduction: deletion of the interior vertex at removedIndex,
// bridging its neighbors with a chord of the recorded exact length.
struct ReductionStep {
    int removedIndex = 0;
    int chordLength = 0;

    bool operator==(const ReductionStep&) const = default;
};

// Replayable certificate: applying steps to initial in order yields
// valid sequences, each chord <= m, ending at length <= 3.
struct TriangulationTrace {
    MSequence initial;
    int m = 0;
    std::vector<ReductionStep> steps;
};

enum class TriangulationVerdict { TRIANGULATED, NOT_TRIANGULABLE, BUDGET_EXCEEDED };

const char* verdict_name(TriangulationVerdict v);

struct TriangulationResult {
    TriangulationVerdict verdict = TriangulationVerdict::NOT_TRIANGULABLE;
    TriangulationTrace trace;  // populated only when TRIANGULATED
    long long statesVisited = 0;
    // Whether the greedy smallest-chord-first descent reached a triangle
    // without ever backtracking. Reported, never asserted: confluence of
    // m-reduction is an open question here.
    bool greedySufficed = false;
};

// All currently legal reductions: interior indices i in [1, n-1] whose
// chord dist(v_{i-1}, v_{i+1}) is <= m, ascending. Chord lengths are
// exact; an undecidable chord raises UncertifiedDistanceError (the fix
// is a larger ball).
std::vector<ReductionStep> find_reductions(const CayleyBall& ball, const MSequence& seq, int m);

// Complete backtracking search over reduction orders, memoized on the
// set of surviving original positions, greedy smallest-chord-first.
// NOT_TRIANGULABLE is only returned once every order is exhausted;
// running past the visited-state budget yields BUDGET_EXCEEDED instead.
TriangulationResult triangulate(const CayleyBall& ball, const MSequence& seq, int m,
                                long long budget = 1'000'000);

// Constructive triangulation for free groups with their free basis,
// linear in total sequence length. Always succeeds on a valid
// m-sequence; rejects oracles whose graph is not a tree.
TriangulationTrace tree_triangulate(const CayleyBall& ball, const MSequence& seq, int m);

// Independent replay check of a trace; on failure returns false and
// explains in *why when provided.
bool validate_trace(const CayleyBall& ball, const TriangulationTrace& trace, std::string* why = nullptr);

// Least m <= mMax making the sequence m-triangulable, nullopt if none.
// A budget-exceeded level makes minimality unknowable and is rethrown.
std::optional<int> minimal_m(const CayleyBall& ball, const MSequence& seq, int mMax,
                             long long budget = 1'000'000);

struct ClosedPathSurvey {
    int maxLength = 0;
    int m = 0;
    long long total = 0;  // rotation/reversal classes surveyed
    long long triangulable = 0;
    long long notTriangulable = 0;
    long long budgetExceeded = 0;
    long long greedyBacktracked = 0;   // instances where greedy needed help
    std::string worstCase;             // word of a shortest failing class
};

// Sweeps every closed path at the identity of length <= maxLength, one
// representative per rotation/reversal class, and triangulates each at
// the given m. Requires maxLength <= 2 * certified_radius() so all
// chord queries stay exact.
ClosedPathSurvey survey_closed_paths(const CayleyBall& ball, int maxLength, int m,
                                     long long perInstanceBudget = 1'000'000);

std::string trace_json(const CayleyBall& ball, const TriangulationTrace& trace);
std::string survey_json(const ClosedPathSurvey& survey);

}  // namespace treelike
