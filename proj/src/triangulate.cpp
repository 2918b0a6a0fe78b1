#include "treelike/triangulate.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace treelike {

namespace {

uint64_t pair_key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

const char* verdict_name(TriangulationVerdict v) {
    switch (v) {
        case TriangulationVerdict::TRIANGULATED: return "TRIANGULATED";
        case TriangulationVerdict::NOT_TRIANGULABLE: return "NOT_TRIANGULABLE";
        case TriangulationVerdict::BUDGET_EXCEEDED: return "BUDGET_EXCEEDED";
    }
    return "?";
}

MSequence make_msequence(const CayleyBall& ball, std::vector<VertexId> vertices, int stepBound) {
    if (vertices.empty()) throw Error("a closed sequence needs at least one vertex");
    if (stepBound < 0) throw Error("step bound must be nonnegative");
    if (vertices.front() != vertices.back()) throw Error("sequence is not closed");
    for (VertexId v : vertices)
        if (v < 0 || v >= ball.size()) throw Error("sequence vertex outside the ball");
    for (size_t i = 0; i + 1 < vertices.size(); ++i)
        if (!ball.distance_at_most(vertices[i], vertices[i + 1], stepBound))
            throw Error("consecutive vertices " + ball.pretty(vertices[i]) + " .. " +
                        ball.pretty(vertices[i + 1]) + " exceed the step bound " +
                        std::to_string(stepBound));
    return {std::move(vertices), stepBound};
}

std::vector<ReductionStep> find_reductions(const CayleyBall& ball, const MSequence& seq, int m) {
    std::vector<ReductionStep> out;
    int n = seq.length();
    for (int i = 1; i <= n - 1; ++i)
        if (auto chord = ball.distance_if_at_most(seq.vertices[static_cast<size_t>(i) - 1],
                                                  seq.vertices[static_cast<size_t>(i) + 1], m))
            out.push_back({i, *chord});
    return out;
}

namespace {

// Complete backtracking search. State = the set of surviving interior
// positions of the original sequence (endpoints always survive);
// reductions only ever delete positions, so two search branches landing
// on the same surviving set face the same subproblem and the dead-state
// memo is sound. Candidates are tried smallest chord first, which makes
// the first descent the greedy one.
class SearchEngine {
public:
    SearchEngine(const CayleyBall& ball, const MSequence& seq, int m, long long budget)
        : ball_(ball), verts_(seq.vertices), m_(m), budget_(budget), n_(seq.length()) {}

    TriangulationResult run() {
        if (n_ > 63) throw Error("triangulation search supports closed sequences up to length 63");
        uint64_t all = 0;
        for (int p = 1; p <= n_ - 1; ++p) all |= 1ull << p;
        TriangulationResult result;
        bool ok = dfs(all);
        result.statesVisited = visited_;
        if (exceeded_) {
            result.verdict = TriangulationVerdict::BUDGET_EXCEEDED;
        } else if (ok) {
            result.verdict = TriangulationVerdict::TRIANGULATED;
            result.trace.m = m_;
            result.trace.steps = std::move(steps_);
            result.greedySufficed = !backtracked_;
        }
        return result;
    }

private:
    bool dfs(uint64_t alive) {
        if (++visited_ > budget_) {
            exceeded_ = true;
            return false;
        }
        if (std::popcount(alive) <= 2) return true;  // length <= 3 remains

        std::vector<int> pos{0};
        for (int p = 1; p <= n_ - 1; ++p)
            if (alive & (1ull << p)) pos.push_back(p);
        pos.push_back(n_);

        struct Candidate {
            int chord;
            int idx;  // index within the current sequence
            int p;    // original position to delete
        };
        std::vector<Candidate> cands;
        for (size_t i = 1; i + 1 < pos.size(); ++i)
            if (auto chord = chord_between(pos[i - 1], pos[i + 1]))
                cands.push_back({*chord, static_cast<int>(i), pos[i]});
        std::sort(cands.begin(), cands.end(),
                  [](const Candidate& a, const Candidate& b) {
                      return a.chord != b.chord ? a.chord < b.chord : a.p < b.p;
                  });

        for (const Candidate& c : cands) {
            uint64_t child = alive & ~(1ull << c.p);
            if (dead_.count(child)) {
                backtracked_ = true;
                continue;
            }
            steps_.push_back({c.idx, c.chord});
            if (dfs(child)) return true;
            steps_.pop_back();
            if (exceeded_) return false;
            backtracked_ = true;
        }
        dead_.insert(alive);
        return false;
    }

    std::optional<int> chord_between(int pa, int pb) {
        VertexId u = verts_[static_cast<size_t>(pa)], v = verts_[static_cast<size_t>(pb)];
        uint64_t key = pair_key(u, v);
        auto it = chords_.find(key);
        if (it == chords_.end()) it = chords_.emplace(key, ball_.distance_if_at_most(u, v, m_)).first;
        return it->second;
    }

    const CayleyBall& ball_;
    const std::vector<VertexId>& verts_;
    int m_;
    long long budget_;
    int n_;
    long long visited_ = 0;
    bool exceeded_ = false;
    bool backtracked_ = false;
    std::vector<ReductionStep> steps_;
    std::unordered_set<uint64_t> dead_;
    std::unordered_map<uint64_t, std::optional<int>> chords_;
};

}  // namespace

TriangulationResult triangulate(const CayleyBall& ball, const MSequence& seq, int m, long long budget) {
    SearchEngine engine(ball, seq, m, budget);
    TriangulationResult result = engine.run();
    if (result.verdict == TriangulationVerdict::TRIANGULATED) result.trace.initial = seq;
    return result;
}

// ---------------------------------------------------------------------------
// constructive triangulation on trees

namespace {

// Reduced-word arithmetic on free-group keys (strings of letter codes).
struct FreeWords {
    const GroupOracle& oracle;

    std::string inv(const std::string& w) const {
        std::string out;
        out.reserve(w.size());
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            out.push_back(static_cast<char>(oracle.inverse_letter(static_cast<unsigned char>(*it))));
        return out;
    }

    std::string mul(const std::string& a, const std::string& b) const {
        size_t i = a.size(), j = 0;
        while (i > 0 && j < b.size() &&
               static_cast<unsigned char>(a[i - 1]) ==
                   static_cast<unsigned>(oracle.inverse_letter(static_cast<unsigned char>(b[j])))) {
            --i;
            ++j;
        }
        return a.substr(0, i) + b.substr(j);
    }

    static int common_prefix(const std::string& a, const std::string& b) {
        size_t i = 0;
        while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
        return static_cast<int>(i);
    }
};

}  // namespace

TriangulationTrace tree_triangulate(const CayleyBall& ball, const MSequence& seq, int m) {
    if (!ball.oracle().free_basis())
        throw Error("constructive triangulation needs a free group with its free basis; " +
                    ball.oracle().description() + " does not qualify");
    if (m < seq.stepBound)
        throw Error("sequence with step bound " + std::to_string(seq.stepBound) +
                    " is not an m-sequence for m=" + std::to_string(m));

    FreeWords fw{ball.oracle()};
    std::vector<std::string> v;  // current sequence as reduced words
    for (VertexId id : seq.vertices) v.push_back(ball.key_of(id));

    TriangulationTrace trace{seq, m, {}};

    // One round finds an interior reduction following the proof's case
    // analysis on the junction elements w_i = v_{i-1}^-1 v_i (so that
    // |w_i| = dist(v_{i-1}, v_i) under the left-invariant word metric
    // and the w_i multiply out to 1) and the prefixes a_i / c_i. The
    // scan fallback covers cases the analysis hands to a cyclic
    // permutation, which an anchored trace cannot express.
    while (static_cast<int>(v.size()) - 1 >= 4) {
        int n = static_cast<int>(v.size()) - 1;
        std::vector<std::string> w(static_cast<size_t>(n) + 1);  // w[1..n]
        for (int i = 1; i <= n; ++i)
            w[static_cast<size_t>(i)] = fw.mul(fw.inv(v[static_cast<size_t>(i) - 1]), v[static_cast<size_t>(i)]);

        // a[i] = |maximal common prefix of w_i and w_{i-1}^-1|, indices cyclic
        std::vector<int> a(static_cast<size_t>(n) + 2, 0);
        for (int i = 1; i <= n; ++i) {
            const std::string& prev = w[static_cast<size_t>(i == 1 ? n : i - 1)];
            a[static_cast<size_t>(i)] = FreeWords::common_prefix(w[static_cast<size_t>(i)], fw.inv(prev));
        }
        a[static_cast<size_t>(n) + 1] = a[1];
        auto wlen = [&](int i) { return static_cast<int>(w[static_cast<size_t>(i)].size()); };
        auto c = [&](int i) { return a[static_cast<size_t>(i) + 1]; };
        auto chord = [&](int i) {  // dist(v_{i-1}, v_{i+1}) for interior i
            return static_cast<int>(fw.mul(w[static_cast<size_t>(i)], w[static_cast<size_t>(i) + 1]).size());
        };

        int reduceAt = -1;
        // Long cancellation against the previous element: more than half
        // of w_i dissolves into w_{i-1}, so v_{i-2} and v_i are close.
        for (int i = 2; i <= n && reduceAt < 0; ++i)
            if (2 * a[static_cast<size_t>(i)] > wlen(i) && chord(i - 1) <= m) reduceAt = i - 1;
        // Symmetric long cancellation against the next element.
        for (int i = 1; i <= n - 1 && reduceAt < 0; ++i)
            if (2 * c(i) > wlen(i) && chord(i) <= m) reduceAt = i;
        if (reduceAt < 0) {
            // Every junction cancels at most half of each element; then
            // the three-way split at j=2 must yield a short chord at
            // j-1, j, or j+1.
            int j = 2;
            if (chord(j) <= m)
                reduceAt = j;
            else if (2 * a[static_cast<size_t>(j)] > m && chord(j - 1) <= m)
                reduceAt = j - 1;
            else if (2 * c(j + 1) > m && chord(j + 1) <= m)
                reduceAt = j + 1;
        }
        if (reduceAt < 0) {
            // Junction-anchored corner: take any interior chord <= m.
            int best = m + 1, bestAt = -1;
            for (int i = 1; i <= n - 1; ++i)
                if (int ch = chord(i); ch < best) {
                    best = ch;
                    bestAt = i;
                }
            if (bestAt < 0)
                throw Error("no interior reduction found on a tree sequence; this contradicts the "
                            "triangulation lemma");
            reduceAt = bestAt;
        }

        trace.steps.push_back({reduceAt, chord(reduceAt)});
        v.erase(v.begin() + reduceAt);
    }
    return trace;
}

bool validate_trace(const CayleyBall& ball, const TriangulationTrace& trace, std::string* why) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    const auto& init = trace.initial.vertices;
    if (init.empty() || init.front() != init.back()) return fail("initial sequence is not closed");
    for (size_t i = 0; i + 1 < init.size(); ++i)
        if (!ball.distance_at_most(init[i], init[i + 1], trace.initial.stepBound))
            return fail("initial step " + std::to_string(i) + " exceeds the step bound");

    std::vector<VertexId> cur = init;
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        const ReductionStep& step = trace.steps[s];
        int n = static_cast<int>(cur.size()) - 1;
        if (step.removedIndex < 1 || step.removedIndex > n - 1)
            return fail("step " + std::to_string(s) + " removes a non-interior index");
        if (step.chordLength > trace.m)
            return fail("step " + std::to_string(s) + " records a chord above m");
        auto chord = ball.distance_if_at_most(cur[static_cast<size_t>(step.removedIndex) - 1],
                                              cur[static_cast<size_t>(step.removedIndex) + 1], trace.m);
        if (!chord) return fail("step " + std::to_string(s) + " has chord longer than m");
        if (*chord != step.chordLength)
            return fail("step " + std::to_string(s) + " records chord " +
                        std::to_string(step.chordLength) + " but the graph says " +
                        std::to_string(*chord));
        cur.erase(cur.begin() + step.removedIndex);
    }
    if (static_cast<int>(cur.size()) - 1 > 3) return fail("replay ends above length 3");
    return true;
}

std::optional<int> minimal_m(const CayleyBall& ball, const MSequence& seq, int mMax, long long budget) {
    for (int m = 0; m <= mMax; ++m) {
        TriangulationResult r = triangulate(ball, seq, m, budget);
        if (r.verdict == TriangulationVerdict::TRIANGULATED) return m;
        if (r.verdict == TriangulationVerdict::BUDGET_EXCEEDED)
            throw BudgetExceededError("minimal m undecided: search at m=" + std::to_string(m),
                                      static_cast<std::size_t>(r.statesVisited));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// closed-path survey

namespace {

std::vector<int> reversed_inverse(const GroupOracle& oracle, const std::vector<int>& word) {
    std::vector<int> out;
    out.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(oracle.inverse_letter(*it));
    return out;
}

std::vector<int> canonical_class(const GroupOracle& oracle, const std::vector<int>& word) {
    std::vector<int> best;
    auto consider = [&](std::vector<int> w) {
        for (size_t r = 0; r < w.size(); ++r) {
            if (best.empty() || w < best) best = w;
            std::rotate(w.begin(), w.begin() + 1, w.end());
        }
    };
    consider(word);
    consider(reversed_inverse(oracle, word));
    return best;
}

}  // namespace

ClosedPathSurvey survey_closed_paths(const CayleyBall& ball, int maxLength, int m,
                                     long long perInstanceBudget) {
    if (maxLength < 1) throw Error("survey needs a positive maximum length");
    if (maxLength > 2 * ball.certified_radius())
        throw Error("survey length " + std::to_string(maxLength) + " exceeds twice the certified radius " +
                    std::to_string(ball.certified_radius()) + "; build a larger ball");
    if (m < 1) throw Error("closed paths are 1-sequences; m must be at least 1");

    ClosedPathSurvey survey;
    survey.maxLength = maxLength;
    survey.m = m;

    std::unordered_set<std::string> seen;
    int worstLength = maxLength + 1;

    std::vector<int> word;
    std::vector<VertexId> walk{0};

    auto process_closed = [&]() {
        std::vector<int> canon = canonical_class(ball.oracle(), word);
        std::string key(canon.begin(), canon.end());
        if (!seen.insert(std::move(key)).second) return;
        survey.total += 1;

        std::vector<VertexId> verts{0};
        for (int letter : canon) verts.push_back(ball.neighbor(verts.back(), letter));
        MSequence seq{std::move(verts), 1};
        TriangulationResult r = triangulate(ball, seq, m, perInstanceBudget);
        switch (r.verdict) {
            case TriangulationVerdict::TRIANGULATED:
                survey.triangulable += 1;
                if (!r.greedySufficed) survey.greedyBacktracked += 1;
                break;
            case TriangulationVerdict::NOT_TRIANGULABLE:
                survey.notTriangulable += 1;
                if (static_cast<int>(canon.size()) < worstLength) {
                    worstLength = static_cast<int>(canon.size());
                    Word pretty;
                    for (int letter : canon) pretty.push_back(ball.oracle().letter_symbol(letter));
                    survey.worstCase = word_to_string(pretty);
                }
                break;
            case TriangulationVerdict::BUDGET_EXCEEDED:
                survey.budgetExceeded += 1;
                break;
        }
    };

    // Depth-first sweep over all words of length <= maxLength, pruned by
    // the norm lower bound: a walk at norm d needs d more steps to close.
    auto extend = [&](auto&& self) -> void {
        int depth = static_cast<int>(word.size());
        if (depth > 0 && walk.back() == 0) process_closed();
        if (depth == maxLength) return;
        for (int letter = 0; letter < ball.letter_count(); ++letter) {
            VertexId next = ball.neighbor(walk.back(), letter);
            if (next == NO_VERTEX) continue;
            if (ball.radius_label(next) > maxLength - depth - 1) continue;
            word.push_back(letter);
            walk.push_back(next);
            self(self);
            walk.pop_back();
            word.pop_back();
        }
    };
    extend(extend);
    return survey;
}

std::string trace_json(const CayleyBall& ball, const TriangulationTrace& trace) {
    nlohmann::ordered_json j;
    j["initial"] = nlohmann::ordered_json::array();
    for (VertexId v : trace.initial.vertices) j["initial"].push_back(ball.pretty(v));
    j["m"] = trace.m;
    j["steps"] = nlohmann::ordered_json::array();
    for (const ReductionStep& s : trace.steps)
        j["steps"].push_back(nlohmann::ordered_json{{"i", s.removedIndex}, {"chord", s.chordLength}});
    return j.dump(2) + "\n";
}

std::string survey_json(const ClosedPathSurvey& s) {
    nlohmann::ordered_json j;
    j["L"] = s.maxLength;
    j["m"] = s.m;
    j["total"] = s.total;
    j["triangulable"] = s.triangulable;
    j["failed"] = s.notTriangulable;
    j["budgetExceeded"] = s.budgetExceeded;
    j["greedyBacktracked"] = s.greedyBacktracked;
    j["worstCase"] = s.worstCase;
    return j.dump(2) + "\n";
}

}  // namespace treelike
