#include "treelike/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treelike/asdim.hpp"
#include "treelike/cayley.hpp"
#include "treelike/coarse.hpp"
#include "treelike/groups.hpp"
#include "treelike/langtools.hpp"
#include "treelike/treedecomp.hpp"
#include "treelike/triangulate.hpp"

namespace treelike {

namespace {

// 0: the analysis reached a conclusive answer, whatever it says.
// 1: usage or runtime error. 2: budgets or truncation left it undecided.
constexpr int EXIT_DONE = 0;
constexpr int EXIT_ERROR = 1;
constexpr int EXIT_UNDECIDED = 2;

constexpr const char* FLAG_CONSISTENT = "consistent-with-virtually-free";
constexpr const char* FLAG_INCONSISTENT = "inconsistent";
constexpr const char* FLAG_INCONCLUSIVE = "inconclusive";

using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
    std::string group;
    long long budget = -1;
    long long seed = 0;
    bool wantJson = false;
    bool wantCsv = false;
    bool wantDot = false;
    std::string outPath;
};

enum class Format { Json, Csv, Dot };

Format pick_format(const CommonOpts& c, bool csvOk, bool dotOk) {
    if (c.wantCsv) {
        if (!csvOk) throw Error("csv output is not available for this command");
        return Format::Csv;
    }
    if (c.wantDot) {
        if (!dotOk) throw Error("dot output is not available for this command");
        return Format::Dot;
    }
    return Format::Json;
}

void emit(const CommonOpts& c, const std::string& bytes) {
    if (c.outPath.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream f(c.outPath, std::ios::binary);
    if (!f) throw Error("cannot open output file '" + c.outPath + "'");
    f << bytes;
    if (!f) throw Error("failed writing output file '" + c.outPath + "'");
}

long long ball_budget(const CommonOpts& c) {
    return c.budget > 0 ? c.budget : CayleyBall::DEFAULT_BUDGET;
}

// Smallest radius keeping every chord query on a closed path of the given
// length certified: prefix norms reach len/2 and chords add len hops.
int certified_fit(int pathLength) { return (3 * pathLength + 1) / 2; }

// Prefix walk of a closed word from the identity, validated as a closed
// 1-sequence.
MSequence closed_sequence(const CayleyBall& ball, const Word& w) {
    std::vector<VertexId> vertices{0};
    VertexId v = 0;
    for (const auto& s : w) {
        v = ball.neighbor(v, ball.oracle().letter_of(s));
        if (v == NO_VERTEX) throw Error("word walks outside the materialized ball");
        vertices.push_back(v);
    }
    if (vertices.back() != 0)
        throw Error("word '" + word_to_string(w) + "' does not multiply to the identity");
    return make_msequence(ball, vertices, 1);
}

VertexId center_vertex(const CayleyBall& ball, const std::string& text) {
    return text.empty() ? 0 : ball.vertex_of_word(text);
}

int run_ball(const CommonOpts& c, int radius) {
    Format fmt = pick_format(c, false, true);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    emit(c, fmt == Format::Dot ? ball_dot(ball) : ball_summary_json(ball, c.group));
    return EXIT_DONE;
}

int run_triangulate(const CommonOpts& c, int radius, const std::string& wordText, int m,
                    bool constructive) {
    pick_format(c, false, false);
    Word w = parse_word(wordText);
    if (w.empty()) throw Error("--word must be a nonempty closed word");
    const int R = std::max(radius, certified_fit(static_cast<int>(w.size())));
    CayleyBall ball = build_ball(make_oracle(c.group), R, CayleyBall::DEFAULT_BUDGET);
    MSequence seq = closed_sequence(ball, w);

    ordered_json j;
    j["group"] = c.group;
    j["word"] = word_to_string(w);
    j["m"] = m;
    j["radius"] = R;
    int exitCode = EXIT_DONE;
    if (constructive) {
        TriangulationTrace trace = tree_triangulate(ball, seq, m);
        std::string why;
        if (!validate_trace(ball, trace, &why))
            throw Error("constructed trace failed its replay: " + why);
        j["verdict"] = verdict_name(TriangulationVerdict::TRIANGULATED);
        j["trace"] = ordered_json::parse(trace_json(ball, trace));
    } else {
        const long long searchBudget = c.budget > 0 ? c.budget : 1'000'000;
        TriangulationResult res = triangulate(ball, seq, m, searchBudget);
        j["verdict"] = verdict_name(res.verdict);
        j["statesVisited"] = res.statesVisited;
        j["greedySufficed"] = res.greedySufficed;
        if (res.verdict == TriangulationVerdict::TRIANGULATED)
            j["trace"] = ordered_json::parse(trace_json(ball, res.trace));
        if (res.verdict == TriangulationVerdict::BUDGET_EXCEEDED) exitCode = EXIT_UNDECIDED;
    }
    emit(c, j.dump(2) + "\n");
    return exitCode;
}

int run_triangulate_survey(const CommonOpts& c, int radius, int maxLength, int m) {
    pick_format(c, false, false);
    const int R = std::max(radius, certified_fit(maxLength));
    CayleyBall ball = build_ball(make_oracle(c.group), R, CayleyBall::DEFAULT_BUDGET);
    const long long perInstance = c.budget > 0 ? c.budget : 1'000'000;
    ClosedPathSurvey survey = survey_closed_paths(ball, maxLength, m, perInstance);
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = R;
    ordered_json body = ordered_json::parse(survey_json(survey));
    for (auto& [key, value] : body.items()) j[key] = value;
    emit(c, j.dump(2) + "\n");
    return survey.budgetExceeded > 0 ? EXIT_UNDECIDED : EXIT_DONE;
}

int run_minimal_m(const CommonOpts& c, int radius, const std::string& wordText, int mMax) {
    pick_format(c, false, false);
    Word w = parse_word(wordText);
    if (w.empty()) throw Error("--word must be a nonempty closed word");
    const int R = std::max(radius, certified_fit(static_cast<int>(w.size())));
    CayleyBall ball = build_ball(make_oracle(c.group), R, CayleyBall::DEFAULT_BUDGET);
    MSequence seq = closed_sequence(ball, w);
    const long long searchBudget = c.budget > 0 ? c.budget : 1'000'000;
    std::optional<int> m = minimal_m(ball, seq, mMax, searchBudget);
    ordered_json j;
    j["group"] = c.group;
    j["word"] = word_to_string(w);
    j["mMax"] = mMax;
    j["radius"] = R;
    if (m)
        j["minimalM"] = *m;
    else
        j["minimalM"] = nullptr;
    emit(c, j.dump(2) + "\n");
    return EXIT_DONE;
}

int run_gromov(const CommonOpts& c, int radius, const std::string& u, const std::string& v,
               const std::string& z) {
    pick_format(c, false, false);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    VertexId vu = center_vertex(ball, u);
    VertexId vv = center_vertex(ball, v);
    VertexId vz = center_vertex(ball, z);
    HalfInteger p = gromov_product(ball, vu, vv, vz);
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = radius;
    j["u"] = ball.pretty(vu);
    j["v"] = ball.pretty(vv);
    j["z"] = ball.pretty(vz);
    j["product"] = p.str();
    j["value"] = p.value();
    emit(c, j.dump(2) + "\n");
    return EXIT_DONE;
}

int run_path_scan(const CommonOpts& c, int radius, int maxPathLen, long long sampleLimit) {
    pick_format(c, false, false);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    PathInequalityReport report = path_inequality_scan(ball, maxPathLen, sampleLimit);
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = radius;
    ordered_json body = ordered_json::parse(path_report_json(ball, report));
    for (auto& [key, value] : body.items()) j[key] = value;
    emit(c, j.dump(2) + "\n");
    return report.exhaustive ? EXIT_DONE : EXIT_UNDECIDED;
}

int run_boundary_profile(const CommonOpts& c, int radius, const std::string& centerText, int nMin,
                         int nMax) {
    Format fmt = pick_format(c, true, false);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    VertexId center = center_vertex(ball, centerText);
    if (nMax < 0) nMax = std::max(nMin, ball.certified_radius() - 1);
    BoundaryProfile profile = boundary_profile(ball, center, nMin, nMax);
    emit(c, fmt == Format::Csv ? profile_csv(profile) : profile_json(ball, profile));
    for (const auto& row : profile.rows)
        for (const auto& comp : row.components)
            if (comp.truncated) return EXIT_UNDECIDED;
    return EXIT_DONE;
}

int run_tree_decompose(const CommonOpts& c, int radius, const std::string& centerText) {
    Format fmt = pick_format(c, false, true);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    StrongTreeDecomposition decomposition =
        strong_tree_decomposition(ball, center_vertex(ball, centerText));
    emit(c, fmt == Format::Dot ? one_graph_dot(decomposition) : std_json(ball, decomposition));
    return EXIT_DONE;
}

int run_spanning_tree(const CommonOpts& c, int radius, const std::string& centerText,
                      long long samplePairs) {
    Format fmt = pick_format(c, false, true);
    CayleyBall ball = build_ball(make_oracle(c.group), radius, ball_budget(c));
    StrongTreeDecomposition decomposition =
        strong_tree_decomposition(ball, center_vertex(ball, centerText));
    if (!decomposition.treeCheck.ok())
        throw Error("the decomposition 1-graph is not a tree; no spanning tree is defined");
    UniformSpanningTree tree = uniform_spanning_tree(ball, decomposition, samplePairs);
    if (fmt == Format::Dot) {
        emit(c, spanning_tree_dot(ball, tree));
        return EXIT_DONE;
    }
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = radius;
    j["parts"] = decomposition.partition.count();
    j["kDiam"] = tree.kDiam;
    j["pairs"] = tree.stats.pairs;
    j["lowerViolations"] = tree.stats.lowerViolations;
    j["upperViolations"] = tree.stats.upperViolations;
    j["maxTreeOverGraph"] = tree.stats.maxTreeOverGraph.str();
    j["maxGraphOverTree"] = tree.stats.maxGraphOverTree.str();
    j["distortion"] = tree.stats.distortion().str();
    j["coreExhaustive"] = tree.stats.coreExhaustive;
    emit(c, j.dump(2) + "\n");
    return EXIT_DONE;
}

int run_asdim_color(const CommonOpts& c, int radius, int m) {
    pick_format(c, false, false);
    const int R = radius > 0 ? radius : 3 * m + 6;
    CayleyBall ball = build_ball(make_oracle(c.group), R, ball_budget(c));
    CoronaColoring coloring = corona_coloring(ball, m);
    WitnessCheck check = verify_asdim_witness(ball, coloring);
    ZRDecomposition zr = zr_decomposition(ball, coloring);
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = R;
    j["coloring"] = ordered_json::parse(coloring_json(coloring));
    j["witness"] = {{"ok", check.ok()},
                    {"sameColorViolations", check.sameColorViolations.size()},
                    {"diameterViolations", check.diameterViolations.size()},
                    {"diameterUndecided", check.diameterUndecided.size()},
                    {"separationUndecided", check.separationUndecided.size()},
                    {"undecidedOverflow", check.undecidedOverflow}};
    j["zr"] = {{"representatives", zr.representatives.size()},
               {"distinctOffsets", zr.distinctOffsets},
               {"maxOffsetNorm", zr.maxOffsetNorm}};
    emit(c, j.dump(2) + "\n");
    const bool undecided = !check.diameterUndecided.empty() ||
                           !check.separationUndecided.empty() || check.undecidedOverflow;
    return undecided ? EXIT_UNDECIDED : EXIT_DONE;
}

int run_almost_invariant(const CommonOpts& c, int radius, int m, int gMax, int hCap) {
    pick_format(c, false, false);
    const int R = radius > 0 ? radius : 3 * m + 9;
    CayleyBall ball = build_ball(make_oracle(c.group), R, ball_budget(c));
    AlmostInvariantMap map = almost_invariant_map(ball, m, gMax, hCap);
    ordered_json j;
    j["group"] = c.group;
    j["radius"] = R;
    ordered_json body = ordered_json::parse(invariant_map_json(map));
    for (auto& [key, value] : body.items()) j[key] = value;
    emit(c, j.dump(2) + "\n");
    return EXIT_DONE;
}

int run_geodesic_survey(const CommonOpts& c, int k, int maxLength) {
    pick_format(c, false, false);
    const long long nodeBudget = c.budget > 0 ? c.budget : 10'000'000;
    GeodesicReport report = local_geodesic_survey(make_oracle(c.group), k, maxLength, nodeBudget);
    ordered_json j;
    j["group"] = c.group;
    ordered_json body = ordered_json::parse(survey_json(report));
    for (auto& [key, value] : body.items()) j[key] = value;
    emit(c, j.dump(2) + "\n");
    return report.complete ? EXIT_DONE : EXIT_UNDECIDED;
}

int run_pda(const CommonOpts& c, int rank, const std::string& wordText) {
    pick_format(c, false, false);
    PushdownAutomaton pda = free_wp_pda(rank);
    if (wordText.empty()) {
        emit(c, pda_json(pda));
        return EXIT_DONE;
    }
    PdaRun run = pda_run(pda, parse_word(wordText));
    ordered_json j;
    j["machine"] = ordered_json::parse(pda_json(pda));
    j["word"] = wordText;
    j["accepted"] = run.accepted;
    j["maxStackHeight"] = run.maxStackHeight;
    j["undefinedTransition"] = run.undefinedTransition;
    if (run.failPosition >= 0) j["failPosition"] = run.failPosition;
    ordered_json trace = ordered_json::array();
    for (const auto& step : run.trace) trace.push_back({step.state, step.stackHeight});
    j["trace"] = std::move(trace);
    emit(c, j.dump(2) + "\n");
    return EXIT_DONE;
}

struct VerdictRow {
    std::string condition;
    std::string statistic;
    std::string flag;
};

// One desk-scale probe per characterization, each labeled with the data it
// actually saw. Flags never assert more than the ball supports: growth
// comparisons use certified values only, and anything cut short by budgets
// or truncation comes back inconclusive instead of pass/fail.
std::vector<VerdictRow> verdict_rows(const CommonOpts& c,
                                     std::shared_ptr<const GroupOracle> oracle,
                                     const CayleyBall& ball) {
    std::vector<VerdictRow> rows;
    const long long budget = ball_budget(c);
    const int radius = ball.radius();

    {  // every short closed path should triangulate at m=1
        const int L = 8, m = 1;
        const int need = certified_fit(L);
        std::optional<CayleyBall> bigger;
        if (radius < need) bigger.emplace(build_ball(oracle, need, budget));
        const CayleyBall& b = bigger ? *bigger : ball;
        ClosedPathSurvey s = survey_closed_paths(b, L, m, 1'000'000);
        std::string stat = "classes=" + std::to_string(s.total) +
                           "; triangulable=" + std::to_string(s.triangulable) +
                           "; failed=" + std::to_string(s.notTriangulable) +
                           "; budgetExceeded=" + std::to_string(s.budgetExceeded);
        const char* flag = s.budgetExceeded > 0 ? FLAG_INCONCLUSIVE
                           : s.notTriangulable > 0 ? FLAG_INCONSISTENT
                                                   : FLAG_CONSISTENT;
        rows.push_back({"closed-path triangulation (B4)", stat, flag});
    }

    {  // the path inequality gap should not grow with path length
        PathInequalityReport shortScan = path_inequality_scan(ball, 4, 5'000'000);
        PathInequalityReport longScan = path_inequality_scan(ball, 8, 5'000'000);
        std::string stat = "maxB5(len<=4)=" + shortScan.maxB5.str() +
                           "; maxB5(len<=8)=" + longScan.maxB5.str();
        const char* flag = (!shortScan.exhaustive || !longScan.exhaustive) ? FLAG_INCONCLUSIVE
                           : longScan.maxB5.twice > shortScan.maxB5.twice ? FLAG_INCONSISTENT
                                                                          : FLAG_CONSISTENT;
        rows.push_back({"path inequality growth (B5)", stat, flag});
    }

    {  // boundary diameters should stay flat across certified levels
        const int lo = 1, hi = ball.certified_radius() - 1;
        if (hi < lo) {
            rows.push_back({"boundary diameter growth (B6)",
                            "radius too small for certified levels", FLAG_INCONCLUSIVE});
        } else {
            BoundaryProfile profile = boundary_profile(ball, 0, lo, hi);
            bool truncated = false;
            for (const auto& row : profile.rows)
                for (const auto& comp : row.components) truncated |= comp.truncated;
            const int first = profile.rows.front().max_diameter();
            const int last = profile.rows.back().max_diameter();
            std::string stat = "levels=" + std::to_string(lo) + ".." + std::to_string(hi) +
                               "; maxDiameter(level " + std::to_string(lo) +
                               ")=" + std::to_string(first) + "; maxDiameter(level " +
                               std::to_string(hi) + ")=" + std::to_string(last);
            const char* flag = truncated            ? FLAG_INCONCLUSIVE
                               : last > first       ? FLAG_INCONSISTENT
                                                    : FLAG_CONSISTENT;
            rows.push_back({"boundary diameter growth (B6)", stat, flag});
        }
    }

    std::optional<StrongTreeDecomposition> bigDecomposition;
    {  // decomposition part diameters should not grow with the radius
        const int smallRadius = radius - 3;
        if (smallRadius < 3) {
            rows.push_back({"tree decomposition diameter (B7)",
                            "radius too small for a growth comparison", FLAG_INCONCLUSIVE});
        } else {
            CayleyBall smallBall = build_ball(oracle, smallRadius, budget);
            StrongTreeDecomposition smallDecomposition =
                strong_tree_decomposition(smallBall, 0);
            bigDecomposition = strong_tree_decomposition(ball, 0);
            const bool trees =
                smallDecomposition.treeCheck.ok() && bigDecomposition->treeCheck.ok();
            const int smallDiam = smallDecomposition.kDiamCertified;
            const int bigDiam = bigDecomposition->kDiamCertified;
            std::string stat = std::string("tree=") + (trees ? "ok" : "broken") +
                               "; kDiamCertified(R=" + std::to_string(smallRadius) +
                               ")=" + std::to_string(smallDiam) +
                               "; kDiamCertified(R=" + std::to_string(radius) +
                               ")=" + std::to_string(bigDiam);
            // Certified diameters are exact, so their growth is a proof; the
            // hop diameters only upper-bound truncated parts, so growth that
            // hides entirely in those stays undecided.
            const char* flag = (!trees || bigDiam > smallDiam) ? FLAG_INCONSISTENT
                               : bigDecomposition->kDiam > smallDecomposition.kDiam
                                   ? FLAG_INCONCLUSIVE
                                   : FLAG_CONSISTENT;
            rows.push_back({"tree decomposition diameter (B7)", stat, flag});
        }
    }

    {  // the induced spanning tree should satisfy both distortion bounds
        if (!bigDecomposition) bigDecomposition = strong_tree_decomposition(ball, 0);
        if (!bigDecomposition->treeCheck.ok()) {
            rows.push_back({"spanning tree distortion (B1)", "1-graph is not a tree",
                            FLAG_INCONSISTENT});
        } else {
            UniformSpanningTree tree = uniform_spanning_tree(ball, *bigDecomposition, 50'000);
            std::string stat = "pairs=" + std::to_string(tree.stats.pairs) + "; violations=" +
                               std::to_string(tree.stats.lowerViolations +
                                              tree.stats.upperViolations) +
                               "; distortion=" + tree.stats.distortion().str();
            const char* flag =
                tree.stats.lowerViolations + tree.stats.upperViolations > 0 ? FLAG_INCONSISTENT
                                                                            : FLAG_CONSISTENT;
            rows.push_back({"spanning tree distortion (B1)", stat, flag});
        }
    }

    {  // a two-colored corona partition certifies asymptotic dimension one
        try {
            CoronaColoring coloring = corona_coloring(ball, 2);
            WitnessCheck check = verify_asdim_witness(ball, coloring);
            std::string stat = "m=2; colors=2; minSameColorDistance=" +
                               std::to_string(coloring.minSameColorDistance) +
                               "; maxPartDiameter=" + std::to_string(coloring.maxPartDiameter);
            const bool undecided = !check.diameterUndecided.empty() ||
                                   !check.separationUndecided.empty() || check.undecidedOverflow;
            const char* flag = check.ok() && !undecided ? FLAG_CONSISTENT
                               : undecided              ? FLAG_INCONCLUSIVE
                                                        : FLAG_INCONSISTENT;
            rows.push_back({"corona coloring witness (asdim)", stat, flag});
        } catch (const Error& e) {
            rows.push_back({"corona coloring witness (asdim)", e.what(), FLAG_INCONCLUSIVE});
        }
    }

    {  // short locally geodesic words should already be geodesic
        GeodesicReport report = local_geodesic_survey(oracle, 2, 8, 10'000'000);
        std::string stat =
            "k=2; L=8; counterexamples=" + std::to_string(report.counterexamples.size());
        if (!report.counterexamples.empty())
            stat += "; first=" + word_to_string(report.counterexamples.front());
        const char* flag = !report.complete                ? FLAG_INCONCLUSIVE
                           : report.counterexamples.empty() ? FLAG_CONSISTENT
                                                            : FLAG_INCONSISTENT;
        rows.push_back({"locally geodesic words (k=2)", stat, flag});
    }

    return rows;
}

int run_verdict(const CommonOpts& c, int radius) {
    Format fmt = pick_format(c, true, false);
    auto oracle = make_oracle(c.group);
    CayleyBall ball = build_ball(oracle, radius, ball_budget(c));
    std::vector<VerdictRow> rows = verdict_rows(c, oracle, ball);

    int consistent = 0, inconsistent = 0, inconclusive = 0;
    for (const auto& row : rows) {
        if (row.flag == FLAG_CONSISTENT) ++consistent;
        if (row.flag == FLAG_INCONSISTENT) ++inconsistent;
        if (row.flag == FLAG_INCONCLUSIVE) ++inconclusive;
    }

    if (fmt == Format::Csv) {
        std::string out = "condition,statistic,flag\n";
        for (const auto& row : rows)
            out += row.condition + ",\"" + row.statistic + "\"," + row.flag + "\n";
        emit(c, out);
    } else {
        ordered_json j;
        j["request"] = {{"group", c.group}, {"radius", radius}, {"seed", c.seed}};
        ordered_json jrows = ordered_json::array();
        for (const auto& row : rows)
            jrows.push_back({{"condition", row.condition},
                             {"statistic", row.statistic},
                             {"flag", row.flag}});
        j["rows"] = std::move(jrows);
        j["counts"] = {{"consistent", consistent},
                       {"inconsistent", inconsistent},
                       {"inconclusive", inconclusive}};
        emit(c, j.dump(2) + "\n");
    }
    return inconclusive > 0 ? EXIT_UNDECIDED : EXIT_DONE;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool needsGroup = true) {
    if (needsGroup)
        cmd->add_option("--group", c.group,
                        "group spec: free:<k> | zn:<k> | cyclic:<n> | freeprod:<n1>,<n2>[,...] | "
                        "lamplighter | prod(<spec>;<spec>)")
            ->required();
    cmd->add_option("--seed", c.seed,
                    "request seed, echoed in reports; all sampling is fixed-seed deterministic")
        ->capture_default_str();
    auto* j = cmd->add_flag("--json", c.wantJson, "JSON output (the default)");
    auto* v = cmd->add_flag("--csv", c.wantCsv, "CSV output where available");
    auto* d = cmd->add_flag("--dot", c.wantDot, "Graphviz output where available");
    j->excludes(v);
    j->excludes(d);
    v->excludes(d);
    cmd->add_option("--out", c.outPath, "write the report to this file instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Finite Cayley balls and the tree-likeness battery"};
    app.require_subcommand(1);

    CommonOpts c;

    auto* ball = app.add_subcommand("ball", "materialize a ball and report its size profile");
    int ballRadius = 0;
    add_common(ball, c);
    ball->add_option("--radius", ballRadius, "ball radius")->required();
    ball->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* tri = app.add_subcommand("triangulate", "triangulate one closed path");
    int triRadius = 0, triM = 1;
    std::string triWord;
    bool triConstructive = false;
    add_common(tri, c);
    tri->add_option("--word", triWord, "closed word traced from the identity")->required();
    tri->add_option("--m", triM, "chord bound m")->capture_default_str();
    tri->add_option("--radius", triRadius,
                    "ball radius; raised automatically to certify all chords");
    tri->add_flag("--constructive", triConstructive,
                  "use the prefix-cancellation construction (tree graphs only)");
    tri->add_option("--budget", c.budget, "search state budget (default 1000000)");

    auto* survey = app.add_subcommand("triangulate-survey",
                                      "triangulate every short closed path at the identity");
    int surveyRadius = 0, surveyL = 8, surveyM = 1;
    add_common(survey, c);
    survey->add_option("--L", surveyL, "maximum closed path length")->capture_default_str();
    survey->add_option("--m", surveyM, "chord bound m")->capture_default_str();
    survey->add_option("--radius", surveyRadius,
                       "ball radius; raised automatically to certify all chords");
    survey->add_option("--budget", c.budget, "per-instance search budget (default 1000000)");

    auto* minm = app.add_subcommand("minimal-m", "least chord bound triangulating a closed path");
    int minmRadius = 0, minmMax = 8;
    std::string minmWord;
    add_common(minm, c);
    minm->add_option("--word", minmWord, "closed word traced from the identity")->required();
    minm->add_option("--max-m", minmMax, "largest chord bound to try")->capture_default_str();
    minm->add_option("--radius", minmRadius,
                     "ball radius; raised automatically to certify all chords");
    minm->add_option("--budget", c.budget, "per-level search budget (default 1000000)");

    auto* gromov = app.add_subcommand("gromov", "Gromov product of two points at a base point");
    int gromovRadius = 9;
    std::string gromovU, gromovV, gromovZ;
    add_common(gromov, c);
    gromov->add_option("--u", gromovU, "first point, as a word")->required();
    gromov->add_option("--v", gromovV, "second point, as a word")->required();
    gromov->add_option("--z", gromovZ, "base point, as a word (default: identity)");
    gromov->add_option("--radius", gromovRadius, "ball radius")->capture_default_str();
    gromov->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* scan = app.add_subcommand("path-scan",
                                    "exact maxima of the path inequality over the certified core");
    int scanRadius = 9, scanLen = 8;
    long long scanLimit = 5'000'000;
    add_common(scan, c);
    scan->add_option("--radius", scanRadius, "ball radius")->capture_default_str();
    scan->add_option("--max-path-len", scanLen, "longest detour path examined")
        ->capture_default_str();
    scan->add_option("--sample-limit", scanLimit,
                     "triple count above which the scan switches to fixed-seed sampling")
        ->capture_default_str();
    scan->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* profile = app.add_subcommand("boundary-profile",
                                       "boundary diameters of complement components by level");
    int profRadius = 9, profMin = 1, profMax = -1;
    std::string profCenter;
    add_common(profile, c);
    profile->add_option("--radius", profRadius, "ball radius")->capture_default_str();
    profile->add_option("--center", profCenter, "profile center, as a word (default: identity)");
    profile->add_option("--n-min", profMin, "first level")->capture_default_str();
    profile->add_option("--n-max", profMax,
                        "last level (default: certified radius minus one)");
    profile->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* decompose = app.add_subcommand("tree-decompose",
                                         "boundary-layer partition and its 1-graph tree check");
    int decompRadius = 7;
    std::string decompCenter;
    add_common(decompose, c);
    decompose->add_option("--radius", decompRadius, "ball radius")->capture_default_str();
    decompose->add_option("--center", decompCenter,
                          "decomposition center, as a word (default: identity)");
    decompose->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* spanning = app.add_subcommand("spanning-tree",
                                        "spanning tree induced by the decomposition, with "
                                        "distortion certificates");
    int spanRadius = 7;
    long long spanPairs = 50'000;
    std::string spanCenter;
    add_common(spanning, c);
    spanning->add_option("--radius", spanRadius, "ball radius")->capture_default_str();
    spanning->add_option("--center", spanCenter,
                         "decomposition center, as a word (default: identity)");
    spanning->add_option("--sample-pairs", spanPairs,
                         "extra fixed-seed distortion pairs beyond the exhaustive core")
        ->capture_default_str();
    spanning->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* asdim = app.add_subcommand("asdim-color",
                                     "corona coloring with witness checks and the zr "
                                     "factorization");
    int asdimRadius = -1, asdimM = 2;
    add_common(asdim, c);
    asdim->add_option("--m", asdimM, "corona width")->capture_default_str();
    asdim->add_option("--radius", asdimRadius, "ball radius (default: 3m + 6)");
    asdim->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* alpha = app.add_subcommand("almost-invariant",
                                     "translation-invariant labeling of the deep ball");
    int alphaRadius = -1, alphaM = 1, alphaGMax = 2, alphaHCap = -1;
    add_common(alpha, c);
    alpha->add_option("--m", alphaM, "ball label width")->capture_default_str();
    alpha->add_option("--g-max", alphaGMax, "largest translator norm swept")
        ->capture_default_str();
    alpha->add_option("--h-cap", alphaHCap,
                      "deepest labeled norm (default: the certified radius)");
    alpha->add_option("--radius", alphaRadius, "ball radius (default: 3m + 9)");
    alpha->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    auto* locgeo = app.add_subcommand("geodesic-survey",
                                      "locally geodesic words that are not geodesic");
    int locgeoK = 2, locgeoL = 8;
    add_common(locgeo, c);
    locgeo->add_option("--k", locgeoK, "factor window")->capture_default_str();
    locgeo->add_option("--L", locgeoL, "maximum word length")->capture_default_str();
    locgeo->add_option("--budget", c.budget, "enumeration node budget (default 10000000)");

    auto* pda = app.add_subcommand("pda", "free-group word problem recognizer");
    int pdaRank = 2;
    std::string pdaWord;
    add_common(pda, c, false);
    pda->add_option("--rank", pdaRank, "number of free generators")->capture_default_str();
    pda->add_option("--word", pdaWord, "run the machine on this word and trace it");

    auto* verdict = app.add_subcommand("verdict",
                                       "run every characterization probe and tabulate the flags");
    int verdictRadius = 9;
    add_common(verdict, c);
    verdict->add_option("--radius", verdictRadius, "ball radius for the probes")
        ->capture_default_str();
    verdict->add_option("--budget", c.budget, "ball vertex budget (default 2000000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? EXIT_DONE : EXIT_ERROR;
    }

    try {
        if (ball->parsed()) return run_ball(c, ballRadius);
        if (tri->parsed()) return run_triangulate(c, triRadius, triWord, triM, triConstructive);
        if (survey->parsed()) return run_triangulate_survey(c, surveyRadius, surveyL, surveyM);
        if (minm->parsed()) return run_minimal_m(c, minmRadius, minmWord, minmMax);
        if (gromov->parsed()) return run_gromov(c, gromovRadius, gromovU, gromovV, gromovZ);
        if (scan->parsed()) return run_path_scan(c, scanRadius, scanLen, scanLimit);
        if (profile->parsed())
            return run_boundary_profile(c, profRadius, profCenter, profMin, profMax);
        if (decompose->parsed()) return run_tree_decompose(c, decompRadius, decompCenter);
        if (spanning->parsed()) return run_spanning_tree(c, spanRadius, spanCenter, spanPairs);
        if (asdim->parsed()) return run_asdim_color(c, asdimRadius, asdimM);
        if (alpha->parsed())
            return run_almost_invariant(c, alphaRadius, alphaM, alphaGMax, alphaHCap);
        if (locgeo->parsed()) return run_geodesic_survey(c, locgeoK, locgeoL);
        if (pda->parsed()) return run_pda(c, pdaRank, pdaWord);
        if (verdict->parsed()) return run_verdict(c, verdictRadius);
        throw Error("no command dispatched");
    } catch (const BudgetExceededError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return EXIT_UNDECIDED;
    } catch (const UncertifiedDistanceError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return EXIT_UNDECIDED;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_ERROR;
    }
}

}  // namespace treelike
