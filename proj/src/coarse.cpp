#include "treelike/coarse.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>

#include "json.hpp"

namespace treelike {

HalfInteger gromov_product(const CayleyBall& ball, VertexId x, VertexId y, VertexId z) {
    int zx = ball.certified_distance(z, x);
    int zy = ball.certified_distance(z, y);
    int xy = ball.certified_distance(x, y);
    return HalfInteger{zx + zy - xy};
}

namespace {

std::vector<std::vector<VertexId>> components_above(const CayleyBall& ball,
                                                    const std::vector<int>& centerDist, int n) {
    int size = ball.size();
    std::vector<char> seen(static_cast<size_t>(size), 0);
    std::vector<std::vector<VertexId>> components;
    std::vector<VertexId> queue;
    for (VertexId start = 0; start < size; ++start) {
        if (seen[static_cast<size_t>(start)] || centerDist[static_cast<size_t>(start)] <= n)
            continue;
        std::vector<VertexId> comp;
        queue.assign(1, start);
        seen[static_cast<size_t>(start)] = 1;
        while (!queue.empty()) {
            VertexId v = queue.back();
            queue.pop_back();
            comp.push_back(v);
            for (VertexId w : ball.neighbor_row(v))
                if (w != NO_VERTEX && !seen[static_cast<size_t>(w)] &&
                    centerDist[static_cast<size_t>(w)] > n) {
                    seen[static_cast<size_t>(w)] = 1;
                    queue.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    // Scanning start vertices in ascending order already yields components
    // ordered by least member.
    return components;
}

}  // namespace

ComplementComponents complement_components(const CayleyBall& ball, VertexId center, int n) {
    if (n < 0) throw Error("complement level must be nonnegative");
    std::vector<int> centerDist = ball.hops_from(center);
    ComplementComponents out;
    out.center = center;
    out.level = n;
    out.components = components_above(ball, centerDist, n);
    for (VertexId v = 0; v < ball.size(); ++v)
        if (!ball.certified(center, v, centerDist[static_cast<size_t>(v)])) {
            out.centerDistancesCertified = false;
            break;
        }
    return out;
}

BoundaryProfile boundary_profile(const CayleyBall& ball, VertexId center, int nMin, int nMax) {
    if (nMin < 0 || nMax < nMin) throw Error("bad level range for boundary profile");
    std::vector<int> centerDist = ball.hops_from(center);
    bool centerCertified = true;
    for (VertexId v = 0; v < ball.size(); ++v)
        if (!ball.certified(center, v, centerDist[static_cast<size_t>(v)])) {
            centerCertified = false;
            break;
        }

    BoundaryProfile profile;
    profile.center = center;
    for (int n = nMin; n <= nMax; ++n) {
        BoundaryLevelRow row;
        row.level = n;
        // A vertex one step outside the ball has word length radius+1, so
        // it sits in the complement of the level-n ball exactly when
        // radius+1 - |center| > n. Only a deep center can break that, and
        // then boundary membership cannot be trusted.
        bool boundaryMayMissVertices = ball.radius() + 1 - ball.radius_label(center) <= n;
        auto components = components_above(ball, centerDist, n);
        for (size_t ci = 0; ci < components.size(); ++ci) {
            const auto& comp = components[ci];
            BoundaryComponentRow crow;
            crow.id = static_cast<int>(ci);
            crow.size = static_cast<int>(comp.size());
            for (VertexId v : comp) {
                bool onBoundary = false;
                for (VertexId w : ball.neighbor_row(v)) {
                    if (w == NO_VERTEX)
                        crow.escapesBall = true;
                    else if (centerDist[static_cast<size_t>(w)] <= n)
                        onBoundary = true;
                }
                if (onBoundary) crow.boundary.push_back(v);
            }
            bool allCertified = true;
            for (size_t i = 0; i < crow.boundary.size(); ++i) {
                std::vector<int> dist = ball.hops_from(crow.boundary[i]);
                for (size_t j = i + 1; j < crow.boundary.size(); ++j) {
                    int d = dist[static_cast<size_t>(crow.boundary[j])];
                    crow.diameter = std::max(crow.diameter, d);
                    if (!ball.certified(crow.boundary[i], crow.boundary[j], d))
                        allCertified = false;
                }
            }
            crow.truncated = !allCertified || !centerCertified || boundaryMayMissVertices;
            row.components.push_back(std::move(crow));
        }
        profile.rows.push_back(std::move(row));
    }
    return profile;
}

namespace {

// Shared scratch for repeated traversals; stamps spare the per-run clears.
struct StampedScratch {
    std::vector<int> dist;
    std::vector<int> stamp;
    std::vector<VertexId> queue;
    int current = 0;

    void reset(size_t n) {
        dist.assign(n, 0);
        stamp.assign(n, 0);
        current = 0;
    }
    int fresh() { return ++current; }
    bool seen(VertexId v, int s) const { return stamp[static_cast<size_t>(v)] == s; }
    void mark(VertexId v, int s, int d) {
        stamp[static_cast<size_t>(v)] = s;
        dist[static_cast<size_t>(v)] = d;
    }
    int at(VertexId v) const { return dist[static_cast<size_t>(v)]; }
};

// In-ball BFS from u, not exploring past depth cap.
void bounded_ball_bfs(const CayleyBall& ball, VertexId u, int cap, StampedScratch& scr, int s) {
    scr.queue.clear();
    scr.queue.push_back(u);
    scr.mark(u, s, 0);
    for (size_t head = 0; head < scr.queue.size(); ++head) {
        VertexId v = scr.queue[head];
        int d = scr.at(v);
        if (d == cap) continue;
        for (VertexId w : ball.neighbor_row(v))
            if (w != NO_VERTEX && !scr.seen(w, s)) {
                scr.mark(w, s, d + 1);
                scr.queue.push_back(w);
            }
    }
}

struct CoreGraph {
    int count = 0;                // vertices 0..count-1, ids shared with the ball
    int letters = 0;
    std::vector<VertexId> adj;    // core-internal adjacency, NO_VERTEX outside

    VertexId neighbor(VertexId v, int l) const {
        return adj[static_cast<size_t>(v) * static_cast<size_t>(letters) + static_cast<size_t>(l)];
    }
};

CoreGraph core_graph(const CayleyBall& ball, int coreRadius) {
    CoreGraph core;
    auto range = ball.sphere_range(coreRadius);
    core.count = range.second;
    core.letters = ball.letter_count();
    core.adj.assign(static_cast<size_t>(core.count) * static_cast<size_t>(core.letters), NO_VERTEX);
    for (VertexId v = 0; v < core.count; ++v)
        for (int l = 0; l < core.letters; ++l) {
            VertexId w = ball.neighbor(v, l);
            if (w != NO_VERTEX && w < core.count)
                core.adj[static_cast<size_t>(v) * static_cast<size_t>(core.letters) +
                         static_cast<size_t>(l)] = w;
        }
    return core;
}

// BFS inside the core restricted to vertices with zDist >= floor, stopping at
// depth maxLen. Returns the stamp used; optionally records parents.
int threshold_bfs(const CoreGraph& core, VertexId from, int floor, int maxLen,
                  const std::vector<int>& zDist, StampedScratch& scr,
                  std::vector<VertexId>* parent) {
    int s = scr.fresh();
    scr.queue.clear();
    scr.queue.push_back(from);
    scr.mark(from, s, 0);
    if (parent) (*parent)[static_cast<size_t>(from)] = NO_VERTEX;
    for (size_t head = 0; head < scr.queue.size(); ++head) {
        VertexId v = scr.queue[head];
        int d = scr.at(v);
        if (d == maxLen) continue;
        for (int l = 0; l < core.letters; ++l) {
            VertexId w = core.neighbor(v, l);
            if (w == NO_VERTEX || scr.seen(w, s) || zDist[static_cast<size_t>(w)] < floor)
                continue;
            scr.mark(w, s, d + 1);
            if (parent) (*parent)[static_cast<size_t>(w)] = v;
            scr.queue.push_back(w);
        }
    }
    return s;
}

// Largest floor t such that u and v are joined inside the core by a path of
// length <= maxLen whose vertices all have zDist >= t; -1 when not even the
// unrestricted core joins them within maxLen.
int best_clearance(const CoreGraph& core, VertexId u, VertexId v, int maxLen,
                   const std::vector<int>& zDist, StampedScratch& scr) {
    int top = std::min(zDist[static_cast<size_t>(u)], zDist[static_cast<size_t>(v)]);
    for (int t = top; t >= 0; --t) {
        int s = threshold_bfs(core, u, t, maxLen, zDist, scr, nullptr);
        if (scr.seen(v, s)) return t;
    }
    return -1;
}

std::vector<VertexId> clearance_path(const CoreGraph& core, VertexId u, VertexId v, int t,
                                     int maxLen, const std::vector<int>& zDist,
                                     StampedScratch& scr) {
    std::vector<VertexId> parent(static_cast<size_t>(core.count), NO_VERTEX);
    int s = threshold_bfs(core, u, t, maxLen, zDist, scr, &parent);
    if (!scr.seen(v, s)) throw Error("internal: witness path vanished on replay");
    std::vector<VertexId> path{v};
    while (path.back() != u) path.push_back(parent[static_cast<size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
}

struct WitnessSlot {
    VertexId u = NO_VERTEX, v = NO_VERTEX, z = NO_VERTEX;
    int clearance = -1;
    int value2 = std::numeric_limits<int>::min();
};

constexpr std::uint64_t SCAN_SEED = 0x9e3779b97f4a7c15ull;
constexpr int CORE_EXHAUSTIVE_CAP = 2500;

}  // namespace

PathInequalityReport path_inequality_scan(const CayleyBall& ball, int maxPathLen,
                                          long long sampleLimit) {
    if (maxPathLen < 0) throw Error("maxPathLen must be nonnegative");
    if (sampleLimit < 1) throw Error("sampleLimit must be positive");

    PathInequalityReport report;
    report.maxPathLen = maxPathLen;
    report.coreRadius = ball.certified_radius();
    CoreGraph core = core_graph(ball, report.coreRadius);
    int n = core.count;

    StampedScratch coreScr;
    coreScr.reset(static_cast<size_t>(n));
    StampedScratch ballScr;
    ballScr.reset(static_cast<size_t>(ball.size()));

    // True distances from z to core vertices; bounded by 2*coreRadius via
    // the identity, and certified over the core by the radius split.
    auto z_distances = [&](VertexId z, std::vector<int>& out) {
        bounded_ball_bfs(ball, z, 2 * report.coreRadius, ballScr, ballScr.fresh());
        out.resize(static_cast<size_t>(n));
        for (VertexId v = 0; v < n; ++v) {
            if (!ballScr.seen(v, ballScr.current))
                throw Error("internal: core vertex unreachable inside twice the core radius");
            out[static_cast<size_t>(v)] = ballScr.at(v);
            if (!ball.certified(z, v, out[static_cast<size_t>(v)]))
                throw Error("internal: core distance failed certification");
        }
    };

    WitnessSlot b5, b9;
    auto offer = [](WitnessSlot& slot, VertexId u, VertexId v, VertexId z, int t, int value2) {
        if (value2 > slot.value2) slot = {u, v, z, t, value2};
    };

    // The exhaustive sweep wants an all-pairs core table; fall back to
    // sampling when that table or the per-vertex traversals would be
    // unreasonable even if the triple count were small.
    bool tableFeasible =
        n <= CORE_EXHAUSTIVE_CAP &&
        static_cast<double>(n) * static_cast<double>(ball.size()) * core.letters <= 4e9;

    if (tableFeasible) {
        std::vector<int> table(static_cast<size_t>(n) * static_cast<size_t>(n));
        std::vector<int> zDist;
        for (VertexId u = 0; u < n; ++u) {
            z_distances(u, zDist);
            std::copy(zDist.begin(), zDist.end(), table.begin() + static_cast<size_t>(u) * n);
        }
        auto dist = [&](VertexId a, VertexId b) {
            return table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)];
        };

        // Pairs joined inside the core within maxPathLen steps.
        std::vector<char> feasible(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
        long long feasiblePairs = 0;
        std::vector<int> zero(static_cast<size_t>(n), 0);
        for (VertexId u = 0; u < n; ++u) {
            int s = threshold_bfs(core, u, 0, maxPathLen, zero, coreScr, nullptr);
            for (VertexId v = 0; v < n; ++v)
                if (coreScr.seen(v, s)) {
                    feasible[static_cast<size_t>(u) * static_cast<size_t>(n) +
                             static_cast<size_t>(v)] = 1;
                    ++feasiblePairs;
                }
        }
        report.tripleCount = feasiblePairs * n;
        report.exhaustive = report.tripleCount <= sampleLimit;

        if (report.exhaustive) {
            std::vector<int> stat(static_cast<size_t>(n) * static_cast<size_t>(n));
            for (VertexId z = 0; z < n; ++z) {
                const int* zrow = table.data() + static_cast<size_t>(z) * n;
                std::vector<int> zvec(zrow, zrow + n);
                std::fill(stat.begin(), stat.end(), -1);
                int top = *std::max_element(zvec.begin(), zvec.end());
                // Descending clearance sweep: the first level that joins a
                // pair is the best any qualifying path can do.
                for (int t = top; t >= 0; --t)
                    for (VertexId u = 0; u < n; ++u) {
                        if (zvec[static_cast<size_t>(u)] < t) continue;
                        int s = threshold_bfs(core, u, t, maxPathLen, zvec, coreScr, nullptr);
                        int* srow = stat.data() + static_cast<size_t>(u) * n;
                        for (VertexId v = 0; v < n; ++v)
                            if (srow[v] < 0 && coreScr.seen(v, s)) srow[v] = t;
                    }
                for (VertexId u = 0; u < n; ++u)
                    for (VertexId v = 0; v < n; ++v) {
                        int t = stat[static_cast<size_t>(u) * static_cast<size_t>(n) +
                                     static_cast<size_t>(v)];
                        if (t < 0) continue;
                        int product2 = dist(z, u) + dist(z, v) - dist(u, v);
                        offer(b5, u, v, z, t, 2 * t - product2);
                        if (product2 == 0) offer(b9, u, v, z, t, 2 * t);
                    }
            }
        } else {
            std::vector<std::pair<VertexId, VertexId>> pairs;
            pairs.reserve(static_cast<size_t>(feasiblePairs));
            for (VertexId u = 0; u < n; ++u)
                for (VertexId v = 0; v < n; ++v)
                    if (feasible[static_cast<size_t>(u) * static_cast<size_t>(n) +
                                 static_cast<size_t>(v)])
                        pairs.emplace_back(u, v);
            std::mt19937_64 rng(SCAN_SEED);
            std::vector<int> zvec(static_cast<size_t>(n));
            for (long long i = 0; i < sampleLimit; ++i) {
                auto [u, v] = pairs[static_cast<size_t>(rng() % pairs.size())];
                VertexId z = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
                const int* zrow = table.data() + static_cast<size_t>(z) * n;
                std::copy(zrow, zrow + n, zvec.begin());
                int t = best_clearance(core, u, v, maxPathLen, zvec, coreScr);
                if (t < 0) continue;
                int product2 = dist(z, u) + dist(z, v) - dist(u, v);
                offer(b5, u, v, z, t, 2 * t - product2);
                if (product2 == 0) offer(b9, u, v, z, t, 2 * t);
            }
            report.tripleCount = sampleLimit;
        }
    } else {
        report.exhaustive = false;
        report.tripleCount = sampleLimit;
        std::mt19937_64 rng(SCAN_SEED);
        std::vector<int> zvec;
        std::vector<int> uvec;
        for (long long i = 0; i < sampleLimit; ++i) {
            VertexId u = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            VertexId v = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            VertexId z = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            z_distances(z, zvec);
            int t = best_clearance(core, u, v, maxPathLen, zvec, coreScr);
            if (t < 0) continue;
            z_distances(u, uvec);
            int product2 = zvec[static_cast<size_t>(u)] + zvec[static_cast<size_t>(v)] -
                           uvec[static_cast<size_t>(v)];
            offer(b5, u, v, z, t, 2 * t - product2);
            if (product2 == 0) offer(b9, u, v, z, t, 2 * t);
        }
    }

    auto finish = [&](const WitnessSlot& slot) -> std::optional<PathInequalityWitness> {
        if (slot.u == NO_VERTEX) return std::nullopt;
        PathInequalityWitness w;
        w.u = slot.u;
        w.v = slot.v;
        w.z = slot.z;
        w.value = HalfInteger{slot.value2};
        std::vector<int> zvec;
        z_distances(slot.z, zvec);
        w.path = clearance_path(core, slot.u, slot.v, slot.clearance, maxPathLen, zvec, coreScr);
        return w;
    };

    report.maxB5 = HalfInteger{b5.u == NO_VERTEX ? 0 : b5.value2};
    // Least half-integer m with maxB5 <= 3m/2: doubled value ceil(2T/3)
    // for positive doubled maximum T, else zero.
    int t2 = report.maxB5.twice;
    report.mB5 = HalfInteger{t2 <= 0 ? 0 : (2 * t2 + 2) / 3};
    report.mB9 = b9.u == NO_VERTEX ? 0 : b9.value2 / 2;
    report.b5Witness = finish(b5);
    report.b9Witness = finish(b9);
    return report;
}

std::string profile_json(const CayleyBall& ball, const BoundaryProfile& profile) {
    nlohmann::ordered_json doc;
    doc["center"] = ball.pretty(profile.center);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : profile.rows) {
        nlohmann::ordered_json jrow;
        jrow["n"] = row.level;
        jrow["components"] = nlohmann::ordered_json::array();
        for (const auto& c : row.components)
            jrow["components"].push_back({{"id", c.id},
                                          {"size", c.size},
                                          {"boundarySize", static_cast<int>(c.boundary.size())},
                                          {"diameter", c.diameter},
                                          {"truncated", c.truncated},
                                          {"escapesBall", c.escapesBall}});
        doc["rows"].push_back(std::move(jrow));
    }
    return doc.dump(2) + "\n";
}

std::string profile_csv(const BoundaryProfile& profile) {
    std::string out = "n,maxDiameter\n";
    for (const auto& row : profile.rows)
        out += std::to_string(row.level) + "," + std::to_string(row.max_diameter()) + "\n";
    return out;
}

std::string path_report_json(const CayleyBall& ball, const PathInequalityReport& report) {
    nlohmann::ordered_json doc;
    doc["maxPathLen"] = report.maxPathLen;
    doc["coreRadius"] = report.coreRadius;
    doc["tripleCount"] = report.tripleCount;
    doc["exhaustive"] = report.exhaustive;
    doc["maxB5"] = report.maxB5.str();
    doc["mB5"] = report.mB5.str();
    doc["mB9"] = report.mB9;
    auto dump_witness = [&](const std::optional<PathInequalityWitness>& w) {
        if (!w) return nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json j;
        j["u"] = ball.pretty(w->u);
        j["v"] = ball.pretty(w->v);
        j["z"] = ball.pretty(w->z);
        j["value"] = w->value.str();
        j["path"] = nlohmann::ordered_json::array();
        for (VertexId p : w->path) j["path"].push_back(ball.pretty(p));
        return j;
    };
    doc["b5Witness"] = dump_witness(report.b5Witness);
    doc["b9Witness"] = dump_witness(report.b9Witness);
    return doc.dump(2) + "\n";
}

}  // namespace treelike
