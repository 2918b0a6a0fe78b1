#include "treelike/treedecomp.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "treelike/coarse.hpp"

namespace treelike {

namespace {

// Seed for the distortion sample; fixed so repeated runs agree byte for byte.
constexpr unsigned long long DISTORTION_SEED = 0x74726565646563ull;

std::vector<int> part_index_of(const CayleyBall& ball, const Partition& partition) {
    std::vector<int> partOf(static_cast<size_t>(ball.size()), -1);
    for (int i = 0; i < partition.count(); ++i)
        for (VertexId v : partition.parts[static_cast<size_t>(i)])
            partOf[static_cast<size_t>(v)] = i;
    return partOf;
}

void sort_unique_rows(std::vector<std::vector<int>>& rows) {
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
}

std::string tree_status_text(TreeCheck::Status s) {
    switch (s) {
        case TreeCheck::Status::OK: return "OK";
        case TreeCheck::Status::CYCLE: return "CYCLE";
        default: return "DISCONNECTED";
    }
}

}  // namespace

Partition make_partition(const CayleyBall& ball, std::vector<std::vector<VertexId>> parts) {
    std::vector<char> taken(static_cast<size_t>(ball.size()), 0);
    for (auto& part : parts) {
        if (part.empty()) throw Error("partition: empty part");
        std::sort(part.begin(), part.end());
        for (VertexId v : part) {
            if (v < 0 || v >= ball.size())
                throw Error("partition: vertex id " + std::to_string(v) + " outside the ball");
            if (taken[static_cast<size_t>(v)])
                throw Error("partition: vertex " + ball.pretty(v) + " appears in two parts");
            taken[static_cast<size_t>(v)] = 1;
        }
    }
    // Disjointness makes the least members distinct, so this order is total.
    std::sort(parts.begin(), parts.end(),
              [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
                  return a.front() < b.front();
              });
    return Partition{std::move(parts)};
}

PartitionRGraph r_graph(const CayleyBall& ball, const Partition& partition, int r, bool strict,
                        bool requireDecided) {
    if (r < 1) throw Error("r_graph: threshold must be >= 1");
    PartitionRGraph g;
    g.r = r;
    g.strict = strict;
    const int count = partition.count();
    g.adjacency.assign(static_cast<size_t>(count), {});
    // Integer metric: strict "< r" means "<= r-1".
    const int cap = strict ? r - 1 : r;
    if (cap <= 0) return g;  // distinct parts are never at distance 0

    const std::vector<int> partOf = part_index_of(ball, partition);

    if (cap == 1) {
        // Adjacency never leaves the ball, so the threshold is decided by
        // the edge list alone.
        for (VertexId v = 0; v < ball.size(); ++v) {
            const int pv = partOf[static_cast<size_t>(v)];
            if (pv < 0) continue;
            for (VertexId w : ball.neighbor_row(v)) {
                if (w == NO_VERTEX || w <= v) continue;
                const int pw = partOf[static_cast<size_t>(w)];
                if (pw < 0 || pw == pv) continue;
                g.adjacency[static_cast<size_t>(pv)].push_back(pw);
                g.adjacency[static_cast<size_t>(pw)].push_back(pv);
            }
        }
        sort_unique_rows(g.adjacency);
        return g;
    }

    std::vector<int> maxNorm(static_cast<size_t>(count), 0);
    for (int i = 0; i < count; ++i)
        for (VertexId v : partition.parts[static_cast<size_t>(i)])
            maxNorm[static_cast<size_t>(i)] = std::max(maxNorm[static_cast<size_t>(i)], ball.radius_label(v));

    // Depth-capped multi-source sweep from each part; any part reached
    // within cap hops is a certified edge (the in-ball path is a real path).
    std::vector<int> dist(static_cast<size_t>(ball.size()), -1);
    std::vector<VertexId> order;
    order.reserve(static_cast<size_t>(ball.size()));
    for (int s = 0; s < count; ++s) {
        order.clear();
        for (VertexId v : partition.parts[static_cast<size_t>(s)]) {
            dist[static_cast<size_t>(v)] = 0;
            order.push_back(v);
        }
        for (size_t head = 0; head < order.size(); ++head) {
            const VertexId v = order[head];
            if (dist[static_cast<size_t>(v)] == cap) break;
            for (VertexId w : ball.neighbor_row(v)) {
                if (w == NO_VERTEX || dist[static_cast<size_t>(w)] >= 0) continue;
                dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                order.push_back(w);
                const int pw = partOf[static_cast<size_t>(w)];
                if (pw > s) {
                    g.adjacency[static_cast<size_t>(s)].push_back(pw);
                    g.adjacency[static_cast<size_t>(pw)].push_back(s);
                }
            }
        }
        for (VertexId v : order) dist[static_cast<size_t>(v)] = -1;
    }
    sort_unique_rows(g.adjacency);

    if (!ball.oracle().free_basis()) {
        // An absent edge is only trustworthy when every route through the
        // outside is too long: leaving the ball from u and returning to v
        // costs at least 2(R+1) - |u| - |v| hops.
        const int need = 2 * (ball.radius() + 1) - cap;
        std::vector<int> rim;
        for (int s = 0; s < count; ++s)
            if (maxNorm[static_cast<size_t>(s)] + ball.radius() >= need) rim.push_back(s);
        for (size_t a = 0; a < rim.size(); ++a)
            for (size_t b = a + 1; b < rim.size(); ++b) {
                const int i = rim[a], j = rim[b];
                if (maxNorm[static_cast<size_t>(i)] + maxNorm[static_cast<size_t>(j)] < need) continue;
                const auto& row = g.adjacency[static_cast<size_t>(i)];
                if (!std::binary_search(row.begin(), row.end(), j)) g.unknown.emplace_back(i, j);
            }
    }
    if (!g.unknown.empty() && (strict || requireDecided))
        throw UncertifiedDistanceError("r_graph: " + std::to_string(g.unknown.size()) +
                                       " part pairs undecided at threshold " + std::to_string(r));
    return g;
}

TreeCheck is_tree(const std::vector<std::vector<int>>& adjacency) {
    TreeCheck out;
    const int n = static_cast<int>(adjacency.size());
    if (n == 0) return out;
    std::vector<int> parent(static_cast<size_t>(n), -2), depth(static_cast<size_t>(n), 0);
    std::vector<int> queue{0};
    parent[0] = -1;
    for (size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int w : adjacency[static_cast<size_t>(u)]) {
            if (w == u) {
                out.status = TreeCheck::Status::CYCLE;
                out.witness = {u};
                return out;
            }
            if (parent[static_cast<size_t>(w)] == -2) {
                parent[static_cast<size_t>(w)] = u;
                depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(u)] + 1;
                queue.push_back(w);
                continue;
            }
            if (w == parent[static_cast<size_t>(u)]) continue;
            // Non-tree edge: walk both endpoints to their meet and report
            // the cycle in order.
            int a = u, b = w;
            std::vector<int> left{a}, right{b};
            while (depth[static_cast<size_t>(a)] > depth[static_cast<size_t>(b)]) {
                a = parent[static_cast<size_t>(a)];
                left.push_back(a);
            }
            while (depth[static_cast<size_t>(b)] > depth[static_cast<size_t>(a)]) {
                b = parent[static_cast<size_t>(b)];
                right.push_back(b);
            }
            while (a != b) {
                a = parent[static_cast<size_t>(a)];
                b = parent[static_cast<size_t>(b)];
                left.push_back(a);
                right.push_back(b);
            }
            out.status = TreeCheck::Status::CYCLE;
            out.witness = std::move(left);
            for (size_t i = right.size() - 1; i-- > 0;) out.witness.push_back(right[i]);
            return out;
        }
    }
    for (int v = 0; v < n; ++v)
        if (parent[static_cast<size_t>(v)] == -2) {
            out.status = TreeCheck::Status::DISCONNECTED;
            out.witness = {0, v};
            return out;
        }
    return out;
}

StrongTreeDecomposition strong_tree_decomposition(const CayleyBall& ball, VertexId center) {
    if (center < 0 || center >= ball.size())
        throw Error("strong_tree_decomposition: center outside the ball");
    StrongTreeDecomposition out;
    out.center = center;

    const std::vector<int> centerDist = ball.hops_from(center);
    const int maxDist = *std::max_element(centerDist.begin(), centerDist.end());
    out.levelCount = maxDist;

    // One part per complement component per level, holding the component's
    // boundary: exactly its vertices at distance n+1 from the center (each
    // has its BFS parent at distance n, and no deeper vertex touches B(n)).
    std::vector<std::vector<VertexId>> parts{{center}};
    std::vector<int> levels{-1};
    for (int n = 0; n < maxDist; ++n) {
        const ComplementComponents cc = complement_components(ball, center, n);
        for (const auto& comp : cc.components) {
            std::vector<VertexId> boundary;
            for (VertexId v : comp)
                if (centerDist[static_cast<size_t>(v)] == n + 1) boundary.push_back(v);
            if (boundary.empty())
                throw Error("strong_tree_decomposition: component with empty boundary (bug)");
            parts.push_back(std::move(boundary));
            levels.push_back(n);
        }
    }

    std::vector<size_t> perm(parts.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    std::sort(perm.begin(), perm.end(),
              [&parts](size_t a, size_t b) { return parts[a].front() < parts[b].front(); });
    out.partition.parts.reserve(parts.size());
    out.level.reserve(parts.size());
    for (size_t p : perm) {
        out.partition.parts.push_back(std::move(parts[p]));
        out.level.push_back(levels[p]);
    }
    out.partOf = part_index_of(ball, out.partition);

    // Beyond the certified radius the in-ball component structure may not
    // match the full graph (components can merge outside), so those levels
    // are advisory only. A tree ball never splits a true component.
    const bool faithfulEverywhere = ball.oracle().free_basis();
    const int count = out.partition.count();
    out.diameter.assign(static_cast<size_t>(count), 0);
    out.truncated.assign(static_cast<size_t>(count), 0);
    for (int i = 0; i < count; ++i) {
        const auto& part = out.partition.parts[static_cast<size_t>(i)];
        bool allCertified = true;
        int diam = 0;
        if (part.size() > 1) {
            for (size_t a = 0; a + 1 < part.size(); ++a) {
                const std::vector<int> hops = ball.hops_from(part[a]);
                for (size_t b = a + 1; b < part.size(); ++b) {
                    const int h = hops[static_cast<size_t>(part[b])];
                    diam = std::max(diam, h);
                    allCertified = allCertified && ball.certified(part[a], part[b], h);
                }
            }
        }
        out.diameter[static_cast<size_t>(i)] = diam;
        const bool levelSuspect =
            !faithfulEverywhere && out.level[static_cast<size_t>(i)] >= ball.certified_radius();
        out.truncated[static_cast<size_t>(i)] = (levelSuspect || !allCertified) ? 1 : 0;
        out.kDiam = std::max(out.kDiam, diam);
        if (!out.truncated[static_cast<size_t>(i)]) out.kDiamCertified = std::max(out.kDiamCertified, diam);
        out.kWidth = std::max(out.kWidth, static_cast<int>(part.size()));
    }

    out.oneGraph = r_graph(ball, out.partition, 1);
    out.treeCheck = is_tree(out.oneGraph.adjacency);
    if (!out.treeCheck.ok()) {
        std::ostringstream msg;
        msg << "strong_tree_decomposition: 1-graph failed the tree check ("
            << tree_status_text(out.treeCheck.status) << ", witness parts";
        for (int p : out.treeCheck.witness) msg << ' ' << p;
        msg << ") contradicting the boundary-layer construction";
        throw Error(msg.str());
    }
    return out;
}

int max_degree(const CayleyBall& ball) {
    int best = 0;
    for (VertexId v = 0; v < ball.size(); ++v) best = std::max(best, ball.degree(v));
    return best;
}

WidthReport width_check(const StrongTreeDecomposition& std_, int degreeBound) {
    if (degreeBound < 0) throw Error("width_check: negative degree bound");
    WidthReport rep;
    rep.degreeBound = degreeBound;
    rep.kDiam = std_.kDiam;
    rep.kWidth = std_.kWidth;
    long long bound = 1;
    for (int i = 0; i < rep.kDiam; ++i) {
        if (degreeBound == 0 || bound > LLONG_MAX / degreeBound) {
            bound = degreeBound == 0 ? 0 : LLONG_MAX;
            break;
        }
        bound *= degreeBound;
    }
    rep.bound = bound;
    rep.slack = bound - rep.kWidth;
    if (rep.kWidth > bound)
        throw Error("width_check: part size " + std::to_string(rep.kWidth) + " exceeds " +
                    std::to_string(degreeBound) + "^" + std::to_string(rep.kDiam) + " = " +
                    std::to_string(bound));
    return rep;
}

UniformSpanningTree uniform_spanning_tree(const CayleyBall& ball, const StrongTreeDecomposition& std_,
                                          long long extraSamplePairs) {
    if (!std_.treeCheck.ok())
        throw Error("uniform_spanning_tree: decomposition 1-graph is not a tree");
    const int n = ball.size();
    const int count = std_.partition.count();

    UniformSpanningTree tree;
    tree.kDiam = std_.kDiamCertified;
    tree.representative.reserve(static_cast<size_t>(count));
    for (const auto& part : std_.partition.parts) tree.representative.push_back(part.front());

    // Orient the 1-graph tree away from the center's part, then hang every
    // non-representative vertex off its part's representative.
    const int centerPart = std_.part_of(std_.center);
    std::vector<int> partParent(static_cast<size_t>(count), -2);
    std::vector<int> partOrder{centerPart};
    partParent[static_cast<size_t>(centerPart)] = -1;
    for (size_t head = 0; head < partOrder.size(); ++head) {
        const int p = partOrder[head];
        for (int q : std_.oneGraph.adjacency[static_cast<size_t>(p)])
            if (partParent[static_cast<size_t>(q)] == -2) {
                partParent[static_cast<size_t>(q)] = p;
                partOrder.push_back(q);
            }
    }

    std::vector<VertexId> parentVertex(static_cast<size_t>(n), NO_VERTEX);
    std::vector<int> depth(static_cast<size_t>(n), 0);
    for (int p : partOrder) {
        const VertexId rep = tree.representative[static_cast<size_t>(p)];
        const int up = partParent[static_cast<size_t>(p)];
        if (up >= 0) {
            parentVertex[static_cast<size_t>(rep)] = tree.representative[static_cast<size_t>(up)];
            depth[static_cast<size_t>(rep)] =
                depth[static_cast<size_t>(tree.representative[static_cast<size_t>(up)])] + 1;
        }
        for (VertexId v : std_.partition.parts[static_cast<size_t>(p)]) {
            if (v == rep) continue;
            parentVertex[static_cast<size_t>(v)] = rep;
            depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(rep)] + 1;
        }
    }

    tree.adjacency.assign(static_cast<size_t>(n), {});
    for (VertexId v = 0; v < n; ++v)
        if (parentVertex[static_cast<size_t>(v)] != NO_VERTEX) {
            tree.adjacency[static_cast<size_t>(v)].push_back(parentVertex[static_cast<size_t>(v)]);
            tree.adjacency[static_cast<size_t>(parentVertex[static_cast<size_t>(v)])].push_back(v);
        }
    for (auto& row : tree.adjacency) std::sort(row.begin(), row.end());
    if (const TreeCheck check = is_tree(tree.adjacency); !check.ok())
        throw Error("uniform_spanning_tree: constructed graph failed the tree check (" +
                    tree_status_text(check.status) + ")");

    const auto tree_distance = [&](VertexId u, VertexId v) {
        int steps = 0;
        while (depth[static_cast<size_t>(u)] > depth[static_cast<size_t>(v)]) {
            u = parentVertex[static_cast<size_t>(u)];
            ++steps;
        }
        while (depth[static_cast<size_t>(v)] > depth[static_cast<size_t>(u)]) {
            v = parentVertex[static_cast<size_t>(v)];
            ++steps;
        }
        while (u != v) {
            u = parentVertex[static_cast<size_t>(u)];
            v = parentVertex[static_cast<size_t>(v)];
            steps += 2;
        }
        return steps;
    };

    DistortionStats st;
    st.coreExhaustive = true;
    const long long upperFactor = 2LL * tree.kDiam + 1;
    const auto consider = [&](VertexId u, VertexId v, int dG) {
        if (u == v || dG <= 0) return;
        if (std_.truncated[static_cast<size_t>(std_.part_of(u))] ||
            std_.truncated[static_cast<size_t>(std_.part_of(v))])
            return;
        const int dT = tree_distance(u, v);
        ++st.pairs;
        if (dT > 3LL * dG) ++st.lowerViolations;
        if (dG > upperFactor * dT) ++st.upperViolations;
        if (st.maxTreeOverGraph < Ratio{dT, dG}) st.maxTreeOverGraph = Ratio{dT, dG};
        if (st.maxGraphOverTree < Ratio{dG, dT}) st.maxGraphOverTree = Ratio{dG, dT};
    };

    const bool onTree = ball.oracle().free_basis();
    const VertexId coreEnd = ball.sphere_range(ball.certified_radius()).second;
    const auto word_distance = [&ball](VertexId u, VertexId v) {
        // Tree metric read off the geodesic words: drop the common prefix.
        const Word a = ball.word_of(u);
        const Word b = ball.word_of(v);
        size_t p = 0;
        while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
        return static_cast<int>(a.size() + b.size() - 2 * p);
    };

    // Every pair in the certified core, where in-ball distances are exact.
    if (onTree) {
        for (VertexId u = 0; u < coreEnd; ++u)
            for (VertexId v = u + 1; v < coreEnd; ++v) consider(u, v, word_distance(u, v));
    } else {
        for (VertexId u = 0; u < coreEnd; ++u) {
            const std::vector<int> hops = ball.hops_from(u);
            for (VertexId v = u + 1; v < coreEnd; ++v) consider(u, v, hops[static_cast<size_t>(v)]);
        }
    }

    if (extraSamplePairs > 0 && n > 1) {
        std::mt19937_64 rng(DISTORTION_SEED);
        const auto draw = [&rng, n] { return static_cast<VertexId>(rng() % static_cast<unsigned long long>(n)); };
        if (onTree) {
            for (long long k = 0; k < extraSamplePairs; ++k) {
                const VertexId u = draw(), v = draw();
                if (u != v) consider(u, v, word_distance(u, v));
            }
        } else {
            // Group draws by source so each costs one BFS row.
            const long long sources = std::min<long long>(64, n);
            const long long perSource = extraSamplePairs / sources;
            for (long long s = 0; s < sources; ++s) {
                const VertexId u = draw();
                const std::vector<int> hops = ball.hops_from(u);
                for (long long k = 0; k < perSource; ++k) {
                    const VertexId v = draw();
                    if (v == u) continue;
                    const int h = hops[static_cast<size_t>(v)];
                    if (!ball.certified(u, v, h)) continue;
                    consider(u, v, h);
                }
            }
        }
    }
    tree.stats = st;
    return tree;
}

std::string std_json(const CayleyBall& ball, const StrongTreeDecomposition& std_) {
    nlohmann::ordered_json j;
    j["center"] = ball.pretty(std_.center);
    j["levels"] = std_.levelCount;
    j["parts"] = std_.partition.count();
    j["K_diam"] = std_.kDiam;
    j["K_diamCertified"] = std_.kDiamCertified;
    j["K_width"] = std_.kWidth;
    j["isTree"] = tree_status_text(std_.treeCheck.status);
    std::vector<int> truncatedLevels;
    for (int i = 0; i < std_.partition.count(); ++i)
        if (std_.truncated[static_cast<size_t>(i)]) truncatedLevels.push_back(std_.level[static_cast<size_t>(i)]);
    std::sort(truncatedLevels.begin(), truncatedLevels.end());
    truncatedLevels.erase(std::unique(truncatedLevels.begin(), truncatedLevels.end()),
                          truncatedLevels.end());
    j["truncatedLevels"] = truncatedLevels;
    return j.dump(2) + "\n";
}

std::string one_graph_dot(const StrongTreeDecomposition& std_) {
    std::ostringstream out;
    out << "graph parts {\n";
    for (int i = 0; i < std_.partition.count(); ++i) {
        out << "  p" << i << " [label=\"L" << std_.level[static_cast<size_t>(i)] << " #"
            << std_.partition.parts[static_cast<size_t>(i)].size() << "\"";
        if (std_.truncated[static_cast<size_t>(i)]) out << ", style=dashed";
        out << "];\n";
    }
    for (int i = 0; i < std_.partition.count(); ++i)
        for (int jx : std_.oneGraph.adjacency[static_cast<size_t>(i)])
            if (jx > i) out << "  p" << i << " -- p" << jx << ";\n";
    out << "}\n";
    return out.str();
}

std::string spanning_tree_dot(const CayleyBall& ball, const UniformSpanningTree& tree) {
    std::ostringstream out;
    out << "graph spanning_tree {\n";
    for (VertexId v = 0; v < ball.size(); ++v)
        out << "  n" << v << " [label=\"" << ball.pretty(v) << "\"];\n";
    for (VertexId v = 0; v < ball.size(); ++v)
        for (VertexId w : tree.adjacency[static_cast<size_t>(v)])
            if (w > v) out << "  n" << v << " -- n" << w << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace treelike
