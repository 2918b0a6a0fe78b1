#pragma once

// Partitions of a ball, r-graphs over them, the boundary-layer strong tree
// decomposition, and the spanning tree it induces with its metric
// distortion certificates.

#include <string>
#include <vector>

#include "treelike/cayley.hpp"
#include "treelike/common.hpp"

namespace treelike {

// Disjoint nonempty parts covering all ball vertices, ordered by least
// contained vertex; members sorted ascending.
struct Partition {
    std::vector<std::vector<VertexId>> parts;

    int count() const { return static_cast<int>(parts.size()); }
};

// Validates and normalizes: sorts members, orders parts, checks the
// disjoint cover of 0..ball.size()-1. Throws Error on violations.
Partition make_partition(const CayleyBall& ball, std::vector<std::vector<VertexId>> parts);

// Graph on the parts with an edge when the inter-part distance clears the
// threshold: <= r by default, the literal < r in strict mode. Distinct
// parts are never at distance 0, so the strict 1-graph is edgeless; the
// non-strict reading is the one under which the boundary-layer partition
// forms a tree, and the default.
struct PartitionRGraph {
    int r = 1;
    bool strict = false;
    std::vector<std::vector<int>> adjacency;
    // Part pairs whose threshold comparison the ball cannot certify either
    // way; absent edges among these are not trustworthy.
    std::vector<std::pair<int, int>> unknown;
};

PartitionRGraph r_graph(const CayleyBall& ball, const Partition& partition, int r,
                        bool strict = false, bool requireDecided = false);

struct TreeCheck {
    enum class Status { OK, CYCLE, DISCONNECTED };
    Status status = Status::OK;
    // CYCLE: the vertices of a cycle in order. DISCONNECTED: one vertex
    // from each of two separate pieces.
    std::vector<int> witness;

    bool ok() const { return status == Status::OK; }
};

TreeCheck is_tree(const std::vector<std::vector<int>>& adjacency);

// Partition of the ball into the center and the boundaries of the
// complement components of every ball around the center, one part per
// component per level; the associated 1-graph with its tree certificate.
struct StrongTreeDecomposition {
    VertexId center = NO_VERTEX;
    Partition partition;
    // Per part: construction level (-1 for the center part), hop diameter,
    // and whether any distance backing that diameter was uncertified.
    std::vector<int> level;
    std::vector<int> diameter;
    std::vector<char> truncated;
    PartitionRGraph oneGraph;
    TreeCheck treeCheck;
    int levelCount = 0;
    int kDiam = 0;           // max part diameter, truncated parts included
    int kDiamCertified = 0;  // max over parts with trustworthy diameters
    int kWidth = 0;          // max part size

    int part_of(VertexId v) const { return partOf[static_cast<size_t>(v)]; }
    std::vector<int> partOf;
};

StrongTreeDecomposition strong_tree_decomposition(const CayleyBall& ball, VertexId center);

// Checks every part size against degreeBound^kDiam, the width bound a
// bounded-diameter decomposition of a bounded-degree graph must satisfy.
// A violation throws: it would contradict the width lemma.
struct WidthReport {
    int degreeBound = 0;
    int kDiam = 0;
    int kWidth = 0;
    long long bound = 0;  // degreeBound^kDiam, saturated at LLONG_MAX
    long long slack = 0;  // bound - kWidth
};

WidthReport width_check(const StrongTreeDecomposition& std, int degreeBound);

// Max vertex degree of the ball counting distinct neighbors, the bound
// width_check expects.
int max_degree(const CayleyBall& ball);

// Exact nonnegative ratio tracked without floating point.
struct Ratio {
    long long num = 0;
    long long den = 1;

    bool operator<(const Ratio& o) const { return num * o.den < o.num * den; }
    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

struct DistortionStats {
    long long pairs = 0;
    long long lowerViolations = 0;  // tree distance > 3 * graph distance
    long long upperViolations = 0;  // graph distance > (2 kDiam + 1) * tree distance
    Ratio maxTreeOverGraph{0, 1};
    Ratio maxGraphOverTree{0, 1};
    bool coreExhaustive = false;

    Ratio distortion() const {
        return maxTreeOverGraph < maxGraphOverTree ? maxGraphOverTree : maxTreeOverGraph;
    }
};

// Spanning tree over the ball's own vertex ids: a star inside every part
// centered on its least vertex, plus representative-to-representative
// edges along the 1-graph tree.
struct UniformSpanningTree {
    std::vector<std::vector<VertexId>> adjacency;
    std::vector<VertexId> representative;  // per part
    DistortionStats stats;
    int kDiam = 0;  // the diameter constant the upper bound was checked with
};

// Requires std.treeCheck.ok(). Distortion pairs: every pair inside the
// certified core exhaustively, then a fixed-seed sample across the ball
// kept when the graph distance is certified and both parts are
// untruncated.
UniformSpanningTree uniform_spanning_tree(const CayleyBall& ball,
                                          const StrongTreeDecomposition& std,
                                          long long extraSamplePairs = 50000);

std::string std_json(const CayleyBall& ball, const StrongTreeDecomposition& std);
std::string one_graph_dot(const StrongTreeDecomposition& std);
std::string spanning_tree_dot(const CayleyBall& ball, const UniformSpanningTree& tree);

}  // namespace treelike
