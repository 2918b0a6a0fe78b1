#pragma once

// Materialized radius-R ball of a Cayley graph. Vertices are numbered in
// BFS discovery order (identity = 0, generators in declared order, then
// inverses), so vertex numbering, sphere layout, and every report built
// on top are deterministic for a given group spec and radius.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treelike/common.hpp"
#include "treelike/groups.hpp"

namespace treelike {

using VertexId = int;
inline constexpr VertexId NO_VERTEX = -1;

// Result of an in-ball distance query. hops is the BFS distance inside
// the ball, or -1 when the target is unreachable without leaving it.
// certified means the value equals the distance in the full Cayley graph.
struct BallDistance {
    int hops = -1;
    bool certified = false;

    bool reachable() const { return hops >= 0; }
};

// Boundary of a vertex set S: members of S with a neighbor outside S.
// Neighbors beyond the ball count as outside, so the set matches the
// boundary taken in the full graph. truncationSuspect marks results
// involving the outermost sphere, where that convention did the work.
struct BoundarySet {
    std::vector<VertexId> vertices;
    bool truncationSuspect = false;
};

class CayleyBall {
public:
    static constexpr long long DEFAULT_BUDGET = 2'000'000;

    CayleyBall(std::shared_ptr<const GroupOracle> oracle, int radius, long long budget = DEFAULT_BUDGET);

    const GroupOracle& oracle() const { return *oracle_; }
    std::shared_ptr<const GroupOracle> oracle_ptr() const { return oracle_; }
    int radius() const { return radius_; }
    int size() const { return static_cast<int>(keys_.size()); }
    int letter_count() const { return letters_; }

    // Largest r such that in-ball distances between vertices of word
    // length <= r are automatically exact (see the lemma in distance()).
    int certified_radius() const { return radius_ / 3; }

    const GroupOracle::Key& key_of(VertexId v) const { return keys_[static_cast<size_t>(v)]; }
    VertexId vertex_of(const GroupOracle::Key& key) const;
    VertexId require_vertex(const GroupOracle::Key& key) const;
    VertexId vertex_of_word(const std::string& text) const;
    std::string pretty(VertexId v) const { return oracle_->pretty(key_of(v)); }

    // Word length |g| = distance from the identity.
    int radius_label(VertexId v) const { return label_[static_cast<size_t>(v)]; }

    VertexId neighbor(VertexId v, int letter) const {
        return adj_[static_cast<size_t>(v) * static_cast<size_t>(letters_) + static_cast<size_t>(letter)];
    }
    std::span<const VertexId> neighbor_row(VertexId v) const {
        return {adj_.data() + static_cast<size_t>(v) * static_cast<size_t>(letters_),
                static_cast<size_t>(letters_)};
    }
    int degree(VertexId v) const;

    // Vertices with word length exactly n; contiguous ids [first, last).
    std::pair<VertexId, VertexId> sphere_range(int n) const;
    std::vector<VertexId> sphere(int n) const;
    std::vector<int> sphere_sizes() const;

    // Geodesic word from the identity to v, read off the BFS tree.
    Word word_of(VertexId v) const;

    BallDistance distance(VertexId u, VertexId v) const;
    // distance() that must be certified; throws UncertifiedDistanceError
    // when truncation could distort the value.
    int certified_distance(VertexId u, VertexId v) const;
    // Decides dist(u,v) <= m in the full graph when the ball suffices;
    // throws UncertifiedDistanceError when it cannot be decided here.
    bool distance_at_most(VertexId u, VertexId v, int m) const;
    // Exact distance when it is <= cap, nullopt when certifiably larger;
    // throws UncertifiedDistanceError otherwise. Explores only the
    // cap-neighborhood of u, so it is cheap even on large balls.
    std::optional<int> distance_if_at_most(VertexId u, VertexId v, int cap) const;

    // In-ball BFS distances from u to every vertex, indexed by VertexId.
    // The ball is connected, so every entry is >= 0.
    std::vector<int> hops_from(VertexId u) const;

    // Whether an in-ball hop count between u and v is automatically the
    // full-graph distance; same rule distance() applies.
    bool certified(VertexId u, VertexId v, int hops) const;

    // Path realizing the in-ball BFS distance, deterministic via
    // lowest-index predecessor. Throws Error when unreachable.
    std::vector<VertexId> geodesic(VertexId u, VertexId v) const;

    BoundarySet boundary(const std::vector<VertexId>& S) const;

private:
    // BFS layers from u over in-ball edges; dist entries are -1 where
    // unreached. Stops early once v is settled (pass NO_VERTEX to map
    // the whole ball). Returns dist[v] (or -1).
    int bfs_from(VertexId u, VertexId v, std::vector<int>& dist) const;

    std::shared_ptr<const GroupOracle> oracle_;
    int radius_ = 0;
    int letters_ = 0;
    std::vector<GroupOracle::Key> keys_;
    std::unordered_map<GroupOracle::Key, VertexId> ids_;
    std::vector<int> label_;
    std::vector<VertexId> adj_;           // size() x letter_count(), NO_VERTEX padded
    std::vector<int> parent_letter_;      // letter used to discover each vertex; -1 at root
    std::vector<VertexId> parent_;        // BFS parent; NO_VERTEX at root
    std::vector<VertexId> sphere_begin_;  // radius_+2 offsets into id space
};

inline CayleyBall build_ball(std::shared_ptr<const GroupOracle> oracle, int radius,
                             long long budget = CayleyBall::DEFAULT_BUDGET) {
    return CayleyBall(std::move(oracle), radius, budget);
}

// Graphviz rendering: one node per vertex (pretty key + word length),
// one undirected edge per (vertex, positive generator) pair.
std::string ball_dot(const CayleyBall& ball);

// Compact machine-readable summary {spec, radius, vertexCount, sphereSizes}.
std::string ball_summary_json(const CayleyBall& ball, const std::string& spec_text);

}  // namespace treelike
