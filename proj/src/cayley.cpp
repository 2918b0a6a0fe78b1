#include "treelike/cayley.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace treelike {

CayleyBall::CayleyBall(std::shared_ptr<const GroupOracle> oracle, int radius, long long budget)
    : oracle_(std::move(oracle)), radius_(radius), letters_(oracle_->letter_count()) {
    if (radius_ < 0) throw Error("ball radius must be nonnegative");
    if (budget < 1) throw Error("vertex budget must be positive");

    auto intern = [&](const GroupOracle::Key& key, int label, VertexId parent, int via) {
        if (static_cast<long long>(keys_.size()) + 1 > budget)
            throw BudgetExceededError("ball vertex budget", keys_.size() + 1);
        VertexId id = static_cast<VertexId>(keys_.size());
        keys_.push_back(key);
        ids_.emplace(key, id);
        label_.push_back(label);
        parent_.push_back(parent);
        parent_letter_.push_back(via);
        return id;
    };

    intern(oracle_->identity(), 0, NO_VERTEX, -1);
    // Queue is implicit: vertices are expanded in id order, and BFS
    // guarantees labels are nondecreasing along that order. Every popped
    // vertex gets its full in-ball adjacency row; new vertices are only
    // interned below the radius cap. Any in-ball neighbor of a vertex at
    // label R sits at label >= R-1 and is interned before expansion
    // reaches label R, so truncation never drops in-ball edges.
    for (VertexId v = 0; v < static_cast<VertexId>(keys_.size()); ++v) {
        int label = label_[static_cast<size_t>(v)];
        for (int l = 0; l < letters_; ++l) {
            GroupOracle::Key next = oracle_->right_multiply(keys_[static_cast<size_t>(v)], l);
            auto it = ids_.find(next);
            VertexId w = NO_VERTEX;
            if (it != ids_.end())
                w = it->second;
            else if (label < radius_)
                w = intern(next, label + 1, v, l);
            adj_.push_back(w);
        }
    }

    sphere_begin_.assign(static_cast<size_t>(radius_) + 2, size());
    for (VertexId v = size() - 1; v >= 0; --v)
        sphere_begin_[static_cast<size_t>(label_[static_cast<size_t>(v)])] = v;
    for (int n = radius_; n >= 0; --n)
        if (sphere_begin_[static_cast<size_t>(n)] > sphere_begin_[static_cast<size_t>(n) + 1])
            sphere_begin_[static_cast<size_t>(n)] = sphere_begin_[static_cast<size_t>(n) + 1];
}

VertexId CayleyBall::vertex_of(const GroupOracle::Key& key) const {
    auto it = ids_.find(key);
    return it == ids_.end() ? NO_VERTEX : it->second;
}

VertexId CayleyBall::require_vertex(const GroupOracle::Key& key) const {
    VertexId v = vertex_of(key);
    if (v == NO_VERTEX)
        throw Error("element " + oracle_->pretty(key) + " lies outside the radius-" +
                    std::to_string(radius_) + " ball");
    return v;
}

VertexId CayleyBall::vertex_of_word(const std::string& text) const {
    return require_vertex(evaluate(*oracle_, parse_word(text)));
}

int CayleyBall::degree(VertexId v) const {
    auto row = neighbor_row(v);
    return static_cast<int>(std::count_if(row.begin(), row.end(), [](VertexId w) { return w != NO_VERTEX; }));
}

std::pair<VertexId, VertexId> CayleyBall::sphere_range(int n) const {
    if (n < 0 || n > radius_) return {0, 0};
    return {sphere_begin_[static_cast<size_t>(n)], sphere_begin_[static_cast<size_t>(n) + 1]};
}

std::vector<VertexId> CayleyBall::sphere(int n) const {
    auto [first, last] = sphere_range(n);
    std::vector<VertexId> out(static_cast<size_t>(last - first));
    std::iota(out.begin(), out.end(), first);
    return out;
}

std::vector<int> CayleyBall::sphere_sizes() const {
    std::vector<int> sizes;
    for (int n = 0; n <= radius_; ++n) {
        auto [first, last] = sphere_range(n);
        sizes.push_back(last - first);
    }
    return sizes;
}

Word CayleyBall::word_of(VertexId v) const {
    Word w;
    for (VertexId cur = v; cur != 0; cur = parent_[static_cast<size_t>(cur)])
        w.push_back(oracle_->letter_symbol(parent_letter_[static_cast<size_t>(cur)]));
    std::reverse(w.begin(), w.end());
    return w;
}

int CayleyBall::bfs_from(VertexId u, VertexId v, std::vector<int>& dist) const {
    dist.assign(static_cast<size_t>(size()), -1);
    dist[static_cast<size_t>(u)] = 0;
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        if (cur == v) return dist[static_cast<size_t>(cur)];
        int d = dist[static_cast<size_t>(cur)];
        for (VertexId w : neighbor_row(cur))
            if (w != NO_VERTEX && dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = d + 1;
                queue.push_back(w);
            }
    }
    return v == NO_VERTEX ? -1 : dist[static_cast<size_t>(v)];
}

BallDistance CayleyBall::distance(VertexId u, VertexId v) const {
    std::vector<int> dist;
    int hops = bfs_from(u, v, dist);
    if (hops < 0) return {};
    return {hops, certified(u, v, hops)};
}

std::optional<int> CayleyBall::distance_if_at_most(VertexId u, VertexId v, int cap) const {
    if (cap < 0) throw Error("distance cap must be nonnegative");
    // Paths that leave the ball visit norm radius+1 on the way out and
    // back, so they cost at least escape. Everything at or under that
    // bound is decided by the in-ball cap-neighborhood of u alone.
    long long escape = oracle_->free_basis()
                           ? std::numeric_limits<long long>::max()
                           : 2LL * (radius_ + 1) - radius_label(u) - radius_label(v);
    std::unordered_map<VertexId, int> seen{{u, 0}};
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        int d = seen[cur];
        if (cur == v) {
            if (d <= escape) return d;
            throw UncertifiedDistanceError("distance " + pretty(u) + " .. " + pretty(v) +
                                           " found at " + std::to_string(d) +
                                           " but a shorter outside path is not excluded");
        }
        if (d == cap) continue;
        for (VertexId w : neighbor_row(cur))
            if (w != NO_VERTEX && seen.emplace(w, d + 1).second) queue.push_back(w);
    }
    if (escape > cap) return std::nullopt;
    throw UncertifiedDistanceError("cannot decide dist(" + pretty(u) + ", " + pretty(v) + ") <= " +
                                   std::to_string(cap) + " inside radius " + std::to_string(radius_));
}

bool CayleyBall::distance_at_most(VertexId u, VertexId v, int m) const {
    if (m < 0) return false;
    long long escape = oracle_->free_basis()
                           ? std::numeric_limits<long long>::max()
                           : 2LL * (radius_ + 1) - radius_label(u) - radius_label(v);
    std::unordered_map<VertexId, int> seen{{u, 0}};
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        int d = seen[cur];
        if (cur == v) return true;  // an in-ball path is a real path
        if (d == m) continue;
        for (VertexId w : neighbor_row(cur))
            if (w != NO_VERTEX && seen.emplace(w, d + 1).second) queue.push_back(w);
    }
    if (escape > m) return false;
    throw UncertifiedDistanceError("cannot decide dist(" + pretty(u) + ", " + pretty(v) + ") <= " +
                                   std::to_string(m) + " inside radius " + std::to_string(radius_));
}

std::vector<int> CayleyBall::hops_from(VertexId u) const {
    std::vector<int> dist;
    bfs_from(u, NO_VERTEX, dist);
    return dist;
}

bool CayleyBall::certified(VertexId u, VertexId v, int hops) const {
    // In-ball distances only over-estimate: every in-ball path exists in
    // the full graph. Exactness lemma: a true geodesic from u of length
    // d stays inside radius |u| + d, so min(|u|,|v|) + hops <= R forces
    // hops to match the true distance. This covers the whole region
    // |u|, |v| <= floor(R/3), since hops <= |u| + |v| via the identity.
    // On a tree the unique geodesic runs through the endpoints' meet and
    // never climbs above their norms, so it is always in the ball.
    return std::min(radius_label(u), radius_label(v)) + hops <= radius_ || oracle_->free_basis();
}

int CayleyBall::certified_distance(VertexId u, VertexId v) const {
    BallDistance d = distance(u, v);
    if (!d.certified)
        throw UncertifiedDistanceError("distance " + pretty(u) + " .. " + pretty(v) +
                                       " is not certified at ball radius " + std::to_string(radius_));
    return d.hops;
}

std::vector<VertexId> CayleyBall::geodesic(VertexId u, VertexId v) const {
    std::vector<int> dist;
    int hops = bfs_from(u, NO_VERTEX, dist);
    static_cast<void>(hops);
    if (dist[static_cast<size_t>(v)] < 0)
        throw Error("no in-ball path between " + pretty(u) + " and " + pretty(v));
    std::vector<VertexId> path{v};
    while (path.back() != u) {
        VertexId cur = path.back();
        VertexId best = NO_VERTEX;
        for (VertexId w : neighbor_row(cur))
            if (w != NO_VERTEX && dist[static_cast<size_t>(w)] == dist[static_cast<size_t>(cur)] - 1 &&
                (best == NO_VERTEX || w < best))
                best = w;
        path.push_back(best);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

BoundarySet CayleyBall::boundary(const std::vector<VertexId>& S) const {
    std::vector<char> in(static_cast<size_t>(size()), 0);
    for (VertexId v : S) in[static_cast<size_t>(v)] = 1;
    BoundarySet out;
    std::vector<VertexId> members(S);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (VertexId v : members) {
        if (radius_label(v) == radius_) out.truncationSuspect = true;
        // A NO_VERTEX entry names an element of norm radius+1 (the ball
        // holds every element of norm <= radius), which certainly lies
        // outside S, so the computed set is the true boundary.
        for (VertexId w : neighbor_row(v))
            if (w == NO_VERTEX || !in[static_cast<size_t>(w)]) {
                out.vertices.push_back(v);
                break;
            }
    }
    return out;
}

std::string ball_dot(const CayleyBall& ball) {
    std::ostringstream out;
    out << "graph ball {\n";
    for (VertexId v = 0; v < ball.size(); ++v)
        out << "  n" << v << " [label=\"" << ball.pretty(v) << "\", radius=" << ball.radius_label(v)
            << "];\n";
    int rank = ball.oracle().rank();
    for (VertexId v = 0; v < ball.size(); ++v)
        for (int l = 0; l < rank; ++l)
            if (VertexId w = ball.neighbor(v, l); w != NO_VERTEX)
                out << "  n" << v << " -- n" << w << " [label=\"" << ball.oracle().generator_names()[static_cast<size_t>(l)]
                    << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string ball_summary_json(const CayleyBall& ball, const std::string& spec_text) {
    nlohmann::ordered_json j;
    j["spec"] = spec_text;
    j["radius"] = ball.radius();
    j["vertexCount"] = ball.size();
    j["sphereSizes"] = ball.sphere_sizes();
    j["certifiedRadius"] = ball.certified_radius();
    return j.dump(2) + "\n";
}

}  // namespace treelike
