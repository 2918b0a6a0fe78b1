#pragma once

// Coarse-geometry observables of a materialized ball: Gromov products,
// the path inequality dist(z, path) <= (u|v)_z + 3m/2 and its restriction
// to points on geodesics, and boundary diameters of ball complements.

#include <optional>
#include <string>
#include <vector>

#include "treelike/cayley.hpp"
#include "treelike/common.hpp"

namespace treelike {

// (x|y)_z = (dist(z,x) + dist(z,y) - dist(x,y)) / 2. All three distances
// must be certified; throws UncertifiedDistanceError otherwise.
HalfInteger gromov_product(const CayleyBall& ball, VertexId x, VertexId y, VertexId z);

// Connected components, inside the ball, of the vertices at distance > n
// from center. Distances from the center are in-ball BFS values; they are
// exact whenever the center is the identity.
struct ComplementComponents {
    VertexId center = NO_VERTEX;
    int level = 0;
    // Ordered by least member vertex; each component sorted ascending.
    std::vector<std::vector<VertexId>> components;
    // False when some in-ball distance from the center is uncertified, in
    // which case membership near the rim may be distorted by truncation.
    bool centerDistancesCertified = true;
};

ComplementComponents complement_components(const CayleyBall& ball, VertexId center, int n);

// One complement component at one level, with the boundary it shows toward
// the ball of the profile center. The boundary here is the set of component
// vertices adjacent to the complemented ball; adjacent vertices of other
// components cannot exist, so this matches the plain boundary of the
// component in the full graph.
struct BoundaryComponentRow {
    int id = 0;
    int size = 0;
    std::vector<VertexId> boundary;
    int diameter = 0;
    // Diameter or membership relied on an uncertified distance.
    bool truncated = false;
    // Component reaches the edge of the materialized ball, so it may
    // continue (or merge with another component) outside it.
    bool escapesBall = false;
};

struct BoundaryLevelRow {
    int level = 0;
    std::vector<BoundaryComponentRow> components;

    int max_diameter() const {
        int d = 0;
        for (const auto& c : components) d = std::max(d, c.diameter);
        return d;
    }
};

struct BoundaryProfile {
    VertexId center = NO_VERTEX;
    std::vector<BoundaryLevelRow> rows;
};

// Levels nMin..nMax inclusive. Levels above certified_radius() - 1 are
// allowed but their rows will typically come back truncated.
BoundaryProfile boundary_profile(const CayleyBall& ball, VertexId center, int nMin, int nMax);

// Scan of the inequality dist(z, path) <= (u|v)_z + 3m/2 over triples
// u, v, z in the certified core B(floor(R/3)) and paths between u and v
// of length <= maxPathLen staying in the core. maxB5 is the exact maximum
// of dist(z, path) - (u|v)_z over that domain; mB5 is the least
// half-integer m with maxB5 <= 3m/2. mB9 is the exact maximum of
// dist(z, path) over the sub-domain where z lies on a geodesic from u
// to v, i.e. the least bound for geodesic-point-to-path distance.
struct PathInequalityWitness {
    VertexId u = NO_VERTEX;
    VertexId v = NO_VERTEX;
    VertexId z = NO_VERTEX;
    std::vector<VertexId> path;
    HalfInteger value;
};

struct PathInequalityReport {
    int maxPathLen = 0;
    int coreRadius = 0;
    // Exhaustive mode: size of the whole (u, v, z) domain. Sampled mode:
    // number of draws examined. Paths are resolved by a clearance sweep
    // rather than enumerated one by one either way.
    long long tripleCount = 0;
    bool exhaustive = true;
    HalfInteger maxB5;
    HalfInteger mB5;
    int mB9 = 0;
    std::optional<PathInequalityWitness> b5Witness;
    std::optional<PathInequalityWitness> b9Witness;
};

// Exhaustive over the core when the triple count is within sampleLimit,
// otherwise a fixed-seed pseudo-random sample of sampleLimit triples.
// Either way the reported numbers are exact maxima over the configurations
// actually examined.
PathInequalityReport path_inequality_scan(const CayleyBall& ball, int maxPathLen,
                                          long long sampleLimit);

std::string profile_json(const CayleyBall& ball, const BoundaryProfile& profile);
std::string profile_csv(const BoundaryProfile& profile);
std::string path_report_json(const CayleyBall& ball, const PathInequalityReport& report);

}  // namespace treelike
