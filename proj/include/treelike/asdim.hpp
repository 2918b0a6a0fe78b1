#pragma once

// Dimension-one witnesses at ball scale: the corona two-coloring that
// exhibits asymptotic dimension <= 1 on tree Cayley graphs, its z/r
// factorization form, and the finite-label almost-invariant map built
// from complement components.

#include <string>
#include <utility>
#include <vector>

#include "treelike/cayley.hpp"
#include "treelike/groups.hpp"
#include "treelike/treedecomp.hpp"

namespace treelike {

// Two-colored partition into corona pieces. Corona k collects word
// lengths in [km, (k+1)m); a part is the upper half of one connected
// component of the double corona spanning k-1 and k, and inherits the
// corona parity as its color. Built only on free-basis balls, where
// in-ball distances are the true ones everywhere, so every reported
// number is exact.
struct CoronaColoring {
    int m = 1;
    Partition partition;
    std::vector<int> coronaIndex;  // per part: the k with norms in [km, (k+1)m)
    std::vector<int> color;        // per part: coronaIndex parity
    std::vector<int> diameter;     // per part, exact tree distances
    std::vector<int> partOf;       // vertex -> part index
    int maxPartDiameter = 0;
    // Minimum distance between distinct parts of equal color. The coloring
    // needs this > m; consecutive equal-parity coronas sit m+1 apart, so
    // m+1 is the expected value once the ball holds three coronas.
    int minSameColorDistance = 0;
};

CoronaColoring corona_coloring(const CayleyBall& ball, int m);

// Two parts of equal color closer together than the separation parameter
// allows; distance is certified, the minimum over member pairs.
struct PartPairViolation {
    int a = 0;
    int b = 0;
    int distance = 0;
};

// Outcome of checking a colored partition against the separation and
// diameter requirements. Violation entries are certified facts; the
// undecided lists name comparisons the ball was too small to settle
// (possible only without a free basis).
struct WitnessCheck {
    std::vector<PartPairViolation> sameColorViolations;
    std::vector<int> diameterViolations;  // parts certifiably wider than the bound
    std::vector<int> diameterUndecided;   // in-ball width above the bound, uncertified
    std::vector<std::pair<int, int>> separationUndecided;  // rim pairs left open
    bool undecidedOverflow = false;  // rim pair enumeration abandoned as too large

    bool ok() const {
        return sameColorViolations.empty() && diameterViolations.empty() &&
               diameterUndecided.empty() && separationUndecided.empty() && !undecidedOverflow;
    }
};

// Checks that parts stay within maxPartDiameter and that distinct parts
// of equal color lie at distance > m. Any partition/coloring pair over
// any subset of the ball is accepted; parts and colors must align.
WitnessCheck verify_asdim_witness(const CayleyBall& ball, const Partition& partition,
                                  const std::vector<int>& color, int m, int maxPartDiameter);

inline WitnessCheck verify_asdim_witness(const CayleyBall& ball, const CoronaColoring& coloring) {
    return verify_asdim_witness(ball, coloring.partition, coloring.color, coloring.m,
                                coloring.maxPartDiameter);
}

// Factorization g = z(g) r(g): z picks the least-index representative of
// g's part and r is the leftover offset. The offsets are carried as oracle
// keys because near the rim their norm may exceed the ball radius. Each
// vertex is replayed through oracle arithmetic, so the identity holds in
// the group and not merely in the ball.
struct ZRDecomposition {
    std::vector<VertexId> z;              // vertex -> representative vertex
    std::vector<GroupOracle::Key> r;      // vertex -> key of z(g)^{-1} g
    std::vector<int> offsetNorm;          // vertex -> |r(g)|
    std::vector<VertexId> representatives;  // per part
    std::vector<int> colorOnZ;              // per part
    int distinctOffsets = 0;
    int maxOffsetNorm = 0;  // <= coloring.maxPartDiameter
};

ZRDecomposition zr_decomposition(const CayleyBall& ball, const CoronaColoring& coloring);

// Evidence that no relabeling agreeing with the map outside a finite ball
// is fixed by g: powers of g are walked until the norm clears 2m+2, h is
// the length-(m+1) geodesic prefix of that power, and on tree balls the
// sides h^-1 and h^-1 g^power land in different complement components.
// found=false means no suitable power fit in the ball, as happens in
// torsion directions or when the radius is tight.
struct StabilizerWitness {
    VertexId g = NO_VERTEX;
    int power = 0;
    VertexId hInverse = NO_VERTEX;
    VertexId hInverseTimesPower = NO_VERTEX;
    int labelLeft = -1;   // label at h^-1
    int labelRight = -1;  // label at h^-1 g^power
    bool found = false;
    bool mismatch = false;
};

// Finite-label map alpha: label 0 is the m-ball around the identity, the
// remaining labels are the connected components of the ball minus it.
// Almost invariance is checked exhaustively over the stated window:
// alpha(h g) must equal alpha(h) whenever |h| > |g| + m, for every g with
// |g| <= gMax and every h with |h| <= hCap - |g|.
struct AlmostInvariantMap {
    int m = 0;
    int gMax = 0;
    int hCap = 0;
    int labelCount = 0;
    std::vector<int> label;  // per vertex; 0 = ball label
    std::vector<long long> perLabelSizes;
    long long pairsChecked = 0;
    long long violations = 0;
    std::vector<std::pair<VertexId, VertexId>> violationSample;  // (h, g); at most 100 kept
    std::vector<StabilizerWitness> witnesses;  // one per nonidentity g in the sample
};

// hCap defaults to the certified radius, the window in which the check is
// sound for every oracle. Free-basis callers may widen it up to the ball
// radius, where tree distances stay exact.
AlmostInvariantMap almost_invariant_map(const CayleyBall& ball, int m, int gMax = 2,
                                        int hCap = -1);

// {m, parts: [{id, color, size, diameter}], minSameColorDistance, ...}
std::string coloring_json(const CoronaColoring& coloring);

// {m, labels, perLabelSizes, invarianceChecked: {pairs, violations}, ...}
std::string invariant_map_json(const AlmostInvariantMap& map);

}  // namespace treelike
