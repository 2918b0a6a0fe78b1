#include "treelike/asdim.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "treelike/coarse.hpp"

namespace treelike {

namespace {

std::vector<int> part_index_of(const CayleyBall& ball, const Partition& partition) {
    std::vector<int> partOf(static_cast<size_t>(ball.size()), -1);
    for (int i = 0; i < partition.count(); ++i) {
        for (VertexId v : partition.parts[static_cast<size_t>(i)]) {
            if (v < 0 || v >= ball.size())
                throw Error("witness check: vertex id " + std::to_string(v) + " outside the ball");
            int& slot = partOf[static_cast<size_t>(v)];
            if (slot != -1)
                throw Error("witness check: vertex " + ball.pretty(v) + " appears in two parts");
            slot = i;
        }
    }
    return partOf;
}

// |a^-1 b| for reduced words: strip the common prefix, count the rest.
int reduced_word_distance(const Word& a, const Word& b) {
    size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    return static_cast<int>(a.size() + b.size() - 2 * common);
}

// The word for z^-1 g, already reduced: after the common prefix goes, the
// junction letters cannot cancel or the prefix would have been longer.
Word offset_word(const Word& zw, const Word& gw) {
    size_t common = 0;
    while (common < zw.size() && common < gw.size() && zw[common] == gw[common]) ++common;
    Word out;
    out.reserve((zw.size() - common) + (gw.size() - common));
    for (size_t i = zw.size(); i > common; --i) out.push_back(zw[i - 1].inverse());
    for (size_t i = common; i < gw.size(); ++i) out.push_back(gw[i]);
    return out;
}

// Diameter of a vertex set under the tree metric: the farthest point from
// any anchor is an endpoint of a diameter, so two sweeps suffice.
int tree_set_diameter(const CayleyBall& ball, const std::vector<VertexId>& part) {
    if (part.size() <= 1) return 0;
    std::vector<Word> words;
    words.reserve(part.size());
    for (VertexId v : part) words.push_back(ball.word_of(v));
    size_t far = 0;
    int best = -1;
    for (size_t i = 0; i < part.size(); ++i) {
        const int d = reduced_word_distance(words.front(), words[i]);
        if (d > best) {
            best = d;
            far = i;
        }
    }
    int diam = 0;
    for (size_t i = 0; i < part.size(); ++i)
        diam = std::max(diam, reduced_word_distance(words[far], words[i]));
    return diam;
}

// Minimum distance between distinct parts of color c: one BFS from all
// their vertices at once, then the best meet over edges whose endpoints
// grew from different parts. Every candidate is a real inter-part path,
// and along a shortest one the source label must switch at some edge, so
// the best candidate is exact.
int color_separation(const CayleyBall& ball, const std::vector<int>& partOf,
                     const std::vector<int>& color, int c) {
    const int n = ball.size();
    std::vector<int> dist(static_cast<size_t>(n), -1);
    std::vector<int> src(static_cast<size_t>(n), -1);
    std::vector<VertexId> order;
    order.reserve(static_cast<size_t>(n));
    int seenParts = 0, lastPart = -1;
    for (VertexId v = 0; v < n; ++v) {
        const int p = partOf[static_cast<size_t>(v)];
        if (p < 0 || color[static_cast<size_t>(p)] != c) continue;
        dist[static_cast<size_t>(v)] = 0;
        src[static_cast<size_t>(v)] = p;
        order.push_back(v);
        if (p != lastPart) {
            ++seenParts;
            lastPart = p;
        }
    }
    if (seenParts < 2) return INT_MAX;
    for (size_t qi = 0; qi < order.size(); ++qi) {
        const VertexId v = order[qi];
        for (VertexId w : ball.neighbor_row(v)) {
            if (w == NO_VERTEX || dist[static_cast<size_t>(w)] != -1) continue;
            dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
            src[static_cast<size_t>(w)] = src[static_cast<size_t>(v)];
            order.push_back(w);
        }
    }
    int best = INT_MAX;
    for (VertexId v = 0; v < n; ++v) {
        for (VertexId w : ball.neighbor_row(v)) {
            if (w == NO_VERTEX || w <= v) continue;
            if (src[static_cast<size_t>(v)] == src[static_cast<size_t>(w)]) continue;
            best = std::min(best, dist[static_cast<size_t>(v)] + dist[static_cast<size_t>(w)] + 1);
        }
    }
    return best;
}

std::vector<int> letters_of(const GroupOracle& oracle, const Word& w) {
    std::vector<int> letters;
    letters.reserve(w.size());
    for (const GeneratorSymbol& s : w) letters.push_back(oracle.letter_of(s));
    return letters;
}

// Applies a letter sequence to a vertex along ball edges. Callers arrange
// norms so the walk cannot leave the ball; hitting the rim anyway is a bug.
VertexId walk_letters(const CayleyBall& ball, VertexId from, const std::vector<int>& letters) {
    VertexId v = from;
    for (int l : letters) {
        v = ball.neighbor(v, l);
        if (v == NO_VERTEX) throw Error("word walk left the ball");
    }
    return v;
}

VertexId walk_word(const CayleyBall& ball, VertexId from, const Word& w) {
    return walk_letters(ball, from, letters_of(ball.oracle(), w));
}

}  // namespace

CoronaColoring corona_coloring(const CayleyBall& ball, int m) {
    if (m < 1) throw Error("corona_coloring: m must be >= 1");
    if (!ball.oracle().free_basis())
        throw Error("corona_coloring: needs a tree Cayley graph, but " +
                    ball.oracle().description() + " has no free basis");
    if (ball.radius() < 3 * m)
        throw Error("corona_coloring: radius " + std::to_string(ball.radius()) +
                    " holds too few coronas for m = " + std::to_string(m) + ", need >= " +
                    std::to_string(3 * m));

    const int n = ball.size();
    const int radius = ball.radius();
    CoronaColoring out;
    out.m = m;

    // Flood the double corona spanning k-1 and k, then keep the upper
    // halves. Each vertex is flooded at most twice, once per double
    // corona containing it.
    std::vector<int> mark(static_cast<size_t>(n), -1);
    std::vector<VertexId> queue;
    std::vector<std::vector<VertexId>> rawParts;
    std::vector<int> rawCorona;
    const int kMax = radius / m;
    for (int k = 0; k <= kMax; ++k) {
        const int lo = std::max(0, (k - 1) * m);
        const int hi = std::min((k + 1) * m - 1, radius);
        const int cut = k * m;
        const VertexId first = ball.sphere_range(lo).first;
        const VertexId last = ball.sphere_range(hi).second;
        for (VertexId seed = first; seed < last; ++seed) {
            if (mark[static_cast<size_t>(seed)] == k) continue;
            mark[static_cast<size_t>(seed)] = k;
            queue.clear();
            queue.push_back(seed);
            std::vector<VertexId> upper;
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                const VertexId v = queue[qi];
                if (ball.radius_label(v) >= cut) upper.push_back(v);
                for (VertexId w : ball.neighbor_row(v)) {
                    if (w == NO_VERTEX || mark[static_cast<size_t>(w)] == k) continue;
                    const int lw = ball.radius_label(w);
                    if (lw < lo || lw > hi) continue;
                    mark[static_cast<size_t>(w)] = k;
                    queue.push_back(w);
                }
            }
            if (upper.empty()) continue;  // component confined to the lower half
            std::sort(upper.begin(), upper.end());
            rawParts.push_back(std::move(upper));
            rawCorona.push_back(k);
        }
    }

    std::vector<size_t> perm(rawParts.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    std::sort(perm.begin(), perm.end(), [&rawParts](size_t a, size_t b) {
        return rawParts[a].front() < rawParts[b].front();
    });

    const int count = static_cast<int>(rawParts.size());
    out.partition.parts.reserve(rawParts.size());
    out.coronaIndex.reserve(rawParts.size());
    out.color.reserve(rawParts.size());
    out.diameter.reserve(rawParts.size());
    out.partOf.assign(static_cast<size_t>(n), -1);
    for (int i = 0; i < count; ++i) {
        const size_t pick = perm[static_cast<size_t>(i)];
        out.partition.parts.push_back(std::move(rawParts[pick]));
        out.coronaIndex.push_back(rawCorona[pick]);
        out.color.push_back(rawCorona[pick] & 1);
        const std::vector<VertexId>& members = out.partition.parts.back();
        for (VertexId v : members) out.partOf[static_cast<size_t>(v)] = i;
        const int diam = tree_set_diameter(ball, members);
        out.diameter.push_back(diam);
        out.maxPartDiameter = std::max(out.maxPartDiameter, diam);
    }
    for (VertexId v = 0; v < n; ++v)
        if (out.partOf[static_cast<size_t>(v)] < 0)
            throw Error("corona_coloring: vertex " + ball.pretty(v) + " fell outside every part");

    int separation = INT_MAX;
    for (int c = 0; c < 2; ++c)
        separation = std::min(separation, color_separation(ball, out.partOf, out.color, c));
    out.minSameColorDistance = separation == INT_MAX ? -1 : separation;
    return out;
}

WitnessCheck verify_asdim_witness(const CayleyBall& ball, const Partition& partition,
                                  const std::vector<int>& color, int m, int maxPartDiameter) {
    if (m < 1) throw Error("witness check: m must be >= 1");
    if (static_cast<int>(color.size()) != partition.count())
        throw Error("witness check: " + std::to_string(partition.count()) + " parts but " +
                    std::to_string(color.size()) + " colors");
    const std::vector<int> partOf = part_index_of(ball, partition);
    const int n = ball.size();
    const int count = partition.count();
    WitnessCheck out;

    // Diameters first. In-ball hop counts only overestimate distances, so
    // staying at or below the bound certifies the part; exceeding it is a
    // violation only when some pair certifiably realizes the excess.
    for (int i = 0; i < count; ++i) {
        const std::vector<VertexId>& part = partition.parts[static_cast<size_t>(i)];
        if (part.size() <= 1) continue;
        if (ball.oracle().free_basis()) {
            if (tree_set_diameter(ball, part) > maxPartDiameter)
                out.diameterViolations.push_back(i);
            continue;
        }
        bool violated = false, undecided = false;
        for (VertexId u : part) {
            const std::vector<int> hops = ball.hops_from(u);
            for (VertexId v : part) {
                const int h = hops[static_cast<size_t>(v)];
                if (h <= maxPartDiameter) continue;
                if (ball.certified(u, v, h)) violated = true;
                else undecided = true;
            }
            if (violated) break;
        }
        if (violated) out.diameterViolations.push_back(i);
        else if (undecided) out.diameterUndecided.push_back(i);
    }

    // Separation: a depth-m sweep from each part touches exactly the parts
    // within distance m inside the ball, and any such path certifies the
    // violation regardless of truncation.
    std::vector<int> mark(static_cast<size_t>(n), -1);
    std::vector<int> depth(static_cast<size_t>(n), 0);
    std::vector<int> partMark(static_cast<size_t>(count), -1);
    std::vector<VertexId> queue;
    for (int i = 0; i < count; ++i) {
        queue.clear();
        for (VertexId v : partition.parts[static_cast<size_t>(i)]) {
            mark[static_cast<size_t>(v)] = i;
            depth[static_cast<size_t>(v)] = 0;
            queue.push_back(v);
        }
        partMark[static_cast<size_t>(i)] = i;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            const VertexId v = queue[qi];
            const int dv = depth[static_cast<size_t>(v)];
            const int pv = partOf[static_cast<size_t>(v)];
            if (pv >= 0 && partMark[static_cast<size_t>(pv)] != i) {
                partMark[static_cast<size_t>(pv)] = i;
                if (color[static_cast<size_t>(pv)] == color[static_cast<size_t>(i)] && pv > i)
                    out.sameColorViolations.push_back({i, pv, dv});
            }
            if (dv == m) continue;
            for (VertexId w : ball.neighbor_row(v)) {
                if (w == NO_VERTEX || mark[static_cast<size_t>(w)] == i) continue;
                mark[static_cast<size_t>(w)] = i;
                depth[static_cast<size_t>(w)] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    std::sort(out.sameColorViolations.begin(), out.sameColorViolations.end(),
              [](const PartPairViolation& a, const PartPairViolation& b) {
                  return std::tie(a.a, a.b) < std::tie(b.a, b.b);
              });

    // Without a free basis a same-color pair near the rim can sit above
    // distance m inside the ball yet meet sooner outside it; a path that
    // escapes costs at least the combined climbs to the rim and back.
    if (!ball.oracle().free_basis()) {
        const int radius = ball.radius();
        std::vector<int> rim;
        for (int i = 0; i < count; ++i) {
            const int margin = radius + 1 - ball.radius_label(partition.parts[static_cast<size_t>(i)].back());
            if (margin <= m - 1) rim.push_back(i);
        }
        if (rim.size() > 4096) {
            out.undecidedOverflow = true;
        } else {
            std::vector<std::pair<int, int>> violating;
            violating.reserve(out.sameColorViolations.size());
            for (const PartPairViolation& v : out.sameColorViolations)
                violating.emplace_back(v.a, v.b);
            for (size_t x = 0; x < rim.size(); ++x) {
                for (size_t y = x + 1; y < rim.size(); ++y) {
                    const int i = rim[x], j = rim[y];
                    if (color[static_cast<size_t>(i)] != color[static_cast<size_t>(j)]) continue;
                    const int climbI =
                        radius + 1 - ball.radius_label(partition.parts[static_cast<size_t>(i)].back());
                    const int climbJ =
                        radius + 1 - ball.radius_label(partition.parts[static_cast<size_t>(j)].back());
                    if (climbI + climbJ > m) continue;
                    if (std::binary_search(violating.begin(), violating.end(), std::make_pair(i, j)))
                        continue;
                    out.separationUndecided.emplace_back(i, j);
                }
            }
        }
    }
    return out;
}

ZRDecomposition zr_decomposition(const CayleyBall& ball, const CoronaColoring& coloring) {
    const int n = ball.size();
    if (static_cast<int>(coloring.partOf.size()) != n)
        throw Error("zr_decomposition: coloring does not match the ball");
    if (!ball.oracle().free_basis())
        throw Error("zr_decomposition: needs a tree Cayley graph");
    const GroupOracle& oracle = ball.oracle();
    ZRDecomposition out;
    out.representatives.reserve(coloring.partition.parts.size());
    for (const std::vector<VertexId>& part : coloring.partition.parts)
        out.representatives.push_back(part.front());
    out.colorOnZ = coloring.color;
    out.z.resize(static_cast<size_t>(n));
    out.r.resize(static_cast<size_t>(n));
    out.offsetNorm.resize(static_cast<size_t>(n));

    std::vector<Word> repWord(out.representatives.size());
    for (size_t i = 0; i < out.representatives.size(); ++i)
        repWord[i] = ball.word_of(out.representatives[i]);

    for (VertexId v = 0; v < n; ++v) {
        const int part = coloring.partOf[static_cast<size_t>(v)];
        if (part < 0) throw Error("zr_decomposition: vertex " + ball.pretty(v) + " has no part");
        const VertexId rep = out.representatives[static_cast<size_t>(part)];
        const Word offset = offset_word(repWord[static_cast<size_t>(part)], ball.word_of(v));
        const int norm = static_cast<int>(offset.size());
        if (norm > coloring.maxPartDiameter)
            throw Error("zr_decomposition: offset of " + ball.pretty(v) + " has norm " +
                        std::to_string(norm) + ", above the part diameter bound " +
                        std::to_string(coloring.maxPartDiameter));
        // Replay through oracle arithmetic: the factorization must hold in
        // the group, independent of ball adjacency.
        GroupOracle::Key key = ball.key_of(rep);
        for (const GeneratorSymbol& s : offset) key = oracle.right_multiply(key, oracle.letter_of(s));
        if (key != ball.key_of(v))
            throw Error("zr_decomposition: replaying the offset of " + ball.pretty(v) +
                        " from " + ball.pretty(rep) + " missed");
        out.z[static_cast<size_t>(v)] = rep;
        out.r[static_cast<size_t>(v)] = evaluate(oracle, offset);
        out.offsetNorm[static_cast<size_t>(v)] = norm;
        out.maxOffsetNorm = std::max(out.maxOffsetNorm, norm);
    }

    std::vector<GroupOracle::Key> keys = out.r;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    out.distinctOffsets = static_cast<int>(keys.size());
    return out;
}

AlmostInvariantMap almost_invariant_map(const CayleyBall& ball, int m, int gMax, int hCap) {
    if (m < 0) throw Error("almost_invariant_map: m must be >= 0");
    if (gMax < 1) throw Error("almost_invariant_map: gMax must be >= 1");
    const int radius = ball.radius();
    if (radius < 3 * m + 2)
        throw Error("almost_invariant_map: radius " + std::to_string(radius) +
                    " too small for m = " + std::to_string(m) + ", need >= " +
                    std::to_string(3 * m + 2));
    if (hCap < 0) hCap = ball.certified_radius();
    if (hCap > radius)
        throw Error("almost_invariant_map: hCap " + std::to_string(hCap) +
                    " exceeds the ball radius " + std::to_string(radius));

    AlmostInvariantMap out;
    out.m = m;
    out.gMax = gMax;
    out.hCap = hCap;

    const ComplementComponents comps = complement_components(ball, 0, m);
    const int n = ball.size();
    out.label.assign(static_cast<size_t>(n), 0);
    for (size_t c = 0; c < comps.components.size(); ++c)
        for (VertexId v : comps.components[c])
            out.label[static_cast<size_t>(v)] = static_cast<int>(c) + 1;
    out.labelCount = static_cast<int>(comps.components.size()) + 1;
    out.perLabelSizes.assign(static_cast<size_t>(out.labelCount), 0);
    for (VertexId v = 0; v < n; ++v)
        ++out.perLabelSizes[static_cast<size_t>(out.label[static_cast<size_t>(v)])];

    const int gEnd = std::min(gMax, radius);
    const VertexId gFirst = ball.sphere_range(1).first;
    const VertexId gLast = ball.sphere_range(gEnd).second;
    for (VertexId g = gFirst; g < gLast; ++g) {
        const Word gw = ball.word_of(g);
        const std::vector<int> gLetters = letters_of(ball.oracle(), gw);
        const int gn = ball.radius_label(g);

        // Exhaustive invariance sweep over the sound window: walking g from
        // h keeps every intermediate norm <= hCap, so the ball never runs out.
        const int hLow = gn + m + 1;
        const int hHigh = hCap - gn;
        for (int nh = hLow; nh <= hHigh; ++nh) {
            const auto [hFirst, hLast] = ball.sphere_range(nh);
            for (VertexId h = hFirst; h < hLast; ++h) {
                const VertexId hg = walk_letters(ball, h, gLetters);
                ++out.pairsChecked;
                if (out.label[static_cast<size_t>(hg)] != out.label[static_cast<size_t>(h)]) {
                    ++out.violations;
                    if (out.violationSample.size() < 100) out.violationSample.emplace_back(h, g);
                }
            }
        }

        // Stabilizer evidence: push powers of g until the norm clears 2m+2,
        // split that power's geodesic after m+1 letters, and compare labels
        // on the two sides of the split.
        StabilizerWitness witness;
        witness.g = g;
        const int threshold = 2 * m + 2;
        VertexId p = g;
        int k = 1;
        while (p != 0 && ball.radius_label(p) < threshold && k <= n) {
            if (ball.radius_label(p) + gn > radius) {
                p = NO_VERTEX;
                break;
            }
            p = walk_letters(ball, p, gLetters);
            ++k;
        }
        if (p != NO_VERTEX && p != 0 && ball.radius_label(p) >= threshold) {
            witness.found = true;
            witness.power = k;
            const Word pw = ball.word_of(p);
            const Word prefix(pw.begin(), pw.begin() + (m + 1));
            const Word suffix(pw.begin() + (m + 1), pw.end());
            witness.hInverse = walk_word(ball, 0, inverse_word(prefix));
            witness.hInverseTimesPower = walk_word(ball, 0, suffix);
            witness.labelLeft = out.label[static_cast<size_t>(witness.hInverse)];
            witness.labelRight = out.label[static_cast<size_t>(witness.hInverseTimesPower)];
            witness.mismatch = witness.labelLeft != witness.labelRight;
        }
        out.witnesses.push_back(witness);
    }
    return out;
}

std::string coloring_json(const CoronaColoring& coloring) {
    nlohmann::ordered_json j;
    j["m"] = coloring.m;
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (int i = 0; i < coloring.partition.count(); ++i) {
        parts.push_back({{"id", i},
                         {"color", coloring.color[static_cast<size_t>(i)]},
                         {"size", coloring.partition.parts[static_cast<size_t>(i)].size()},
                         {"diameter", coloring.diameter[static_cast<size_t>(i)]},
                         {"corona", coloring.coronaIndex[static_cast<size_t>(i)]}});
    }
    j["parts"] = std::move(parts);
    j["minSameColorDistance"] = coloring.minSameColorDistance;
    j["maxPartDiameter"] = coloring.maxPartDiameter;
    return j.dump(2) + "\n";
}

std::string invariant_map_json(const AlmostInvariantMap& map) {
    nlohmann::ordered_json j;
    j["m"] = map.m;
    j["labels"] = map.labelCount;
    j["perLabelSizes"] = map.perLabelSizes;
    j["invarianceChecked"] = {{"pairs", map.pairsChecked}, {"violations", map.violations}};
    j["gMax"] = map.gMax;
    j["hCap"] = map.hCap;
    int found = 0, mismatches = 0;
    for (const StabilizerWitness& w : map.witnesses) {
        found += w.found ? 1 : 0;
        mismatches += w.mismatch ? 1 : 0;
    }
    j["witnesses"] = {{"sampled", map.witnesses.size()},
                      {"found", found},
                      {"mismatches", mismatches}};
    return j.dump(2) + "\n";
}

}  // namespace treelike
