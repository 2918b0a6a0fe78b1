#include "treelike/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>

namespace treelike {

namespace {

void put_i32(std::string& s, int32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((static_cast<uint32_t>(v) >> (8 * i)) & 0xff));
}

int32_t get_i32(const char* p) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return static_cast<int32_t>(v);
}

void put_i64(std::string& s, int64_t v) {
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff));
}

int64_t get_i64(const char* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return static_cast<int64_t>(v);
}

std::vector<std::string> letter_names(int k, char first) {
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(std::string(1, static_cast<char>(first + i)));
    return names;
}

}  // namespace

GroupOracle::GroupOracle(std::vector<std::string> names, Key identity, std::string description)
    : names_(std::move(names)), identity_(std::move(identity)), description_(std::move(description)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error("generator names must be nonempty");
        if (!seen.insert(n).second) throw Error("duplicate generator name '" + n + "'");
    }
}

GeneratorSymbol GroupOracle::letter_symbol(int l) const {
    int k = rank();
    if (l < 0 || l >= 2 * k) throw Error("letter code out of range");
    if (l < k) return {names_[l], 1};
    return {names_[l - k], -1};
}

int GroupOracle::letter_of(const GeneratorSymbol& s) const {
    if (s.exponent != 1 && s.exponent != -1)
        throw Error("generator symbol '" + s.name + "' has exponent " + std::to_string(s.exponent) +
                    "; only +1/-1 are letters");
    for (int i = 0; i < rank(); ++i)
        if (names_[i] == s.name) return s.exponent == 1 ? i : i + rank();
    throw Error("unknown generator symbol '" + s.name + "' for " + description_);
}

GroupOracle::Key evaluate(const GroupOracle& oracle, const Word& w) {
    GroupOracle::Key k = oracle.identity();
    for (const auto& sym : w) k = oracle.right_multiply(k, oracle.letter_of(sym));
    return k;
}

// ---------------------------------------------------------------------------
// words

Word parse_word(const std::string& text) {
    Word w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        int exponent = 1;
        std::string name = tok;
        if (auto pos = tok.find('^'); pos != std::string::npos) {
            name = tok.substr(0, pos);
            std::string suffix = tok.substr(pos);
            if (suffix != "^-1") throw Error("bad word token '" + tok + "': only the ^-1 suffix is accepted");
            exponent = -1;
        }
        if (name.empty()) throw Error("bad word token '" + tok + "': empty generator name");
        w.push_back({name, exponent});
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string out;
    for (const auto& s : w) {
        if (!out.empty()) out += ' ';
        out += s.name;
        if (s.exponent == -1) out += "^-1";
    }
    return out;
}

Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
    return out;
}

Word free_reduce(Word w) {
    Word out;
    out.reserve(w.size());
    for (auto& s : w) {
        if (!out.empty() && out.back().name == s.name && out.back().exponent == -s.exponent)
            out.pop_back();
        else
            out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// group spec grammar

namespace {

long long parse_count(const std::string& text, const std::string& what, long long lo, long long hi) {
    try {
        size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw Error("");
        if (v < lo || v > hi)
            throw Error(what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + text);
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        throw Error("cannot parse " + what + " from '" + text + "'");
    }
}

}  // namespace

GroupSpec GroupSpec::parse(const std::string& text) {
    GroupSpec s;
    if (text == "lamplighter") {
        s.family = Family::Lamplighter;
        return s;
    }
    if (text.rfind("prod(", 0) == 0) {
        if (text.back() != ')') throw Error("group spec '" + text + "': missing closing parenthesis");
        std::string inner = text.substr(5, text.size() - 6);
        int depth = 0;
        size_t split = std::string::npos;
        for (size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            else if (inner[i] == ')') --depth;
            else if (inner[i] == ';' && depth == 0) { split = i; break; }
        }
        if (split == std::string::npos) throw Error("group spec '" + text + "': expected prod(<spec>;<spec>)");
        s.family = Family::DirectProduct;
        s.left = std::make_shared<GroupSpec>(parse(inner.substr(0, split)));
        s.right = std::make_shared<GroupSpec>(parse(inner.substr(split + 1)));
        return s;
    }
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error("unrecognized group spec '" + text +
                    "'; expected free:<k> | zn:<k> | cyclic:<n> | freeprod:<n1>,<n2>[,...] | lamplighter | "
                    "prod(<spec>;<spec>)");
    std::string head = text.substr(0, colon), tail = text.substr(colon + 1);
    if (head == "free") {
        s.family = Family::Free;
        s.rank = static_cast<int>(parse_count(tail, "free rank", 1, 26));
    } else if (head == "zn") {
        s.family = Family::FreeAbelian;
        s.rank = static_cast<int>(parse_count(tail, "free-abelian rank", 1, 64));
    } else if (head == "cyclic") {
        s.family = Family::Cyclic;
        s.order = parse_count(tail, "cyclic order", 2, 1'000'000'000LL);
    } else if (head == "freeprod") {
        s.family = Family::FreeProduct;
        std::string item;
        std::istringstream in(tail);
        while (std::getline(in, item, ','))
            s.orders.push_back(parse_count(item, "free-product factor order", 2, 1'000'000'000LL));
        if (s.orders.size() < 2) throw Error("group spec '" + text + "': freeprod needs at least two factors");
        if (s.orders.size() > 26) throw Error("group spec '" + text + "': at most 26 free-product factors");
    } else {
        throw Error("unrecognized group family '" + head + "' in spec '" + text + "'");
    }
    return s;
}

std::string GroupSpec::str() const {
    switch (family) {
        case Family::Free: return "free:" + std::to_string(rank);
        case Family::FreeAbelian: return "zn:" + std::to_string(rank);
        case Family::Cyclic: return "cyclic:" + std::to_string(order);
        case Family::FreeProduct: {
            std::string out = "freeprod:";
            for (size_t i = 0; i < orders.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(orders[i]);
            }
            return out;
        }
        case Family::Lamplighter: return "lamplighter";
        case Family::DirectProduct: return "prod(" + left->str() + ";" + right->str() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// oracle families

namespace {

// Free group F_k. Key: reduced word as raw letter bytes.
class FreeOracle final : public GroupOracle {
public:
    explicit FreeOracle(int k)
        : GroupOracle(letter_names(k, 'a'), "",
                      "free group of rank " + std::to_string(k)) {}

    bool free_basis() const override { return true; }

    Key right_multiply(const Key& key, int letter) const override {
        int inv = inverse_letter(letter);
        if (!key.empty() && static_cast<unsigned char>(key.back()) == static_cast<unsigned>(inv))
            return key.substr(0, key.size() - 1);
        Key out = key;
        out.push_back(static_cast<char>(letter));
        return out;
    }

    std::string pretty(const Key& key) const override {
        if (key.empty()) return "1";
        std::string out;
        for (char c : key) {
            if (!out.empty()) out += ' ';
            auto sym = letter_symbol(static_cast<unsigned char>(c));
            out += sym.name;
            if (sym.exponent == -1) out += "^-1";
        }
        return out;
    }
};

// Z^k. Key: k little-endian int32 coordinates.
class FreeAbelianOracle final : public GroupOracle {
public:
    explicit FreeAbelianOracle(int k)
        : GroupOracle(abelian_names(k), zero_key(k),
                      "free abelian group of rank " + std::to_string(k)),
          k_(k) {}

    Key right_multiply(const Key& key, int letter) const override {
        int idx = letter < k_ ? letter : letter - k_;
        int delta = letter < k_ ? 1 : -1;
        Key out = key;
        put_at(out, idx, get_i32(out.data() + 4 * idx) + delta);
        return out;
    }

    std::string pretty(const Key& key) const override {
        std::string out = "(";
        for (int i = 0; i < k_; ++i) {
            if (i) out += ',';
            out += std::to_string(get_i32(key.data() + 4 * i));
        }
        return out + ")";
    }

private:
    static std::vector<std::string> abelian_names(int k) {
        if (k <= 3) {
            std::vector<std::string> axes = {"x", "y", "z"};
            return {axes.begin(), axes.begin() + k};
        }
        std::vector<std::string> names;
        for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
        return names;
    }
    static Key zero_key(int k) { return std::string(4 * static_cast<size_t>(k), '\0'); }
    static void put_at(Key& key, int idx, int32_t v) {
        std::string tmp;
        put_i32(tmp, v);
        key.replace(4 * static_cast<size_t>(idx), 4, tmp);
    }

    int k_;
};

// Z/n with one generator. Key: residue in [0, n) as int64.
class CyclicOracle final : public GroupOracle {
public:
    explicit CyclicOracle(long long n)
        : GroupOracle({"a"}, residue_key(0), "cyclic group of order " + std::to_string(n)), n_(n) {}

    Key right_multiply(const Key& key, int letter) const override {
        int64_t r = get_i64(key.data());
        r += letter == 0 ? 1 : -1;
        r = ((r % n_) + n_) % n_;
        return residue_key(r);
    }

    std::string pretty(const Key& key) const override {
        int64_t r = get_i64(key.data());
        if (r == 0) return "1";
        if (r == 1) return "a";
        return "a^" + std::to_string(r);
    }

private:
    static Key residue_key(int64_t r) {
        Key k;
        put_i64(k, r);
        return k;
    }
    long long n_;
};

// C_{n1} * C_{n2} * ...  Key: alternating syllables, each one byte of
// factor index plus an int32 exponent in [1, n_i).
class FreeProductOracle final : public GroupOracle {
public:
    explicit FreeProductOracle(std::vector<long long> orders)
        : GroupOracle(letter_names(static_cast<int>(orders.size()), 'a'), "", product_description(orders)),
          orders_(std::move(orders)) {}

    Key right_multiply(const Key& key, int letter) const override {
        int k = rank();
        int factor = letter < k ? letter : letter - k;
        long long n = orders_[static_cast<size_t>(factor)];
        long long delta = letter < k ? 1 : n - 1;
        Key out = key;
        if (!out.empty() && static_cast<unsigned char>(out[out.size() - 5]) == static_cast<unsigned>(factor)) {
            long long e = get_i32(out.data() + out.size() - 4);
            e = (e + delta) % n;
            out.resize(out.size() - 5);
            if (e != 0) append_syllable(out, factor, e);
        } else {
            append_syllable(out, factor, delta);
        }
        return out;
    }

    std::string pretty(const Key& key) const override {
        if (key.empty()) return "1";
        std::string out;
        for (size_t i = 0; i < key.size(); i += 5) {
            if (!out.empty()) out += ' ';
            int factor = static_cast<unsigned char>(key[i]);
            int32_t e = get_i32(key.data() + i + 1);
            out += generator_names()[static_cast<size_t>(factor)];
            if (e != 1) out += "^" + std::to_string(e);
        }
        return out;
    }

private:
    static std::string product_description(const std::vector<long long>& orders) {
        std::string out = "free product";
        for (size_t i = 0; i < orders.size(); ++i)
            out += (i ? " * C" : " C") + std::to_string(orders[i]);
        return out;
    }
    static void append_syllable(Key& key, int factor, long long exp) {
        key.push_back(static_cast<char>(factor));
        put_i32(key, static_cast<int32_t>(exp));
    }

    std::vector<long long> orders_;
};

// C2 wr Z, generators a (toggle the lamp under the marker) and t (shift
// the marker right). Key: int32 marker, int32 lamp count, sorted int32
// lamp positions.
class LamplighterOracle final : public GroupOracle {
public:
    LamplighterOracle() : GroupOracle({"a", "t"}, identity_key(), "lamplighter group C2 wr Z") {}

    Key right_multiply(const Key& key, int letter) const override {
        int32_t marker = get_i32(key.data());
        std::vector<int32_t> lamps = read_lamps(key);
        if (letter == 0 || letter == 2) {  // a = a^-1: toggle at marker
            auto it = std::lower_bound(lamps.begin(), lamps.end(), marker);
            if (it != lamps.end() && *it == marker)
                lamps.erase(it);
            else
                lamps.insert(it, marker);
        } else {
            marker += letter == 1 ? 1 : -1;
        }
        return make_key(marker, lamps);
    }

    std::string pretty(const Key& key) const override {
        std::string out = "({";
        std::vector<int32_t> lamps = read_lamps(key);
        for (size_t i = 0; i < lamps.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(lamps[i]);
        }
        out += "}," + std::to_string(get_i32(key.data())) + ")";
        return out;
    }

private:
    static Key identity_key() { return make_key(0, {}); }
    static Key make_key(int32_t marker, const std::vector<int32_t>& lamps) {
        Key k;
        put_i32(k, marker);
        put_i32(k, static_cast<int32_t>(lamps.size()));
        for (int32_t p : lamps) put_i32(k, p);
        return k;
    }
    static std::vector<int32_t> read_lamps(const Key& key) {
        int32_t count = get_i32(key.data() + 4);
        std::vector<int32_t> lamps(static_cast<size_t>(count));
        for (int32_t i = 0; i < count; ++i) lamps[static_cast<size_t>(i)] = get_i32(key.data() + 8 + 4 * i);
        return lamps;
    }
};

// Direct product. Generators are the union of both components' generators;
// right-component names that clash with left names get a numeric suffix.
// Key: uint32 length of the left key, then both keys.
class DirectProductOracle final : public GroupOracle {
public:
    DirectProductOracle(std::shared_ptr<const GroupOracle> left, std::shared_ptr<const GroupOracle> right)
        : GroupOracle(combined_names(*left, *right), combined_key(left->identity(), right->identity()),
                      "direct product (" + left->description() + ") x (" + right->description() + ")"),
          left_(std::move(left)), right_(std::move(right)) {}

    Key right_multiply(const Key& key, int letter) const override {
        int k = rank(), kl = left_->rank();
        int base = letter < k ? letter : letter - k;
        bool positive = letter < k;
        auto [lk, rk] = split(key);
        if (base < kl) {
            int l = positive ? base : base + kl;
            return combined_key(left_->right_multiply(lk, l), rk);
        }
        int l = positive ? base - kl : base - kl + right_->rank();
        return combined_key(lk, right_->right_multiply(rk, l));
    }

    std::string pretty(const Key& key) const override {
        auto [lk, rk] = split(key);
        return "(" + left_->pretty(lk) + ", " + right_->pretty(rk) + ")";
    }

private:
    static std::vector<std::string> combined_names(const GroupOracle& l, const GroupOracle& r) {
        std::vector<std::string> names = l.generator_names();
        std::set<std::string> used(names.begin(), names.end());
        for (const auto& base : r.generator_names()) {
            std::string name = base;
            for (int suffix = 2; used.count(name); ++suffix) name = base + std::to_string(suffix);
            used.insert(name);
            names.push_back(name);
        }
        return names;
    }
    static Key combined_key(const Key& l, const Key& r) {
        Key k;
        put_i32(k, static_cast<int32_t>(l.size()));
        k += l;
        k += r;
        return k;
    }
    std::pair<Key, Key> split(const Key& key) const {
        size_t ll = static_cast<size_t>(get_i32(key.data()));
        return {key.substr(4, ll), key.substr(4 + ll)};
    }

    std::shared_ptr<const GroupOracle> left_, right_;
};

}  // namespace

std::shared_ptr<const GroupOracle> make_oracle(const GroupSpec& spec) {
    using Family = GroupSpec::Family;
    switch (spec.family) {
        case Family::Free: return std::make_shared<FreeOracle>(spec.rank);
        case Family::FreeAbelian: return std::make_shared<FreeAbelianOracle>(spec.rank);
        case Family::Cyclic: return std::make_shared<CyclicOracle>(spec.order);
        case Family::FreeProduct: return std::make_shared<FreeProductOracle>(spec.orders);
        case Family::Lamplighter: return std::make_shared<LamplighterOracle>();
        case Family::DirectProduct:
            return std::make_shared<DirectProductOracle>(make_oracle(*spec.left), make_oracle(*spec.right));
    }
    throw Error("unhandled group family");
}

}  // namespace treelike
