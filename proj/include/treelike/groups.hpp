#pragma once

// Concrete group families behind a uniform multiply-by-generator oracle.
// Elements are identified by canonical keys: serialized normal forms
// (reduced word / integer vector / alternating syllables / lamp set +
// marker), so key equality is element equality.

#include <memory>
#include <string>
#include <vector>

#include "treelike/common.hpp"

namespace treelike {

// A generator name with exponent +1 or -1.
struct GeneratorSymbol {
    std::string name;
    int exponent = 1;

    GeneratorSymbol inverse() const { return {name, -exponent}; }
    bool operator==(const GeneratorSymbol&) const = default;
};

using Word = std::vector<GeneratorSymbol>;

// Word text is whitespace-separated symbols, inverse spelled with a
// trailing ^-1, e.g. "a b^-1 a". The empty string is the empty word.
Word parse_word(const std::string& text);
std::string word_to_string(const Word& w);
Word inverse_word(const Word& w);

// Cancel adjacent x x^-1 pairs until none remain. Group-independent:
// the output evaluates to the same element in any group interpreting
// the symbols.
Word free_reduce(Word w);

// Parsed form of the group grammar:
//   free:<k> | zn:<k> | cyclic:<n> | freeprod:<n1>,<n2>[,...]
//   | lamplighter | prod(<spec>;<spec>)
struct GroupSpec {
    enum class Family { Free, FreeAbelian, Cyclic, FreeProduct, Lamplighter, DirectProduct };

    Family family = Family::Free;
    int rank = 0;                            // free / zn
    long long order = 0;                     // cyclic
    std::vector<long long> orders;           // freeprod factor orders
    std::shared_ptr<GroupSpec> left, right;  // prod components

    static GroupSpec parse(const std::string& text);
    std::string str() const;
};

// Letter codes: an oracle with k base generators uses letters 0..2k-1.
// Letter l < k is generator l with exponent +1; letter l >= k is the
// inverse of generator l-k. Neighbor enumeration everywhere follows
// letter order, i.e. declared generators first, then their inverses.
class GroupOracle {
public:
    using Key = std::string;

    virtual ~GroupOracle() = default;

    const std::vector<std::string>& generator_names() const { return names_; }
    int rank() const { return static_cast<int>(names_.size()); }
    int letter_count() const { return 2 * rank(); }
    int inverse_letter(int l) const { return l < rank() ? l + rank() : l - rank(); }
    GeneratorSymbol letter_symbol(int l) const;
    // Maps a symbol to its letter code; throws naming the symbol when the
    // name is not a generator of this group or the exponent is not +-1.
    int letter_of(const GeneratorSymbol& s) const;

    const Key& identity() const { return identity_; }
    virtual Key right_multiply(const Key& key, int letter) const = 0;

    // True when the generators form a free basis, making the Cayley
    // graph a tree: geodesics are then unique and never climb above
    // the norm of their endpoints, which sharpens distance
    // certification and enables the constructive triangulation.
    virtual bool free_basis() const { return false; }

    // Human-readable rendering of a key, for reports and DOT labels.
    virtual std::string pretty(const Key& key) const = 0;

    const std::string& description() const { return description_; }

protected:
    GroupOracle(std::vector<std::string> names, Key identity, std::string description);

    std::vector<std::string> names_;
    Key identity_;
    std::string description_;
};

std::shared_ptr<const GroupOracle> make_oracle(const GroupSpec& spec);

inline std::shared_ptr<const GroupOracle> make_oracle(const std::string& spec_text) {
    return make_oracle(GroupSpec::parse(spec_text));
}

// Fold right_multiply over the word, starting at the identity.
GroupOracle::Key evaluate(const GroupOracle& oracle, const Word& w);

}  // namespace treelike
