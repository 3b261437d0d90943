#pragma once

// The first Grigorchuk group G = <a, b, c, d>, acting on the rooted binary
// tree by
//   a = swap of the two subtrees,  b = (a, c),  c = (a, d),  d = (1, b),
// and the weighted left-regular Banach cocycle over it: with |g|_S the word
// length and ||g|| = 2^{|g|_S}, left multiplication by g has operator norm
// 2^{|g|_S}. G is infinite but every element has finite order, so the
// cocycle has top exponent ln 2 while every periodic orbit has exponent 0.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skewlab {

/// An element of G as a reduced word over {a, b, c, d}. Reduction applies
/// x^2 = 1 and the Klein relations among b, c, d, so reduced words
/// alternate between a and a letter of {b, c, d}. Equality of the stored
/// words is word equality; use is_trivial or same_element for group
/// equality.
class GrigorchukElement {
public:
    GrigorchukElement() = default;
    /// Throws ConfigError on letters outside {a, b, c, d}.
    explicit GrigorchukElement(std::string_view word);

    static GrigorchukElement identity() { return {}; }

    const std::string& word() const noexcept { return word_; }
    std::size_t size() const noexcept { return word_.size(); }
    bool empty() const noexcept { return word_.empty(); }

    /// All generators are involutions, so the inverse is the reversed word.
    GrigorchukElement inverse() const;
    GrigorchukElement power(std::uint64_t n) const;

    friend GrigorchukElement operator*(const GrigorchukElement& g, const GrigorchukElement& h);
    friend bool operator==(const GrigorchukElement&, const GrigorchukElement&) = default;

private:
    std::string word_;
};

/// Restrictions of g to the two first-level subtrees and whether g swaps
/// them. The word acts left to right.
struct Sections {
    GrigorchukElement left;
    GrigorchukElement right;
    bool swap = false;
};

Sections sections(const GrigorchukElement& g);

/// True iff g acts trivially on the tree: no root swap and both sections
/// trivial, recursively. Terminates because sections of a reduced word of
/// length L >= 2 have length at most ceil(L/2).
bool is_trivial(const GrigorchukElement& g);
bool same_element(const GrigorchukElement& g, const GrigorchukElement& h);

/// Smallest k with g^k = 1, searched over powers of two up to `cap` (orders
/// in G are powers of two). Throws ConfigError if cap is not a power of two
/// and OrderCapError if the order exceeds it.
std::uint64_t element_order(const GrigorchukElement& g, std::uint64_t cap = 256);

/// Breadth-first enumeration of the ball of radius R in the Cayley graph
/// over S = {a, b, c, d}. Each element is stored once, under its shortlex
/// least geodesic word.
class BallTable {
public:
    explicit BallTable(std::size_t radius);

    std::size_t radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return reps_.size(); }
    /// |B(n)| for n = 0..radius.
    const std::vector<std::size_t>& ball_sizes() const noexcept { return ball_sizes_; }
    /// Shortlex least geodesic words, in BFS order.
    const std::vector<GrigorchukElement>& representatives() const noexcept { return reps_; }
    const std::vector<std::size_t>& lengths() const noexcept { return lengths_; }

    bool contains(const GrigorchukElement& g) const;
    /// |g|_S. Throws RadiusExceededError outside the ball.
    std::size_t word_length(const GrigorchukElement& g) const;
    /// |g|_S for |g|_S <= 2 * radius, as min over x in the ball of
    /// |x| + |x^{-1} g|; empty when no split lands in the ball.
    std::optional<std::size_t> split_length(const GrigorchukElement& g) const;

private:
    using Id = std::uint32_t;
    struct Key {
        bool swap;
        Id left;
        Id right;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    // Canonical ids via the wreath recursion: the element is determined by
    // (swap, id(left), id(right)), with a, b, c, d, 1 seeded by hand. `find`
    // never inserts and reports -1 for an element never interned.
    Id intern(const std::string& word);
    std::int64_t find(const std::string& word) const;

    std::size_t radius_;
    std::unordered_map<Key, Id, KeyHash> ids_;
    std::unordered_map<std::string, Id> word_ids_;
    Id next_id_ = 0;
    std::unordered_map<Id, std::size_t> slot_of_;
    std::vector<GrigorchukElement> reps_;
    std::vector<std::size_t> lengths_;
    std::vector<std::size_t> ball_sizes_;
};

std::size_t word_length(const GrigorchukElement& g, const BallTable& table);

/// log2 of ||alpha(g)|| = 2^{|g|_S}.
double operator_norm_log2(const GrigorchukElement& g, const BallTable& table);
double operator_norm(const GrigorchukElement& g, const BallTable& table);

/// Norm of the weighted left-regular action restricted to the span of the
/// ball of radius `inner_radius`: max over h of |gh| - |h| (log2 units).
/// Requires |g| + inner_radius <= table radius.
double truncated_operator_norm_log2(const GrigorchukElement& g, const BallTable& table,
                                    std::size_t inner_radius);

struct PeriodicBanachExponent {
    std::uint64_t order = 0;
    /// max over n in [ceil(N/2), N] of ln2 * |g^n|_S / n.
    double bound = 0.0;
    /// False when some g^r lay beyond twice the table radius and its
    /// reduced word length (an upper bound on |g^r|_S) was used.
    bool exact = true;
};

PeriodicBanachExponent periodic_banach_exponent(const GrigorchukElement& g, std::size_t n,
                                                const BallTable& table, std::uint64_t order_cap = 256);

struct GeodesicRay {
    GrigorchukElement witness;
    double exponent = 0.0;
};

/// A length-N word all of whose prefixes are geodesic (the lexicographically
/// least one), with its exponent (1/N) ln ||alpha(witness)|| = ln 2.
GeodesicRay geodesic_ray_exponent(const BallTable& table, std::size_t n);

} // namespace skewlab
