#include "skewlab/grigorchuk.hpp"

#include "skewlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skewlab {
namespace {

constexpr std::size_t kMaxRecursion = 256;

// Product of two distinct letters of {b, c, d}.
char klein_product(char x, char y) noexcept
{
    return static_cast<char>('b' + 'c' + 'd' - x - y);
}

std::string reduce(std::string_view word)
{
    std::string out;
    out.reserve(word.size());
    for (char x : word) {
        for (;;) {
            if (out.empty()) {
                out.push_back(x);
                break;
            }
            const char top = out.back();
            if (top == x) {
                out.pop_back();
                break;
            }
            if (top != 'a' && x != 'a') {
                out.pop_back();
                x = klein_product(top, x);
                continue;
            }
            out.push_back(x);
            break;
        }
    }
    return out;
}

// Section of a letter at subtree `pos` (0 = left, 1 = right); '\0' is 1.
char letter_section(char x, int pos) noexcept
{
    switch (x) {
    case 'b':
        return pos == 0 ? 'a' : 'c';
    case 'c':
        return pos == 0 ? 'a' : 'd';
    case 'd':
        return pos == 0 ? '\0' : 'b';
    default:
        return '\0';
    }
}

struct RawSections {
    std::string left;
    std::string right;
    bool swap = false;
};

RawSections raw_sections(const std::string& word)
{
    RawSections out;
    int pos[2] = {0, 1};
    for (char x : word) {
        if (x == 'a') {
            pos[0] ^= 1;
            pos[1] ^= 1;
            out.swap = !out.swap;
            continue;
        }
        if (const char l = letter_section(x, pos[0]))
            out.left.push_back(l);
        if (const char r = letter_section(x, pos[1]))
            out.right.push_back(r);
    }
    out.left = reduce(out.left);
    out.right = reduce(out.right);
    return out;
}

bool trivial_recursive(const std::string& word, std::size_t depth)
{
    if (word.empty())
        return true;
    if (depth > kMaxRecursion)
        throw InvariantBreach("triviality recursion did not contract for word " + word);
    if (std::count(word.begin(), word.end(), 'a') % 2 != 0)
        return false;
    const RawSections s = raw_sections(word);
    return trivial_recursive(s.left, depth + 1) && trivial_recursive(s.right, depth + 1);
}

std::int64_t nucleus_id(const std::string& word) noexcept
{
    if (word.empty())
        return 0;
    if (word.size() == 1)
        return word[0] - 'a' + 1;
    return -1;
}

} // namespace

GrigorchukElement::GrigorchukElement(std::string_view word)
{
    for (char x : word)
        if (x < 'a' || x > 'd')
            throw ConfigError(std::string("Grigorchuk words use letters a-d, got '") + x + "'");
    word_ = reduce(word);
}

GrigorchukElement GrigorchukElement::inverse() const
{
    GrigorchukElement g;
    g.word_.assign(word_.rbegin(), word_.rend());
    return g;
}

GrigorchukElement GrigorchukElement::power(std::uint64_t n) const
{
    GrigorchukElement result;
    GrigorchukElement base = *this;
    while (n != 0) {
        if (n & 1u)
            result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

GrigorchukElement operator*(const GrigorchukElement& g, const GrigorchukElement& h)
{
    GrigorchukElement out;
    out.word_ = reduce(g.word_ + h.word_);
    return out;
}

Sections sections(const GrigorchukElement& g)
{
    RawSections raw = raw_sections(g.word());
    return {GrigorchukElement(raw.left), GrigorchukElement(raw.right), raw.swap};
}

bool is_trivial(const GrigorchukElement& g)
{
    return trivial_recursive(g.word(), 0);
}

bool same_element(const GrigorchukElement& g, const GrigorchukElement& h)
{
    return is_trivial(g * h.inverse());
}

std::uint64_t element_order(const GrigorchukElement& g, std::uint64_t cap)
{
    if (cap == 0 || (cap & (cap - 1)) != 0)
        throw ConfigError("order cap must be a power of two");
    if (is_trivial(g))
        return 1;
    GrigorchukElement x = g;
    for (std::uint64_t k = 2; k <= cap; k *= 2) {
        x = x * x;
        if (is_trivial(x))
            return k;
    }
    throw OrderCapError("order of " + g.word() + " exceeds " + std::to_string(cap));
}

// ---------------------------------------------------------------------------

std::size_t BallTable::KeyHash::operator()(const Key& k) const noexcept
{
    std::uint64_t h = (std::uint64_t{k.left} << 32) ^ k.right;
    h ^= k.swap ? 0x9e3779b97f4a7c15ULL : 0;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
}

BallTable::BallTable(std::size_t radius) : radius_(radius)
{
    // 1 = (1, 1), a = swap(1, 1), b = (a, c), c = (a, d), d = (1, b).
    ids_.emplace(Key{false, 0, 0}, 0);
    ids_.emplace(Key{true, 0, 0}, 1);
    ids_.emplace(Key{false, 1, 3}, 2);
    ids_.emplace(Key{false, 1, 4}, 3);
    ids_.emplace(Key{false, 0, 2}, 4);
    next_id_ = 5;

    reps_.push_back(GrigorchukElement::identity());
    lengths_.push_back(0);
    slot_of_.emplace(0, 0);
    ball_sizes_.push_back(1);

    std::size_t sphere_begin = 0;
    static constexpr char letters[] = {'a', 'b', 'c', 'd'};
    for (std::size_t r = 1; r <= radius_; ++r) {
        const std::size_t sphere_end = reps_.size();
        for (std::size_t i = sphere_begin; i < sphere_end; ++i) {
            for (char x : letters) {
                const GrigorchukElement candidate = reps_[i] * GrigorchukElement(std::string_view(&x, 1));
                const Id id = intern(candidate.word());
                const auto hit = slot_of_.find(id);
                if (hit != slot_of_.end()) {
                    if (!same_element(candidate, reps_[hit->second]))
                        throw InvariantBreach("canonical id collision between " + candidate.word()
                                              + " and " + reps_[hit->second].word());
                    continue;
                }
                slot_of_.emplace(id, reps_.size());
                reps_.push_back(candidate);
                lengths_.push_back(r);
            }
        }
        sphere_begin = sphere_end;
        ball_sizes_.push_back(reps_.size());
    }
}

BallTable::Id BallTable::intern(const std::string& word)
{
    if (const std::int64_t n = nucleus_id(word); n >= 0)
        return static_cast<Id>(n);
    if (const auto it = word_ids_.find(word); it != word_ids_.end())
        return it->second;
    const RawSections s = raw_sections(word);
    const Key key{s.swap, intern(s.left), intern(s.right)};
    const auto [it, inserted] = ids_.emplace(key, next_id_);
    if (inserted)
        ++next_id_;
    word_ids_.emplace(word, it->second);
    return it->second;
}

std::int64_t BallTable::find(const std::string& word) const
{
    if (const std::int64_t n = nucleus_id(word); n >= 0)
        return n;
    if (const auto it = word_ids_.find(word); it != word_ids_.end())
        return it->second;
    const RawSections s = raw_sections(word);
    const std::int64_t left = find(s.left);
    if (left < 0)
        return -1;
    const std::int64_t right = find(s.right);
    if (right < 0)
        return -1;
    const auto it = ids_.find(Key{s.swap, static_cast<Id>(left), static_cast<Id>(right)});
    return it == ids_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

bool BallTable::contains(const GrigorchukElement& g) const
{
    const std::int64_t id = find(g.word());
    return id >= 0 && slot_of_.count(static_cast<Id>(id)) != 0;
}

std::size_t BallTable::word_length(const GrigorchukElement& g) const
{
    const std::int64_t id = find(g.word());
    if (id >= 0) {
        if (const auto it = slot_of_.find(static_cast<Id>(id)); it != slot_of_.end())
            return lengths_[it->second];
    }
    throw RadiusExceededError("element " + (g.empty() ? std::string("1") : g.word())
                              + " lies outside the ball of radius " + std::to_string(radius_));
}

std::optional<std::size_t> BallTable::split_length(const GrigorchukElement& g) const
{
    if (contains(g))
        return word_length(g);
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < reps_.size(); ++k) {
        if (best && lengths_[k] + 1 >= *best)
            break;
        const std::int64_t id = find((reps_[k].inverse() * g).word());
        if (id < 0)
            continue;
        const auto it = slot_of_.find(static_cast<Id>(id));
        if (it == slot_of_.end())
            continue;
        const std::size_t len = lengths_[k] + lengths_[it->second];
        if (!best || len < *best)
            best = len;
    }
    return best;
}

std::size_t word_length(const GrigorchukElement& g, const BallTable& table)
{
    return table.word_length(g);
}

double operator_norm_log2(const GrigorchukElement& g, const BallTable& table)
{
    return static_cast<double>(table.word_length(g));
}

double operator_norm(const GrigorchukElement& g, const BallTable& table)
{
    return std::exp2(operator_norm_log2(g, table));
}

double truncated_operator_norm_log2(const GrigorchukElement& g, const BallTable& table,
                                    std::size_t inner_radius)
{
    const std::size_t g_len = table.word_length(g);
    if (g_len + inner_radius > table.radius())
        throw RadiusExceededError("truncation radius too large for the table");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < table.size() && table.lengths()[k] <= inner_radius; ++k) {
        const auto gh = static_cast<double>(table.word_length(g * table.representatives()[k]));
        best = std::max(best, gh - static_cast<double>(table.lengths()[k]));
    }
    return best;
}

PeriodicBanachExponent periodic_banach_exponent(const GrigorchukElement& g, std::size_t n,
                                                const BallTable& table, std::uint64_t order_cap)
{
    if (n == 0)
        throw ConfigError("periodic exponent needs N >= 1");
    PeriodicBanachExponent out;
    out.order = element_order(g, order_cap);

    std::vector<double> cycle_lengths;
    GrigorchukElement x;
    for (std::uint64_t r = 0; r < out.order; ++r) {
        if (const auto len = table.split_length(x)) {
            cycle_lengths.push_back(static_cast<double>(*len));
        } else {
            out.exact = false;
            const GrigorchukElement back = g.power(out.order - r);
            cycle_lengths.push_back(static_cast<double>(std::min(x.size(), back.size())));
        }
        x = x * g;
    }
    for (std::size_t m = (n + 1) / 2; m <= n; ++m) {
        const double len = cycle_lengths[m % out.order];
        out.bound = std::max(out.bound, std::numbers::ln2 * len / static_cast<double>(m));
    }
    return out;
}

GeodesicRay geodesic_ray_exponent(const BallTable& table, std::size_t n)
{
    if (n == 0)
        throw ConfigError("geodesic ray needs N >= 1");
    if (n > table.radius())
        throw RadiusExceededError("geodesic ray of length " + std::to_string(n)
                                  + " needs a table of at least that radius");
    const GrigorchukElement* best = nullptr;
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (table.lengths()[k] != n)
            continue;
        if (!best || table.representatives()[k].word() < best->word())
            best = &table.representatives()[k];
    }
    if (!best)
        throw InvariantBreach("sphere of radius " + std::to_string(n) + " is empty");
    for (std::size_t k = 1; k <= n; ++k) {
        const GrigorchukElement prefix(std::string_view(best->word()).substr(0, k));
        if (table.word_length(prefix) != k)
            throw InvariantBreach("prefix of the geodesic witness is not geodesic");
    }
    return {*best, std::numbers::ln2 * operator_norm_log2(*best, table) / static_cast<double>(n)};
}

} // namespace skewlab
