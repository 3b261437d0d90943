#include "skewlab/error.hpp"
#include "skewlab/rotor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace skewlab {
namespace {

// Letters are numbered 2*index + inverse and stored as that number plus one,
// so a word of up to 8 letters packs into a uint64 with one nonzero byte per
// letter, first written letter lowest.
constexpr std::size_t kMaxHalf = 8;
constexpr std::size_t kMaxLetters = 255;
constexpr std::size_t kPassCapacity = std::size_t{8} << 20;
constexpr std::size_t kKeyBins = 4096;

struct Entry {
    double key;
    double key2;
    std::uint64_t code;
};

// Fixed generic directions; any unit vectors work for the slab sweep.
const Vector4 kProjection = [] {
    const Vector4 d{0.5377, 0.3212, -0.7244, 0.2891};
    return d * (1.0 / norm(d));
}();
const Vector4 kSecondary = [] {
    const Vector4 d{-0.2468, 0.8133, 0.1927, -0.4871};
    return d * (1.0 / norm(d));
}();

// Visits every reduced word of length <= max_len with its projection key.
// For leaves the key is obtained as dot(x, conj(P) d) from the parent
// product P, and the product P x is formed only when `wanted(key)` holds.
template <typename Wanted, typename Visit>
void enumerate_reduced(std::span<const UnitQuaternion> letters, std::size_t max_len,
                       Wanted&& wanted, Visit&& visit)
{
    std::array<UnitQuaternion, kMaxHalf + 1> prefix{};
    std::array<std::size_t, kMaxHalf + 1> last{};
    std::uint64_t code = 0;

    auto set_letter = [&](std::size_t depth, std::size_t l) {
        const std::uint64_t shift = 8 * depth;
        code = (code & ~(std::uint64_t{0xff} << shift)) | (std::uint64_t{l + 1} << shift);
    };

    auto rec = [&](auto&& self, std::size_t depth) -> void {
        const Vector4& p = prefix[depth].vec();
        if (depth == 0) {
            const double key = dot(p, kProjection);
            if (wanted(key))
                visit(code, depth, p, key);
        }
        if (depth == max_len)
            return;
        const Vector4 pulled = hamilton(conjugate(p), kProjection);
        for (std::size_t l = 0; l < letters.size(); ++l) {
            if (depth > 0 && (l ^ 1u) == last[depth])
                continue;
            set_letter(depth, l);
            const double key = dot(letters[l].vec(), pulled);
            if (depth + 1 == max_len) {
                if (wanted(key))
                    visit(code, depth + 1, hamilton(p, letters[l].vec()), key);
                continue;
            }
            last[depth + 1] = l;
            prefix[depth + 1] = compose(prefix[depth], letters[l]);
            if (wanted(key))
                visit(code, depth + 1, prefix[depth + 1].vec(), key);
            self(self, depth + 1);
        }
        code &= ~(std::uint64_t{0xff} << (8 * depth));
    };
    rec(rec, 0);
}

std::size_t code_length(std::uint64_t code)
{
    std::size_t n = 0;
    while (n < kMaxHalf && ((code >> (8 * n)) & 0xff) != 0)
        ++n;
    return n;
}

std::vector<Letter> decode(std::uint64_t code)
{
    std::vector<Letter> out;
    for (std::size_t i = 0; i < kMaxHalf; ++i) {
        const auto b = static_cast<std::size_t>((code >> (8 * i)) & 0xff);
        if (b == 0)
            break;
        out.push_back({(b - 1) / 2, ((b - 1) & 1u) != 0});
    }
    return out;
}

Vector4 product_of(std::uint64_t code, std::span<const UnitQuaternion> letters)
{
    UnitQuaternion q;
    for (std::size_t i = 0; i < kMaxHalf; ++i) {
        const auto b = static_cast<std::size_t>((code >> (8 * i)) & 0xff);
        if (b == 0)
            break;
        q = compose(q, letters[b - 1]);
    }
    return q.vec();
}

std::size_t bin_of(double key)
{
    const double t = (key + 1.0) * 0.5 * static_cast<double>(kKeyBins);
    return std::min<std::size_t>(kKeyBins - 1, static_cast<std::size_t>(std::max(0.0, t)));
}

double bin_lower(std::size_t bin)
{
    return -1.0 + 2.0 * static_cast<double>(bin) / static_cast<double>(kKeyBins);
}

} // namespace

std::optional<BaseWord> find_short_relation(std::span<const UnitQuaternion> generators,
                                            std::size_t max_len, double tol)
{
    if (max_len == 0)
        throw ConfigError("relation search needs max_len >= 1");
    if (!(tol >= 0.0))
        throw ConfigError("relation search needs a non-negative tolerance");
    const std::size_t half = (max_len + 1) / 2;
    if (half > kMaxHalf)
        throw ConfigError("relation search supports max_len <= 16");
    if (2 * generators.size() > kMaxLetters)
        throw ConfigError("relation search supports at most 127 generators");

    std::vector<UnitQuaternion> letters;
    letters.reserve(2 * generators.size());
    for (const UnitQuaternion& g : generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }

    // Histogram of projection keys, used to split the sweep into slabs that
    // fit the memory budget. A pair within tol has keys within tol, so a slab
    // [lo, hi) also takes entries up to hi + tol and owns every pair whose
    // smaller key falls inside it.
    std::vector<std::size_t> histogram(kKeyBins, 0);
    enumerate_reduced(
        letters, half,
        [&](double key) {
            ++histogram[bin_of(key)];
            return false;
        },
        [](std::uint64_t, std::size_t, const Vector4&, double) {});

    std::vector<std::pair<std::size_t, std::size_t>> slabs;
    for (std::size_t begin = 0; begin < kKeyBins;) {
        std::size_t end = begin;
        std::size_t count = 0;
        while (end < kKeyBins && (end == begin || count + histogram[end] <= kPassCapacity))
            count += histogram[end++];
        slabs.emplace_back(begin, end);
        begin = end;
    }

    std::size_t widest = 0;
    for (const auto& [bin_begin, bin_end] : slabs) {
        std::size_t count = 0;
        for (std::size_t b = bin_begin; b < std::min(kKeyBins, bin_end + 1); ++b)
            count += histogram[b];
        widest = std::max(widest, count);
    }
    std::vector<Entry> entries;
    entries.reserve(widest);
    for (const auto& [bin_begin, bin_end] : slabs) {
        const double lo = bin_begin == 0 ? -2.0 : bin_lower(bin_begin);
        const double hi = bin_end == kKeyBins ? 2.0 : bin_lower(bin_end);
        entries.clear();
        enumerate_reduced(
            letters, half, [&](double key) { return key >= lo && key < hi + tol; },
            [&](std::uint64_t code, std::size_t, const Vector4& q, double key) {
                entries.push_back({key, dot(q, kSecondary), code});
            });
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.key < b.key || (a.key == b.key && a.code < b.code);
        });
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const Entry& u = entries[i];
            if (u.key >= hi)
                break;
            for (std::size_t j = i + 1; j < entries.size() && entries[j].key - u.key <= tol; ++j) {
                const Entry& v = entries[j];
                if (std::abs(v.key2 - u.key2) > tol)
                    continue;
                if (code_length(u.code) + code_length(v.code) > max_len)
                    continue;
                if (distance(product_of(u.code, letters), product_of(v.code, letters)) > tol)
                    continue;
                // u = v as elements, so u v^{-1} is a nontrivial relation.
                std::vector<Letter> rel = decode(u.code);
                const std::vector<Letter> tail = BaseWord(decode(v.code)).inverse().letters();
                rel.insert(rel.end(), tail.begin(), tail.end());
                return BaseWord(std::move(rel));
            }
        }
    }
    return std::nullopt;
}

bool no_short_relation_check(std::span<const UnitQuaternion> generators, std::size_t max_len,
                             double tol)
{
    return !find_short_relation(generators, max_len, tol).has_value();
}

} // namespace skewlab
