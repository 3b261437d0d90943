#include "skewlab/rotor.hpp"

#include "skewlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skewlab {

double dot(const Vector4& a, const Vector4& b) noexcept
{
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const Vector4& a) noexcept
{
    return std::sqrt(dot(a, a));
}

double distance(const Vector4& a, const Vector4& b) noexcept
{
    return norm(a - b);
}

Vector4 hamilton(const Vector4& a, const Vector4& b) noexcept
{
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}

Vector4 conjugate(const Vector4& a) noexcept
{
    return {a.w, -a.x, -a.y, -a.z};
}

Vector4 quaternion_inverse(const Vector4& a)
{
    const double n2 = dot(a, a);
    if (n2 == 0.0)
        throw DegenerateError("inverse of the zero quaternion");
    return conjugate(a) * (1.0 / n2);
}

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : UnitQuaternion(Vector4{w, x, y, z})
{
}

UnitQuaternion::UnitQuaternion(const Vector4& v)
{
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        throw ConfigError("unit quaternion from a zero or non-finite vector");
    q_ = v * (1.0 / n);
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vector4& axis, double angle)
{
    const double n = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
    if (!(n > 0.0))
        throw ConfigError("rotation axis must be a nonzero pure quaternion");
    const double s = std::sin(angle) / n;
    return UnitQuaternion(std::cos(angle), s * axis.x, s * axis.y, s * axis.z);
}

UnitQuaternion UnitQuaternion::inverse() const noexcept
{
    UnitQuaternion r;
    r.q_ = conjugate(q_);
    return r;
}

UnitQuaternion compose(const UnitQuaternion& p, const UnitQuaternion& q) noexcept
{
    // The product of unit quaternions is never zero, so this cannot throw.
    return UnitQuaternion(hamilton(p.vec(), q.vec()));
}

UnitQuaternion power(const UnitQuaternion& q, std::int64_t n) noexcept
{
    UnitQuaternion base = n < 0 ? q.inverse() : q;
    auto e = static_cast<std::uint64_t>(n < 0 ? -n : n);
    UnitQuaternion result;
    while (e != 0) {
        if (e & 1u)
            result = compose(result, base);
        base = compose(base, base);
        e >>= 1;
    }
    return result;
}

Vector4 act(const UnitQuaternion& q, const Vector4& v) noexcept
{
    return hamilton(q.vec(), v);
}

double quaternion_distance(const UnitQuaternion& p, const UnitQuaternion& q) noexcept
{
    return distance(p.vec(), q.vec());
}

double eigen_angle(const UnitQuaternion& q) noexcept
{
    return std::acos(std::clamp(q.w(), -1.0, 1.0));
}

Vector4 partial_sum_iterated(const UnitQuaternion& q, const Vector4& v, std::size_t n) noexcept
{
    Vector4 sum;
    Vector4 term = v;
    for (std::size_t k = 0; k < n; ++k) {
        sum += term;
        term = act(q, term);
    }
    return sum;
}

Vector4 partial_sum_closed_form(const UnitQuaternion& q, const Vector4& v, std::size_t n)
{
    const Vector4 one{1.0, 0.0, 0.0, 0.0};
    const Vector4 gap = one - q.vec();
    if (norm(gap) == 0.0)
        throw DegenerateError("closed-form partial sum needs q != 1; use n*v");
    const Vector4 qn = power(q, static_cast<std::int64_t>(n)).vec();
    // Powers of q commute, so (1 - q)^{-1} may sit on either side.
    const Vector4 geometric = hamilton(quaternion_inverse(gap), one - qn);
    return hamilton(geometric, v);
}

Vector4 partial_sum(const UnitQuaternion& q, const Vector4& v, std::size_t n) noexcept
{
    if (q == UnitQuaternion::identity())
        return v * static_cast<double>(n);
    return partial_sum_closed_form(q, v, n);
}

double partial_sum_bound(const UnitQuaternion& q)
{
    const double gap = quaternion_distance(q, UnitQuaternion::identity());
    if (gap == 0.0)
        throw DegenerateError("partial-sum bound is undefined for the identity");
    return 2.0 / gap;
}

// ---------------------------------------------------------------------------

BaseWord::BaseWord(std::vector<Letter> letters)
{
    letters_.reserve(letters.size());
    for (const Letter& l : letters) {
        if (!letters_.empty() && letters_.back().index == l.index
            && letters_.back().inverse != l.inverse)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }
}

BaseWord BaseWord::from_signed(std::span<const int> signed_indices)
{
    std::vector<Letter> letters;
    letters.reserve(signed_indices.size());
    for (int s : signed_indices) {
        if (s == 0)
            throw IndexError("signed word letters are 1-based; 0 is not a letter");
        letters.push_back({static_cast<std::size_t>(s > 0 ? s : -s) - 1, s < 0});
    }
    return BaseWord(std::move(letters));
}

std::vector<int> BaseWord::to_signed() const
{
    std::vector<int> out;
    out.reserve(letters_.size());
    for (const Letter& l : letters_) {
        const int i = static_cast<int>(l.index) + 1;
        out.push_back(l.inverse ? -i : i);
    }
    return out;
}

std::string BaseWord::to_string() const
{
    std::ostringstream os;
    os << '[';
    bool first = true;
    for (int s : to_signed()) {
        if (!first)
            os << ", ";
        os << s;
        first = false;
    }
    os << ']';
    return os.str();
}

bool BaseWord::is_positive() const noexcept
{
    return std::none_of(letters_.begin(), letters_.end(), [](const Letter& l) { return l.inverse; });
}

BaseWord BaseWord::inverse() const
{
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (Letter& l : out)
        l.inverse = !l.inverse;
    return BaseWord(std::move(out));
}

std::size_t BaseWord::alphabet_span() const noexcept
{
    std::size_t span = 0;
    for (const Letter& l : letters_)
        span = std::max(span, l.index + 1);
    return span;
}

BaseWord BaseWord::rotated(std::size_t k) const
{
    if (letters_.empty())
        return *this;
    std::vector<Letter> out = letters_;
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k % out.size()), out.end());
    return BaseWord(std::move(out));
}

UnitQuaternion evaluate_word(const BaseWord& word, std::span<const UnitQuaternion> generators)
{
    if (word.alphabet_span() > generators.size())
        throw IndexError("word " + word.to_string() + " uses a generator index beyond "
                         + std::to_string(generators.size()));
    UnitQuaternion result;
    // Written order a_{i_l} ... a_{i_1}: multiply left to right.
    for (const Letter& l : word.letters()) {
        const UnitQuaternion& g = generators[l.index];
        result = compose(result, l.inverse ? g.inverse() : g);
    }
    return result;
}

} // namespace skewlab
