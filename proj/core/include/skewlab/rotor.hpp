#pragma once

// Unit quaternion algebra for SU(2), its left-multiplication action on
// S^3 in R^4, and the geometric partial sums of that action.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skewlab {

/// A general vector of R^4, identified with the quaternion w + xi + yj + zk.
struct Vector4 {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vector4& operator+=(const Vector4& o) noexcept
    {
        w += o.w;
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vector4& operator-=(const Vector4& o) noexcept
    {
        w -= o.w;
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Vector4& operator*=(double s) noexcept
    {
        w *= s;
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend Vector4 operator+(Vector4 a, const Vector4& b) noexcept { return a += b; }
    friend Vector4 operator-(Vector4 a, const Vector4& b) noexcept { return a -= b; }
    friend Vector4 operator-(const Vector4& a) noexcept { return {-a.w, -a.x, -a.y, -a.z}; }
    friend Vector4 operator*(Vector4 a, double s) noexcept { return a *= s; }
    friend Vector4 operator*(double s, Vector4 a) noexcept { return a *= s; }
    friend bool operator==(const Vector4&, const Vector4&) = default;
};

double dot(const Vector4& a, const Vector4& b) noexcept;
double norm(const Vector4& a) noexcept;
double distance(const Vector4& a, const Vector4& b) noexcept;

/// Hamilton product of two (not necessarily unit) quaternions.
Vector4 hamilton(const Vector4& a, const Vector4& b) noexcept;
Vector4 conjugate(const Vector4& a) noexcept;
/// Multiplicative inverse of a nonzero quaternion.
Vector4 quaternion_inverse(const Vector4& a);

/// Element of SU(2). The norm is restored to 1 on every construction, so
/// long products never accumulate norm drift.
class UnitQuaternion {
public:
    UnitQuaternion() noexcept = default;
    /// Normalizes the given components; throws ConfigError on a zero vector.
    UnitQuaternion(double w, double x, double y, double z);
    explicit UnitQuaternion(const Vector4& v);

    static UnitQuaternion identity() noexcept { return {}; }
    /// cos(angle) + sin(angle) * axis; `angle` is the eigen angle of the
    /// left-multiplication action. `axis` need not be normalized.
    static UnitQuaternion from_axis_angle(const Vector4& axis, double angle);

    double w() const noexcept { return q_.w; }
    double x() const noexcept { return q_.x; }
    double y() const noexcept { return q_.y; }
    double z() const noexcept { return q_.z; }
    const Vector4& vec() const noexcept { return q_; }

    UnitQuaternion inverse() const noexcept;

    friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

private:
    Vector4 q_{1.0, 0.0, 0.0, 0.0};
};

/// Renormalized Hamilton product p*q (q acts first).
UnitQuaternion compose(const UnitQuaternion& p, const UnitQuaternion& q) noexcept;
/// q^n for any integer n, by repeated squaring.
UnitQuaternion power(const UnitQuaternion& q, std::int64_t n) noexcept;
/// Left multiplication v -> q v. An isometry of R^4.
Vector4 act(const UnitQuaternion& q, const Vector4& v) noexcept;
/// |p - q| as vectors of R^4.
double quaternion_distance(const UnitQuaternion& p, const UnitQuaternion& q) noexcept;
/// theta in [0, pi] with q = cos(theta) + sin(theta) u. Left multiplication
/// by q has eigenvalues exp(+-i theta), each with multiplicity two.
double eigen_angle(const UnitQuaternion& q) noexcept;

/// sum_{k<n} q^k(v) by direct iteration. The reference the closed form is
/// checked against.
Vector4 partial_sum_iterated(const UnitQuaternion& q, const Vector4& v, std::size_t n) noexcept;
/// (1 - q^n)(1 - q)^{-1} v. Throws DegenerateError when q is the identity.
Vector4 partial_sum_closed_form(const UnitQuaternion& q, const Vector4& v, std::size_t n);
/// Closed form when q != 1, n*v otherwise.
Vector4 partial_sum(const UnitQuaternion& q, const Vector4& v, std::size_t n) noexcept;
/// 2 / |q - 1|, a bound on |partial_sum(q, v, n)| uniform in n and unit v.
/// Throws DegenerateError for the identity.
double partial_sum_bound(const UnitQuaternion& q);

/// One letter of a word: a 0-based generator index and its exponent sign.
struct Letter {
    std::size_t index = 0;
    bool inverse = false;

    friend bool operator==(const Letter&, const Letter&) = default;
};

/// A freely reduced word a_{i_l} ... a_{i_1} stored in written order, so the
/// rightmost letter acts first.
class BaseWord {
public:
    BaseWord() = default;
    explicit BaseWord(std::vector<Letter> letters);

    /// Builds from 1-based signed indices, e.g. {2, -1, 3}.
    static BaseWord from_signed(std::span<const int> signed_indices);
    std::vector<int> to_signed() const;
    std::string to_string() const;

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    bool is_positive() const noexcept;
    BaseWord inverse() const;
    /// Largest generator index plus one (0 for the empty word).
    std::size_t alphabet_span() const noexcept;
    /// The cyclic rotation moving the first `k` written letters to the end.
    BaseWord rotated(std::size_t k) const;

    friend bool operator==(const BaseWord&, const BaseWord&) = default;

private:
    std::vector<Letter> letters_;
};

/// Right-to-left product of the word's letters. Throws IndexError.
UnitQuaternion evaluate_word(const BaseWord& word, std::span<const UnitQuaternion> generators);

/// Searches for two distinct reduced words of length <= ceil(max_len/2)
/// whose lengths sum to <= max_len and whose values lie within `tol`.
/// Such a pair exists iff some nontrivial reduced word of length <= max_len
/// evaluates within `tol` of the identity. Returns that word, if any.
std::optional<BaseWord> find_short_relation(std::span<const UnitQuaternion> generators,
                                            std::size_t max_len, double tol);
/// True iff find_short_relation finds nothing. A necessary condition for
/// freeness, not a proof of it.
bool no_short_relation_check(std::span<const UnitQuaternion> generators, std::size_t max_len,
                             double tol);

} // namespace skewlab
