#pragma once

// The group of skew products A_i(v, s) = (a_i v, F(v) s) on S^3 x S^1.

#include "skewlab/circle_flows.hpp"
#include "skewlab/rotor.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace skewlab {

struct ProductPoint {
    Vector4 v{1.0, 0.0, 0.0, 0.0};  ///< point of S^3
    CirclePoint s;
};

/// Generators a_1..a_m of the base rotation group together with the fiber
/// flows. Immutable once built; shared by the words over it.
class SkewGroup {
public:
    SkewGroup(std::vector<UnitQuaternion> generators, FlowSystem flows);

    const std::vector<UnitQuaternion>& generators() const noexcept { return generators_; }
    std::size_t size() const noexcept { return generators_.size(); }
    const FlowSystem& flows() const noexcept { return flows_; }

    /// A_i or A_i^{-1} (0-based i), with the log2 fiber derivative of the step
    /// and the translation vector fed to F.
    struct Step {
        ProductPoint point;
        double log2_derivative = 0.0;
        Vector4 translation;
    };
    Step step(std::size_t index, bool inverse, const ProductPoint& p) const;
    ProductPoint apply_generator(std::size_t index, int sign, const ProductPoint& p) const;

private:
    std::vector<UnitQuaternion> generators_;
    FlowSystem flows_;
};

/// A reduced word over a SkewGroup, W = A_{i_l} ... A_{i_1}.
class SkewWord {
public:
    /// Throws IndexError if the word uses letters the group does not have.
    SkewWord(std::shared_ptr<const SkewGroup> group, BaseWord word);

    const SkewGroup& group() const noexcept { return *group_; }
    const std::shared_ptr<const SkewGroup>& group_ptr() const noexcept { return group_; }
    const BaseWord& word() const noexcept { return word_; }
    std::size_t length() const noexcept { return word_.size(); }

    /// The base rotation w = a_{i_l} ... a_{i_1}.
    const UnitQuaternion& base() const noexcept { return base_; }
    SkewWord inverse() const { return {group_, word_.inverse()}; }

private:
    std::shared_ptr<const SkewGroup> group_;
    BaseWord word_;
    UnitQuaternion base_;
};

struct TranslationSum {
    std::size_t n = 0;
    Vector4 value;
};

ProductPoint apply_word(const SkewWord& word, const ProductPoint& p);

/// n-fold direct iteration, tracking the chain-rule log2 fiber derivative and
/// the accumulated translation (F is a homomorphism, so W^n acts on the fiber
/// by F of this vector). Works for any signs.
struct DirectOrbit {
    ProductPoint point;
    double log2_derivative = 0.0;
    Vector4 translation;
};
DirectOrbit iterate_direct(const SkewWord& word, const ProductPoint& p, std::size_t n);

/// v_{n,w} = sum_{j<l} sum_{k<n} prefix_j w^k v, with prefix_0 = 1 and
/// prefix_j = a_{i_j} ... a_{i_1}. Positive words only (ConfigError
/// otherwise).
TranslationSum translation_sum(const SkewWord& word, const Vector4& v, std::size_t n);

/// sum_j prefix_j as a linear map, for reuse across many n and v.
class TranslationOperator {
public:
    explicit TranslationOperator(const SkewWord& word);
    Vector4 operator()(const Vector4& inner_sum) const noexcept;

private:
    std::array<std::array<double, 4>, 4> m_{};
};

/// W^n(v, s) = (w^n v, F(v_{n,w}) s). Positive words only.
ProductPoint iterate_closed_form(const SkewWord& word, const ProductPoint& p, std::size_t n);

/// log2 |d s'/d s| of W^n at p. Positive words go through the closed-form
/// translation sum, others through the chain rule along the orbit.
double fiber_log_derivative(const SkewWord& word, const ProductPoint& p, std::size_t n);
double fiber_log_derivative_chain(const SkewWord& word, const ProductPoint& p, std::size_t n);

/// 2 l / |w - 1|: bound on |v_{n,w}| for every n and unit v. Throws
/// DegenerateError when w is within `identity_tol` of the identity.
double translation_bound(const SkewWord& word, double identity_tol = 1e-9);
/// translation_bound * sup|X'| / ln 2: bound on |fiber_log_derivative|.
double fiber_log_derivative_bound(const SkewWord& word, double identity_tol = 1e-9);

/// Right multiplication by i, j, k: an orthonormal frame of T_v S^3.
std::array<Vector4, 3> tangent_frame(const Vector4& v) noexcept;

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Central finite differences of W in the frame (tangent_frame, d/ds).
/// Rows and columns 0..2 are base directions, 3 is the fiber. Requires
/// h in [1e-6, 1e-4].
Matrix4 full_jacobian_fd(const SkewWord& word, const ProductPoint& p, double h);

/// Low-discrepancy product grid of S^3 x S^1.
struct SampleGrid {
    std::size_t base_points = 32;
    std::size_t fiber_points = 32;
};
std::vector<Vector4> grid_base_points(const SampleGrid& grid);
std::vector<CirclePoint> grid_fiber_points(const SampleGrid& grid);

/// Max of fiber_log_derivative(W, ., n) over the grid: a lower bound for
/// log2 of the operator norm of D(W^n).
double max_fiber_log_derivative(const SkewWord& word, std::size_t n, const SampleGrid& grid);

} // namespace skewlab
