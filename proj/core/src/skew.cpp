#include "skewlab/skew.hpp"

#include "skewlab/error.hpp"
#include "skewlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skewlab {
namespace {

Vector4 unit(const Vector4& v)
{
    return v * (1.0 / norm(v));
}

void require_positive(const SkewWord& word, const char* what)
{
    if (!word.word().is_positive())
        throw ConfigError(std::string(what) + " is defined for positive words only; got "
                          + word.word().to_string());
}

} // namespace

SkewGroup::SkewGroup(std::vector<UnitQuaternion> generators, FlowSystem flows)
    : generators_(std::move(generators)), flows_(std::move(flows))
{
}

SkewGroup::Step SkewGroup::step(std::size_t index, bool inverse, const ProductPoint& p) const
{
    if (index >= generators_.size())
        throw IndexError("generator index " + std::to_string(index + 1) + " out of range 1.."
                         + std::to_string(generators_.size()));
    const UnitQuaternion& a = generators_[index];
    Step out;
    if (!inverse) {
        out.point.v = act(a, p.v);
        out.translation = p.v;
    } else {
        out.point.v = act(a.inverse(), p.v);
        out.translation = -out.point.v;
    }
    const FlowResult f = flows_.apply_with_derivative(out.translation, p.s);
    out.point.s = f.point;
    out.log2_derivative = f.log2_derivative;
    return out;
}

ProductPoint SkewGroup::apply_generator(std::size_t index, int sign, const ProductPoint& p) const
{
    if (sign != 1 && sign != -1)
        throw ConfigError("generator sign must be +1 or -1");
    return step(index, sign < 0, p).point;
}

SkewWord::SkewWord(std::shared_ptr<const SkewGroup> group, BaseWord word)
    : group_(std::move(group)), word_(std::move(word))
{
    if (!group_)
        throw ConfigError("skew word needs a group");
    base_ = evaluate_word(word_, group_->generators());
}

ProductPoint apply_word(const SkewWord& word, const ProductPoint& p)
{
    return iterate_direct(word, p, 1).point;
}

DirectOrbit iterate_direct(const SkewWord& word, const ProductPoint& p, std::size_t n)
{
    DirectOrbit orbit{p, 0.0, {}};
    const auto& letters = word.word().letters();
    for (std::size_t k = 0; k < n; ++k) {
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
            const SkewGroup::Step s = word.group().step(it->index, it->inverse, orbit.point);
            orbit.point = s.point;
            orbit.log2_derivative += s.log2_derivative;
            orbit.translation += s.translation;
        }
    }
    return orbit;
}

TranslationOperator::TranslationOperator(const SkewWord& word)
{
    require_positive(word, "the translation sum");
    const auto& letters = word.word().letters();
    const std::size_t l = letters.size();
    UnitQuaternion prefix;
    // j = 0 .. l-1; prefix_j covers the first j applied letters.
    for (std::size_t j = 0; j < l; ++j) {
        const Vector4& q = prefix.vec();
        // Left multiplication by q as a 4x4 matrix (columns are q*1, q*i, q*j, q*k).
        const Vector4 cols[4] = {hamilton(q, {1, 0, 0, 0}), hamilton(q, {0, 1, 0, 0}),
                                 hamilton(q, {0, 0, 1, 0}), hamilton(q, {0, 0, 0, 1})};
        for (int c = 0; c < 4; ++c) {
            m_[0][static_cast<std::size_t>(c)] += cols[c].w;
            m_[1][static_cast<std::size_t>(c)] += cols[c].x;
            m_[2][static_cast<std::size_t>(c)] += cols[c].y;
            m_[3][static_cast<std::size_t>(c)] += cols[c].z;
        }
        const Letter& next = letters[l - 1 - j];
        prefix = compose(word.group().generators()[next.index], prefix);
    }
}

Vector4 TranslationOperator::operator()(const Vector4& s) const noexcept
{
    const double in[4] = {s.w, s.x, s.y, s.z};
    double out[4] = {0, 0, 0, 0};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            out[r] += m_[r][c] * in[c];
    return {out[0], out[1], out[2], out[3]};
}

TranslationSum translation_sum(const SkewWord& word, const Vector4& v, std::size_t n)
{
    require_positive(word, "the translation sum");
    TranslationSum out{n, {}};
    if (n == 0 || word.length() == 0)
        return out;
    const Vector4 inner = partial_sum(word.base(), v, n);
    const auto& letters = word.word().letters();
    UnitQuaternion prefix;
    for (std::size_t j = 0; j < letters.size(); ++j) {
        out.value += act(prefix, inner);
        prefix = compose(word.group().generators()[letters[letters.size() - 1 - j].index], prefix);
    }
    return out;
}

ProductPoint iterate_closed_form(const SkewWord& word, const ProductPoint& p, std::size_t n)
{
    const TranslationSum t = translation_sum(word, p.v, n);
    return {act(power(word.base(), static_cast<std::int64_t>(n)), p.v),
            word.group().flows().apply(t.value, p.s)};
}

double fiber_log_derivative_chain(const SkewWord& word, const ProductPoint& p, std::size_t n)
{
    return iterate_direct(word, p, n).log2_derivative;
}

double fiber_log_derivative(const SkewWord& word, const ProductPoint& p, std::size_t n)
{
    if (!word.word().is_positive())
        return fiber_log_derivative_chain(word, p, n);
    const TranslationSum t = translation_sum(word, p.v, n);
    return word.group().flows().log2_derivative(t.value, p.s);
}

double translation_bound(const SkewWord& word, double identity_tol)
{
    const double gap = quaternion_distance(word.base(), UnitQuaternion::identity());
    if (gap <= identity_tol)
        throw DegenerateError("word " + word.word().to_string()
                              + " evaluates to the identity in SU(2)");
    return 2.0 * static_cast<double>(word.length()) / gap;
}

double fiber_log_derivative_bound(const SkewWord& word, double identity_tol)
{
    return translation_bound(word, identity_tol) * word.group().flows().max_field_derivative()
        / std::numbers::ln2;
}

std::array<Vector4, 3> tangent_frame(const Vector4& v) noexcept
{
    return {hamilton(v, {0, 1, 0, 0}), hamilton(v, {0, 0, 1, 0}), hamilton(v, {0, 0, 0, 1})};
}

Matrix4 full_jacobian_fd(const SkewWord& word, const ProductPoint& p, double h)
{
    if (!(h >= 1e-6 && h <= 1e-4))
        throw ConfigError("finite-difference step must lie in [1e-6, 1e-4]");
    const ProductPoint centre = apply_word(word, p);
    const auto in_frame = tangent_frame(p.v);
    const auto out_frame = tangent_frame(centre.v);

    auto column = [&](const ProductPoint& plus, const ProductPoint& minus) {
        const ProductPoint a = apply_word(word, plus);
        const ProductPoint b = apply_word(word, minus);
        const Vector4 dv = (a.v - b.v) * (1.0 / (2.0 * h));
        return std::array<double, 4>{dot(dv, out_frame[0]), dot(dv, out_frame[1]),
                                     dot(dv, out_frame[2]),
                                     circle_difference(b.s, a.s) / (2.0 * h)};
    };

    Matrix4 jac{};
    for (std::size_t c = 0; c < 3; ++c) {
        // Geodesic displacement along the frame direction.
        const Vector4 vp = unit(p.v * std::cos(h) + in_frame[c] * std::sin(h));
        const Vector4 vm = unit(p.v * std::cos(h) - in_frame[c] * std::sin(h));
        const auto col = column({vp, p.s}, {vm, p.s});
        for (std::size_t r = 0; r < 4; ++r)
            jac[r][c] = col[r];
    }
    const auto col = column({p.v, CirclePoint(p.s.value() + h)}, {p.v, CirclePoint(p.s.value() - h)});
    for (std::size_t r = 0; r < 4; ++r)
        jac[r][3] = col[r];
    return jac;
}

std::vector<Vector4> grid_base_points(const SampleGrid& grid)
{
    std::vector<Vector4> out;
    out.reserve(grid.base_points);
    for (std::size_t i = 0; i < grid.base_points; ++i)
        out.push_back(halton_sphere3(i));
    return out;
}

std::vector<CirclePoint> grid_fiber_points(const SampleGrid& grid)
{
    std::vector<CirclePoint> out;
    out.reserve(grid.fiber_points);
    for (std::size_t i = 0; i < grid.fiber_points; ++i)
        out.emplace_back(halton_circle(i));
    return out;
}

double max_fiber_log_derivative(const SkewWord& word, std::size_t n, const SampleGrid& grid)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const Vector4& v : grid_base_points(grid))
        for (const CirclePoint& s : grid_fiber_points(grid))
            best = std::max(best, fiber_log_derivative(word, {v, s}, n));
    return best;
}

} // namespace skewlab
