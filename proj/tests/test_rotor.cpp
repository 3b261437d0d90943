#include "doctest.h"

#include "skewlab/error.hpp"
#include "skewlab/rotor.hpp"
#include "skewlab/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace skewlab;

namespace {

// Quaternion product written as the 4x4 left-multiplication matrix, kept
// independent of the library's hamilton().
std::array<double, 4> oracle_mul(const std::array<double, 4>& a, const std::array<double, 4>& b)
{
    const double m[4][4] = {
        {a[0], -a[1], -a[2], -a[3]},
        {a[1], a[0], -a[3], a[2]},
        {a[2], a[3], a[0], -a[1]},
        {a[3], -a[2], a[1], a[0]},
    };
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            out[r] += m[r][c] * b[c];
    return out;
}

std::array<double, 4> arr(const Vector4& v) { return {v.w, v.x, v.y, v.z}; }

double arr_distance(const std::array<double, 4>& a, const Vector4& b)
{
    return distance({a[0], a[1], a[2], a[3]}, b);
}

UnitQuaternion random_rotation(Rng& rng, double min_angle)
{
    const double angle = rng.uniform(min_angle, std::numbers::pi);
    return UnitQuaternion::from_axis_angle(rng.unit_axis(), angle);
}

} // namespace

TEST_CASE("hamilton product follows i j = k")
{
    const Vector4 i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(hamilton(i, j) == k);
    CHECK(hamilton(j, i) == -k);
    CHECK(hamilton(i, i) == Vector4{-1, 0, 0, 0});
    CHECK(hamilton(hamilton(i, j), k) == Vector4{-1, 0, 0, 0});
}

TEST_CASE("hamilton agrees with the matrix oracle")
{
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const Vector4 a = rng.unit_vector4() * rng.uniform(0.1, 3.0);
        const Vector4 b = rng.unit_vector4() * rng.uniform(0.1, 3.0);
        CHECK(arr_distance(oracle_mul(arr(a), arr(b)), hamilton(a, b)) < 1e-13);
    }
}

TEST_CASE("unit quaternion construction")
{
    const UnitQuaternion q(2.0, 0.0, 0.0, 0.0);
    CHECK(q == UnitQuaternion::identity());
    CHECK_THROWS_AS(UnitQuaternion(0.0, 0.0, 0.0, 0.0), ConfigError);
    const UnitQuaternion r = UnitQuaternion::from_axis_angle({0, 0, 0, 3.0}, std::numbers::pi / 6);
    CHECK(r.w() == doctest::Approx(std::cos(std::numbers::pi / 6)));
    CHECK(r.z() == doctest::Approx(0.5));
    CHECK(eigen_angle(r) == doctest::Approx(std::numbers::pi / 6));
    CHECK(quaternion_distance(compose(r, r.inverse()), UnitQuaternion::identity()) < 1e-15);
}

TEST_CASE("products stay on the unit sphere")
{
    Rng rng(11);
    UnitQuaternion q;
    const UnitQuaternion step = random_rotation(rng, 0.3);
    for (int k = 0; k < 100000; ++k)
        q = compose(step, q);
    CHECK(std::abs(norm(q.vec()) - 1.0) < 1e-15);
    CHECK(quaternion_distance(q, power(step, 100000)) < 1e-9);
}

TEST_CASE("power handles negative and zero exponents")
{
    Rng rng(3);
    const UnitQuaternion q = random_rotation(rng, 0.1);
    CHECK(power(q, 0) == UnitQuaternion::identity());
    CHECK(quaternion_distance(power(q, -3), compose(q.inverse(), compose(q.inverse(), q.inverse()))) < 1e-14);
    CHECK(quaternion_distance(compose(power(q, 17), power(q, -17)), UnitQuaternion::identity()) < 1e-13);
}

TEST_CASE("property: left multiplication is an isometry")
{
    Rng rng(101);
    for (int t = 0; t < 1000; ++t) {
        const UnitQuaternion q(rng.unit_vector4());
        const Vector4 a = rng.unit_vector4();
        const Vector4 b = rng.unit_vector4();
        CHECK(std::abs(distance(act(q, a), act(q, b)) - distance(a, b)) < 1e-12);
    }
}

TEST_CASE("property: iterated partial sums match the closed form")
{
    Rng rng(202);
    for (int t = 0; t < 50; ++t) {
        const UnitQuaternion q = random_rotation(rng, 0.01);
        const Vector4 v = rng.unit_vector4();
        // Brute-force oracle: v, qv, q^2 v, ... accumulated with the matrix product.
        std::array<double, 4> term = arr(v);
        std::array<double, 4> sum{};
        for (std::size_t n = 1; n <= 1000; ++n) {
            for (int c = 0; c < 4; ++c)
                sum[c] += term[c];
            term = oracle_mul(arr(q.vec()), term);
            if (n % 97 == 0 || n == 1000) {
                const Vector4 closed = partial_sum_closed_form(q, v, n);
                CHECK(arr_distance(sum, closed) < 1e-9);
                CHECK(distance(partial_sum_iterated(q, v, n), closed) < 1e-9);
            }
        }
    }
}

TEST_CASE("property: partial sums are uniformly bounded")
{
    Rng rng(303);
    for (int t = 0; t < 200; ++t) {
        const UnitQuaternion q = random_rotation(rng, 0.05);
        const Vector4 v = rng.unit_vector4();
        const double bound = partial_sum_bound(q);
        CHECK(bound == doctest::Approx(2.0 / distance(q.vec(), {1, 0, 0, 0})));
        Vector4 sum;
        Vector4 term = v;
        double worst = 0.0;
        for (std::size_t n = 1; n <= 1000; ++n) {
            sum += term;
            term = act(q, term);
            worst = std::max(worst, norm(sum));
        }
        CHECK(worst <= bound + 1e-8);
    }
}

TEST_CASE("property: eigen angle doubles under squaring, folded into [0, pi]")
{
    Rng rng(404);
    for (int t = 0; t < 500; ++t) {
        const UnitQuaternion q(rng.unit_vector4());
        const double theta = eigen_angle(q);
        double doubled = std::fmod(2.0 * theta, 2.0 * std::numbers::pi);
        if (doubled > std::numbers::pi)
            doubled = 2.0 * std::numbers::pi - doubled;
        CHECK(std::abs(eigen_angle(compose(q, q)) - doubled) < 1e-10);
    }
}

TEST_CASE("partial sum degenerate cases")
{
    const Vector4 v{0, 1, 0, 0};
    CHECK_THROWS_AS(partial_sum_closed_form(UnitQuaternion::identity(), v, 5), DegenerateError);
    CHECK_THROWS_AS(partial_sum_bound(UnitQuaternion::identity()), DegenerateError);
    CHECK(partial_sum(UnitQuaternion::identity(), v, 5) == v * 5.0);
    CHECK(partial_sum(UnitQuaternion::from_axis_angle({0, 1, 0, 0}, 1.0), v, 0) == Vector4{});
    // q = -1: sums alternate v, 0, and the bound 2/|q-1| = 1 is tight.
    const UnitQuaternion minus(-1, 0, 0, 0);
    CHECK(partial_sum_bound(minus) == doctest::Approx(1.0));
    CHECK(distance(partial_sum(minus, v, 7), v) < 1e-15);
    CHECK(norm(partial_sum(minus, v, 8)) < 1e-15);
}

TEST_CASE("base words reduce and round-trip")
{
    const int raw[] = {1, 2, -2, 3, -1, 1};
    const BaseWord w = BaseWord::from_signed(raw);
    CHECK(w.to_signed() == std::vector<int>{1, 3});
    CHECK(w.to_string() == "[1, 3]");
    CHECK(w.is_positive());
    CHECK(w.alphabet_span() == 3);
    CHECK(w.inverse().to_signed() == std::vector<int>{-3, -1});
    CHECK(w.inverse().to_string() == "[-3, -1]");
    const int zero[] = {1, 0};
    CHECK_THROWS_AS(BaseWord::from_signed(zero), IndexError);
    const int cancel[] = {2, -2};
    CHECK(BaseWord::from_signed(cancel).empty());
    const int rot[] = {1, 2, 3};
    CHECK(BaseWord::from_signed(rot).rotated(1).to_signed() == std::vector<int>{2, 3, 1});
}

TEST_CASE("evaluate_word multiplies in written order")
{
    const std::vector<UnitQuaternion> gens{UnitQuaternion::from_axis_angle({0, 1, 0, 0}, 0.4),
                                           UnitQuaternion::from_axis_angle({0, 0, 1, 0}, 0.9)};
    const int raw[] = {2, 1, -2};
    const UnitQuaternion value = evaluate_word(BaseWord::from_signed(raw), gens);
    const UnitQuaternion expected = compose(gens[1], compose(gens[0], gens[1].inverse()));
    CHECK(quaternion_distance(value, expected) < 1e-15);
    const int bad[] = {3};
    CHECK_THROWS_AS(evaluate_word(BaseWord::from_signed(bad), gens), IndexError);
}

TEST_CASE("short relation search on a single generator")
{
    const std::vector<UnitQuaternion> irrational{
        UnitQuaternion::from_axis_angle({0, 1, 0, 0}, std::numbers::pi / 7)};
    CHECK(no_short_relation_check(irrational, 6, 1e-9));

    // q^6 = cos(2 pi) = 1 for eigen angle pi/3.
    const std::vector<UnitQuaternion> sixth{UnitQuaternion::from_axis_angle({0, 0, 0, 1}, std::numbers::pi / 3)};
    CHECK(no_short_relation_check(sixth, 5, 1e-9));
    const auto rel = find_short_relation(sixth, 6, 1e-9);
    REQUIRE(rel.has_value());
    CHECK(rel->size() == 6);
    CHECK(quaternion_distance(evaluate_word(*rel, sixth), UnitQuaternion::identity()) < 1e-9);
}

TEST_CASE("short relation search finds duplicated generators")
{
    const UnitQuaternion q = UnitQuaternion::from_axis_angle({0, 1, 1, 0}, 0.77);
    const std::vector<UnitQuaternion> gens{q, q};
    const auto rel = find_short_relation(gens, 2, 1e-12);
    REQUIRE(rel.has_value());
    CHECK(rel->size() == 2);
    CHECK(!no_short_relation_check(gens, 2, 1e-12));
    CHECK_THROWS_AS(find_short_relation(gens, 0, 1e-9), ConfigError);
    CHECK_THROWS_AS(find_short_relation(gens, 17, 1e-9), ConfigError);
}

TEST_CASE("property: relation search agrees with brute-force enumeration")
{
    Rng rng(505);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<UnitQuaternion> gens;
        for (int i = 0; i < 3; ++i)
            gens.push_back(random_rotation(rng, 0.2));
        // Plant a commutator relation in half of the trials.
        if (trial % 2 == 0)
            gens[2] = compose(gens[0], compose(gens[1], gens[0].inverse()));
        const std::size_t max_len = 6;
        const double tol = 1e-9;

        // Brute force over every reduced word of length 1..max_len.
        bool found = false;
        std::vector<int> word;
        auto rec = [&](auto&& self, std::size_t depth) -> void {
            if (found)
                return;
            if (depth > 0) {
                const UnitQuaternion value = evaluate_word(BaseWord::from_signed(word), gens);
                if (quaternion_distance(value, UnitQuaternion::identity()) <= tol) {
                    found = true;
                    return;
                }
            }
            if (depth == max_len)
                return;
            for (int l : {1, -1, 2, -2, 3, -3}) {
                if (!word.empty() && word.back() == -l)
                    continue;
                word.push_back(l);
                self(self, depth + 1);
                word.pop_back();
            }
        };
        rec(rec, 0);
        const auto rel = find_short_relation(gens, max_len, tol);
        CHECK(rel.has_value() == found);
        if (rel)
            CHECK(quaternion_distance(evaluate_word(*rel, gens), UnitQuaternion::identity()) <= 2 * tol);
    }
}
