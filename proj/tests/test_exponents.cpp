#include "doctest.h"

#include "skewlab/error.hpp"
#include "skewlab/exponents.hpp"

#include <cmath>
#include <numbers>

using namespace skewlab;

namespace {

const BuildResult& build()
{
    static const BuildResult b = [] {
        BuilderConfig c;
        c.relation_check_length = 4;
        return build_sequence(c);
    }();
    return b;
}

std::shared_ptr<const SkewGroup> group()
{
    static const auto g = make_skew_group(build().sequence, FlowSystem::standard());
    return g;
}

PeriodicOptions small_grid()
{
    PeriodicOptions o;
    o.grid = {6, 6};
    return o;
}

SkewWord word(std::initializer_list<int> letters)
{
    const std::vector<int> v(letters);
    return SkewWord(group(), BaseWord::from_signed(v));
}

} // namespace

TEST_CASE("fitted slope recovers a line")
{
    std::vector<double> y;
    for (int n = 1; n <= 50; ++n)
        y.push_back(0.25 * n - 3.0);
    CHECK(fitted_slope(y, 25, 50) == doctest::Approx(0.25));
    CHECK(fitted_slope(y, 1, 2) == doctest::Approx(0.25));
    CHECK_THROWS_AS(fitted_slope(y, 0, 10), ConfigError);
    CHECK_THROWS_AS(fitted_slope(y, 10, 10), ConfigError);
    CHECK_THROWS_AS(fitted_slope(y, 10, 51), ConfigError);
}

TEST_CASE("single generators are elliptic")
{
    for (int i = 1; i <= 4; ++i) {
        const ExponentReport r = periodic_exponent(word({i}), 2000, small_grid());
        CHECK(r.verdict == Verdict::elliptic);
        CHECK(!r.bound_violated);
        CHECK(std::abs(r.slope) <= 1e-3);
        CHECK(r.log2_values.size() == 2000);
        CHECK(r.bound == doctest::Approx(translation_bound(word({i}))));
        for (std::size_t n = 0; n < 2000; ++n) {
            CHECK(r.translation_norms[n] <= r.bound + 1e-6);
            CHECK(std::abs(r.log2_values[n]) <= r.log2_bound + 1e-6);
        }
    }
}

TEST_CASE("negative powers are elliptic through direct iteration")
{
    const ExponentReport r = periodic_exponent(word({-1}), 400, small_grid());
    CHECK(r.verdict == Verdict::elliptic);
    const ExponentReport mixed = periodic_exponent(word({2, -3, 1}), 400, small_grid());
    CHECK(mixed.verdict == Verdict::elliptic);
    CHECK(!mixed.bound_violated);
}

TEST_CASE("property: cyclic rotations share the periodic rate")
{
    const SkewWord w = word({1, 5, 9, 2});
    const ExponentReport base = periodic_exponent(w, 600, small_grid());
    for (std::size_t k = 1; k < 4; ++k) {
        const ExponentReport rot = periodic_exponent(SkewWord(group(), w.word().rotated(k)), 600, small_grid());
        CHECK(std::abs(rot.rate - base.rate) <= 2e-3);
    }
}

TEST_CASE("property: doubling N barely moves the slope")
{
    for (const SkewWord& w : {word({3}), word({4, 7}), word({1, 1, 2})}) {
        const double a = periodic_exponent(w, 500, small_grid()).slope;
        const double b = periodic_exponent(w, 1000, small_grid()).slope;
        CHECK(std::abs(a - b) <= 5e-4);
    }
}

TEST_CASE("periodic exponent argument checks")
{
    CHECK_THROWS_AS(periodic_exponent(SkewWord(group(), BaseWord()), 10), ConfigError);
    CHECK_THROWS_AS(periodic_exponent(word({1}), 1), ConfigError);
    const UnitQuaternion q = UnitQuaternion::from_axis_angle({0, 0, 1, 0}, std::numbers::pi);
    const auto g = std::make_shared<const SkewGroup>(std::vector<UnitQuaternion>{q}, FlowSystem::standard());
    const int square[] = {1, 1};
    CHECK_THROWS_AS(periodic_exponent(SkewWord(g, BaseWord::from_signed(square)), 10), DegenerateError);
}

TEST_CASE("growth along the recurrent ray")
{
    const ExponentReport r = growth_exponent(build().sequence, 200, FlowSystem::standard());
    REQUIRE(r.log2_values.size() == 200);
    CHECK(r.log2_values[0] == 1.0);
    CHECK(r.log2_values[199] >= 100.0);
    for (std::size_t n = 1; n <= 200; ++n)
        CHECK(r.log2_values[n - 1] - static_cast<double>(n) / 2.0 >= -1e-9);
    CHECK(r.rate >= std::numbers::ln2 / 2.0 - 1e-9);
    CHECK(r.verdict == Verdict::growth_certified);

    const ExponentReport shortr = growth_exponent(build().sequence, 10, FlowSystem::standard());
    CHECK(shortr.rate >= std::numbers::ln2 / 2.0 - 1e-9);
    CHECK_THROWS_AS(growth_exponent(build().sequence, 0, FlowSystem::standard()), ConfigError);
}

TEST_CASE("growth values are the first coordinate of the running sums")
{
    const RecurrentSequence seq = extend_sequence(build().sequence, 60);
    const ExponentReport r = growth_exponent(seq, 60, FlowSystem::standard());
    for (std::size_t n = 1; n <= 60; ++n)
        CHECK(r.log2_values[n - 1] == doctest::Approx(seq.running_sums()[n].w).epsilon(1e-12));
}

TEST_CASE("word sample is seeded and positive")
{
    const auto a = periodic_word_sample(10, 20, 42);
    const auto b = periodic_word_sample(10, 20, 42);
    const auto c = periodic_word_sample(10, 20, 43);
    CHECK(a == b);
    CHECK(a != c);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(a[i].to_signed() == std::vector<int>{static_cast<int>(i) + 1});
    for (const BaseWord& w : a) {
        CHECK(w.is_positive());
        CHECK(w.size() <= 6);
        CHECK(w.alphabet_span() <= 10);
    }
}

TEST_CASE("dichotomy on a reduced sample")
{
    DichotomyOptions o;
    o.n_periodic = 300;
    o.n_growth = 50;
    o.word_sample_size = 3;
    o.periodic = small_grid();
    const DichotomySummary s = dichotomy_report(build(), FlowSystem::standard(), o, 42);
    CHECK(s.words.size() == s.generator_count + 3);
    CHECK(s.periodic.size() == s.words.size());
    CHECK(s.all_elliptic);
    CHECK(s.growth_ok);
    CHECK(s.holds);
    CHECK(!s.periodic_vacuous);
    CHECK(s.required_rate == doctest::Approx(std::numbers::ln2 / 2.0));

    o.word_sample_size = 0;
    const DichotomySummary v = dichotomy_report(build(), FlowSystem::standard(), o, 42);
    CHECK(v.periodic_vacuous);
    CHECK(v.words.empty());
    CHECK(v.holds);
}
