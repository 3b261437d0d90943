#include "skewlab/exponents.hpp"

#include "skewlab/error.hpp"
#include "skewlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skewlab {
namespace {

constexpr std::uint64_t kWordStream = 0x776f726473ULL;  // "words"
constexpr double kBoundSlack = 1e-6;

} // namespace

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::elliptic:
        return "elliptic";
    case Verdict::not_elliptic:
        return "not_elliptic";
    case Verdict::growth_certified:
        return "growth_certified";
    }
    return "unknown";
}

double fitted_slope(const std::vector<double>& values, std::size_t first, std::size_t last)
{
    if (first < 1 || last > values.size() || first >= last)
        throw ConfigError("slope fit needs 1 <= first < last <= N");
    const double count = static_cast<double>(last - first + 1);
    double mean_n = 0.0;
    double mean_y = 0.0;
    for (std::size_t n = first; n <= last; ++n) {
        mean_n += static_cast<double>(n);
        mean_y += values[n - 1];
    }
    mean_n /= count;
    mean_y /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t n = first; n <= last; ++n) {
        const double dn = static_cast<double>(n) - mean_n;
        sxy += dn * (values[n - 1] - mean_y);
        sxx += dn * dn;
    }
    return sxy / sxx;
}

ExponentReport periodic_exponent(const SkewWord& word, std::size_t n_max, const PeriodicOptions& options)
{
    if (word.length() == 0)
        throw ConfigError("periodic exponent needs a nonempty word");
    if (n_max < 2)
        throw ConfigError("periodic exponent needs N >= 2");

    ExponentReport report;
    report.label = word.word().to_string();
    report.word_length = word.length();
    report.bound = translation_bound(word, options.identity_tolerance);
    report.log2_bound = fiber_log_derivative_bound(word, options.identity_tolerance);
    report.log2_values.assign(n_max, -std::numeric_limits<double>::infinity());
    report.translation_norms.assign(n_max, 0.0);

    const auto bases = grid_base_points(options.grid);
    const auto fibers = grid_fiber_points(options.grid);
    const FlowSystem& flows = word.group().flows();

    auto record = [&](std::size_t n, const Vector4& translation, double log2_value) {
        report.translation_norms[n - 1] = std::max(report.translation_norms[n - 1], norm(translation));
        report.log2_values[n - 1] = std::max(report.log2_values[n - 1], log2_value);
    };

    if (word.word().is_positive()) {
        const TranslationOperator prefixes(word);
        for (const Vector4& v : bases) {
            for (std::size_t n = 1; n <= n_max; ++n) {
                const Vector4 t = prefixes(partial_sum(word.base(), v, n));
                for (const CirclePoint& s : fibers)
                    record(n, t, flows.log2_derivative(t, s));
            }
        }
    } else {
        for (const Vector4& v : bases) {
            for (const CirclePoint& s : fibers) {
                DirectOrbit orbit{{v, s}, 0.0, {}};
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const DirectOrbit next = iterate_direct(word, orbit.point, 1);
                    orbit.point = next.point;
                    orbit.log2_derivative += next.log2_derivative;
                    orbit.translation += next.translation;
                    record(n, orbit.translation, orbit.log2_derivative);
                }
            }
        }
    }

    for (std::size_t n = 1; n <= n_max; ++n) {
        if (report.translation_norms[n - 1] > report.bound + kBoundSlack
            || std::abs(report.log2_values[n - 1]) > report.log2_bound + kBoundSlack)
            report.bound_violated = true;
    }
    report.slope = fitted_slope(report.log2_values, (n_max + 1) / 2, n_max);
    report.rate = report.slope * std::numbers::ln2 / static_cast<double>(word.length());
    report.verdict = (!report.bound_violated && std::abs(report.slope) <= options.slope_tolerance)
        ? Verdict::elliptic
        : Verdict::not_elliptic;
    return report;
}

ExponentReport growth_exponent(const RecurrentSequence& seq_in, std::size_t n_max, const FlowSystem& flows)
{
    if (n_max == 0)
        throw ConfigError("growth exponent needs N >= 1");
    const RecurrentSequence seq = extend_sequence(seq_in, n_max);
    const auto group = make_skew_group(seq, flows);
    const ProductPoint start{seq.v0(), CirclePoint(flows.spec(1).fixed_point)};
    const double per_letter = seq.v0().w - seq.delta();

    ExponentReport report;
    report.label = "ray";
    report.word_length = n_max;
    report.bound = per_letter;
    report.rate = std::numeric_limits<double>::infinity();

    for (std::size_t n = 1; n <= n_max; ++n) {
        const SkewWord w_n = emit_skew_word(seq, n, group);
        const double value = fiber_log_derivative(w_n, start, 1);
        const Vector4& running = seq.running_sums()[n];
        if (std::abs(value - running.w) > 1e-9 * std::max(1.0, std::abs(running.w)))
            throw InvariantBreach("log2 fiber derivative of W_" + std::to_string(n)
                                  + " disagrees with the running sum v_{w_n}");
        if (value < static_cast<double>(n) * per_letter - 1e-9)
            throw InvariantBreach("log2 fiber derivative of W_" + std::to_string(n) + " is below n(v0_1 - delta)");
        report.log2_values.push_back(value);
        report.translation_norms.push_back(norm(running));
        report.rate = std::min(report.rate, std::numbers::ln2 * value / static_cast<double>(n));
    }
    report.slope = n_max >= 2 ? fitted_slope(report.log2_values, (n_max + 1) / 2, n_max) : report.log2_values[0];
    report.verdict = Verdict::growth_certified;
    return report;
}

std::vector<BaseWord> periodic_word_sample(std::size_t generator_count, std::size_t sample_size,
                                           std::uint64_t seed)
{
    std::vector<BaseWord> words;
    for (std::size_t i = 0; i < generator_count; ++i)
        words.emplace_back(std::vector<Letter>{{i, false}});
    Rng rng = Rng::stream(seed, kWordStream);
    for (std::size_t k = 0; k < sample_size; ++k) {
        const std::size_t length = 2 + rng.below(5);
        std::vector<Letter> letters;
        for (std::size_t j = 0; j < length; ++j)
            letters.push_back({rng.below(generator_count), false});
        words.emplace_back(std::move(letters));
    }
    return words;
}

DichotomySummary dichotomy_report(const BuildResult& build, const FlowSystem& flows,
                                  const DichotomyOptions& options, std::uint64_t seed)
{
    const RecurrentSequence& seq = build.sequence;
    const auto group = make_skew_group(seq, flows);

    DichotomySummary summary;
    summary.generator_count = seq.generators().size();
    summary.reseeds = build.reseeds;
    summary.words = periodic_word_sample(options.word_sample_size == 0 ? 0 : summary.generator_count,
                                         options.word_sample_size, seed);
    summary.periodic_vacuous = summary.words.empty();
    summary.all_elliptic = true;
    for (const BaseWord& w : summary.words) {
        summary.periodic.push_back(periodic_exponent(SkewWord(group, w), options.n_periodic, options.periodic));
        summary.all_elliptic = summary.all_elliptic && summary.periodic.back().verdict == Verdict::elliptic;
    }

    summary.growth = growth_exponent(seq, options.n_growth, flows);
    summary.required_rate = std::numbers::ln2 * (seq.v0().w - seq.delta());
    summary.growth_ok = summary.growth.rate >= summary.required_rate - 1e-9;
    summary.holds = summary.all_elliptic && summary.growth_ok;
    return summary;
}

} // namespace skewlab
