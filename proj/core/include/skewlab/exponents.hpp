#pragma once

// Growth-rate diagnostics for fiber derivatives: bounded along the powers of
// any single element, exponential along the recurrent ray W_n.

#include "skewlab/recurrence.hpp"
#include "skewlab/skew.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace skewlab {

enum class Verdict {
    elliptic,        ///< bounded derivatives along the powers of W
    not_elliptic,
    growth_certified,  ///< every n met the linear lower bound
};

const char* to_string(Verdict v) noexcept;

struct ExponentReport {
    std::string label;
    std::size_t word_length = 0;
    /// Entry n-1 holds the value at n (log2 units).
    std::vector<double> log2_values;
    /// Entry n-1 holds the translation norm at n (max over base samples for
    /// periodic orbits, |v_{w_n}| for the ray).
    std::vector<double> translation_norms;
    /// Periodic: analytic bound 2l/|w - 1| on the translation norm.
    /// Ray: the per-letter log2 lower bound (v0_1 - delta).
    double bound = 0.0;
    /// Periodic: bound on |log2 derivative|. Ray: unused (0).
    double log2_bound = 0.0;
    /// Least-squares slope of log2_values over n in [ceil(N/2), N].
    double slope = 0.0;
    /// Natural-log rate per letter: slope * ln2 / l for periodic orbits, the
    /// certified min_n ln2 * value / n for the ray.
    double rate = 0.0;
    bool bound_violated = false;
    Verdict verdict = Verdict::not_elliptic;
};

struct PeriodicOptions {
    SampleGrid grid{};
    double slope_tolerance = 1e-3;
    double identity_tolerance = 1e-9;
};

/// Max over the grid of the log2 fiber derivative of W^n for n = 1..N.
/// Positive words use the closed-form translation sum; other words iterate
/// directly. Throws DegenerateError when w is (numerically) the identity.
ExponentReport periodic_exponent(const SkewWord& word, std::size_t n_max,
                                 const PeriodicOptions& options = {});

/// log2 fiber derivative of W_n at (v0, p_1), n = 1..N. Throws
/// InvariantBreach if any value falls below n * (v0_1 - delta) - 1e-9 or
/// disagrees with the first coordinate of v_{w_n}.
ExponentReport growth_exponent(const RecurrentSequence& seq, std::size_t n_max,
                               const FlowSystem& flows);

/// Least-squares slope of values[n-1] against n over n in [first, last].
double fitted_slope(const std::vector<double>& values, std::size_t first, std::size_t last);

struct DichotomyOptions {
    std::size_t n_periodic = 2000;
    std::size_t n_growth = 200;
    /// Random positive words of length 2..6 added to the single generators.
    std::size_t word_sample_size = 20;
    PeriodicOptions periodic{};
};

struct DichotomySummary {
    std::vector<BaseWord> words;
    std::vector<ExponentReport> periodic;
    ExponentReport growth;
    std::size_t generator_count = 0;
    std::size_t reseeds = 0;
    bool periodic_vacuous = false;
    bool all_elliptic = false;
    double required_rate = 0.0;
    bool growth_ok = false;
    bool holds = false;
};

/// The sampled positive words for the periodic half: each single generator,
/// then `sample_size` seeded random words of length 2..6.
std::vector<BaseWord> periodic_word_sample(std::size_t generator_count, std::size_t sample_size,
                                           std::uint64_t seed);

DichotomySummary dichotomy_report(const BuildResult& build, const FlowSystem& flows,
                                  const DichotomyOptions& options, std::uint64_t seed);

} // namespace skewlab
