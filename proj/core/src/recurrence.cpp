#include "skewlab/recurrence.hpp"

#include "skewlab/error.hpp"
#include "skewlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace skewlab {
namespace {

constexpr std::uint64_t kCoverStream = 0x636f766572ULL;  // "cover"
constexpr std::uint64_t kTestStream = 0x746573746e6574ULL;  // "testnet"
constexpr std::uint64_t kDriftStream = 0x6472696674ULL;  // "drift"

bool in_annulus(const Vector4& p, const BuilderConfig& c)
{
    const double d = distance(p, c.v0);
    return d >= c.delta / 2.0 && d < c.delta;
}

std::vector<Vector4> halton_annulus_samples(const BuilderConfig& c)
{
    std::vector<Vector4> out;
    out.reserve(c.candidate_samples);
    const UnitQuaternion v0(c.v0);
    // Rotate the Halton points so the sampled region is centred on v0.
    const std::uint64_t max_draws = 4096 * c.candidate_samples + 100000;
    for (std::uint64_t i = 0; out.size() < c.candidate_samples; ++i) {
        if (i > max_draws)
            throw ConstructionError("annulus too thin to sample; increase delta");
        const Vector4 p = act(v0, halton_sphere3(i));
        if (in_annulus(p, c))
            out.push_back(p);
    }
    return out;
}

std::vector<Vector4> test_net(const BuilderConfig& c)
{
    Rng rng = Rng::stream(c.seed, kTestStream);
    std::vector<Vector4> out;
    out.reserve(c.test_net_size);
    const std::uint64_t max_draws = 4096 * c.test_net_size + 100000;
    for (std::uint64_t i = 0; out.size() < c.test_net_size; ++i) {
        if (i > max_draws)
            throw ConstructionError("annulus too thin to sample; increase delta");
        const Vector4 p = rng.unit_vector4();
        if (in_annulus(p, c))
            out.push_back(p);
    }
    return out;
}

// Greedy epsilon-net: every sample lies within epsilon of a net point.
std::vector<Vector4> greedy_net(const std::vector<Vector4>& samples, double epsilon)
{
    std::vector<Vector4> net;
    for (const Vector4& p : samples) {
        const bool near = std::any_of(net.begin(), net.end(),
                                      [&](const Vector4& q) { return distance(p, q) <= epsilon; });
        if (!near)
            net.push_back(p);
    }
    return net;
}

// The element sending q to v0 exactly: v0 q^{-1}.
UnitQuaternion pull_back(const Vector4& q, const Vector4& v0)
{
    return compose(UnitQuaternion(v0), UnitQuaternion(q).inverse());
}

} // namespace

void BuilderConfig::validate() const
{
    if (std::abs(norm(v0) - 1.0) > 1e-12)
        throw ConfigError("v0 must be a unit vector");
    if (!(delta > 0.0 && delta <= 2.0))
        throw ConfigError("delta must lie in (0, 2]");
    if (!(epsilon > 0.0 && epsilon < delta / 4.0))
        throw ConfigError("epsilon must satisfy 0 < epsilon < delta/4");
    const double displacement = 2.0 * std::sin(theta_h / 2.0);
    if (!(theta_h > 0.0 && theta_h < std::numbers::pi && displacement <= delta / 4.0))
        throw ConfigError("theta_h must satisfy 0 < 2 sin(theta_h/2) <= delta/4");
    if (!(eta >= 0.0 && eta <= epsilon / 10.0 * (1.0 + 1e-12)))
        throw ConfigError("eta must satisfy 0 <= eta <= epsilon/10");
    if (!(cover_margin >= 0.0 && cover_margin + eta < delta / 2.0))
        throw ConfigError("cover_margin + eta must stay below delta/2");
    if (candidate_samples == 0 || test_net_size == 0)
        throw ConfigError("sample counts must be positive");
    if (relation_check_length > 16)
        throw ConfigError("relation_check_length must be at most 16");
    if (!(relation_tolerance >= 0.0))
        throw ConfigError("relation_tolerance must be non-negative");
}

Cover build_cover(const BuilderConfig& config, std::uint64_t perturbation_stream)
{
    config.validate();
    Rng rng = Rng::stream(config.seed, kCoverStream + perturbation_stream);
    const double reach = config.delta / 2.0 - config.cover_margin;

    const std::vector<Vector4> net = greedy_net(halton_annulus_samples(config), config.epsilon);
    std::vector<UnitQuaternion> candidates;
    candidates.reserve(net.size());
    for (const Vector4& q : net)
        candidates.push_back(compose(random_small_rotation(rng, config.eta), pull_back(q, config.v0)));

    const std::vector<Vector4> tests = test_net(config);
    Cover cover;
    cover.net_size = net.size();

    std::vector<std::vector<std::size_t>> covered_by;  // candidate -> test points
    auto add_coverage = [&](std::size_t from) {
        for (std::size_t k = from; k < candidates.size(); ++k) {
            std::vector<std::size_t> hits;
            for (std::size_t t = 0; t < tests.size(); ++t)
                if (distance(act(candidates[k], tests[t]), config.v0) <= reach)
                    hits.push_back(t);
            covered_by.push_back(std::move(hits));
        }
    };
    add_coverage(0);

    for (;;) {
        std::vector<bool> reachable(tests.size(), false);
        for (const auto& hits : covered_by)
            for (std::size_t t : hits)
                reachable[t] = true;
        std::vector<std::size_t> orphans;
        for (std::size_t t = 0; t < tests.size(); ++t)
            if (!reachable[t])
                orphans.push_back(t);
        if (orphans.empty())
            break;
        if (cover.enlarge_rounds == config.max_enlarge_rounds)
            throw ConstructionError(std::to_string(orphans.size())
                                    + " annulus test points remain uncovered; epsilon too coarse for eta");
        ++cover.enlarge_rounds;
        const std::size_t before = candidates.size();
        for (std::size_t t : orphans)
            candidates.push_back(
                compose(random_small_rotation(rng, config.eta), pull_back(tests[t], config.v0)));
        add_coverage(before);
    }

    // Greedy set cover over the test net; ties go to the smallest index.
    std::vector<bool> done(tests.size(), false);
    std::size_t remaining = tests.size();
    std::vector<std::size_t> chosen;
    while (remaining > 0) {
        std::size_t best = 0;
        std::size_t best_gain = 0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            std::size_t gain = 0;
            for (std::size_t t : covered_by[k])
                gain += done[t] ? 0 : 1;
            if (gain > best_gain) {
                best_gain = gain;
                best = k;
            }
        }
        chosen.push_back(best);
        for (std::size_t t : covered_by[best]) {
            if (!done[t]) {
                done[t] = true;
                --remaining;
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t k : chosen)
        cover.elements.push_back(candidates[k]);

    for (const Vector4& p : tests) {
        double best = std::numeric_limits<double>::infinity();
        for (const UnitQuaternion& g : cover.elements)
            best = std::min(best, distance(act(g, p), config.v0));
        cover.worst_test_distance = std::max(cover.worst_test_distance, best);
    }
    return cover;
}

std::size_t drift_exit_steps(const UnitQuaternion& h, const BuilderConfig& config)
{
    const std::size_t limit =
        10 * static_cast<std::size_t>(std::ceil(std::numbers::pi / config.theta_h));
    Vector4 p = config.v0;
    for (std::size_t k = 1; k <= limit; ++k) {
        p = act(h, p);
        if (distance(p, config.v0) >= config.delta / 2.0)
            return k;
    }
    throw ConstructionError("orbit of v0 under h stays in B_{delta/2} for " + std::to_string(limit)
                            + " steps");
}

UnitQuaternion build_drift(const BuilderConfig& config, std::uint64_t perturbation_stream)
{
    config.validate();
    Rng rng = Rng::stream(config.seed, kDriftStream + perturbation_stream);
    const UnitQuaternion raw = UnitQuaternion::from_axis_angle(rng.unit_axis(), config.theta_h);
    const UnitQuaternion h = compose(random_small_rotation(rng, config.eta), raw);
    if (quaternion_distance(h, UnitQuaternion::identity()) > config.delta / 4.0)
        throw ConstructionError("perturbed drift element moves points by more than delta/4");
    drift_exit_steps(h, config);
    return h;
}

RecurrentSequence::RecurrentSequence(std::vector<UnitQuaternion> generators, Vector4 v0, double delta)
    : generators_(std::move(generators)), v0_(v0), delta_(delta)
{
    if (generators_.size() < 2)
        throw ConfigError("a recurrent sequence needs at least one cover element and h");
    positions_.push_back(v0_);
    sums_.push_back({});
}

void RecurrentSequence::extend_to(std::size_t target_n)
{
    const std::size_t h = drift_index();
    while (indices_.size() < target_n) {
        const Vector4& p = positions_.back();
        const double d = distance(p, v0_);
        if (d > delta_)
            throw InvariantBreach("position " + std::to_string(indices_.size()) + " left B_delta");
        std::size_t next = h;
        if (d >= delta_ / 2.0) {
            next = generators_.size();
            for (std::size_t k = 0; k < h; ++k) {
                if (distance(act(generators_[k], p), v0_) < delta_ / 2.0) {
                    next = k;
                    break;
                }
            }
            if (next == generators_.size())
                throw InvariantBreach("no cover element pulls position "
                                      + std::to_string(indices_.size()) + " back into B_{delta/2}");
        }
        const Vector4 moved = act(generators_[next], p);
        if (distance(moved, v0_) > delta_)
            throw InvariantBreach("position " + std::to_string(indices_.size() + 1) + " left B_delta");
        sums_.push_back(sums_.back() + p);
        positions_.push_back(moved);
        indices_.push_back(next);
    }
}

BuildResult build_sequence(const BuilderConfig& config)
{
    config.validate();
    for (std::size_t attempt = 0; attempt <= config.max_reseeds; ++attempt) {
        Cover cover = build_cover(config, attempt);
        std::vector<UnitQuaternion> generators = cover.elements;
        generators.push_back(build_drift(config, attempt));
        if (config.relation_check_length > 0
            && !no_short_relation_check(generators, config.relation_check_length,
                                        config.relation_tolerance))
            continue;
        return {RecurrentSequence(std::move(generators), config.v0, config.delta), std::move(cover),
                attempt};
    }
    throw ConstructionError("generator set kept failing the short-relation check after "
                            + std::to_string(config.max_reseeds) + " reseeds");
}

RecurrentSequence extend_sequence(RecurrentSequence seq, std::size_t target_n)
{
    seq.extend_to(target_n);
    return seq;
}

std::shared_ptr<const SkewGroup> make_skew_group(const RecurrentSequence& seq, FlowSystem flows)
{
    return std::make_shared<const SkewGroup>(seq.generators(), std::move(flows));
}

SkewWord emit_skew_word(const RecurrentSequence& seq, std::size_t n,
                        std::shared_ptr<const SkewGroup> group)
{
    if (seq.size() < n)
        throw ConfigError("sequence has " + std::to_string(seq.size()) + " letters, "
                          + std::to_string(n) + " requested");
    std::vector<Letter> letters;
    letters.reserve(n);
    for (std::size_t k = n; k > 0; --k)
        letters.push_back({seq.indices()[k - 1], false});
    return SkewWord(std::move(group), BaseWord(std::move(letters)));
}

} // namespace skewlab
