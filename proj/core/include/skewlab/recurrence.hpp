#pragma once

// Construction of a generator set S = S' u {h} of SU(2) and an infinite
// letter sequence i_1, i_2, ... whose prefix products w_n = a_{i_n} w_{n-1}
// keep the base point v0 within delta: h pushes the point outward while it
// sits in the inner ball B_{delta/2}, and an element of the cover S' pulls it
// back once it reaches the annulus B_delta - B_{delta/2}.

#include "skewlab/rotor.hpp"
#include "skewlab/skew.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace skewlab {

struct BuilderConfig {
    Vector4 v0{1.0, 0.0, 0.0, 0.0};
    double delta = 0.5;
    /// Resolution of the annulus net the cover candidates are built from.
    double epsilon = 0.1;
    /// Eigen angle of the drift element h.
    double theta_h = 0.1;
    /// Largest rotation angle of the genericity perturbations.
    double eta = 0.01;
    std::uint64_t seed = 42;

    std::size_t candidate_samples = 20000;
    std::size_t test_net_size = 10000;
    /// Cover elements must send every test point to within
    /// delta/2 - cover_margin of v0.
    double cover_margin = 0.04;
    std::size_t max_enlarge_rounds = 4;

    std::size_t relation_check_length = 8;
    double relation_tolerance = 1e-6;
    std::size_t max_reseeds = 8;

    /// Throws ConfigError unless |v0| = 1, 0 < epsilon < delta/4,
    /// 0 < 2 sin(theta_h/2) <= delta/4 and 0 <= eta <= epsilon/10.
    void validate() const;
};

/// The cover S' of the annulus, with diagnostics.
struct Cover {
    std::vector<UnitQuaternion> elements;
    std::size_t net_size = 0;        ///< size of the epsilon-net of candidates
    std::size_t enlarge_rounds = 0;
    double worst_test_distance = 0.0;  ///< max over test points of min_g |g p - v0|
};

/// Builds S'. Throws ConstructionError if the test net cannot be covered.
Cover build_cover(const BuilderConfig& config, std::uint64_t perturbation_stream = 0);

/// Builds the drift element h. Throws ConstructionError if the perturbed h
/// moves points by more than delta/4 or its orbit of v0 fails to leave
/// B_{delta/2} within 10 * ceil(pi / theta_h) steps.
UnitQuaternion build_drift(const BuilderConfig& config, std::uint64_t perturbation_stream = 0);

/// Number of h-steps the orbit of v0 takes to leave B_{delta/2}.
std::size_t drift_exit_steps(const UnitQuaternion& h, const BuilderConfig& config);

class RecurrentSequence {
public:
    /// Generators ordered as S' followed by h.
    RecurrentSequence(std::vector<UnitQuaternion> generators, Vector4 v0, double delta);

    const std::vector<UnitQuaternion>& generators() const noexcept { return generators_; }
    std::size_t drift_index() const noexcept { return generators_.size() - 1; }
    const Vector4& v0() const noexcept { return v0_; }
    double delta() const noexcept { return delta_; }

    /// 0-based letters i_1, i_2, ... in application order.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    /// w_n(v0) for n = 0..size(); w_0 is the identity.
    const std::vector<Vector4>& positions() const noexcept { return positions_; }
    /// v_{w_n} = sum_{k<n} w_k(v0) for n = 0..size().
    const std::vector<Vector4>& running_sums() const noexcept { return sums_; }

    /// Greedy extension to at least target_n letters. Throws InvariantBreach
    /// if a position leaves B_delta or no cover element pulls it back.
    void extend_to(std::size_t target_n);

private:
    std::vector<UnitQuaternion> generators_;
    Vector4 v0_;
    double delta_;
    std::vector<std::size_t> indices_;
    std::vector<Vector4> positions_;
    std::vector<Vector4> sums_;
};

/// Full construction: cover, drift, genericity check with bounded reseeding.
struct BuildResult {
    RecurrentSequence sequence;
    Cover cover;
    std::size_t reseeds = 0;
};
BuildResult build_sequence(const BuilderConfig& config);

RecurrentSequence extend_sequence(RecurrentSequence seq, std::size_t target_n);

/// SkewGroup over the sequence's generators.
std::shared_ptr<const SkewGroup> make_skew_group(const RecurrentSequence& seq, FlowSystem flows);

/// W_n = A_{i_n} ... A_{i_1}. Throws ConfigError if seq is shorter than n.
SkewWord emit_skew_word(const RecurrentSequence& seq, std::size_t n,
                        std::shared_ptr<const SkewGroup> group);

} // namespace skewlab
