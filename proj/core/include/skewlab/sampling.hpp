#pragma once

// Portable seeded randomness and low-discrepancy point sets.
//
// Every random draw in the library goes through Rng so that a run is fully
// determined by its seed: the engine is std::mt19937_64 (bit-exact across
// standard libraries), uniforms are the top 53 bits scaled by 2^-53, and
// normals use the Box-Muller transform. Independent streams are derived with
// splitmix64(seed ^ stream_tag).

#include "skewlab/rotor.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace skewlab {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// A generator for an independent stream identified by `tag`.
    static Rng stream(std::uint64_t seed, std::uint64_t tag) { return Rng(splitmix64(seed ^ tag)); }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, n), as floor(n * uniform()).
    std::size_t below(std::size_t n);
    double normal();
    /// Uniform on S^3.
    Vector4 unit_vector4();
    /// Uniform pure-imaginary unit quaternion (a rotation axis).
    Vector4 unit_axis();

private:
    std::mt19937_64 engine_;
};

/// Radical inverse of `index` in the given prime base.
double radical_inverse(std::uint64_t index, std::uint32_t base) noexcept;

/// Uniform map of the unit cube [0,1)^3 onto S^3 (Shoemake's construction).
Vector4 cube_to_sphere3(double u1, double u2, double u3) noexcept;

/// The index-th point of the Halton sequence on S^3 (bases 2, 3, 5), skipping
/// the first `offset` points.
Vector4 halton_sphere3(std::uint64_t index, std::uint64_t offset = 0) noexcept;

/// The index-th point of the van der Corput sequence in base 7, in [0, 1).
double halton_circle(std::uint64_t index, std::uint64_t offset = 0) noexcept;

/// A rotation whose displacement |r - 1| is at most `max_angle`, with a
/// uniform random axis and an angle uniform in [0, max_angle].
UnitQuaternion random_small_rotation(Rng& rng, double max_angle);

} // namespace skewlab
