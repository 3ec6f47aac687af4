#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aben {

// Error hierarchy. Every failure mode named by the public API derives from
// AbenError so callers can catch coarsely or precisely.
struct AbenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedCsv : AbenError { using AbenError::AbenError; };
struct NonPositiveEffort : AbenError { using AbenError::AbenError; };
struct EmptyDataset : AbenError { using AbenError::AbenError; };
struct DatasetTooSmall : AbenError { using AbenError::AbenError; };
struct ParseError : AbenError { using AbenError::AbenError; };
struct DanglingConstraint : AbenError { using AbenError::AbenError; };
struct MultipleParents : AbenError { using AbenError::AbenError; };
struct NoValidConfiguration : AbenError { using AbenError::AbenError; };
struct InvalidSlotIndex : AbenError { using AbenError::AbenError; };
struct LengthMismatch : AbenError { using AbenError::AbenError; };
struct InsufficientRows : AbenError { using AbenError::AbenError; };
struct NonPositiveActual : AbenError { using AbenError::AbenError; };
struct EmptyInput : AbenError { using AbenError::AbenError; };
struct SampleTooSmall : AbenError { using AbenError::AbenError; };
struct IoError : AbenError { using AbenError::AbenError; };

// Deterministic, platform-independent RNG (xoshiro256** seeded via splitmix64).
// std::mt19937 distributions vary across standard libraries; experiment
// reproducibility requires bit-stable streams, so we keep our own.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // Uniform in [0, 1).
    double next_double();
    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_[4];
};

// Derives a child seed from a master seed and a path of labels, so every
// work unit gets an independent stream regardless of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t value);

// Linear-interpolation quantile (the common "type 7" rule). q in [0,1].
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

}  // namespace aben
