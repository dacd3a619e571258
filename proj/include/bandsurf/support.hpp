#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bandsurf {

using Freq = std::vector<int>;

struct FreqHash {
    std::size_t operator()(const Freq& k) const noexcept;
};

/// Finite set of integer frequency vectors in Z^n, deduplicated and kept in
/// lexicographic order. The order defines the coefficient layout of every
/// polynomial, feature vector, and serialized model.
class SupportSet {
public:
    /// Sorts and deduplicates. Throws std::invalid_argument on an empty set or
    /// if a vector does not have `dims` entries.
    SupportSet(std::size_t dims, std::vector<Freq> freqs);

    std::size_t dims() const { return dims_; }
    std::size_t size() const { return freqs_.size(); }
    const Freq& operator[](std::size_t i) const { return freqs_[i]; }
    const std::vector<Freq>& freqs() const { return freqs_; }

    auto begin() const { return freqs_.begin(); }
    auto end() const { return freqs_.end(); }

    bool contains(const Freq& k) const { return index_.count(k) != 0; }
    /// Position of k in canonical order, or -1 when absent.
    std::ptrdiff_t index_of(const Freq& k) const;

    /// k in S implies -k in S.
    bool is_symmetric() const;
    /// Largest |k_i| over all frequencies and coordinates.
    int max_abs_freq() const;

    bool operator==(const SupportSet& other) const {
        return dims_ == other.dims_ && freqs_ == other.freqs_;
    }

private:
    std::size_t dims_;
    std::vector<Freq> freqs_;
    std::unordered_map<Freq, std::size_t, FreqHash> index_;
};

/// {k : lo[i] <= k[i] <= hi[i]}.
SupportSet rect_support(std::span<const int> lo, std::span<const int> hi);

/// Centered rectangle with the given side lengths (odd sizes, e.g. 3x3).
SupportSet centered_rect(std::span<const int> sizes);

enum class Norm { L1, L2, Inf };

Norm parse_norm(const std::string& q);
std::string norm_name(Norm q);

/// All k in Z^n with ||k||_q <= d.
SupportSet lq_ball_support(std::size_t n, int d, Norm q);

/// Shifts l such that lambda + l is contained in gamma, i.e.
/// {l in gamma : l - k in gamma for all k in lambda}. Returns an empty
/// vector when no shift fits.
std::vector<Freq> shift_complement(const SupportSet& gamma, const SupportSet& lambda);

/// {k + l : k in a, l in b}.
SupportSet minkowski_sum(const SupportSet& a, const SupportSet& b);

/// {-k : k in s}.
SupportSet negate(const SupportSet& s);

} // namespace bandsurf
