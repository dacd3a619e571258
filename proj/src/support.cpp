#include "bandsurf/support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "bandsurf/errors.hpp"

namespace bandsurf {

std::size_t FreqHash::operator()(const Freq& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int v : k) {
        h ^= static_cast<std::size_t>(static_cast<unsigned>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

SupportSet::SupportSet(std::size_t dims, std::vector<Freq> freqs) : dims_(dims), freqs_(std::move(freqs)) {
    if (dims_ == 0) {
        throw std::invalid_argument("support dimension must be positive");
    }
    if (freqs_.empty()) {
        throw std::invalid_argument("support set must contain at least one frequency");
    }
    for (const auto& k : freqs_) {
        if (k.size() != dims_) {
            throw DimensionMismatch(dims_, k.size());
        }
    }
    std::sort(freqs_.begin(), freqs_.end());
    freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
    index_.reserve(freqs_.size());
    for (std::size_t i = 0; i < freqs_.size(); ++i) {
        index_.emplace(freqs_[i], i);
    }
}

std::ptrdiff_t SupportSet::index_of(const Freq& k) const {
    auto it = index_.find(k);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

bool SupportSet::is_symmetric() const {
    Freq neg(dims_);
    for (const auto& k : freqs_) {
        for (std::size_t i = 0; i < dims_; ++i) neg[i] = -k[i];
        if (!contains(neg)) return false;
    }
    return true;
}

int SupportSet::max_abs_freq() const {
    int m = 0;
    for (const auto& k : freqs_) {
        for (int v : k) m = std::max(m, std::abs(v));
    }
    return m;
}

namespace {

// Odometer-style enumeration of the integer box [lo, hi].
template <class Visit>
void for_each_in_box(const Freq& lo, const Freq& hi, Visit&& visit) {
    Freq k = lo;
    const std::size_t n = lo.size();
    while (true) {
        visit(k);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (k[i] < hi[i]) {
                ++k[i];
                break;
            }
            k[i] = lo[i];
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

} // namespace

SupportSet rect_support(std::span<const int> lo, std::span<const int> hi) {
    if (lo.size() != hi.size()) {
        throw DimensionMismatch(lo.size(), hi.size());
    }
    if (lo.empty()) {
        throw std::invalid_argument("rect_support needs at least one dimension");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) {
            throw std::invalid_argument("rect_support requires lo <= hi in every coordinate");
        }
    }
    std::vector<Freq> freqs;
    for_each_in_box(Freq(lo.begin(), lo.end()), Freq(hi.begin(), hi.end()),
                    [&](const Freq& k) { freqs.push_back(k); });
    return SupportSet(lo.size(), std::move(freqs));
}

SupportSet centered_rect(std::span<const int> sizes) {
    std::vector<int> lo, hi;
    for (int s : sizes) {
        if (s < 1 || s % 2 == 0) {
            throw std::invalid_argument("centered rectangle sides must be positive odd integers");
        }
        lo.push_back(-(s / 2));
        hi.push_back(s / 2);
    }
    return rect_support(lo, hi);
}

Norm parse_norm(const std::string& q) {
    if (q == "1") return Norm::L1;
    if (q == "2") return Norm::L2;
    if (q == "inf" || q == "Inf" || q == "infinity") return Norm::Inf;
    throw std::invalid_argument("unsupported norm q=" + q + " (expected 1, 2 or inf)");
}

std::string norm_name(Norm q) {
    switch (q) {
    case Norm::L1: return "1";
    case Norm::L2: return "2";
    case Norm::Inf: return "inf";
    }
    return "?";
}

SupportSet lq_ball_support(std::size_t n, int d, Norm q) {
    if (d < 0) {
        throw std::invalid_argument("ball radius must be nonnegative");
    }
    if (n == 0) {
        throw std::invalid_argument("ball dimension must be positive");
    }
    std::vector<Freq> freqs;
    const Freq lo(n, -d), hi(n, d);
    const long long d2 = static_cast<long long>(d) * d;
    for_each_in_box(lo, hi, [&](const Freq& k) {
        long long acc = 0;
        for (int v : k) acc += (q == Norm::L1) ? std::abs(v) : static_cast<long long>(v) * v;
        bool inside = q == Norm::Inf || (q == Norm::L1 ? acc <= d : acc <= d2);
        if (inside) freqs.push_back(k);
    });
    return SupportSet(n, std::move(freqs));
}

std::vector<Freq> shift_complement(const SupportSet& gamma, const SupportSet& lambda) {
    if (gamma.dims() != lambda.dims()) {
        throw DimensionMismatch(gamma.dims(), lambda.dims());
    }
    const std::size_t n = gamma.dims();
    // Any valid shift maps lambda[0] onto some element of gamma.
    const Freq& anchor = lambda[0];
    std::vector<Freq> shifts;
    Freq l(n), moved(n);
    for (const auto& g : gamma) {
        for (std::size_t i = 0; i < n; ++i) l[i] = g[i] - anchor[i];
        bool fits = true;
        for (const auto& k : lambda) {
            for (std::size_t i = 0; i < n; ++i) moved[i] = k[i] + l[i];
            if (!gamma.contains(moved)) {
                fits = false;
                break;
            }
        }
        if (fits) shifts.push_back(l);
    }
    std::sort(shifts.begin(), shifts.end());
    return shifts;
}

SupportSet minkowski_sum(const SupportSet& a, const SupportSet& b) {
    if (a.dims() != b.dims()) {
        throw DimensionMismatch(a.dims(), b.dims());
    }
    std::vector<Freq> out;
    out.reserve(a.size() * b.size());
    Freq s(a.dims());
    for (const auto& k : a) {
        for (const auto& l : b) {
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = k[i] + l[i];
            out.push_back(s);
        }
    }
    return SupportSet(a.dims(), std::move(out));
}

SupportSet negate(const SupportSet& s) {
    std::vector<Freq> out;
    out.reserve(s.size());
    for (auto k : s) {
        for (int& v : k) v = -v;
        out.push_back(std::move(k));
    }
    return SupportSet(s.dims(), std::move(out));
}

} // namespace bandsurf
