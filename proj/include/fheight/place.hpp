#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fheight/laurent.hpp"
#include "fheight/rational.hpp"
#include "fheight/ratfunc.hpp"

namespace fheight {

constexpr long kInfVal = LONG_MAX;

/// Place of K = F_q(T): the infinite place (uniformizer 1/T) or a monic irreducible pi.
class Place {
public:
    static Place infinite(const GF& f);
    /// pi must be monic irreducible; checked.
    static Place finite(const Poly& pi);

    bool is_infinite() const noexcept { return inf_; }
    const Poly& pi() const noexcept { return pi_; }
    const GF& field() const { return *f_; }
    int degree() const noexcept { return inf_ ? 1 : pi_.degree(); }
    std::string to_string() const { return inf_ ? "inf" : pi_.to_string(); }

    friend bool operator==(const Place& a, const Place& b) { return a.inf_ == b.inf_ && (a.inf_ || a.pi_ == b.pi_); }
    friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
    /// Infinite first, then (degree, lexicographic pi).
    friend bool operator<(const Place& a, const Place& b);

private:
    const GF* f_ = nullptr;
    bool inf_ = true;
    Poly pi_;
};

/// Normalized valuation; kInfVal for zero.
long valuation(const Place& w, const Poly& a);
long valuation(const Place& w, const RatFunc& a);

/// Weil height in degree units: max(deg num, deg den).
BigRational height_K(const RatFunc& a);
/// Same value computed as the pole sum sum_w d_w max(0, -w(a)).
BigRational height_K_by_places(const RatFunc& a);

/// Sorted distinct places where a has a zero or pole (infinite place always included).
std::vector<Place> support(const RatFunc& a);
/// Sorted places where a has a pole.
std::vector<Place> poles(const RatFunc& a);
/// Finite places dividing a nonzero polynomial.
std::vector<Place> prime_divisors(const Poly& a);
/// Sorted union.
std::vector<Place> merge_places(const std::vector<Place>& a, const std::vector<Place>& b);

/// Lower convex hull of (i, value) points.
struct NewtonSegment {
    BigRational slope;  // (value change) / (index change)
    long length;
    long start;  // index where the segment begins
    long start_value;
};

struct NewtonPolygon {
    std::vector<NewtonSegment> segments;
};

/// Points with value kInfVal are ignored. Throws DegeneratePolygon if fewer than two remain.
NewtonPolygon newton_polygon(const std::vector<std::pair<long, long>>& points);

/// Completion K_w = k_w((w)) with k_w = F_{q^{d_w}}; T is sent to a root theta of pi plus higher terms.
class CompletionK {
public:
    explicit CompletionK(const Place& w);

    const Place& place() const noexcept { return w_; }
    const GF& residue_field() const { return *k_; }
    const FieldEmbedding& iota() const noexcept { return iota_; }
    Elt theta() const noexcept { return theta_; }

    /// Image of T, accurate to absolute precision >= rel (exact when possible).
    Laurent T_series(long rel) const;
    Laurent series(const Poly& g, long rel) const;
    Laurent series(const RatFunc& a, long rel) const;

private:
    Laurent unit_series(const Poly& g, long rel) const;

    Place w_;
    const GF* k_ = nullptr;
    FieldEmbedding iota_;
    Elt theta_ = 0;
    mutable std::mutex mu_;
    mutable std::map<long, Laurent> t_cache_;
};

/// Interned completion per place.
const CompletionK& completion(const Place& w);

}  // namespace fheight
