#pragma once

#include <string>
#include <vector>

#include "fheight/extfield.hpp"

namespace fheight {

/// One place of L above w, in the completion model
///   w-uniformizer = C * W^E   with   W the uniformizer of L_v,
/// residue field k, and the generator of L as a series in W.
struct ExtBranch {
    const GF* k = nullptr;
    FieldEmbedding iota;  // k_w -> k
    Elt C = 1;
    long E = 1;
    long f_res = 1;
    Laurent x;
};

struct PlaceOfExt {
    const ExtField* L = nullptr;
    Place below;
    long e = 1;
    long f_res = 1;
    long d_v = 1;
    int branch = 0;

    std::string to_string() const;
};

/// Complete list of places above w, in branch order.
std::vector<PlaceOfExt> places_above(const ExtField& L, const Place& w);

/// Working precision used for the first attempt, and the multiplier for the hard cap.
constexpr long kInitialPrecision = 16;
constexpr long kPrecisionCapFactor = 64;

/// Normalized valuation of beta at v; kInfVal for zero. Raises precision on demand.
long valuation_ext(const PlaceOfExt& v, const ExtElem& beta);
/// Valuation of an element of K at v (= e * w(a)).
long valuation_ext(const PlaceOfExt& v, const RatFunc& a);

/// Image of an element of L in the completion at working precision N.
/// May throw PrecisionNeeded.
Laurent ext_series(const PlaceOfExt& v, const ExtElem& beta, long N);
Laurent base_series(const PlaceOfExt& v, const RatFunc& a, long N);
const ExtBranch& branch_data(const PlaceOfExt& v, long N);

/// Places of K where L has data worth looking at: infinity and poles of minpoly coefficients.
std::vector<Place> minpoly_support(const ExtField& L);
/// Places of L above the given places of K (sorted input order, branch order within).
std::vector<PlaceOfExt> places_above_all(const ExtField& L, const std::vector<Place>& ws);

/// (1/d) sum_v d_v max(0, -v(beta)).
BigRational height_L(const ExtElem& beta);

/// Runs f(N) for N = initial, 2*initial, ... until it stops throwing PrecisionNeeded.
template <class Fn>
auto with_precision(Fn&& fn, long initial = kInitialPrecision) -> decltype(fn(initial));

}  // namespace fheight

#include "fheight/error.hpp"

namespace fheight {

template <class Fn>
auto with_precision(Fn&& fn, long initial) -> decltype(fn(initial)) {
    long cap = initial * kPrecisionCapFactor;
    for (long N = initial;; N *= 2) {
        try {
            return fn(N);
        } catch (const PrecisionNeeded&) {
            if (N >= cap) throw Error(ErrorKind::PrecisionExhausted, "precision cap " + std::to_string(cap) + " reached");
        }
    }
}

}  // namespace fheight
