#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fheight/place.hpp"
#include "fheight/ratfunc.hpp"

namespace fheight {

enum class Reduction { Good, Multiplicative, Additive };
enum class Kodaira { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs };

const char* to_string(Reduction r);
std::string kodaira_symbol(Kodaira k, long n);

/// Reduction data at one place, relative to the working model.
/// The w-minimal model is x_W = u^2 x_min with w(u) = k.
struct LocalData {
    Place place;
    long k = 0;
    long v_delta = 0;  // w(Delta_min)
    long v_B = 0;      // w(B_min)
    long v_C = 0;
    Reduction type = Reduction::Good;
    Kodaira kodaira = Kodaira::I0;
    long n = 0;  // index of I_n / I_n*
    /// Largest possible lambda_w - (1/2)max(0,-w(x_min)) - w(Delta_min)/12 deficit over points of E(K_w).
    BigRational cmax;
    /// Range of the doubling defect 4 min(w a, w b) - min(w F, w G) in the working model.
    long t_lo = 0;
    long t_hi = 0;
};

struct ECPoint {
    bool inf = true;
    RatFunc x, y;

    static ECPoint identity() { return {}; }
    static ECPoint affine(RatFunc x, RatFunc y) { return {false, std::move(x), std::move(y)}; }
    friend bool operator==(const ECPoint& a, const ECPoint& b) {
        return a.inf == b.inf && (a.inf || (a.x == b.x && a.y == b.y));
    }
    friend bool operator!=(const ECPoint& a, const ECPoint& b) { return !(a == b); }
    std::string to_string() const;
};

/// y^2 = x^3 + Bx + C over F_q(t), p > 3.
/// Alongside the given model keeps a working model y^2 = x^3 + B_W x + C_W with B_W, C_W in F_q[t]
/// minimal at every finite place; x = u^2 x_W, y = u^3 y_W.
class ECurve {
public:
    /// Throws UnsupportedCharacteristic for p in {2,3}, InvalidArgument for a singular curve.
    ECurve(const RatFunc& B, const RatFunc& C);

    const GF& field() const { return B_.field(); }
    const RatFunc& B() const noexcept { return B_; }
    const RatFunc& C() const noexcept { return C_; }
    RatFunc discriminant() const;
    RatFunc j() const;
    bool isotrivial() const { return j().is_constant(); }

    const RatFunc& u() const noexcept { return u_; }
    const Poly& BW() const noexcept { return BW_; }
    const Poly& CW() const noexcept { return CW_; }
    Poly discriminant_W() const;

    /// Infinity first, then the finite places dividing Delta_W.
    const std::vector<LocalData>& local_data() const noexcept { return local_; }
    bool semistable() const;

    bool contains(const ECPoint& P) const;
    ECPoint to_working(const ECPoint& P) const;
    ECPoint from_working(const ECPoint& P) const;

    std::string to_string() const;

private:
    RatFunc B_, C_, u_;
    Poly BW_, CW_;
    std::vector<LocalData> local_;
};

ECPoint ec_neg(const ECPoint& P);
ECPoint ec_add(const ECurve& E, const ECPoint& P, const ECPoint& Q);
ECPoint ec_double(const ECurve& E, const ECPoint& P);
ECPoint ec_mul(const ECurve& E, const ECPoint& P, long n);

struct CurveProfile {
    long d_EK = 0;
    long f_EK = 0;
    long deg_j = 0;
    long deg_s = 0;
    long p_e = 1;
    int genus = 0;
    bool semistable = false;
};

/// Throws IsotrivialCurve when j is constant.
CurveProfile curve_profile(const ECurve& E);

/// h(x_W(P)) in degree units; 0 at O.
BigRational naive_height_x(const ECurve& E, const ECPoint& P);

/// Sums of t_lo / t_hi weighted by degree: L <= h(x(2P)) - 4h(x(P)) <= U in the working model.
struct DoublingBounds {
    BigRational L, U;
    BigRational C_E() const {
        BigRational m = -L;
        return m > U ? m : U;
    }
};
DoublingBounds doubling_bounds(const ECurve& E);

struct HeightInterval {
    BigRational lo, hi;
    int iterations = 0;
    long torsion_order = 0;  // > 0 when P was shown to be torsion
    BigRational width() const { return hi - lo; }
};

/// Certified enclosure of the canonical height, normalized as (1/2) lim h(x(2^n P))/4^n.
/// Throws WidthNotReached after `cap` doublings.
HeightInterval canonical_height(const ECurve& E, const ECPoint& P, const BigRational& width, int cap = 60);

/// Order of P when torsion, 0 when certified non-torsion.
long torsion_order(const ECurve& E, const ECPoint& P);

/// Local Neron function at w in degree units (multiply by deg w for the global sum).
/// With semistable_only, additive places throw NonSemistablePlace.
BigRational neron_local(const ECurve& E, const Place& w, const ECPoint& P, bool semistable_only = true);
/// Sum over places of deg(w) * lambda_w(P).
BigRational exact_height(const ECurve& E, const ECPoint& P, bool semistable_only = true);

/// Largest h(x_W) a point with canonical height <= bound can have.
long search_radius(const ECurve& E, const BigRational& bound);

/// Points with h(x_W) <= bound, deterministic order, both signs of y.
std::vector<ECPoint> point_search(const ECurve& E, long x_degree_bound, bool parallel = false);

struct TorsionPoint {
    ECPoint P;
    long order = 1;
};
std::vector<TorsionPoint> torsion_group(const ECurve& E);

enum class Verdict { Pass, Fail, Inconclusive, NotApplicable };
const char* to_string(Verdict v);

struct CensusEntry {
    ECPoint P;
    HeightInterval h;
};

struct Census {
    BigRational threshold;
    long radius = 0;
    long count = 0;  // certified below threshold, O included
    std::vector<CensusEntry> below;
    std::vector<CensusEntry> borderline;
    long searched = 0;
    bool within_24() const { return count <= 24; }
};

/// Points of E(K) with canonical height below d_EK/96 (semistable mode) or deg(j)/96.
Census small_height_census(const ECurve& E, bool semistable_mode, const BigRational& width = make_rational(1, 10000));

struct LangRow {
    ECPoint P;
    HeightInterval h;
    BigRational bound;
    Verdict verdict = Verdict::Inconclusive;
};

/// Lower-bound check hhat(P) >= c/60000 for non-torsion points; torsion points are dropped.
std::vector<LangRow> lehmer_lang_check(const ECurve& E, const std::vector<ECPoint>& points, int cap = 60);

struct SMinimal {
    ECurve E;
    RatFunc u;  // x_original = u^2 x_S
    std::vector<long> k;  // w(u) for each examined place, aligned with places
    std::vector<Place> places;
};

/// Exhaustive search over the substitution lattice spanned by the places of S and the bad places.
SMinimal s_minimal_model(const ECurve& E, const std::vector<Place>& S);

/// True when a lies in R_S (no poles outside S).
bool in_R_S(const RatFunc& a, const std::vector<Place>& S);

struct RankInfo {
    long rank = 0;
    bool lower_bound = true;  // false when supplied by the user as the exact rank
};

/// Rank of the exact height pairing Gram matrix of the given points.
long gram_rank(const ECurve& E, const std::vector<ECPoint>& points);

struct IntegralReport {
    SMinimal model;
    std::vector<ECPoint> points;  // in S-minimal coordinates
    bool complete = false;
    long radius_needed = 0;
    long radius_searched = 0;
    CurveProfile profile;
    BigRational delta;     // smallest found non-torsion height, 0 if none
    BigRational epsilon_observed;
    BigRational epsilon_bound;
    Verdict epsilon_verdict = Verdict::Inconclusive;
    std::optional<RankInfo> rank;
    std::string bound_semistable;  // decimal rendering of the bound value
    Verdict verdict_semistable = Verdict::NotApplicable;
    std::string bound_general;
    Verdict verdict_general = Verdict::NotApplicable;
};

IntegralReport integral_points_census(const ECurve& E, const std::vector<Place>& S, std::optional<RankInfo> rank_info,
                                      long radius_cap = 4);

struct SzpiroRow {
    long lhs = 0;
    long rhs = 0;
    Verdict szpiro = Verdict::Fail;
    Verdict semistable_identity = Verdict::NotApplicable;
    Verdict conductor_bound = Verdict::Fail;  // f < 2 deg_s(j)
};
SzpiroRow szpiro_check(const ECurve& E);

/// Curve generator for test corpora. Every curve carries a known point (x0, y0).
struct GeneratedCurve {
    ECurve E;
    ECPoint P;
};
GeneratedCurve generate_curve(const GF& F, Rng& rng, bool semistable);

}  // namespace fheight
