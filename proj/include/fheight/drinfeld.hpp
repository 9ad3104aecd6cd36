#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fheight/ext_places.hpp"
#include "fheight/twisted.hpp"

namespace fheight {

/// phi_T = T + a_1 tau + ... + a_r tau^r with a_i in L (usually in K).
class DrinfeldModule {
public:
    /// Coefficients a_1..a_r over K; a_r must be nonzero.
    DrinfeldModule(const GF& f, std::vector<RatFunc> a);
    /// Coefficients in L.
    DrinfeldModule(ExtFieldPtr L, std::vector<ExtElem> a);
    static DrinfeldModule carlitz(const GF& f);

    const GF& field() const { return L_->field(); }
    const ExtField& ext() const { return *L_; }
    ExtFieldPtr ext_ptr() const { return L_; }
    int rank() const noexcept { return static_cast<int>(a_.size()) - 1; }
    /// a(0) = T, a(i) for 1 <= i <= r.
    const ExtElem& a(int i) const { return a_[static_cast<std::size_t>(i)]; }
    /// The same module with coefficients viewed in a larger L (coefficients must lie in K).
    DrinfeldModule over(ExtFieldPtr L) const;

    TwistedPoly<ExtElem> phi_T() const;
    /// phi_g as a twisted polynomial.
    TwistedPoly<ExtElem> phi(const Poly& g) const;
    /// phi_T(x)
    ExtElem apply_T(const ExtElem& x) const;
    /// phi_g(x), by iterating phi_T.
    ExtElem eval(const Poly& g, const ExtElem& x) const;

    std::string to_string() const;

private:
    ExtFieldPtr L_;
    std::vector<ExtElem> a_;
};

struct Thresholds {
    BigRational M;  // min_{i<r, a_i != 0} (v(a_i) - v(a_r)) / (q^r - q^i)
    BigRational D;  // min(M, -v(a_r)/(q^r - 1))
    bool bad = false;
    long v_T = 0;
    std::vector<long> v_a;  // v(a_1..a_r), kInfVal for zero
};

Thresholds thresholds(const DrinfeldModule& phi, const PlaceOfExt& v);

enum class HeightStatus { Exact, CertifiedZero, CapExceeded };
const char* to_string(HeightStatus s);

struct LocalHeight {
    PlaceOfExt place;
    BigRational value;  // exact value, or the upper bound when CapExceeded
    HeightStatus status = HeightStatus::Exact;
    int iterations = 0;
};

struct HeightResult {
    BigRational value;  // sum of the local values (upper bound if CapExceeded)
    BigRational lower;  // sum of the local values that are not capped; a certified lower bound
    HeightStatus status = HeightStatus::Exact;
    std::vector<LocalHeight> per_place;
};

struct HeightOptions {
    int cap = 40;
    bool parallel = false;
};

LocalHeight local_height(const DrinfeldModule& phi, const PlaceOfExt& v, const ExtElem& alpha, int cap = 40);
/// Places of K whose places above can carry a nonzero local height.
std::vector<Place> height_support(const DrinfeldModule& phi, const ExtElem& alpha);
HeightResult global_height(const DrinfeldModule& phi, const ExtElem& alpha, const HeightOptions& opt = {});
/// h(phi_{T^n}(alpha)) / q^{nr} for n = 0..n_max.
std::vector<BigRational> naive_height_estimate(const DrinfeldModule& phi, const ExtElem& alpha, int n_max);

struct TwistData {
    ExtElem xi;
    std::vector<ExtElem> b;  // b_i = a_i xi^(q^i - 1)
};
/// psi = xi^{-1} phi xi.
DrinfeldModule twist(const DrinfeldModule& phi, const ExtElem& xi, TwistData* data = nullptr);

enum class TorsionStatus { Torsion, NonTorsion };
struct TorsionResult {
    TorsionStatus status;
    /// Torsion: phi_{T^n - T^m}(alpha) = 0 (m = -1 means phi_{T^n}(alpha) = 0).
    int n = 0;
    int m = 0;
    /// NonTorsion: the certifying positive height, or a positive lower bound for it.
    BigRational height;
    bool height_is_lower_bound = false;
    std::string certificate() const;
};
/// Throws Inconclusive when neither certificate is found.
TorsionResult is_torsion(const DrinfeldModule& phi, const ExtElem& alpha, int degree_bound, int cap = 40);

/// deg(a) = -d_inf * v_inf(a) on A = F_q[T].
long deg_A(const Poly& a);

struct SweepFamily {
    int max_degree = 2;                      // num/den degree bound for alpha in K
    bool include_constants = true;
    std::vector<KPoly> minpolys;             // generators of K[x]/(f)
};

struct SweepRow {
    std::string alpha;
    std::string minpoly;
    int d = 1;
    std::string torsion;  // true / false / unknown
    BigRational hhat;         // upper bound when status is CapExceeded
    BigRational hhat_lower;   // certified lower bound
    BigRational d_times_hhat;
    bool pole_case = false;
    std::string status;
    std::string violation;  // true / false / unknown
};

std::vector<SweepRow> lehmer_sweep(const DrinfeldModule& phi, const SweepFamily& family, int cap = 40, int torsion_bound = 12);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace fheight
