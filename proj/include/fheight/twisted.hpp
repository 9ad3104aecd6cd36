#pragma once

#include <string>
#include <vector>

namespace fheight {

/// Element of the twisted ring V{tau}: sum c_i tau^i with tau * c = c^q * tau.
/// V needs +, *, is_zero() and frobenius_q(k) (the q^k-power map).
template <class V>
class TwistedPoly {
public:
    TwistedPoly() = default;
    explicit TwistedPoly(std::vector<V> coeffs) : c_(std::move(coeffs)) { trim(); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<V>& coeffs() const noexcept { return c_; }
    const V& operator[](std::size_t i) const { return c_[i]; }

    friend TwistedPoly operator+(const TwistedPoly& a, const TwistedPoly& b) {
        if (a.c_.size() < b.c_.size()) return b + a;
        TwistedPoly r = a;
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
        r.trim();
        return r;
    }
    friend TwistedPoly operator-(const TwistedPoly& a, const TwistedPoly& b) { return a + (-b); }
    TwistedPoly operator-() const {
        TwistedPoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    /// (f tau^i)(g tau^j) = f g^(q^i) tau^(i+j)
    friend TwistedPoly operator*(const TwistedPoly& a, const TwistedPoly& b) {
        if (a.is_zero() || b.is_zero()) return TwistedPoly();
        std::vector<V> out;
        out.reserve(a.c_.size() + b.c_.size() - 1);
        std::vector<bool> set(a.c_.size() + b.c_.size() - 1, false);
        out.resize(set.size(), a.c_[0]);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j].is_zero()) continue;
                V term = a.c_[i] * b.c_[j].frobenius_q(static_cast<unsigned>(i));
                out[i + j] = set[i + j] ? out[i + j] + term : term;
                set[i + j] = true;
            }
        }
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!set[k]) out[k] = a.c_[0] - a.c_[0];
        return TwistedPoly(std::move(out));
    }
    friend bool operator==(const TwistedPoly& a, const TwistedPoly& b) { return a.c_ == b.c_; }

    /// sum c_i x^(q^i)
    V operator()(const V& x) const {
        V acc = x - x;
        V xp = x;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) xp = xp.frobenius_q(1);
            if (!c_[i].is_zero()) acc = acc + c_[i] * xp;
        }
        return acc;
    }

    template <class Fmt>
    std::string to_string(Fmt&& fmt) const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            std::string cs = fmt(c_[i]);
            out += i == 0 ? cs : "(" + cs + ")" + (i == 1 ? "tau" : "tau^" + std::to_string(i));
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<V> c_;
};

}  // namespace fheight
