#include "fheight/gf.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "fheight/error.hpp"

namespace fheight {

namespace {

constexpr std::uint64_t kMaxFieldSize = 1ull << 22;

using Digits = std::vector<std::uint32_t>;

// Dense polynomials over F_p used only while bootstrapping a field.
Digits trim(Digits a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Digits mulmod(const Digits& a, const Digits& b, const Digits& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    std::size_t n = m.size() - 1;
    for (std::size_t k = prod.size(); k-- > n;) {
        std::uint64_t c = prod[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - c) * m[i]) % p;
    }
    Digits r(std::min(prod.size(), n));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return trim(r);
}

Digits powmod(Digits base, std::uint64_t e, const Digits& m, std::uint32_t p) {
    Digits r{1};
    while (e) {
        if (e & 1) r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Digits polymod(Digits a, const Digits& m, std::uint32_t p) {
    a = trim(a);
    std::size_t n = m.size() - 1;
    while (a.size() > n) {
        std::uint32_t c = a.back();
        std::size_t shift = a.size() - 1 - n;
        for (std::size_t i = 0; i <= n; ++i) a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + std::uint64_t(p - c) * m[i]) % p);
        a = trim(a);
    }
    return a;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

Digits polygcd(Digits a, Digits b, std::uint32_t p) {
    a = trim(a);
    b = trim(b);
    while (!b.empty()) {
        // make b monic, reduce a mod b
        std::uint32_t li = inv_mod(b.back(), p);
        for (auto& c : b) c = static_cast<std::uint32_t>(std::uint64_t(c) * li % p);
        a = polymod(a, b, p);
        std::swap(a, b);
    }
    return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> f;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            f.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

// Rabin's test over F_p.
bool irreducible_fp(const Digits& m, std::uint32_t p) {
    std::size_t n = m.size() - 1;
    if (n == 1) return true;
    Digits x{0, 1};
    auto xpow = [&](std::size_t k) {
        Digits r = x;
        for (std::size_t i = 0; i < k; ++i) r = powmod(r, p, m, p);
        return r;
    };
    Digits full = xpow(n);
    if (trim(full) != polymod(x, m, p)) return false;
    for (auto r : prime_factors(n)) {
        Digits h = xpow(n / r);
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = (h[1] + p - 1) % p;
        Digits g = polygcd(m, h, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

const GF& GF::make(std::uint32_t p, std::uint32_t degree) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<GF>> cache;
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (degree < 1) throw Error(ErrorKind::InvalidArgument, "field degree must be >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, degree);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto f = std::unique_ptr<GF>(new GF(p, degree));
    const GF& ref = *f;
    cache.emplace(key, std::move(f));
    return ref;
}

GF::GF(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
    long double approx = 1;
    for (std::uint32_t i = 0; i < n; ++i) approx *= p;
    if (approx > static_cast<long double>(kMaxFieldSize))
        throw Error(ErrorKind::FieldTooLarge, "F_" + std::to_string(p) + "^" + std::to_string(n) + " exceeds table limit");
    q_ = 1;
    ppow_.resize(n + 1);
    for (std::uint32_t i = 0; i <= n; ++i) {
        ppow_[i] = q_;
        if (i < n) q_ *= p;
    }

    // Lexicographically least monic irreducible: compare (c_{n-1}, ..., c_0) ascending.
    if (n == 1) {
        modulus_ = {0, 1};
    } else {
        for (std::uint64_t idx = 0; idx < q_; ++idx) {
            // idx is (c_{n-1},...,c_0) read as a base-p number, c_{n-1} most significant
            Digits mm(n + 1, 0);
            mm[n] = 1;
            std::uint64_t s = idx;
            for (std::uint32_t i = 0; i < n; ++i) {
                mm[i] = static_cast<std::uint32_t>(s % p);
                s /= p;
            }
            if (mm[0] == 0) continue;
            if (irreducible_fp(mm, p)) {
                modulus_ = mm;
                break;
            }
        }
    }

    auto to_digits = [&](std::uint64_t a) {
        Digits d(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            d[i] = static_cast<std::uint32_t>(a % p);
            a /= p;
        }
        return trim(d);
    };
    auto from = [&](const Digits& d) {
        std::uint64_t a = 0;
        for (std::size_t i = 0; i < d.size(); ++i) a += d[i] * ppow_[i];
        return static_cast<Elt>(a);
    };

    neg_.resize(q_);
    for (std::uint64_t a = 0; a < q_; ++a) {
        Digits d = to_digits(a);
        for (auto& c : d) c = (p - c) % p;
        neg_[a] = from(d);
    }

    log_.assign(q_, 0);
    exp_.assign(q_ > 1 ? q_ - 1 : 1, 1);
    if (q_ == 2) {
        exp_[0] = 1;
        return;
    }
    std::uint64_t order = q_ - 1;
    auto factors = prime_factors(order);
    Digits mod = n == 1 ? Digits{0, 1} : modulus_;
    Elt g = 0;
    for (std::uint64_t cand = 2; cand < q_; ++cand) {
        Digits c = to_digits(cand);
        if (n == 1) {
            bool ok = true;
            for (auto r : factors) {
                std::uint64_t acc = 1, b = cand, e = order / r;
                while (e) {
                    if (e & 1) acc = acc * b % p;
                    b = b * b % p;
                    e >>= 1;
                }
                if (acc == 1) { ok = false; break; }
            }
            if (ok) { g = static_cast<Elt>(cand); break; }
            continue;
        }
        bool ok = true;
        for (auto r : factors) {
            if (powmod(c, order / r, mod, p) == Digits{1}) { ok = false; break; }
        }
        if (ok) { g = static_cast<Elt>(cand); break; }
    }
    if (n == 1) {
        std::uint64_t cur = 1;
        for (std::uint64_t k = 0; k < order; ++k) {
            exp_[k] = static_cast<Elt>(cur);
            log_[cur] = static_cast<std::uint32_t>(k);
            cur = cur * g % p;
        }
    } else {
        Digits gd = to_digits(g);
        Digits cur{1};
        for (std::uint64_t k = 0; k < order; ++k) {
            Elt e = from(cur);
            exp_[k] = e;
            log_[e] = static_cast<std::uint32_t>(k);
            cur = mulmod(cur, gd, mod, p);
        }
    }
    if (n > 1 && p != 2 && q_ <= 1024) {
        add_table_.resize(q_ * q_);
        for (std::uint64_t a = 0; a < q_; ++a)
            for (std::uint64_t b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_digits(static_cast<Elt>(a), static_cast<Elt>(b));
    }
}

Elt GF::add_digits(Elt a, Elt b) const noexcept {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        std::uint32_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * ppow_[i];
        a /= p_;
        b /= p_;
    }
    return static_cast<Elt>(r);
}

Elt GF::from_int(long long k) const noexcept {
    long long r = k % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elt>(r);
}

Elt GF::inv(Elt a) const {
    if (a == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_" + std::to_string(q_));
    std::uint64_t l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1 - l)];
}

Elt GF::pow(Elt a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    unsigned __int128 l = static_cast<unsigned __int128>(log_[a]) * e;
    return exp_[static_cast<std::uint64_t>(l % (q_ - 1))];
}

Elt GF::pow(Elt a, const BigInt& e) const {
    if (e == 0) return 1;
    if (a == 0) {
        if (e < 0) throw Error(ErrorKind::DivisionByZero, "negative power of zero");
        return 0;
    }
    BigInt r = e % BigInt(static_cast<unsigned long>(q_ - 1));
    if (r < 0) r += static_cast<unsigned long>(q_ - 1);
    return pow(a, static_cast<std::uint64_t>(r.get_ui()));
}

Elt GF::frobenius(Elt a, unsigned k) const {
    k %= n_;
    if (k == 0 || a == 0) return a;
    return pow(a, ppow_[k]);
}

Elt GF::frobenius_inverse(Elt a, unsigned k) const {
    k %= n_;
    return frobenius(a, (n_ - k) % n_);
}

bool GF::is_square(Elt a) const noexcept {
    if (a == 0 || p_ == 2) return true;
    return log_[a] % 2 == 0;
}

bool GF::sqrt(Elt a, Elt& root) const {
    if (a == 0) { root = 0; return true; }
    if (p_ == 2) { root = pow(a, q_ / 2); return true; }
    if (log_[a] % 2) return false;
    Elt r = exp_[log_[a] / 2];
    Elt s = neg(r);
    root = std::min(r, s);
    return true;
}

std::vector<std::uint32_t> GF::digits(Elt a) const {
    std::vector<std::uint32_t> d(n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

Elt GF::from_digits(const std::vector<std::uint32_t>& d) const {
    std::uint64_t a = 0;
    for (std::size_t i = 0; i < d.size() && i < n_; ++i) a += (d[i] % p_) * ppow_[i];
    return static_cast<Elt>(a);
}

std::string GF::to_string(Elt a, const std::string& var) const {
    if (n_ == 1 || a < p_) return std::to_string(a);
    auto d = digits(a);
    std::string out;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "+";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (i == 0) out += std::to_string(d[i]);
        else if (d[i] == 1) out += mono;
        else out += std::to_string(d[i]) + "*" + mono;
    }
    return out;
}

FieldEmbedding::FieldEmbedding(const GF* src, const GF* dst, Elt generator_image) : src_(src), dst_(dst) {
    powers_.resize(src->degree());
    Elt cur = dst->one();
    for (std::uint32_t i = 0; i < src->degree(); ++i) {
        powers_[i] = cur;
        cur = dst->mul(cur, generator_image);
    }
}

FieldEmbedding FieldEmbedding::identity(const GF* f) {
    FieldEmbedding e;
    e.src_ = f;
    e.dst_ = f;
    e.identity_ = true;
    return e;
}

FieldEmbedding FieldEmbedding::find(const GF* src, const GF* dst) {
    if (src == dst) return identity(src);
    if (src->characteristic() != dst->characteristic() || dst->degree() % src->degree() != 0)
        throw Error(ErrorKind::InvalidArgument, "no embedding F_" + std::to_string(src->size()) + " -> F_" + std::to_string(dst->size()));
    if (src->degree() == 1) return FieldEmbedding(src, dst, 0);
    const auto& m = src->modulus();
    auto eval = [&](Elt r) {
        Elt acc = 0;
        for (std::size_t i = m.size(); i-- > 0;) acc = dst->add(dst->mul(acc, r), dst->from_int(m[i]));
        return acc;
    };
    // Roots lie in the subfield of order |src|: powers of g^((Q-1)/(q-1)).
    std::uint64_t step = (dst->size() - 1) / (src->size() - 1);
    Elt best = 0;
    bool found = false;
    for (std::uint64_t k = 0; k < src->size() - 1; ++k) {
        Elt r = dst->exp(k * step);
        if (eval(r) == 0 && (!found || r < best)) {
            best = r;
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::InvalidArgument, "embedding search failed");
    return FieldEmbedding(src, dst, best);
}

Elt FieldEmbedding::operator()(Elt a) const {
    if (identity_) return a;
    if (a < src_->characteristic()) return dst_->from_int(a);
    std::uint32_t p = src_->characteristic();
    Elt acc = 0;
    for (std::size_t i = 0; i < powers_.size() && a; ++i) {
        std::uint32_t c = a % p;
        a /= p;
        if (c) acc = dst_->add(acc, dst_->mul(dst_->from_int(c), powers_[i]));
    }
    return acc;
}

FieldEmbedding FieldEmbedding::then(const FieldEmbedding& next) const {
    if (identity_) return next;
    if (next.identity_) return *this;
    Elt gen_img = next(powers_.size() > 1 ? powers_[1] : (*this)(src_->generator()));
    return FieldEmbedding(src_, next.dst_, gen_img);
}

}  // namespace fheight
