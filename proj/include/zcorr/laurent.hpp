#pragma once

#include "zcorr/rational.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zcorr {

/// Laurent series in one variable (always called u) with exact rational
/// coefficients and a finite principal part.
///
/// Besides the coefficient window itself, each series tracks how far it is
/// known: first_unknown() is the exclusive upper bound on trustworthy powers.
/// Arithmetic propagates that bound instead of silently extending results,
/// so a truncated product never pretends to know coefficients it cannot.
/// Powers below the valuation are exactly zero by definition.
class RationalLaurentSeries {
public:
    static constexpr int kExact = INT_MAX;

    RationalLaurentSeries() : valuation_(0), first_unknown_(kExact) {}

    /// Series with given valuation and consecutive coefficients; exact unless
    /// a knowledge bound is supplied.
    RationalLaurentSeries(int valuation, std::vector<Rational> coeffs,
                          int first_unknown = kExact)
        : valuation_(valuation), first_unknown_(first_unknown),
          coeffs_(std::move(coeffs)) {
        normalize();
    }

    static RationalLaurentSeries zero() { return RationalLaurentSeries(); }

    static RationalLaurentSeries monomial(int power, Rational c = Rational(1)) {
        return RationalLaurentSeries(power, {std::move(c)});
    }

    static RationalLaurentSeries constant(Rational c) {
        return monomial(0, std::move(c));
    }

    /// exp(-c u) truncated after u^order.
    static RationalLaurentSeries exp_neg(const Rational& c, int order) {
        std::vector<Rational> v;
        Rational term = 1;
        for (int j = 0; j <= order; ++j) {
            v.push_back(term);
            term *= -c;
            term /= (j + 1);
        }
        return RationalLaurentSeries(0, std::move(v), order + 1);
    }

    bool is_zero() const { return coeffs_.empty(); }
    int valuation() const {
        if (is_zero()) throw std::domain_error("valuation of zero series");
        return valuation_;
    }
    int first_unknown() const { return first_unknown_; }
    int known_through() const {
        if (first_unknown_ == kExact) return kExact;
        return first_unknown_ - 1;
    }

    /// Coefficient of u^power; throws if the power lies past the knowledge
    /// bound rather than fabricating a zero.
    const Rational& coeff(int power) const {
        static const Rational zero_coeff(0);
        if (first_unknown_ != kExact && power >= first_unknown_)
            throw std::out_of_range("coefficient beyond truncation order");
        if (power < valuation_ ||
            power >= valuation_ + static_cast<int>(coeffs_.size()))
            return zero_coeff;
        return coeffs_[static_cast<size_t>(power - valuation_)];
    }

    RationalLaurentSeries truncated(int order) const {
        RationalLaurentSeries r = *this;
        if (r.first_unknown_ == kExact || r.first_unknown_ > order + 1)
            r.first_unknown_ = order + 1;
        int keep = order + 1 - r.valuation_;
        if (keep < 0) keep = 0;
        if (static_cast<int>(r.coeffs_.size()) > keep) r.coeffs_.resize(keep);
        r.normalize();
        return r;
    }

    friend RationalLaurentSeries operator-(const RationalLaurentSeries& a) {
        RationalLaurentSeries r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend RationalLaurentSeries operator+(const RationalLaurentSeries& a,
                                           const RationalLaurentSeries& b) {
        if (a.is_zero()) return bounded_copy(b, std::min(a.first_unknown_, b.first_unknown_));
        if (b.is_zero()) return bounded_copy(a, std::min(a.first_unknown_, b.first_unknown_));
        int fu = std::min(a.first_unknown_, b.first_unknown_);
        int lo = std::min(a.valuation_, b.valuation_);
        int hi = std::max(a.valuation_ + static_cast<int>(a.coeffs_.size()),
                          b.valuation_ + static_cast<int>(b.coeffs_.size()));
        if (fu != kExact) hi = std::min(hi, fu);
        std::vector<Rational> v(static_cast<size_t>(std::max(hi - lo, 0)), Rational(0));
        accumulate(v, lo, a, hi);
        accumulate(v, lo, b, hi);
        return RationalLaurentSeries(lo, std::move(v), fu);
    }

    friend RationalLaurentSeries operator-(const RationalLaurentSeries& a,
                                           const RationalLaurentSeries& b) {
        return a + (-b);
    }

    friend RationalLaurentSeries operator*(const RationalLaurentSeries& a,
                                           const RationalLaurentSeries& b) {
        int fu = product_bound(a, b);
        if (a.is_zero() || b.is_zero())
            return zero_with_bound(fu);
        int lo = a.valuation_ + b.valuation_;
        int hi = lo + static_cast<int>(a.coeffs_.size() + b.coeffs_.size()) - 1;
        if (fu != kExact) hi = std::min(hi, fu);
        if (hi <= lo) return zero_with_bound(fu);
        std::vector<Rational> v(static_cast<size_t>(hi - lo), Rational(0));
        for (size_t i = 0; i < a.coeffs_.size() && i < static_cast<size_t>(hi - lo); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            size_t jmax = std::min(b.coeffs_.size(), static_cast<size_t>(hi - lo) - i);
            for (size_t j = 0; j < jmax; ++j)
                v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return RationalLaurentSeries(lo, std::move(v), fu);
    }

    friend RationalLaurentSeries operator*(const Rational& c,
                                           const RationalLaurentSeries& a) {
        RationalLaurentSeries r = a;
        for (auto& x : r.coeffs_) x *= c;
        r.normalize();
        return r;
    }

    friend RationalLaurentSeries operator/(const RationalLaurentSeries& a,
                                           const Rational& c) {
        if (c.is_zero()) throw std::domain_error("division by zero scalar");
        return Rational(1) / c * a;
    }

    friend RationalLaurentSeries operator/(const RationalLaurentSeries& a,
                                           const RationalLaurentSeries& b) {
        if (b.is_zero()) throw std::domain_error("division by zero series");
        // Peel the unit part of b: b = u^vb * b0 * (1 + x).
        int len_b = b.unit_known_length();
        int len_a = (a.first_unknown_ == kExact || a.is_zero())
                        ? kExact
                        : a.first_unknown_ - a.valuation_;
        int len = std::min(len_a, len_b);
        if (len == kExact) len = kDefaultExactLength;
        std::vector<Rational> inv(static_cast<size_t>(len), Rational(0));
        const Rational& b0 = b.coeffs_[0];
        inv[0] = Rational(1) / b0;
        for (int n = 1; n < len; ++n) {
            Rational s = 0;
            int jmax = std::min(n, static_cast<int>(b.coeffs_.size()) - 1);
            for (int j = 1; j <= jmax; ++j)
                s += b.coeffs_[static_cast<size_t>(j)] * inv[static_cast<size_t>(n - j)];
            inv[static_cast<size_t>(n)] = -s / b0;
        }
        RationalLaurentSeries binv(-b.valuation_, std::move(inv),
                                   -b.valuation_ + len);
        return a * binv;
    }

    RationalLaurentSeries pow(int n) const {
        if (n < 0) return RationalLaurentSeries::monomial(0) / this->pow(-n);
        RationalLaurentSeries r = monomial(0);
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Substitute u -> c*u (c != 0): coefficient of u^p picks up c^p.
    RationalLaurentSeries compose_scale(const Rational& c) const {
        if (c.is_zero()) throw std::domain_error("compose_scale with zero factor");
        RationalLaurentSeries r = *this;
        Rational f = rational_pow(c, r.valuation_);
        for (auto& x : r.coeffs_) {
            x *= f;
            f *= c;
        }
        return r;
    }

    double evaluate(double u) const {
        double s = 0;
        for (size_t i = coeffs_.size(); i-- > 0;)
            s = s * u + rational_to_double(coeffs_[i]);
        return s * std::pow(u, valuation_);
    }

    friend bool operator==(const RationalLaurentSeries& a,
                           const RationalLaurentSeries& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        return a.valuation_ == b.valuation_ && a.coeffs_ == b.coeffs_;
    }

    /// {"var":"u","valuation":v,"coeffs":["1/2","-1/36",...]}
    std::string json_string() const {
        std::string s = "{\"var\":\"u\",\"valuation\":";
        s += std::to_string(is_zero() ? 0 : valuation_);
        s += ",\"coeffs\":[";
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s += ",";
            s += "\"" + rational_to_string(coeffs_[i]) + "\"";
        }
        s += "]}";
        return s;
    }

private:
    // Drawing an exact series through division still needs a finite window;
    // callers wanting more precision truncate their inputs explicitly first.
    static constexpr int kDefaultExactLength = 48;

    static Rational rational_pow(const Rational& c, int p) {
        Rational r = 1;
        Rational base = p >= 0 ? c : Rational(1) / c;
        for (int i = std::abs(p); i > 0; --i) r *= base;
        return r;
    }

    static RationalLaurentSeries zero_with_bound(int fu) {
        RationalLaurentSeries r;
        r.first_unknown_ = fu;
        return r;
    }

    static RationalLaurentSeries bounded_copy(const RationalLaurentSeries& a, int fu) {
        RationalLaurentSeries r = a;
        r.first_unknown_ = fu;
        r.normalize();
        return r;
    }

    static void accumulate(std::vector<Rational>& v, int lo,
                           const RationalLaurentSeries& s, int hi) {
        for (size_t i = 0; i < s.coeffs_.size(); ++i) {
            int p = s.valuation_ + static_cast<int>(i);
            if (p >= hi) break;
            v[static_cast<size_t>(p - lo)] += s.coeffs_[i];
        }
    }

    /// Knowledge bound of a*b given how far each factor is known.
    static int product_bound(const RationalLaurentSeries& a,
                             const RationalLaurentSeries& b) {
        if (a.first_unknown_ == kExact && b.first_unknown_ == kExact) return kExact;
        int fu = kExact;
        if (a.first_unknown_ != kExact && !b.is_zero())
            fu = std::min(fu, a.first_unknown_ + b.valuation_);
        if (b.first_unknown_ != kExact && !a.is_zero())
            fu = std::min(fu, b.first_unknown_ + a.valuation_);
        if (fu == kExact && (a.first_unknown_ != kExact || b.first_unknown_ != kExact))
            fu = std::min(a.first_unknown_, b.first_unknown_); // zero operand
        return fu;
    }

    /// Known length of the unit-part coefficient window of a nonzero series.
    int unit_known_length() const {
        if (first_unknown_ == kExact) return kExact;
        return first_unknown_ - valuation_;
    }

    void normalize() {
        size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
        if (lead == coeffs_.size()) {
            coeffs_.clear();
            valuation_ = 0;
            return;
        }
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            valuation_ += static_cast<int>(lead);
        }
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    int valuation_;
    int first_unknown_;
    std::vector<Rational> coeffs_;
};

/// Ring customization points used by the polynomial templates shared with
/// the numeric evaluators.
inline RationalLaurentSeries ring_one(const RationalLaurentSeries&) {
    return RationalLaurentSeries::monomial(0);
}
inline RationalLaurentSeries int_scale(long long c, const RationalLaurentSeries& x) {
    return Rational(c) * x;
}

} // namespace zcorr
