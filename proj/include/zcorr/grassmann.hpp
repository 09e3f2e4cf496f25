#pragma once

#include "zcorr/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace zcorr {

/// Generators come in conjugate pairs (eta_i, etabar_i), i = 0..pairs-1,
/// stored as bits (2i, 2i+1) of a mask.  A blade is a product of distinct
/// generators written in increasing bit order.
using BladeMask = std::uint32_t;

/// Hard cap on fermion pairs: 16 pairs = 32 generators fills the mask type.
inline constexpr int kMaxPairs = 16;

struct GrassmannBasisBlade {
    BladeMask mask = 0;

    int degree() const { return std::popcount(mask); }

    /// Parity of the permutation that interleaves two disjoint sorted blades
    /// into one sorted blade.  Counts generator inversions: pairs (i in a,
    /// j in b) with i > j.  The xor-scan folds all shifted copies of a so a
    /// single popcount reads off the inversion parity.
    static bool reorder_is_odd(BladeMask a, BladeMask b) {
        BladeMask x = a;
        x ^= x >> 1;
        x ^= x >> 2;
        x ^= x >> 4;
        x ^= x >> 8;
        x ^= x >> 16;
        return std::popcount((x ^ a) & b) & 1;
    }
};

template <class C>
bool is_zero_coeff(const C& c) {
    if constexpr (requires { c.is_zero(); })
        return c.is_zero();
    else
        return c == C(0);
}

template <class C>
double pivot_weight(const C& c) {
    if constexpr (requires { std::abs(c); })
        return static_cast<double>(std::abs(c));
    else if constexpr (requires { c < C(0); -c; })
        return static_cast<double>(c < C(0) ? -c : c);
    else
        return is_zero_coeff(c) ? 0.0 : 1.0;
}

/// Element of the even subalgebra of a Grassmann algebra on `pairs`
/// conjugate generator pairs, stored as a sparse sum of blades.
///
/// Representation invariants: terms are sorted by mask, masks have even
/// degree, and zero coefficients are pruned after every operation, so equal
/// elements have identical term vectors.  Even elements commute, which is
/// what makes determinant elimination over this ring legitimate.
template <class Coeff = std::complex<double>>
class GrassmannEven {
public:
    using Term = std::pair<BladeMask, Coeff>;

    explicit GrassmannEven(int pairs) : pairs_(check_pairs(pairs)) {}

    static GrassmannEven zero(int pairs) { return GrassmannEven(pairs); }

    static GrassmannEven scalar(int pairs, Coeff c) {
        GrassmannEven e(pairs);
        if (!is_zero_coeff(c)) e.terms_.push_back({0, std::move(c)});
        return e;
    }

    static GrassmannEven one(int pairs) { return scalar(pairs, Coeff(1)); }

    /// Single blade given by a caller-canonical mask (even degree required).
    static GrassmannEven blade(int pairs, BladeMask mask, Coeff c) {
        GrassmannEven e(pairs);
        if (std::uint64_t(mask) >> (2 * e.pairs_))
            throw std::invalid_argument("blade mask outside generator range");
        if (std::popcount(mask) & 1)
            throw std::invalid_argument("odd blade in even subalgebra");
        if (!is_zero_coeff(c)) e.terms_.push_back({mask, std::move(c)});
        return e;
    }

    /// c * eta_i etabar_j, reordered into canonical form.
    static GrassmannEven eta_etabar(int pairs, int i, int j, Coeff c = Coeff(1)) {
        GrassmannEven e(pairs);
        if (i < 0 || j < 0 || i >= e.pairs_ || j >= e.pairs_)
            throw std::invalid_argument("generator pair index out of range");
        BladeMask eta = BladeMask(1) << (2 * i);
        BladeMask etabar = BladeMask(1) << (2 * j + 1);
        if (2 * i > 2 * j + 1) c = -c; // etabar_j precedes eta_i canonically
        if (!is_zero_coeff(c)) e.terms_.push_back({eta | etabar, std::move(c)});
        return e;
    }

    int pairs() const { return pairs_; }
    int generators() const { return 2 * pairs_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    Coeff coeff(BladeMask mask) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                                   [](const Term& t, BladeMask m) { return t.first < m; });
        if (it != terms_.end() && it->first == mask) return it->second;
        return Coeff(0);
    }

    Coeff scalar_part() const { return coeff(0); }

    /// Strictly positive-degree part (the nilpotent remainder).
    GrassmannEven nilpotent_part() const {
        GrassmannEven e(pairs_);
        for (const auto& t : terms_)
            if (t.first != 0) e.terms_.push_back(t);
        return e;
    }

    friend bool operator==(const GrassmannEven& a, const GrassmannEven& b) {
        return a.pairs_ == b.pairs_ && a.terms_ == b.terms_;
    }

    friend GrassmannEven operator-(const GrassmannEven& a) {
        GrassmannEven r = a;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend GrassmannEven operator+(const GrassmannEven& a, const GrassmannEven& b) {
        check_same(a, b);
        GrassmannEven r(a.pairs_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
                r.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->first < ia->first) {
                r.terms_.push_back(*ib++);
            } else {
                Coeff c = ia->second + ib->second;
                if (!is_zero_coeff(c)) r.terms_.push_back({ia->first, std::move(c)});
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    friend GrassmannEven operator-(const GrassmannEven& a, const GrassmannEven& b) {
        return a + (-b);
    }

    GrassmannEven& operator+=(const GrassmannEven& b) { return *this = *this + b; }
    GrassmannEven& operator-=(const GrassmannEven& b) { return *this = *this - b; }

    friend GrassmannEven operator*(const Coeff& c, const GrassmannEven& a) {
        GrassmannEven r(a.pairs_);
        if (is_zero_coeff(c)) return r;
        r.terms_ = a.terms_;
        for (auto& t : r.terms_) t.second = c * t.second;
        r.prune();
        return r;
    }

    friend GrassmannEven operator/(const GrassmannEven& a, const Coeff& c) {
        if (is_zero_coeff(c)) throw NotInvertibleError("division by zero coefficient");
        GrassmannEven r = a;
        for (auto& t : r.terms_) t.second = t.second / c;
        r.prune();
        return r;
    }

    friend GrassmannEven operator*(const GrassmannEven& a, const GrassmannEven& b) {
        check_same(a, b);
        const size_t work = a.terms_.size() * b.terms_.size();
        GrassmannEven r(a.pairs_);
        if (work == 0) return r;
        if constexpr (kDenseCapable) {
            const int bits = 2 * a.pairs_;
            if (bits <= kDenseMaxBits && work >= (size_t(1) << bits) / 4) {
                r.multiply_dense(a, b);
                return r;
            }
        }
        if (work <= 4096)
            r.multiply_merge(a, b);
        else
            r.multiply_hash(a, b);
        return r;
    }

    GrassmannEven& operator*=(const GrassmannEven& b) { return *this = *this * b; }

private:
    static constexpr bool kDenseCapable =
        std::is_floating_point_v<Coeff> ||
#if defined(__GNUC__) && defined(__SIZEOF_FLOAT128__)
        std::is_same_v<Coeff, __float128> ||
#endif
        std::is_same_v<Coeff, std::complex<float>> ||
        std::is_same_v<Coeff, std::complex<double>> ||
        std::is_same_v<Coeff, std::complex<long double>>;
    static constexpr int kDenseMaxBits = 20;

    static int check_pairs(int pairs) {
        if (pairs < 0) throw std::invalid_argument("negative generator pair count");
        if (pairs > kMaxPairs)
            throw CapacityError("generator pair count exceeds capacity of " +
                                std::to_string(kMaxPairs));
        return pairs;
    }

    static void check_same(const GrassmannEven& a, const GrassmannEven& b) {
        if (a.pairs_ != b.pairs_)
            throw std::invalid_argument("operands live on different generator sets");
    }

    static void accumulate_term(Coeff& slot, BladeMask ma, BladeMask mb,
                                const Coeff& ca, const Coeff& cb) {
        if (GrassmannBasisBlade::reorder_is_odd(ma, mb))
            slot -= ca * cb;
        else
            slot += ca * cb;
    }

    void multiply_merge(const GrassmannEven& a, const GrassmannEven& b) {
        std::vector<Term> prod;
        prod.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue;
                Coeff c = ca * cb;
                if (GrassmannBasisBlade::reorder_is_odd(ma, mb)) c = -c;
                prod.push_back({ma | mb, std::move(c)});
            }
        std::sort(prod.begin(), prod.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        for (auto& t : prod) {
            if (!terms_.empty() && terms_.back().first == t.first)
                terms_.back().second += t.second;
            else
                terms_.push_back(std::move(t));
        }
        prune();
    }

    void multiply_hash(const GrassmannEven& a, const GrassmannEven& b) {
        std::unordered_map<BladeMask, Coeff> acc;
        acc.reserve(a.terms_.size() + b.terms_.size());
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue;
                auto it = acc.try_emplace(ma | mb, Coeff(0)).first;
                accumulate_term(it->second, ma, mb, ca, cb);
            }
        terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!is_zero_coeff(c)) terms_.push_back({m, std::move(c)});
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
    }

    void multiply_dense(const GrassmannEven& a, const GrassmannEven& b) {
        std::vector<Coeff> acc(size_t(1) << (2 * pairs_), Coeff(0));
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue;
                accumulate_term(acc[ma | mb], ma, mb, ca, cb);
            }
        for (size_t m = 0; m < acc.size(); ++m)
            if (!is_zero_coeff(acc[m]))
                terms_.push_back({static_cast<BladeMask>(m), std::move(acc[m])});
    }

    void prune() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [](const Term& t) { return is_zero_coeff(t.second); }),
                     terms_.end());
    }

    int pairs_;
    std::vector<Term> terms_;
};

/// Inverse of an even element with invertible scalar part a0.  The rest is
/// nilpotent, so the Neumann series for (1 + N/a0)^{-1} terminates: N has
/// degree >= 2 and degrees above 2*pairs vanish.  Evaluated Horner style.
template <class Coeff>
GrassmannEven<Coeff> g_inv(const GrassmannEven<Coeff>& a) {
    Coeff a0 = a.scalar_part();
    if (is_zero_coeff(a0))
        throw NotInvertibleError("even element has vanishing scalar part");
    GrassmannEven<Coeff> x = a.nilpotent_part() / a0;
    GrassmannEven<Coeff> acc = GrassmannEven<Coeff>::one(a.pairs());
    if (!x.is_zero()) {
        for (int t = 0; t < a.pairs(); ++t) {
            GrassmannEven<Coeff> xa = x * acc;
            if (xa.is_zero()) break;
            acc = GrassmannEven<Coeff>::one(a.pairs()) - xa;
        }
    }
    return acc / a0;
}

/// Berezin integral against d(etabar) d(eta) per pair: the coefficient of
/// the top blade in the orientation where the measure-ordered monomial
/// prod_i (etabar_i eta_i) integrates to exactly 1.  In the sorted-blade
/// storage order eta_1 etabar_1 ... eta_l etabar_l that orientation carries
/// the factor (-1)^pairs.
template <class Coeff>
Coeff berezin(const GrassmannEven<Coeff>& a) {
    const int g = a.generators();
    BladeMask top = (g == 32) ? ~BladeMask(0) : ((BladeMask(1) << g) - 1);
    Coeff c = a.coeff(top);
    return (a.pairs() & 1) ? -c : c;
}

/// Square matrix over the even subalgebra.  Entries commute, so a
/// determinant by elimination is well defined.
template <class Coeff = std::complex<double>>
class GrassmannMatrix {
public:
    GrassmannMatrix(int dim, int pairs)
        : dim_(dim), pairs_(pairs),
          e_(static_cast<size_t>(dim) * dim, GrassmannEven<Coeff>::zero(pairs)) {
        if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
    }

    static GrassmannMatrix identity(int dim, int pairs) {
        GrassmannMatrix m(dim, pairs);
        for (int i = 0; i < dim; ++i)
            m.at(i, i) = GrassmannEven<Coeff>::one(pairs);
        return m;
    }

    int dim() const { return dim_; }
    int pairs() const { return pairs_; }

    GrassmannEven<Coeff>& at(int r, int c) {
        return e_[static_cast<size_t>(r) * dim_ + c];
    }
    const GrassmannEven<Coeff>& at(int r, int c) const {
        return e_[static_cast<size_t>(r) * dim_ + c];
    }

    friend GrassmannMatrix operator+(const GrassmannMatrix& a, const GrassmannMatrix& b) {
        check_same(a, b);
        GrassmannMatrix r = a;
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
        return r;
    }

    friend GrassmannMatrix operator*(const GrassmannMatrix& a, const GrassmannMatrix& b) {
        check_same(a, b);
        GrassmannMatrix r(a.dim_, a.pairs_);
        for (int i = 0; i < a.dim_; ++i)
            for (int k = 0; k < a.dim_; ++k) {
                const auto& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < a.dim_; ++j) {
                    const auto& bkj = b.at(k, j);
                    if (bkj.is_zero()) continue;
                    r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

private:
    static void check_same(const GrassmannMatrix& a, const GrassmannMatrix& b) {
        if (a.dim_ != b.dim_ || a.pairs_ != b.pairs_)
            throw std::invalid_argument("matrix shapes or generator sets differ");
    }

    int dim_;
    int pairs_;
    std::vector<GrassmannEven<Coeff>> e_;
};

/// Determinant over the even subalgebra by Gaussian elimination, dividing
/// through g_inv on pivots.  Row swaps (sign-tracked) only engage when a
/// pivot's scalar part vanishes; the I + nilpotent matrices this library
/// produces never need them.
template <class Coeff>
GrassmannEven<Coeff> g_det(GrassmannMatrix<Coeff> m) {
    const int d = m.dim();
    GrassmannEven<Coeff> det = GrassmannEven<Coeff>::one(m.pairs());
    bool negate = false;
    for (int i = 0; i < d; ++i) {
        int best = -1;
        double best_w = 0.0;
        for (int r = i; r < d; ++r) {
            double w = pivot_weight(m.at(r, i).scalar_part());
            if (w > best_w) {
                best_w = w;
                best = r;
            }
        }
        if (best < 0)
            throw NotInvertibleError("singular pivot during elimination");
        if (best != i) {
            for (int c = i; c < d; ++c) std::swap(m.at(i, c), m.at(best, c));
            negate = !negate;
        }
        const auto& pivot = m.at(i, i);
        det *= pivot;
        if (i + 1 == d) break;
        GrassmannEven<Coeff> pinv = g_inv(pivot);
        for (int r = i + 1; r < d; ++r) {
            if (m.at(r, i).is_zero()) continue;
            GrassmannEven<Coeff> factor = m.at(r, i) * pinv;
            for (int c = i + 1; c < d; ++c) {
                if (m.at(i, c).is_zero()) continue;
                m.at(r, c) -= factor * m.at(i, c);
            }
        }
    }
    return negate ? -det : det;
}

/// Gaussian Grassmann integral of exp(-<H eta, etabar>) with the pairing
/// sum_ij eta_i H_ij etabar_j; equals det H for any square H.  Exercises
/// the same orientation conventions as the correlator integrands, which is
/// why it exists: susy_det([a]) = a pins the global sign.
inline std::complex<double> susy_det(const Eigen::MatrixXcd& h) {
    using CE = GrassmannEven<std::complex<double>>;
    if (h.rows() != h.cols()) throw std::invalid_argument("susy_det needs a square matrix");
    const int d = static_cast<int>(h.rows());
    if (d > kMaxPairs)
        throw CapacityError("susy_det dimension exceeds generator capacity");
    CE x = CE::zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            x += CE::eta_etabar(d, i, j, h(i, j));
    CE sum = CE::one(d);
    CE term = CE::one(d);
    for (int t = 1; t <= d; ++t) {
        term *= x;
        if (term.is_zero()) break;
        term = term / std::complex<double>(-t, 0.0);
        sum += term;
    }
    return berezin(sum);
}

/// Scalar matrix lifted to Grassmann-matrix form over the same coefficients.
template <class Derived>
GrassmannMatrix<typename Derived::Scalar> lift_scalar_matrix(const Eigen::MatrixBase<Derived>& a,
                                                             int pairs) {
    using Coeff = typename Derived::Scalar;
    if (a.rows() != a.cols())
        throw std::invalid_argument("lift_scalar_matrix needs a square matrix");
    GrassmannMatrix<Coeff> m(static_cast<int>(a.rows()), pairs);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!is_zero_coeff(Coeff(a(i, j))))
                m.at(static_cast<int>(i), static_cast<int>(j)) =
                    GrassmannEven<Coeff>::scalar(pairs, a(i, j));
    return m;
}

} // namespace zcorr
