#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "ellwk/linalg.hpp"

namespace ellwk::rootsys {

enum class BaseType { A, D, E6, E7, E8 };

inline std::string base_type_name(BaseType t) {
    switch (t) {
        case BaseType::A: return "A";
        case BaseType::D: return "D";
        case BaseType::E6: return "E6";
        case BaseType::E7: return "E7";
        case BaseType::E8: return "E8";
    }
    return "?";
}

/// Finite-rank space with an exact symmetric Gram matrix.
struct BilinearSpace {
    std::size_t dim = 0;
    std::vector<std::string> basis_labels;
    RatMat gram;
    Signature signature;
};

inline BilinearSpace make_bilinear_space(RatMat gram, std::vector<std::string> labels) {
    if (gram.rows() != gram.cols()) throw Error("bad gram", "non-square");
    if (gram != gram.transposed()) throw Error("bad gram", "not symmetric");
    BilinearSpace s;
    s.dim = gram.rows();
    s.basis_labels = std::move(labels);
    s.signature = signature_of(gram);
    s.gram = std::move(gram);
    return s;
}

/// Coordinates of a finite root in the simple-root basis.
using FiniteRoot = std::vector<int64_t>;

/// A root alpha + n*a + m*b of the full system.
struct Root {
    FiniteRoot finite;
    int64_t n = 0;
    int64_t m = 0;
    bool operator==(const Root&) const = default;
    auto operator<=>(const Root&) const = default;
};

/// Simply-laced elliptic root system on the 2-extension.
/// Basis order is fixed: simple roots, a, b, a*, b*.
struct EllipticRootSystem {
    BaseType base_type = BaseType::A;
    int l = 0;
    std::vector<FiniteRoot> finite_roots;
    BilinearSpace space;  // dim l+4
    std::size_t rad_a = 0;  // basis index of a (= l)
    std::size_t rad_b = 0;  // basis index of b (= l+1)

    std::size_t dim() const { return space.dim; }
    std::size_t idx_a() const { return rad_a; }
    std::size_t idx_b() const { return rad_b; }
    std::size_t idx_a_star() const { return rad_a + 2; }
    std::size_t idx_b_star() const { return rad_b + 2; }

    /// Full (l+4)-coordinate vector of alpha + n*a + m*b.
    RatVec coords(const Root& r) const {
        RatVec v(dim());
        for (int i = 0; i < l; ++i) v[i] = r.finite[i];
        v[idx_a()] = r.n;
        v[idx_b()] = r.m;
        return v;
    }

    RatVec coords_finite(const FiniteRoot& f) const { return coords(Root{f, 0, 0}); }

    Rat pair(const RatVec& x, const RatVec& y) const { return bilinear(space.gram, x, y); }

    Rat norm(const RatVec& x) const { return pair(x, x); }
};

namespace detail {

inline std::vector<std::pair<int, int>> dynkin_edges(BaseType t, int l) {
    std::vector<std::pair<int, int>> e;
    switch (t) {
        case BaseType::A:
            if (l < 1) throw Error("invalid rank", "A_l needs l >= 1");
            for (int i = 0; i + 1 < l; ++i) e.emplace_back(i, i + 1);
            break;
        case BaseType::D:
            if (l < 4) throw Error("invalid rank", "D_l needs l >= 4");
            for (int i = 0; i + 1 < l - 1; ++i) e.emplace_back(i, i + 1);
            e.emplace_back(l - 3, l - 1);
            break;
        case BaseType::E6:
        case BaseType::E7:
        case BaseType::E8: {
            const int need = t == BaseType::E6 ? 6 : t == BaseType::E7 ? 7 : 8;
            if (l != need) throw Error("invalid rank", "E type has fixed rank");
            // chain 0-2-3-4-...-(l-1), branch node 1 attached to 3
            e.emplace_back(0, 2);
            for (int i = 2; i + 1 < l; ++i) e.emplace_back(i, i + 1);
            e.emplace_back(1, 3);
            break;
        }
    }
    return e;
}

inline RatMat cartan_matrix(BaseType t, int l) {
    RatMat c(l, l);
    for (int i = 0; i < l; ++i) c(i, i) = 2;
    for (auto [i, j] : dynkin_edges(t, l)) {
        c(i, j) = -1;
        c(j, i) = -1;
    }
    return c;
}

/// Closes the simple roots under the simple reflections. With the negative
/// definite convention, w_i(r) = r + I(r, alpha_i) alpha_i and
/// I(r, alpha_i) = -(C r)_i.
inline std::vector<FiniteRoot> close_roots(const RatMat& cartan, int l) {
    std::set<FiniteRoot> seen;
    std::queue<FiniteRoot> work;
    for (int i = 0; i < l; ++i) {
        FiniteRoot r(l, 0);
        r[i] = 1;
        seen.insert(r);
        work.push(r);
    }
    while (!work.empty()) {
        FiniteRoot r = work.front();
        work.pop();
        for (int i = 0; i < l; ++i) {
            Rat ci = 0;
            for (int j = 0; j < l; ++j) ci += cartan(i, j) * r[j];
            const int64_t coeff = -ci.convert_to<int64_t>();
            FiniteRoot img = r;
            img[i] += coeff;
            if (seen.insert(img).second) work.push(img);
        }
    }
    return {seen.begin(), seen.end()};
}

}  // namespace detail

inline BaseType parse_base_type(const std::string& s) {
    if (s == "A") return BaseType::A;
    if (s == "D") return BaseType::D;
    if (s == "E" || s == "E6") return BaseType::E6;  // "E" disambiguated by rank
    if (s == "E7") return BaseType::E7;
    if (s == "E8") return BaseType::E8;
    throw Error("unsupported base type", s);
}

/// Builds the 2-extension of a simply-laced system: Gram is
/// (-Cartan) on the simple-root block plus hyperbolic pairs (a,a*), (b,b*).
inline EllipticRootSystem build_system(BaseType t, int l) {
    if (t == BaseType::E6 && (l == 7 || l == 8)) t = l == 7 ? BaseType::E7 : BaseType::E8;
    const RatMat cartan = detail::cartan_matrix(t, l);
    const std::size_t dim = static_cast<std::size_t>(l) + 4;

    RatMat gram(dim, dim);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) gram(i, j) = -cartan(i, j);
    gram(l, l + 2) = 1;
    gram(l + 2, l) = 1;
    gram(l + 1, l + 3) = 1;
    gram(l + 3, l + 1) = 1;

    std::vector<std::string> labels;
    for (int i = 1; i <= l; ++i) labels.push_back("alpha" + std::to_string(i));
    labels.insert(labels.end(), {"a", "b", "a*", "b*"});

    EllipticRootSystem sys;
    sys.base_type = t;
    sys.l = l;
    sys.finite_roots = detail::close_roots(cartan, l);
    sys.space = make_bilinear_space(std::move(gram), std::move(labels));
    sys.rad_a = static_cast<std::size_t>(l);
    sys.rad_b = static_cast<std::size_t>(l) + 1;

    if (sys.space.signature != Signature{2, 0, l + 2})
        throw Error("bad gram", "unexpected signature of the 2-extension");
    for (const auto& f : sys.finite_roots)
        if (sys.norm(sys.coords_finite(f)) != -2) throw Error("bad root", "finite root norm != -2");
    return sys;
}

/// All alpha + n*a + m*b with |n|, |m| <= radius.
inline std::vector<Root> enumerate_roots(const EllipticRootSystem& sys, int radius) {
    if (radius < 0) throw Error("bad radius");
    std::vector<Root> out;
    out.reserve(sys.finite_roots.size() * (2 * radius + 1) * (2 * radius + 1));
    for (const auto& f : sys.finite_roots)
        for (int64_t n = -radius; n <= radius; ++n)
            for (int64_t m = -radius; m <= radius; ++m) out.push_back(Root{f, n, m});
    return out;
}

struct AxiomReport {
    int radius = 0;
    bool lattice_full = false;       // axiom 1 on the truncated root set
    bool integral_pairings = false;  // axiom 2, exact
    int64_t non_cartan_pairs = 0;    // pairings with |I(b, g^v)| > 2
    bool closure = false;            // axiom 3 via finite-part membership
    int64_t out_of_window = 0;       // reflected images beyond the radius
    bool irreducible = false;        // axiom 4, pairing-graph connectivity

    bool axiom1() const { return lattice_full; }
    bool axiom2() const { return integral_pairings && non_cartan_pairs == 0; }
    bool axiom3() const { return closure; }
    bool axiom4() const { return irreducible; }
    bool all_pass() const { return axiom1() && axiom2() && axiom3() && axiom4(); }
};

inline AxiomReport check_axioms(const EllipticRootSystem& sys, int radius) {
    AxiomReport rep;
    rep.radius = radius;
    const auto roots = enumerate_roots(sys, radius);
    const std::size_t rank_needed = static_cast<std::size_t>(sys.l) + 2;

    // Axiom 1: the truncated set spans a full-rank lattice in F.
    {
        RatMat rows(roots.size(), rank_needed);
        for (std::size_t r = 0; r < roots.size(); ++r) {
            for (int i = 0; i < sys.l; ++i) rows(r, i) = roots[r].finite[i];
            rows(r, sys.l) = roots[r].n;
            rows(r, sys.l + 1) = roots[r].m;
        }
        rep.lattice_full = rank_of(rows) == rank_needed;
    }

    // Precompute full coordinates and norms once.
    std::vector<RatVec> cs;
    std::vector<Rat> norms;
    cs.reserve(roots.size());
    for (const auto& r : roots) {
        cs.push_back(sys.coords(r));
        norms.push_back(sys.norm(cs.back()));
    }

    // Axiom 2: I(beta, gamma^v) integral and within the Cartan range.
    rep.integral_pairings = true;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = 0; j < roots.size(); ++j) {
            const Rat p = 2 * sys.pair(cs[i], cs[j]) / norms[j];
            if (boost::multiprecision::denominator(p) != 1) rep.integral_pairings = false;
            if (p > 2 || p < -2) ++rep.non_cartan_pairs;
        }

    // Axiom 3: w_gamma(beta) = beta - I(beta, gamma^v) gamma stays in R.
    // Membership is exact: the finite part must be a finite root, the radical
    // part is automatically integral. Images outside the truncation window
    // are still checked but counted separately.
    std::set<FiniteRoot> fset(sys.finite_roots.begin(), sys.finite_roots.end());
    rep.closure = true;
    for (std::size_t j = 0; j < roots.size(); ++j)
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const Rat coeff = 2 * sys.pair(cs[i], cs[j]) / norms[j];
            if (boost::multiprecision::denominator(coeff) != 1) continue;  // axiom 2 already failed
            const int64_t c = coeff.convert_to<int64_t>();
            Root img = roots[i];
            for (int k = 0; k < sys.l; ++k) img.finite[k] -= c * roots[j].finite[k];
            img.n -= c * roots[j].n;
            img.m -= c * roots[j].m;
            if (!fset.count(img.finite)) rep.closure = false;
            if (std::llabs(img.n) > radius || std::llabs(img.m) > radius) ++rep.out_of_window;
        }

    // Axiom 4: connectivity of the finite pairing graph.
    {
        const std::size_t nf = sys.finite_roots.size();
        std::vector<char> vis(nf, 0);
        std::vector<RatVec> fc;
        fc.reserve(nf);
        for (const auto& f : sys.finite_roots) fc.push_back(sys.coords_finite(f));
        std::queue<std::size_t> work;
        work.push(0);
        vis[0] = 1;
        std::size_t count = 1;
        while (!work.empty()) {
            const std::size_t u = work.front();
            work.pop();
            for (std::size_t v = 0; v < nf; ++v)
                if (!vis[v] && sys.pair(fc[u], fc[v]) != 0) {
                    vis[v] = 1;
                    ++count;
                    work.push(v);
                }
        }
        rep.irreducible = count == nf;
    }
    return rep;
}

/// Primitive radical vector p*a + q*b whose quotient root system is reduced.
struct SignedMarking {
    int64_t p = 0;
    int64_t q = 0;
};

/// Reducedness is checked by brute force on the truncated image of R in
/// F / R(p*a + q*b): image vectors are (finite part, n*q - m*p).
inline bool is_signed_marking(const EllipticRootSystem& sys, SignedMarking v, int radius) {
    if (v.p == 0 && v.q == 0) throw Error("bad marking", "zero vector");
    if (std::gcd(std::llabs(v.p), std::llabs(v.q)) != 1) return false;

    struct Image {
        FiniteRoot finite;
        int64_t k;
    };
    std::vector<Image> imgs;
    for (const auto& r : enumerate_roots(sys, radius))
        imgs.push_back({r.finite, r.n * v.q - r.m * v.p});

    // A proportional pair (x, c*x) with c != +-1 violates reducedness.
    for (std::size_t i = 0; i < imgs.size(); ++i)
        for (std::size_t j = 0; j < imgs.size(); ++j) {
            if (i == j) continue;
            Rat c = 0;
            bool have = false, prop = true;
            auto match = [&](const Rat& num, const Rat& den) {
                if (den == 0) {
                    if (num != 0) prop = false;
                    return;
                }
                const Rat ratio = num / den;
                if (!have) {
                    c = ratio;
                    have = true;
                } else if (c != ratio) {
                    prop = false;
                }
            };
            for (int t = 0; t < sys.l && prop; ++t)
                match(Rat(imgs[j].finite[t]), Rat(imgs[i].finite[t]));
            if (prop) match(Rat(imgs[j].k), Rat(imgs[i].k));
            if (prop && have && c != 1 && c != -1) return false;
        }
    return true;
}

}  // namespace ellwk::rootsys
