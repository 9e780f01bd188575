#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ellwk/rootsys.hpp"

namespace ellwk::weyl {

using rootsys::EllipticRootSystem;
using rootsys::Root;

/// Sign of the semi-definite form on F. The negative definite convention
/// I(alpha, alpha) = -2 is fixed project-wide; the generator g0 of the
/// integral center is a positive multiple of sgn * (a@b - b@a).
inline constexpr int kSgnIF = -1;

constexpr std::size_t kMaxStoredWord = 64;

inline std::string root_label(const EllipticRootSystem& sys, const Root& r) {
    std::string s;
    for (int i = 0; i < sys.l; ++i) {
        if (r.finite[i] == 0) continue;
        if (!s.empty() && r.finite[i] > 0) s += "+";
        if (r.finite[i] == -1)
            s += "-";
        else if (r.finite[i] != 1)
            s += std::to_string(r.finite[i]) + "*";
        s += "alpha" + std::to_string(i + 1);
    }
    auto app = [&](int64_t c, const char* name) {
        if (c == 0) return;
        if (!s.empty() && c > 0) s += "+";
        if (c == -1)
            s += "-";
        else if (c != 1)
            s += std::to_string(c) + "*";
        s += name;
    };
    app(r.n, "a");
    app(r.m, "b");
    return s.empty() ? "0" : s;
}

/// Element of the parabolic orthogonal group, stored as an exact matrix in
/// the fixed basis. The optional word records the generating reflections.
struct OrthogonalElement {
    RatMat matrix;
    std::optional<std::vector<Root>> word;

    bool is_orthogonal(const EllipticRootSystem& sys) const {
        return matrix.transposed() * sys.space.gram * matrix == sys.space.gram;
    }

    /// g(F) in F and g(rad) in rad, read off the zero blocks.
    bool preserves_flag(const EllipticRootSystem& sys) const {
        const std::size_t d = sys.dim();
        const std::size_t f = static_cast<std::size_t>(sys.l) + 2;
        for (std::size_t j = 0; j < f; ++j)
            for (std::size_t i = f; i < d; ++i)
                if (matrix(i, j) != 0) return false;
        for (std::size_t j = sys.idx_a(); j <= sys.idx_b(); ++j)
            for (std::size_t i = 0; i < d; ++i)
                if (i != sys.idx_a() && i != sys.idx_b() && matrix(i, j) != 0) return false;
        return true;
    }

    Rat det_on_radical(const EllipticRootSystem& sys) const {
        const auto a = sys.idx_a(), b = sys.idx_b();
        return matrix(a, a) * matrix(b, b) - matrix(a, b) * matrix(b, a);
    }

    /// Exact inverse; reflections words invert by reversal.
    OrthogonalElement inverse() const {
        OrthogonalElement g;
        g.matrix = matrix.inverse();
        if (word) {
            g.word = std::vector<Root>(word->rbegin(), word->rend());
        }
        return g;
    }
};

inline OrthogonalElement operator*(const OrthogonalElement& g, const OrthogonalElement& h) {
    OrthogonalElement out;
    out.matrix = g.matrix * h.matrix;
    if (g.word && h.word && g.word->size() + h.word->size() <= kMaxStoredWord) {
        out.word = *g.word;
        out.word->insert(out.word->end(), h.word->begin(), h.word->end());
    }
    return out;
}

/// Reflection u -> u - I(u, beta^v) beta on the 2-extension.
/// beta may be any non-isotropic rational vector; roots give exact
/// involutions with integer matrices.
inline OrthogonalElement reflect_vec(const EllipticRootSystem& sys, const RatVec& beta) {
    const Rat nn = sys.norm(beta);
    if (nn == 0) throw Error("isotropic vector has no reflection");
    RatVec covec = sys.space.gram * beta;  // I(v_j, beta)
    const std::size_t d = sys.dim();
    RatMat m = RatMat::identity(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) -= beta[i] * 2 * covec[j] / nn;
    return OrthogonalElement{std::move(m), std::nullopt};
}

inline OrthogonalElement reflect(const EllipticRootSystem& sys, const Root& beta) {
    OrthogonalElement g = reflect_vec(sys, sys.coords(beta));
    g.word = std::vector<Root>{beta};
    return g;
}

/// Element of F^2 (x) F^2 with its canonical matrix sum(alpha_i (x) beta_i).
/// Two tensors with equal canonical form are equal.
struct ESTensor {
    RatMat canonical_form;

    static ESTensor zero(const EllipticRootSystem& sys) {
        return ESTensor{RatMat(sys.dim(), sys.dim())};
    }

    static ESTensor from_pairs(const EllipticRootSystem& sys,
                               const std::vector<std::pair<RatVec, RatVec>>& pairs) {
        RatMat m(sys.dim(), sys.dim());
        for (const auto& [u, v] : pairs)
            for (std::size_t i = 0; i < sys.dim(); ++i)
                for (std::size_t j = 0; j < sys.dim(); ++j) m(i, j) += u[i] * v[j];
        return ESTensor{std::move(m)};
    }

    /// c * (a (x) b - b (x) a), the wedge of the radical basis.
    static ESTensor radical_wedge(const EllipticRootSystem& sys, const Rat& c) {
        RatMat m(sys.dim(), sys.dim());
        m(sys.idx_a(), sys.idx_b()) = c;
        m(sys.idx_b(), sys.idx_a()) = -c;
        return ESTensor{std::move(m)};
    }

    bool operator==(const ESTensor& o) const { return canonical_form == o.canonical_form; }
};

/// Eichler-Siegel transformation: u -> u - sum alpha_i I(u, beta_i),
/// i.e. the matrix Id - T * Gram for T the canonical form.
inline OrthogonalElement es(const EllipticRootSystem& sys, const ESTensor& t) {
    OrthogonalElement g;
    g.matrix = RatMat::identity(sys.dim()) - t.canonical_form * sys.space.gram;
    return g;
}

/// Semigroup product t1 + t2 - sum I(v_i, w_j) u_i (x) x_j; satisfies
/// es(es_product(t1, t2)) = es(t1) * es(t2) with t2 applied first.
inline ESTensor es_product(const EllipticRootSystem& sys, const ESTensor& t1, const ESTensor& t2) {
    return ESTensor{t1.canonical_form + t2.canonical_form -
                    t1.canonical_form * sys.space.gram * t2.canonical_form};
}

struct Restriction {
    RatMat on_F;       // (l+2) x (l+2)
    bool kernel_flag;  // g restricts to the identity on F
};

/// Restriction to F; throws if g does not preserve F.
inline Restriction pi2_restrict(const EllipticRootSystem& sys, const OrthogonalElement& g) {
    const std::size_t f = static_cast<std::size_t>(sys.l) + 2;
    const std::size_t d = sys.dim();
    for (std::size_t j = 0; j < f; ++j)
        for (std::size_t i = f; i < d; ++i)
            if (g.matrix(i, j) != 0) throw Error("element does not preserve F");
    Restriction r;
    r.on_F = RatMat(f, f);
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j) r.on_F(i, j) = g.matrix(i, j);
    r.kernel_flag = r.on_F.is_identity();
    return r;
}

/// If g lies in ES of the radical wedge line, returns the coefficient c with
/// g = es(c * (a@b - b@a)); read off the b-component of g(a*) and verified
/// against the full matrix.
inline std::optional<Rat> kernel_wedge_coefficient(const EllipticRootSystem& sys,
                                                   const OrthogonalElement& g) {
    const Rat c = -g.matrix(sys.idx_b(), sys.idx_a_star());
    if (es(sys, ESTensor::radical_wedge(sys, c)).matrix != g.matrix) return std::nullopt;
    return c;
}

namespace detail {

using IntMat = std::vector<int64_t>;  // row-major d*d

struct IntMatHash {
    std::size_t operator()(const IntMat& m) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int64_t v : m) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

inline IntMat to_int_mat(const RatMat& m) {
    IntMat out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rat& x = m(i, j);
            if (boost::multiprecision::denominator(x) != 1)
                throw Error("not integral", "integer fast path needs integer matrices");
            out.push_back(x.convert_to<int64_t>());
        }
    return out;
}

inline IntMat int_mul(const IntMat& a, const IntMat& b, std::size_t d) {
    IntMat c(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const int64_t aik = a[i * d + k];
            if (aik == 0) continue;
            for (std::size_t j = 0; j < d; ++j)
                c[i * d + j] = checked_add(c[i * d + j], checked_mul(aik, b[k * d + j]));
        }
    return c;
}

inline bool is_identity_on_F(const IntMat& m, std::size_t d, std::size_t f) {
    for (std::size_t j = 0; j < f; ++j)
        for (std::size_t i = 0; i < d; ++i)
            if (m[i * d + j] != (i == j ? 1 : 0)) return false;
    return true;
}

}  // namespace detail

struct G0Result {
    Rat coefficient;                   // positive; g0 = coefficient * sgn(I_F) * (a@b - b@a)
    std::vector<Root> witness_word;
    std::vector<Rat> found_multiples;  // all wedge coefficients seen, +- mixed
    int budget = 0;
};

/// BFS over products of the generating reflections w_{alpha + n a + m b}
/// (|n|, |m| <= 1) up to the word-length budget, filtering for elements that
/// restrict to the identity on F. Every such element is es of a radical
/// wedge; the minimal positive multiple in the sgn(I_F) direction is the
/// generator. Deterministic: fixed generator order, FIFO expansion.
inline G0Result compute_g0(const EllipticRootSystem& sys, int max_word_length) {
    const std::size_t d = sys.dim();
    const std::size_t f = static_cast<std::size_t>(sys.l) + 2;

    // One reflection per +-pair of finite roots, shifted through the radical window.
    std::vector<Root> gen_roots;
    for (const auto& fr : sys.finite_roots) {
        bool positive = false;
        for (int i = 0; i < sys.l; ++i) {
            if (fr[i] == 0) continue;
            positive = fr[i] > 0;
            break;
        }
        if (!positive) continue;
        for (int64_t n = -1; n <= 1; ++n)
            for (int64_t m = -1; m <= 1; ++m) gen_roots.push_back(Root{fr, n, m});
    }

    std::vector<detail::IntMat> gens;
    gens.reserve(gen_roots.size());
    for (const auto& r : gen_roots) gens.push_back(detail::to_int_mat(reflect(sys, r).matrix));

    detail::IntMat id(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) id[i * d + i] = 1;

    struct Node {
        int parent;
        int gen;
    };
    std::unordered_map<detail::IntMat, int, detail::IntMatHash> seen;
    std::vector<Node> nodes;
    std::deque<std::pair<detail::IntMat, int>> frontier;  // (matrix, node id)
    std::vector<int> depth;

    seen.emplace(id, 0);
    nodes.push_back({-1, -1});
    depth.push_back(0);
    frontier.emplace_back(id, 0);

    G0Result res;
    res.budget = max_word_length;
    std::optional<Rat> best;
    int best_node = -1;

    auto wedge_of = [&](const detail::IntMat& m) -> std::optional<int64_t> {
        // matches es(c (a@b - b@a)): a* -> a* + c b, b* -> b* - c a, rest fixed
        const int64_t c = -m[sys.idx_b() * d + sys.idx_a_star()];
        detail::IntMat expect = id;
        expect[sys.idx_b() * d + sys.idx_a_star()] = -c;
        expect[sys.idx_a() * d + sys.idx_b_star()] = c;
        if (m != expect) return std::nullopt;
        return c;
    };

    while (!frontier.empty()) {
        auto [mat, node] = frontier.front();
        frontier.pop_front();
        if (depth[node] >= max_word_length) continue;
        for (std::size_t g = 0; g < gens.size(); ++g) {
            detail::IntMat next = detail::int_mul(gens[g], mat, d);
            auto [it, inserted] = seen.emplace(next, static_cast<int>(nodes.size()));
            if (!inserted) continue;
            nodes.push_back({node, static_cast<int>(g)});
            depth.push_back(depth[node] + 1);
            const int nid = static_cast<int>(nodes.size()) - 1;
            if (detail::is_identity_on_F(next, d, f) && next != id) {
                if (auto c = wedge_of(next)) {
                    res.found_multiples.emplace_back(*c);
                    const Rat mag = *c < 0 ? Rat(-*c) : Rat(*c);
                    if (!best || mag < *best) {
                        best = mag;
                        best_node = nid;
                    }
                }
            }
            frontier.emplace_back(std::move(next), nid);
        }
    }

    if (!best) throw Error("budget exhausted", "no kernel element within word length " +
                                                   std::to_string(max_word_length));
    res.coefficient = *best;
    for (int cur = best_node; cur > 0; cur = nodes[cur].parent)
        res.witness_word.push_back(gen_roots[nodes[cur].gen]);
    return res;
}

/// The one-parameter center rho(t) = es(t * g0) with
/// g0 = c * sgn(I_F) * (a@b - b@a). Rational t keeps the matrix exact.
inline RatMat rho_rational(const EllipticRootSystem& sys, const Rat& g0_coeff, const Rat& t) {
    return es(sys, ESTensor::radical_wedge(sys, t * g0_coeff * kSgnIF)).matrix;
}

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Cplx = std::complex<double>;

inline CMat to_complex(const RatMat& m) {
    CMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

/// Invertible complex linear map on F^2_C with a cached inverse; the form in
/// which group elements act on domain points.
struct ComplexIsometry {
    CMat mat;
    CMat inv;

    static ComplexIsometry from_rational(const OrthogonalElement& g) {
        return ComplexIsometry{to_complex(g.matrix), to_complex(g.matrix.inverse())};
    }

    static ComplexIsometry from_matrix(const CMat& m) {
        Eigen::FullPivLU<CMat> lu(m);
        if (!lu.isInvertible()) throw Error("not invertible");
        return ComplexIsometry{m, lu.inverse()};
    }

    static ComplexIsometry scaling(std::size_t dim, Cplx alpha) {
        if (alpha == Cplx(0, 0)) throw Error("not in C*");
        ComplexIsometry s;
        s.mat = CMat::Identity(dim, dim) * alpha;
        s.inv = CMat::Identity(dim, dim) / alpha;
        return s;
    }
};

/// rho(t) for complex t: identity minus t * (g0 tensor contracted with Gram).
inline ComplexIsometry rho(const EllipticRootSystem& sys, const Rat& g0_coeff, Cplx t) {
    const RatMat wedge_gram =
        ESTensor::radical_wedge(sys, g0_coeff * kSgnIF).canonical_form * sys.space.gram;
    const CMat w = to_complex(wedge_gram);
    const CMat id = CMat::Identity(sys.dim(), sys.dim());
    return ComplexIsometry{id - t * w, id + t * w};  // rho(-t) inverts exactly
}

}  // namespace ellwk::weyl
