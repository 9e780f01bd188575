#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "ellwk/weyl.hpp"

namespace ellwk::domain {

using rootsys::EllipticRootSystem;
using weyl::CMat;
using weyl::Cplx;
using weyl::ComplexIsometry;
using weyl::CVec;

/// Covector on F^2_C, stored as the pairings <v_i, x> in the fixed basis
/// (finite block, a, b, a*, b*). Immutable after construction.
struct DomainPoint {
    CVec coords;
    Cplx pair_a;
    Cplx pair_b;
    Cplx tau;

    static DomainPoint from_coords(const EllipticRootSystem& sys, CVec c) {
        if (static_cast<std::size_t>(c.size()) != sys.dim()) throw Error("dimension mismatch");
        DomainPoint p;
        p.pair_a = c(sys.idx_a());
        p.pair_b = c(sys.idx_b());
        p.tau = p.pair_a != Cplx(0, 0) ? p.pair_b / p.pair_a : Cplx(0, 0);
        p.coords = std::move(c);
        return p;
    }
};

/// <beta, x> for an exact root/vector beta.
inline Cplx pairing(const EllipticRootSystem& sys, const RatVec& beta, const DomainPoint& x) {
    Cplx acc = 0;
    for (std::size_t i = 0; i < sys.dim(); ++i)
        if (beta[i] != 0) acc += to_double(beta[i]) * x.coords(static_cast<Eigen::Index>(i));
    return acc;
}

/// Dual Gram matrix (inverse of the Gram), complexified once per system.
inline CMat dual_gram(const EllipticRootSystem& sys) {
    return weyl::to_complex(sys.space.gram.inverse());
}

/// Holomorphic (non-conjugating) dual pairing I*(x, y) = x^T G^{-1} y.
inline Cplx dual_pair(const CMat& gstar, const CVec& x, const CVec& y) {
    return (x.transpose() * gstar * y)(0, 0);
}

inline Cplx quadric_residual(const EllipticRootSystem& sys, const DomainPoint& x) {
    const CMat gstar = dual_gram(sys);
    return dual_pair(gstar, x.coords, x.coords);
}

struct Classification {
    bool in_D = false;
    bool in_D2 = false;
    bool in_D2_open = false;
    Cplx quadric;       // I*(x, x)
    double min_root_pairing = 0.0;
    int radius = 0;
};

struct ClassifyTols {
    double quadric_rel = 1e-10;   // relative to |x|^2
    double root_zero_rel = 1e-9;  // relative to |x|
};

inline Classification classify(const EllipticRootSystem& sys, const DomainPoint& x, int radius,
                               ClassifyTols tols = {}) {
    Classification c;
    c.radius = radius;
    c.quadric = quadric_residual(sys, x);
    c.in_D = x.pair_a != Cplx(0, 0) && x.pair_b != Cplx(0, 0) && x.tau.imag() > 0.0;
    const double scale2 = std::max(1.0, x.coords.squaredNorm());
    c.in_D2 = c.in_D && std::abs(c.quadric) < tols.quadric_rel * scale2;
    double min_pair = std::numeric_limits<double>::infinity();
    for (const auto& r : rootsys::enumerate_roots(sys, radius))
        min_pair = std::min(min_pair, std::abs(pairing(sys, sys.coords(r), x)));
    c.min_root_pairing = min_pair;
    c.in_D2_open = c.in_D2 && min_pair > tols.root_zero_rel * std::sqrt(scale2);
    return c;
}

/// Left action on covectors: <g^-1 alpha, x> = <alpha, g x>, i.e. the
/// coordinates transform by the inverse transpose.
inline DomainPoint act(const EllipticRootSystem& sys, const ComplexIsometry& g,
                       const DomainPoint& x) {
    return DomainPoint::from_coords(sys, g.inv.transpose() * x.coords);
}

inline DomainPoint act(const EllipticRootSystem& sys, const weyl::OrthogonalElement& g,
                       const DomainPoint& x) {
    return act(sys, ComplexIsometry::from_rational(g), x);
}

/// The C*-action psi(alpha).
inline DomainPoint scale(const EllipticRootSystem& sys, Cplx alpha, const DomainPoint& x) {
    if (alpha == Cplx(0, 0)) throw Error("not in C*");
    return DomainPoint::from_coords(sys, alpha * x.coords);
}

/// Radical covector functional x -> p<a,x> + q<b,x>; the section datum.
struct SectionSpec {
    Cplx p;
    Cplx q;

    SectionSpec(Cplx p_, Cplx q_) : p(p_), q(q_) {
        if (p == Cplx(0, 0) && q == Cplx(0, 0)) throw Error("bad section", "zero functional");
    }

    Cplx eval(const DomainPoint& x) const { return p * x.pair_a + q * x.pair_b; }
};

/// Scales x onto the slice {<f, x> = 1}; idempotent.
inline DomainPoint normalize(const EllipticRootSystem& sys, const SectionSpec& f,
                             const DomainPoint& x) {
    const Cplx s = f.eval(x);
    if (s == Cplx(0, 0)) throw Error("point on the removed divisor {f = 0}");
    return scale(sys, Cplx(1, 0) / s, x);
}

/// Point on the quadric with prescribed finite coordinates, <a,x>, tau and
/// <b*,x>; <a*,x> is solved from the affine-linear quadric equation.
inline DomainPoint point_on_quadric(const EllipticRootSystem& sys, const CVec& finite, Cplx u_a,
                                    Cplx tau, Cplx s_b) {
    if (u_a == Cplx(0, 0)) throw Error("bad point", "<a,x> = 0");
    const CMat gstar = dual_gram(sys);
    CVec c = CVec::Zero(static_cast<Eigen::Index>(sys.dim()));
    for (int i = 0; i < sys.l; ++i) c(i) = finite(i);
    const Cplx u_b = tau * u_a;
    c(static_cast<Eigen::Index>(sys.idx_a())) = u_a;
    c(static_cast<Eigen::Index>(sys.idx_b())) = u_b;
    c(static_cast<Eigen::Index>(sys.idx_b_star())) = s_b;
    // I*(x,x) = Q_fin(z) + 2 u_a s_a + 2 u_b s_b = 0
    Cplx qfin = 0;
    for (int i = 0; i < sys.l; ++i)
        for (int j = 0; j < sys.l; ++j) qfin += c(i) * gstar(i, j) * c(j);
    c(static_cast<Eigen::Index>(sys.idx_a_star())) = -(qfin + 2.0 * u_b * s_b) / (2.0 * u_a);
    return DomainPoint::from_coords(sys, c);
}

/// Deterministic pseudorandom point of D^2: finite coordinates in the unit
/// polydisc, tau = i + half-disc (keeps Im tau >= 1/2), the quadric solved
/// for <a*,x>.
inline DomainPoint sample_D2(const EllipticRootSystem& sys, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto disc = [&](double radius) {
        const double r = radius * std::sqrt(unit(rng));
        const double th = 2.0 * 3.14159265358979323846 * unit(rng);
        return Cplx(r * std::cos(th), r * std::sin(th));
    };
    CVec finite(sys.l);
    for (int i = 0; i < sys.l; ++i) finite(i) = disc(1.0);
    Cplx u_a;
    int tries = 0;
    do {
        u_a = disc(1.0);
        if (++tries > 100) throw Error("sampling failed", "degenerate <a,x> draws");
    } while (std::abs(u_a) < 1e-3);
    const Cplx tau = Cplx(0, 1) + disc(0.5);
    const Cplx s_b = disc(1.0);
    return point_on_quadric(sys, finite, u_a, tau, s_b);
}

}  // namespace ellwk::domain
