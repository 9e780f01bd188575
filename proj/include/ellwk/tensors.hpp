#pragma once

#include <Eigen/SVD>

#include "ellwk/domain.hpp"

namespace ellwk::tensors {

using domain::DomainPoint;
using rootsys::EllipticRootSystem;
using weyl::CMat;
using weyl::Cplx;
using weyl::ComplexIsometry;
using weyl::CVec;

/// Tangent vector at a point of D, identified with a covector on F^2_C.
struct TangentVector {
    DomainPoint at;
    CVec components;
};

/// The constant holomorphic metric of D: the dual form of the Gram matrix
/// evaluated on tangent representatives. The base point only matters for
/// provenance.
inline Cplx eval_I_D(const EllipticRootSystem& sys, const DomainPoint& /*x*/, const CVec& v,
                     const CVec& w) {
    return domain::dual_pair(domain::dual_gram(sys), v, w);
}

/// Residual of the quadric tangency condition I*(x, v) = 0 at x.
inline double tangency_residual(const EllipticRootSystem& sys, const DomainPoint& x,
                                const CVec& v) {
    return std::abs(domain::dual_pair(domain::dual_gram(sys), x.coords, v));
}

/// Basis of the tangent space of the quadric at x: the kernel of the covector
/// I*(x, .), computed by full-pivot LU.
inline CMat quadric_tangent_basis(const EllipticRootSystem& sys, const DomainPoint& x) {
    const CMat gstar = domain::dual_gram(sys);
    CMat row = (gstar * x.coords).transpose();
    Eigen::FullPivLU<CMat> lu(row);
    return lu.kernel();  // dim x (dim-1)
}

struct DegeneracyReport {
    int rank = 0;              // numeric rank of the restricted form
    int expected_rank = 0;     // l + 2: corank exactly one
    double fiber_pair_max = 0; // max |I*(x, v)| over the tangent basis
    bool fiber_is_radical() const { return rank == expected_rank; }
};

/// The quadric form: I_D restricted to tangent pairs. The radical of the
/// restriction is the fiber (Euler) direction spanned by x itself.
inline Cplx eval_I_D2(const EllipticRootSystem& sys, const DomainPoint& x, const CVec& v,
                      const CVec& w, double tol = 1e-10) {
    const double scale = std::max(1.0, x.coords.norm());
    if (tangency_residual(sys, x, v) > tol * scale * std::max(1.0, v.norm()) ||
        tangency_residual(sys, x, w) > tol * scale * std::max(1.0, w.norm()))
        throw Error("not tangent to the quadric");
    return eval_I_D(sys, x, v, w);
}

inline DegeneracyReport degeneracy_report(const EllipticRootSystem& sys, const DomainPoint& x) {
    const CMat gstar = domain::dual_gram(sys);
    const CMat basis = quadric_tangent_basis(sys, x);
    const CMat restricted = basis.transpose() * gstar * basis;
    Eigen::JacobiSVD<CMat> svd(restricted);
    const auto& sv = svd.singularValues();
    DegeneracyReport rep;
    rep.expected_rank = sys.l + 2;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rep.rank;
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
        rep.fiber_pair_max =
            std::max(rep.fiber_pair_max,
                     std::abs(domain::dual_pair(gstar, x.coords, basis.col(j))));
    return rep;
}

/// Gram matrix of the form induced on F^a_C / C a in the basis
/// (simple roots, [b], [b*]): the finite block plus one hyperbolic pair.
inline RatMat quotient_gram(const EllipticRootSystem& sys) {
    const std::size_t n = static_cast<std::size_t>(sys.l) + 2;
    RatMat g(n, n);
    for (int i = 0; i < sys.l; ++i)
        for (int j = 0; j < sys.l; ++j) g(i, j) = sys.space.gram(i, j);
    g(sys.l, sys.l + 1) = 1;
    g(sys.l + 1, sys.l) = 1;
    return g;
}

/// Drops the a and a* slots of a full tangent vector: its coordinates as a
/// functional on F^a_C / C a (requires the a-slot component to vanish).
inline CVec quotient_components(const EllipticRootSystem& sys, const CVec& v,
                                double tol = 1e-10) {
    if (std::abs(v(static_cast<Eigen::Index>(sys.idx_a()))) > tol * std::max(1.0, v.norm()))
        throw Error("not tangent to the slice", "nonzero <a,.> component");
    CVec out(sys.l + 2);
    for (int i = 0; i < sys.l; ++i) out(i) = v(i);
    out(sys.l) = v(static_cast<Eigen::Index>(sys.idx_b()));
    out(sys.l + 1) = v(static_cast<Eigen::Index>(sys.idx_b_star()));
    return out;
}

/// Metric of the slice domain carried over from the quotient form: the value
/// on tangent vectors is taken against the inverse of the induced Gram, and
/// agrees with eval_I_D2 on any tangency-corrected lift.
inline Cplx eval_I_D1a(const EllipticRootSystem& sys, const DomainPoint& x, const CVec& v,
                       const CVec& w, double tol = 1e-10) {
    if (std::abs(x.pair_a - Cplx(1, 0)) > tol) throw Error("not on the a-section");
    const CMat minv = weyl::to_complex(quotient_gram(sys).inverse());
    const CVec vq = quotient_components(sys, v, tol);
    const CVec wq = quotient_components(sys, w, tol);
    return (vq.transpose() * minv * wq)(0, 0);
}

enum class TensorId { I_D, I_D2_dual };

/// Pullback of the constant tensors along a linear map with differential A:
/// metrics transform as A^T G* A, dual tensors as A^-1 G A^-T.
struct EquivarianceCheck {
    double max_residual = 0;
    int samples = 0;
};

/// a is the differential of the point map and a_inv its inverse:
/// for phi(g) the map is x -> x o g^-1 with a = (g^-1)^T, for psi(alpha)
/// it is plain scaling with a = alpha Id.
inline double pullback_residual(const EllipticRootSystem& sys, TensorId id, const CMat& a,
                                const CMat& a_inv, Cplx expected_factor) {
    if (id == TensorId::I_D) {
        const CMat gstar = domain::dual_gram(sys);
        return ((a.transpose() * gstar * a) - expected_factor * gstar).cwiseAbs().maxCoeff();
    }
    const CMat gm = weyl::to_complex(sys.space.gram);
    return ((a_inv * gm * a_inv.transpose()) - expected_factor * gm).cwiseAbs().maxCoeff();
}

inline double pullback_residual_phi(const EllipticRootSystem& sys, TensorId id,
                                    const ComplexIsometry& g, Cplx expected_factor) {
    return pullback_residual(sys, id, g.inv.transpose(), g.mat.transpose(), expected_factor);
}

inline double pullback_residual_psi(const EllipticRootSystem& sys, TensorId id, Cplx alpha,
                                    Cplx expected_factor) {
    const auto n = static_cast<Eigen::Index>(sys.dim());
    return pullback_residual(sys, id, CMat::Identity(n, n) * alpha,
                             CMat::Identity(n, n) / alpha, expected_factor);
}

}  // namespace ellwk::tensors
