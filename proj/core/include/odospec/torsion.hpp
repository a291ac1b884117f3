#pragma once

#include <array>

#include "odospec/laurent.hpp"

namespace odospec {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_transpose(const Matrix& a);
long mat_rank(Matrix a);
bool mat_is_zero(const Matrix& a);

/// A finite-length module over k[[t^2, t^3]] = k[[u,v]]/(v^2 - u^3),
/// presented by the commuting nilpotent actions U (of u = t^2) and
/// V (of v = t^3) with V^2 = U^3.
struct MatPair {
    long n = 0;
    Matrix U, V;

    static MatPair from(long n, Matrix U, Matrix V);
    /// Checks nilpotency, commutation and the cuspidal relation.
    void validate() const;
};

/// Normal forms of length <= 3 (the classified range; the category is
/// representation wild beyond it).
struct NormalForm {
    enum class Tag {
        MTheta,      ///< R/(t^3 + theta t^4), theta recovered
        N,           ///< R/(t^4, t^5)
        NSharp,      ///< the Matlis dual of N
        Dim2Cyclic,  ///< two-dimensional cyclic module, pencil parameter t
        Trivial1,    ///< the simple module k
        Decomposable,
    };
    Tag tag = Tag::Trivial1;
    Scalar theta;                       ///< MTheta parameter
    std::pair<Scalar, Scalar> pencil;   ///< Dim2Cyclic parameter (t0 : t1)
    std::vector<NormalForm> summands;   ///< Decomposable contents

    std::string str() const;
};

/// Canonical matrix pair of a normal form (inverse of classification).
MatPair canonical_pair(const NormalForm& nf);

NormalForm classify_dim3(const MatPair& pair);
NormalForm classify_dim2(const MatPair& pair);
/// Dispatches on dimension; lengths above three are rejected.
NormalForm classify_pair(const MatPair& pair);

/// Matlis duality on finite-length modules: (U, V) -> (U^t, V^t).
MatPair matlis_dual(const MatPair& pair);

/// Simultaneous-conjugacy test: does an invertible S with S U_a = U_b S and
/// S V_a = V_b S exist?  Decided exactly: a kernel basis of the linear
/// system is searched for an invertible element by bounded random probing,
/// then an exhaustive grid that is conclusive for the determinant
/// polynomial's degree.
bool is_isomorphic(const MatPair& a, const MatPair& b);

/// Normal form I_{n,theta} = <t^n (t^2 + theta t^3)> or J_n = t^n <t^2, t^3>
/// of a proper ideal of k[[t^2, t^3]].
struct IdealNF {
    bool is_monomial_pair = false;  ///< true: J_n; false: I_{n,theta}
    long n = 0;
    Scalar theta;

    std::string str() const;
};

/// Normal form of the ideal generated by truncated series in t (each with
/// valuation >= 2).  Decided by truncated linear algebra; the truncation
/// must reach 2*min-multiplicity + 4.
IdealNF ideal_normal_form(const std::vector<Laurent>& gens);

/// Labels of the rank-three semi-stable sheaves attached to length-three
/// torsion modules on the cuspidal cubic.
struct Rank3Sheaf {
    enum class Kind {
        EQTheta,  ///< locally free E(3, theta) with determinant point (theta : 1 : theta^3)
        V,        ///< not locally free, from N
        VDagger,  ///< not locally free, from N-sharp
        Sum,      ///< decomposable input: sum of smaller pieces
    };
    Kind kind = Kind::Sum;
    Scalar theta;
    std::array<Scalar, 3> det_point;  ///< projective (theta : 1 : theta^3) for EQTheta
    std::string description;
};

Rank3Sheaf sheaf_of_torsion3(const NormalForm& nf);
/// The duality D on the labels: fixes E(3, theta), swaps V and V-dagger.
Rank3Sheaf::Kind dual_label(Rank3Sheaf::Kind k);

}  // namespace odospec
