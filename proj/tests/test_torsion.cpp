#include <doctest.h>

#include <random>

#include "odospec/torsion.hpp"

using namespace odospec;

namespace {

Matrix zeros(long n) {
    return Matrix(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n), Scalar(0)));
}

Matrix elementary(long n, long i, long j, const Scalar& v = Scalar(1)) {
    Matrix m = zeros(n);
    m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
    return m;
}

Matrix jordan3() {
    Matrix m = zeros(3);
    m[0][1] = Scalar(1);
    m[1][2] = Scalar(1);
    return m;
}

std::mt19937 rng(314159);

Matrix random_invertible(long n) {
    while (true) {
        Matrix m = zeros(n);
        for (auto& row : m)
            for (auto& x : row) x = Scalar(Rat(static_cast<long>(rng() % 9) - 4));
        if (mat_rank(m) == n) return m;
    }
}

Matrix inverse_of(const Matrix& a) {
    long n = static_cast<long>(a.size());
    Matrix aug = a;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            aug[static_cast<size_t>(i)].push_back(i == j ? Scalar(1) : Scalar(0));
    for (long col = 0; col < n; ++col) {
        long pivot = col;
        while (aug[static_cast<size_t>(pivot)][static_cast<size_t>(col)].is_zero()) ++pivot;
        std::swap(aug[static_cast<size_t>(pivot)], aug[static_cast<size_t>(col)]);
        Scalar inv = aug[static_cast<size_t>(col)][static_cast<size_t>(col)].inverse();
        for (auto& x : aug[static_cast<size_t>(col)]) x *= inv;
        for (long row = 0; row < n; ++row) {
            if (row == col) continue;
            Scalar f = aug[static_cast<size_t>(row)][static_cast<size_t>(col)];
            if (f.is_zero()) continue;
            for (long j = 0; j < 2 * n; ++j)
                aug[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
                    f * aug[static_cast<size_t>(col)][static_cast<size_t>(j)];
        }
    }
    Matrix out = zeros(n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            out[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                aug[static_cast<size_t>(i)][static_cast<size_t>(n + j)];
    return out;
}

MatPair conjugate(const MatPair& p, const Matrix& s) {
    Matrix sinv = inverse_of(s);
    return MatPair::from(p.n, mat_mul(mat_mul(s, p.U), sinv), mat_mul(mat_mul(s, p.V), sinv));
}

}  // namespace

TEST_CASE("invariants are validated") {
    // U not nilpotent
    CHECK_THROWS_AS(MatPair::from(2, {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(0)}}, zeros(2)),
                    ValidationError);
    // relation V^2 = U^3 violated (V^2 nonzero in dim 3 needs U^3 = V^2 = 0)
    Matrix v = zeros(3);
    v[0][1] = Scalar(1);
    v[1][2] = Scalar(1);
    CHECK_THROWS_AS(MatPair::from(3, zeros(3), v), ValidationError);
    // commutation violated
    Matrix u = elementary(3, 0, 1);
    Matrix w = elementary(3, 1, 2);
    CHECK_THROWS_AS(MatPair::from(3, u, w), ValidationError);
}

TEST_CASE("the three-dimensional normal forms") {
    SUBCASE("full Jordan block with a corner entry") {
        for (const Rat& theta : {Rat(0), Rat(2), Rat(-1, 3)}) {
            MatPair pair = MatPair::from(3, jordan3(), elementary(3, 0, 2, Scalar(theta)));
            NormalForm nf = classify_dim3(pair);
            CHECK(nf.tag == NormalForm::Tag::MTheta);
            CHECK(nf.theta == Scalar(-theta));
        }
    }
    SUBCASE("the two rank-one forms") {
        NormalForm n = classify_dim3(MatPair::from(3, elementary(3, 0, 2), elementary(3, 1, 2)));
        CHECK(n.tag == NormalForm::Tag::N);
        NormalForm ns = classify_dim3(MatPair::from(3, elementary(3, 0, 2), elementary(3, 0, 1)));
        CHECK(ns.tag == NormalForm::Tag::NSharp);
    }
    SUBCASE("zero pair decomposes into three trivials") {
        NormalForm nf = classify_dim3(MatPair::from(3, zeros(3), zeros(3)));
        CHECK(nf.tag == NormalForm::Tag::Decomposable);
        CHECK(nf.summands.size() == 3);
    }
    SUBCASE("proportional rank-one pair decomposes as a cyclic plane plus a point") {
        MatPair pair = MatPair::from(3, elementary(3, 0, 2), elementary(3, 0, 2, Scalar(5)));
        NormalForm nf = classify_dim3(pair);
        CHECK(nf.tag == NormalForm::Tag::Decomposable);
        REQUIRE(nf.summands.size() == 2);
        CHECK(nf.summands[0].tag == NormalForm::Tag::Dim2Cyclic);
        CHECK(nf.summands[0].pencil.first == Scalar(5));
    }
}

TEST_CASE("the two-dimensional normal forms") {
    NormalForm a = classify_dim2(MatPair::from(2, elementary(2, 0, 1), elementary(2, 0, 1, Scalar(3))));
    CHECK(a.tag == NormalForm::Tag::Dim2Cyclic);
    CHECK(a.pencil.first == Scalar(3));
    CHECK(a.pencil.second == Scalar(1));

    NormalForm b = classify_dim2(MatPair::from(2, zeros(2), elementary(2, 0, 1)));
    CHECK(b.tag == NormalForm::Tag::Dim2Cyclic);
    CHECK(b.pencil.first == Scalar(1));
    CHECK(b.pencil.second == Scalar(0));

    NormalForm c = classify_dim2(MatPair::from(2, zeros(2), zeros(2)));
    CHECK(c.tag == NormalForm::Tag::Decomposable);
    CHECK(c.summands.size() == 2);
}

TEST_CASE("dimension above three is rejected") {
    CHECK_THROWS_AS(classify_pair(MatPair::from(4, zeros(4), zeros(4))), ValidationError);
}

TEST_CASE("Matlis duality transposes, is an involution, fixes M_theta and swaps N with its dual") {
    MatPair n_pair = canonical_pair(NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}});
    CHECK(classify_dim3(matlis_dual(n_pair)).tag == NormalForm::Tag::NSharp);
    MatPair ns_pair = canonical_pair(NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}});
    CHECK(classify_dim3(matlis_dual(ns_pair)).tag == NormalForm::Tag::N);

    NormalForm mform{NormalForm::Tag::MTheta, Scalar(Rat(7, 2)), {}, {}};
    MatPair m_pair = canonical_pair(mform);
    NormalForm dual_class = classify_dim3(matlis_dual(m_pair));
    CHECK(dual_class.tag == NormalForm::Tag::MTheta);
    CHECK(dual_class.theta == Scalar(Rat(7, 2)));

    CHECK(is_isomorphic(matlis_dual(matlis_dual(n_pair)), n_pair));
}

TEST_CASE("isomorphism testing") {
    MatPair n_pair = canonical_pair(NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}});
    MatPair ns_pair = canonical_pair(NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}});
    CHECK(!is_isomorphic(n_pair, ns_pair));
    for (int i = 0; i < 10; ++i) {
        MatPair conj = conjugate(n_pair, random_invertible(3));
        CHECK(is_isomorphic(n_pair, conj));
        CHECK(!is_isomorphic(ns_pair, conj));
    }
    // distinct theta values are never isomorphic
    MatPair m1 = canonical_pair(NormalForm{NormalForm::Tag::MTheta, Scalar(1), {}, {}});
    MatPair m2 = canonical_pair(NormalForm{NormalForm::Tag::MTheta, Scalar(2), {}, {}});
    CHECK(!is_isomorphic(m1, m2));
    CHECK(is_isomorphic(m1, conjugate(m1, random_invertible(3))));
}

TEST_CASE("classification is constant on conjugacy classes") {
    std::vector<NormalForm> forms;
    forms.push_back(NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}});
    forms.push_back(NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}});
    for (long t : {-2, 0, 1, 5})
        forms.push_back(NormalForm{NormalForm::Tag::MTheta, Scalar(Rat(t)), {}, {}});
    for (const auto& form : forms) {
        MatPair base = canonical_pair(form);
        for (int i = 0; i < 25; ++i) {
            NormalForm got = classify_dim3(conjugate(base, random_invertible(3)));
            CHECK(got.tag == form.tag);
            if (form.tag == NormalForm::Tag::MTheta) CHECK(got.theta == form.theta);
        }
    }
}

TEST_CASE("classification agreement with the isomorphism oracle") {
    std::vector<MatPair> pairs;
    pairs.push_back(canonical_pair(NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}}));
    pairs.push_back(canonical_pair(NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}}));
    pairs.push_back(canonical_pair(NormalForm{NormalForm::Tag::MTheta, Scalar(1), {}, {}}));
    pairs.push_back(canonical_pair(NormalForm{NormalForm::Tag::MTheta, Scalar(-3), {}, {}}));
    pairs.push_back(MatPair::from(3, zeros(3), zeros(3)));
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j) {
            bool same_class = classify_dim3(pairs[i]).str() == classify_dim3(pairs[j]).str();
            CHECK(is_isomorphic(pairs[i], pairs[j]) == same_class);
        }
}

TEST_CASE("ideal normal forms") {
    // <t^2 + 5 t^3> is already the first principal form
    Laurent f1(2, {Scalar(1), Scalar(5), Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0)}, 9);
    IdealNF nf1 = ideal_normal_form({f1});
    CHECK(!nf1.is_monomial_pair);
    CHECK(nf1.n == 0);
    CHECK(nf1.theta == Scalar(5));

    // the maximal ideal <t^2, t^3>
    Laurent g1 = Laurent::monomial(Scalar(1), 2);
    Laurent g2 = Laurent::monomial(Scalar(1), 3);
    IdealNF nf2 = ideal_normal_form({g1, g2});
    CHECK(nf2.is_monomial_pair);
    CHECK(nf2.n == 0);

    // <t^3 + t^4, t^5>: t^5 = (t^3 + t^4) t^2/(1 + t) already lies in the
    // principal ideal, so the membership computation returns I_(1, 1).
    Laurent h1(3, {Scalar(1), Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0)}, 10);
    Laurent h2 = Laurent::monomial(Scalar(1), 5);
    IdealNF nf3 = ideal_normal_form({h1, h2});
    CHECK(!nf3.is_monomial_pair);
    CHECK(nf3.n == 1);
    CHECK(nf3.theta == Scalar(1));

    // adding t^4 turns it into the monomial pair form J_1
    IdealNF nf4 = ideal_normal_form({h1, Laurent::monomial(Scalar(1), 4)});
    CHECK(nf4.is_monomial_pair);
    CHECK(nf4.n == 1);

    // generators below valuation two are invalid
    CHECK_THROWS_AS(ideal_normal_form({Laurent::monomial(Scalar(1), 1)}), ValidationError);
    // insufficient truncation is flagged, not guessed
    Laurent short_gen(2, {Scalar(1), Scalar(5)}, 4);
    CHECK_THROWS_AS(ideal_normal_form({short_gen}), InconclusivePrecision);
}

TEST_CASE("rank-three sheaf labels and their duality") {
    NormalForm mform{NormalForm::Tag::MTheta, Scalar(Rat(2)), {}, {}};
    Rank3Sheaf e = sheaf_of_torsion3(mform);
    CHECK(e.kind == Rank3Sheaf::Kind::EQTheta);
    CHECK(e.det_point[0] == Scalar(2));
    CHECK(e.det_point[1] == Scalar(1));
    CHECK(e.det_point[2] == Scalar(8));

    Rank3Sheaf v = sheaf_of_torsion3(NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}});
    CHECK(v.kind == Rank3Sheaf::Kind::V);
    Rank3Sheaf vd = sheaf_of_torsion3(NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}});
    CHECK(vd.kind == Rank3Sheaf::Kind::VDagger);
    CHECK(dual_label(v.kind) == vd.kind);
    CHECK(dual_label(vd.kind) == v.kind);
    CHECK(dual_label(e.kind) == e.kind);

    // duality on labels matches duality on modules
    for (const auto& form :
         {NormalForm{NormalForm::Tag::N, Scalar(0), {}, {}},
          NormalForm{NormalForm::Tag::NSharp, Scalar(0), {}, {}},
          NormalForm{NormalForm::Tag::MTheta, Scalar(3), {}, {}}}) {
        Rank3Sheaf label = sheaf_of_torsion3(form);
        NormalForm dual_form = classify_dim3(matlis_dual(canonical_pair(form)));
        CHECK(sheaf_of_torsion3(dual_form).kind == dual_label(label.kind));
    }
}
