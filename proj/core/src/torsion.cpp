#include "odospec/torsion.hpp"

#include <random>
#include <sstream>

namespace odospec {

namespace {

Matrix mat_zero(long n) { return Matrix(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n), Scalar(0))); }

Matrix mat_sub(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) out[i][j] = a[i][j] - b[i][j];
    return out;
}

Scalar mat_det(const Matrix& a) {
    Matrix m = a;
    size_t n = m.size();
    Scalar det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return Scalar(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Scalar inv = m[col][col].inverse();
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col].is_zero()) continue;
            Scalar factor = m[row][col] * inv;
            for (size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
        }
    }
    return det;
}

}  // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    Matrix out(n, std::vector<Scalar>(m, Scalar(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

Matrix mat_transpose(const Matrix& a) {
    size_t n = a.size(), m = a[0].size();
    Matrix out(m, std::vector<Scalar>(n, Scalar(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) out[j][i] = a[i][j];
    return out;
}

long mat_rank(Matrix a) {
    if (a.empty()) return 0;
    size_t rows = a.size(), cols = a[0].size();
    long rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = row;
        while (pivot < rows && a[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[row]);
        Scalar inv = a[row][col].inverse();
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            Scalar factor = a[r][col] * inv;
            for (size_t j = col; j < cols; ++j) a[r][j] -= factor * a[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

bool mat_is_zero(const Matrix& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

MatPair MatPair::from(long n, Matrix U, Matrix V) {
    MatPair pair{n, std::move(U), std::move(V)};
    if (static_cast<long>(pair.U.size()) != n || static_cast<long>(pair.V.size()) != n)
        throw ValidationError("matrix dimensions do not match n");
    for (const auto& row : pair.U)
        if (static_cast<long>(row.size()) != n) throw ValidationError("U is not square");
    for (const auto& row : pair.V)
        if (static_cast<long>(row.size()) != n) throw ValidationError("V is not square");
    pair.validate();
    return pair;
}

void MatPair::validate() const {
    Matrix Un = U;
    for (long i = 1; i < n; ++i) Un = mat_mul(Un, U);
    if (!mat_is_zero(Un)) throw ValidationError("U is not nilpotent");
    Matrix Vn = V;
    for (long i = 1; i < n; ++i) Vn = mat_mul(Vn, V);
    if (!mat_is_zero(Vn)) throw ValidationError("V is not nilpotent");
    if (!mat_is_zero(mat_sub(mat_mul(U, V), mat_mul(V, U))))
        throw ValidationError("U and V do not commute");
    Matrix U3 = mat_mul(mat_mul(U, U), U);
    Matrix V2 = mat_mul(V, V);
    if (!mat_is_zero(mat_sub(V2, U3))) throw ValidationError("the cuspidal relation V^2 = U^3 fails");
}

std::string NormalForm::str() const {
    switch (tag) {
        case Tag::MTheta: return "M_theta(theta = " + theta.str() + ")";
        case Tag::N: return "N";
        case Tag::NSharp: return "N#";
        case Tag::Dim2Cyclic:
            return "I_t(t = (" + pencil.first.str() + " : " + pencil.second.str() + "))";
        case Tag::Trivial1: return "k";
        case Tag::Decomposable: {
            std::ostringstream os;
            os << "sum(";
            for (size_t i = 0; i < summands.size(); ++i) {
                if (i) os << ", ";
                os << summands[i].str();
            }
            os << ")";
            return os.str();
        }
    }
    return "?";
}

MatPair canonical_pair(const NormalForm& nf) {
    using Tag = NormalForm::Tag;
    switch (nf.tag) {
        case Tag::MTheta: {
            Matrix U = mat_zero(3), V = mat_zero(3);
            U[0][1] = Scalar(1);
            U[1][2] = Scalar(1);
            V[0][2] = -nf.theta;  // (k^3, J, theta' E13) is M_{-theta'}
            return MatPair::from(3, U, V);
        }
        case Tag::N: {
            Matrix U = mat_zero(3), V = mat_zero(3);
            U[0][2] = Scalar(1);
            V[1][2] = Scalar(1);
            return MatPair::from(3, U, V);
        }
        case Tag::NSharp: {
            Matrix U = mat_zero(3), V = mat_zero(3);
            U[0][2] = Scalar(1);
            V[0][1] = Scalar(1);
            return MatPair::from(3, U, V);
        }
        case Tag::Dim2Cyclic: {
            Matrix U = mat_zero(2), V = mat_zero(2);
            if (!nf.pencil.second.is_zero()) {
                Scalar theta = nf.pencil.first / nf.pencil.second;
                U[0][1] = Scalar(1);
                V[0][1] = theta;
            } else {
                V[0][1] = Scalar(1);  // t = infinity: U = 0, V = E12
            }
            return MatPair::from(2, U, V);
        }
        case Tag::Trivial1: return MatPair::from(1, mat_zero(1), mat_zero(1));
        case Tag::Decomposable: {
            std::vector<MatPair> parts;
            long n = 0;
            for (const auto& sub : nf.summands) {
                parts.push_back(canonical_pair(sub));
                n += parts.back().n;
            }
            Matrix U = mat_zero(n), V = mat_zero(n);
            long off = 0;
            for (const auto& part : parts) {
                for (long i = 0; i < part.n; ++i)
                    for (long j = 0; j < part.n; ++j) {
                        U[static_cast<size_t>(off + i)][static_cast<size_t>(off + j)] =
                            part.U[static_cast<size_t>(i)][static_cast<size_t>(j)];
                        V[static_cast<size_t>(off + i)][static_cast<size_t>(off + j)] =
                            part.V[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    }
                off += part.n;
            }
            return MatPair::from(n, std::move(U), std::move(V));
        }
    }
    throw ValidationError("unreachable normal form tag");
}

namespace {

/// Solve V = theta * W entrywise for a nonzero W; throws if inconsistent.
Scalar proportionality(const Matrix& V, const Matrix& W) {
    Scalar theta(0);
    bool found = false;
    for (size_t i = 0; i < W.size(); ++i)
        for (size_t j = 0; j < W[i].size(); ++j)
            if (!W[i][j].is_zero()) {
                theta = V[i][j] / W[i][j];
                found = true;
            }
    if (!found) throw ValidationError("proportionality against the zero matrix");
    for (size_t i = 0; i < W.size(); ++i)
        for (size_t j = 0; j < W[i].size(); ++j)
            if (V[i][j] != theta * W[i][j])
                throw ConsistencyError("commuting structure is not proportional where it must be");
    return theta;
}

/// dim(im U + im V) computed from the stacked columns.
long dim_mM(const MatPair& p) {
    Matrix stacked(static_cast<size_t>(p.n), std::vector<Scalar>(2 * static_cast<size_t>(p.n), Scalar(0)));
    for (long i = 0; i < p.n; ++i)
        for (long j = 0; j < p.n; ++j) {
            stacked[static_cast<size_t>(i)][static_cast<size_t>(j)] = p.U[static_cast<size_t>(i)][static_cast<size_t>(j)];
            stacked[static_cast<size_t>(i)][static_cast<size_t>(p.n + j)] =
                p.V[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    return mat_rank(stacked);
}

/// dim(ker U cap ker V) via the rank of the stacked rows.
long dim_socle(const MatPair& p) {
    Matrix stacked(2 * static_cast<size_t>(p.n), std::vector<Scalar>(static_cast<size_t>(p.n), Scalar(0)));
    for (long i = 0; i < p.n; ++i)
        for (long j = 0; j < p.n; ++j) {
            stacked[static_cast<size_t>(i)][static_cast<size_t>(j)] = p.U[static_cast<size_t>(i)][static_cast<size_t>(j)];
            stacked[static_cast<size_t>(p.n + i)][static_cast<size_t>(j)] =
                p.V[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    return p.n - mat_rank(std::move(stacked));
}

void verify_against_canonical(const MatPair& pair, const NormalForm& nf) {
    if (!is_isomorphic(pair, canonical_pair(nf)))
        throw ConsistencyError("classified pair is not isomorphic to its canonical form " + nf.str());
}

}  // namespace

NormalForm classify_dim3(const MatPair& pair) {
    if (pair.n != 3) throw ValidationError("classify_dim3 needs n = 3");
    pair.validate();
    NormalForm nf;
    long rank_u = mat_rank(pair.U);
    if (rank_u == 2) {
        // U is a full Jordan block; V commutes and squares to zero, hence
        // V = theta' U^2, and the module is M_{-theta'}.
        Scalar theta_entry = proportionality(pair.V, mat_mul(pair.U, pair.U));
        nf.tag = NormalForm::Tag::MTheta;
        nf.theta = -theta_entry;
        verify_against_canonical(pair, nf);
        return nf;
    }
    if (rank_u == 1) {
        long top = dim_mM(pair);
        if (top == 2) {
            nf.tag = NormalForm::Tag::N;
            verify_against_canonical(pair, nf);
            return nf;
        }
        long socle = dim_socle(pair);
        if (socle == 1) {
            nf.tag = NormalForm::Tag::NSharp;
            verify_against_canonical(pair, nf);
            return nf;
        }
        // V proportional to U: a two-dimensional cyclic piece plus k.
        Scalar gamma = proportionality(pair.V, pair.U);
        nf.tag = NormalForm::Tag::Decomposable;
        NormalForm part;
        part.tag = NormalForm::Tag::Dim2Cyclic;
        part.pencil = {gamma, Scalar(1)};
        nf.summands = {part, NormalForm{}};
        verify_against_canonical(pair, nf);
        return nf;
    }
    // U = 0: V^2 = 0 leaves rank(V) <= 1.
    if (mat_is_zero(pair.V)) {
        nf.tag = NormalForm::Tag::Decomposable;
        nf.summands = {NormalForm{}, NormalForm{}, NormalForm{}};
        return nf;
    }
    nf.tag = NormalForm::Tag::Decomposable;
    NormalForm part;
    part.tag = NormalForm::Tag::Dim2Cyclic;
    part.pencil = {Scalar(1), Scalar(0)};
    nf.summands = {part, NormalForm{}};
    verify_against_canonical(pair, nf);
    return nf;
}

NormalForm classify_dim2(const MatPair& pair) {
    if (pair.n != 2) throw ValidationError("classify_dim2 needs n = 2");
    pair.validate();
    NormalForm nf;
    if (!mat_is_zero(pair.U)) {
        Scalar theta = proportionality(pair.V, pair.U);
        nf.tag = NormalForm::Tag::Dim2Cyclic;
        nf.pencil = {theta, Scalar(1)};
        verify_against_canonical(pair, nf);
        return nf;
    }
    if (!mat_is_zero(pair.V)) {
        nf.tag = NormalForm::Tag::Dim2Cyclic;
        nf.pencil = {Scalar(1), Scalar(0)};
        verify_against_canonical(pair, nf);
        return nf;
    }
    nf.tag = NormalForm::Tag::Decomposable;
    nf.summands = {NormalForm{}, NormalForm{}};
    return nf;
}

NormalForm classify_pair(const MatPair& pair) {
    switch (pair.n) {
        case 1:
            pair.validate();
            return NormalForm{};
        case 2: return classify_dim2(pair);
        case 3: return classify_dim3(pair);
        default:
            throw ValidationError(
                "lengths above three are not classified (the module category is representation wild)");
    }
}

MatPair matlis_dual(const MatPair& pair) {
    pair.validate();
    return MatPair{pair.n, mat_transpose(pair.U), mat_transpose(pair.V)};
}

bool is_isomorphic(const MatPair& a, const MatPair& b) {
    if (a.n != b.n) return false;
    long n = a.n;
    size_t nn = static_cast<size_t>(n) * static_cast<size_t>(n);
    // Rows: the entries of S U_a - U_b S and S V_a - V_b S, linear in S.
    Matrix system(2 * nn, std::vector<Scalar>(nn, Scalar(0)));
    auto entry = [n](long i, long j) { return static_cast<size_t>(i * n + j); };
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            for (long k = 0; k < n; ++k) {
                // (S X_a)_{ij} = sum_k S_{ik} (X_a)_{kj};  (X_b S)_{ij} = sum_k (X_b)_{ik} S_{kj}
                system[entry(i, j)][entry(i, k)] += a.U[static_cast<size_t>(k)][static_cast<size_t>(j)];
                system[entry(i, j)][entry(k, j)] -= b.U[static_cast<size_t>(i)][static_cast<size_t>(k)];
                system[nn + entry(i, j)][entry(i, k)] += a.V[static_cast<size_t>(k)][static_cast<size_t>(j)];
                system[nn + entry(i, j)][entry(k, j)] -= b.V[static_cast<size_t>(i)][static_cast<size_t>(k)];
            }
        }
    // Kernel basis by Gauss-Jordan.
    Matrix m = system;
    size_t rows = m.size(), cols = nn;
    std::vector<long> pivot_of_col(cols, -1);
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = row;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[row]);
        Scalar inv = m[row][col].inverse();
        for (size_t j = 0; j < cols; ++j) m[row][j] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            Scalar factor = m[r][col];
            for (size_t j = 0; j < cols; ++j) m[r][j] -= factor * m[row][j];
        }
        pivot_of_col[col] = static_cast<long>(row);
        ++row;
    }
    std::vector<std::vector<Scalar>> kernel;
    for (size_t
             free_col = 0;
         free_col < cols; ++free_col) {
        if (pivot_of_col[free_col] >= 0) continue;
        std::vector<Scalar> vec(cols, Scalar(0));
        vec[free_col] = Scalar(1);
        for (size_t col = 0; col < cols; ++col)
            if (pivot_of_col[col] >= 0) vec[col] = -m[static_cast<size_t>(pivot_of_col[col])][free_col];
        kernel.push_back(std::move(vec));
    }
    if (kernel.empty()) return false;

    auto det_of_combination = [&](const std::vector<Scalar>& weights) {
        Matrix S(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n), Scalar(0)));
        for (size_t k = 0; k < kernel.size(); ++k) {
            if (weights[k].is_zero()) continue;
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j)
                    S[static_cast<size_t>(i)][static_cast<size_t>(j)] += weights[k] * kernel[k][entry(i, j)];
        }
        return mat_det(S);
    };

    std::mt19937 rng(0x5eed);
    std::vector<Scalar> weights(kernel.size(), Scalar(0));
    for (int attempt = 0; attempt < 40; ++attempt) {
        for (auto& w : weights) w = Scalar(Rat(static_cast<long>(rng() % 19) - 9));
        if (!det_of_combination(weights).is_zero()) return true;
    }
    // Exhaustive grid {0..n}^k: the determinant is a polynomial of degree
    // at most n in each weight, so a nonzero polynomial hits a nonzero
    // value on this grid.
    std::vector<long> idx(kernel.size(), 0);
    while (true) {
        for (size_t k = 0; k < kernel.size(); ++k) weights[k] = Scalar(Rat(idx[k]));
        if (!det_of_combination(weights).is_zero()) return true;
        size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] > n) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == idx.size()) break;
    }
    return false;
}

std::string IdealNF::str() const {
    if (is_monomial_pair) return "J_" + std::to_string(n);
    return "I_(" + std::to_string(n) + ", " + theta.str() + ")";
}

IdealNF ideal_normal_form(const std::vector<Laurent>& gens) {
    std::vector<Laurent> nonzero;
    for (const auto& g : gens) {
        if (g.is_zero() || g.is_zero_known()) continue;
        if (g.val() < 2) throw ValidationError("ideal generators must have valuation >= 2");
        nonzero.push_back(g);
    }
    if (nonzero.empty()) throw ValidationError("the zero ideal has no normal form");
    long m = nonzero.front().val();
    for (const auto& g : nonzero) m = std::min(m, g.val());
    long needed = 2 * m + 4;
    long window = Laurent::EXACT;
    for (const auto& g : nonzero) window = std::min(window, g.prec());
    if (window != Laurent::EXACT && window < needed)
        throw InconclusivePrecision("ideal normal form needs truncation through t^" + std::to_string(needed),
                                    window);
    long hi = std::min<long>(needed, window == Laurent::EXACT ? needed : window);
    // Row space of { t^j g_i : j in {0, 2, 3, 4, ...} } on the window [m, hi).
    std::vector<std::vector<Scalar>> rows;
    for (const auto& g : nonzero) {
        for (long j = 0; j + g.val() < hi; ++j) {
            if (j == 1) continue;  // t is not in k[[t^2, t^3]]
            std::vector<Scalar> row(static_cast<size_t>(hi - m), Scalar(0));
            for (long e = g.val(); e + j < hi; ++e) row[static_cast<size_t>(e + j - m)] = g.coeff(e);
            rows.push_back(std::move(row));
        }
    }
    // Echelonize by leading exponent.
    size_t cols = static_cast<size_t>(hi - m);
    std::vector<std::optional<std::vector<Scalar>>> pivot_rows(cols);
    for (auto row : rows) {
        for (size_t lead = 0; lead < cols; ++lead) {
            if (row[lead].is_zero()) continue;
            if (!pivot_rows[lead]) {
                Scalar inv = row[lead].inverse();
                for (auto& x : row) x *= inv;
                pivot_rows[lead] = std::move(row);
                break;
            }
            Scalar factor = row[lead];
            const auto& p = *pivot_rows[lead];
            for (size_t j = lead; j < cols; ++j) row[j] -= factor * p[j];
        }
    }
    if (!pivot_rows[0])
        throw ConsistencyError("no element of minimal multiplicity survived reduction");
    if (pivot_rows[1]) {
        // An element of multiplicity m+1 exists: I = <t^m, t^{m+1}> = J_{m-2}.
        return IdealNF{true, m - 2, Scalar(0)};
    }
    // Principal case: theta is the t^{m+1} coefficient of the minimal
    // element (well-defined because units of the ring have no linear term).
    const auto& lead = *pivot_rows[0];
    return IdealNF{false, m - 2, lead[1]};
}

Rank3Sheaf sheaf_of_torsion3(const NormalForm& nf) {
    using Tag = NormalForm::Tag;
    Rank3Sheaf out;
    switch (nf.tag) {
        case Tag::MTheta:
            out.kind = Rank3Sheaf::Kind::EQTheta;
            out.theta = nf.theta;
            out.det_point = {nf.theta, Scalar(1), nf.theta.pow(3)};
            out.description = "E(3, " + nf.theta.str() + ") with determinant point (" + nf.theta.str() +
                              " : 1 : " + nf.theta.pow(3).str() + ")";
            return out;
        case Tag::N:
            out.kind = Rank3Sheaf::Kind::V;
            out.description = "V (not locally free)";
            return out;
        case Tag::NSharp:
            out.kind = Rank3Sheaf::Kind::VDagger;
            out.description = "V-dagger (not locally free)";
            return out;
        case Tag::Decomposable: {
            out.kind = Rank3Sheaf::Kind::Sum;
            std::ostringstream os;
            for (size_t i = 0; i < nf.summands.size(); ++i) {
                if (i) os << " + ";
                const auto& part = nf.summands[i];
                if (part.tag == Tag::Trivial1)
                    os << "S";
                else if (part.tag == Tag::Dim2Cyclic)
                    os << "B_(" << part.pencil.first.str() << " : " << part.pencil.second.str() << ")";
                else
                    os << part.str();
            }
            out.description = os.str();
            return out;
        }
        default:
            throw ValidationError("rank-three labels need a length-three normal form");
    }
}

Rank3Sheaf::Kind dual_label(Rank3Sheaf::Kind k) {
    switch (k) {
        case Rank3Sheaf::Kind::V: return Rank3Sheaf::Kind::VDagger;
        case Rank3Sheaf::Kind::VDagger: return Rank3Sheaf::Kind::V;
        default: return k;
    }
}

}  // namespace odospec
