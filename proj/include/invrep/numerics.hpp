#pragma once

#include "invrep/config.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include <algorithm>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace invrep::numerics {

using Cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
// Orthonormal set of vectors, one per column.
using SubspaceBasis = Eigen::MatrixXcd;

// Square operator in coordinate format.
struct SparseOp {
    Eigen::Index dim = 0;
    struct Entry {
        Eigen::Index row, col;
        Cplx v;
    };
    std::vector<Entry> entries;

    void add(Eigen::Index r, Eigen::Index c, Cplx v) { entries.push_back({r, c, v}); }

    // Sort by (row, col), combine duplicates, drop exact zeros.
    void canonicalize() {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        std::vector<Entry> out;
        out.reserve(entries.size());
        for (const auto& e : entries) {
            if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
                out.back().v += e.v;
            else
                out.push_back(e);
        }
        std::erase_if(out, [](const Entry& e) { return e.v == Cplx(0.0, 0.0); });
        entries = std::move(out);
    }

    bool is_diagonal() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const Entry& e) { return e.row == e.col; });
    }

    Eigen::SparseMatrix<Cplx> to_eigen() const {
        std::vector<Eigen::Triplet<Cplx>> trip;
        trip.reserve(entries.size());
        for (const auto& e : entries) trip.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.v);
        Eigen::SparseMatrix<Cplx> m(dim, dim);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }

    CMatrix to_dense() const {
        check_entries(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim), "SparseOp::to_dense");
        CMatrix m = CMatrix::Zero(dim, dim);
        for (const auto& e : entries) m(e.row, e.col) += e.v;
        return m;
    }

    SparseOp adjoint() const {
        SparseOp a;
        a.dim = dim;
        a.entries.reserve(entries.size());
        for (const auto& e : entries) a.entries.push_back({e.col, e.row, std::conj(e.v)});
        return a;
    }

    static SparseOp identity(Eigen::Index dim) {
        SparseOp op;
        op.dim = dim;
        for (Eigen::Index i = 0; i < dim; ++i) op.add(i, i, 1.0);
        return op;
    }
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    check_entries(static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows()),
                  static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols()), "kron");
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CVector kron_vec(const CVector& a, const CVector& b) {
    check_entries(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()), "kron_vec");
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// Row-major reshape of a bipartite vector into its dimA x dimB coefficient matrix.
inline Eigen::Map<const Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
as_bipartite(const CVector& v, Eigen::Index dimA, Eigen::Index dimB) {
    if (v.size() != dimA * dimB)
        throw std::invalid_argument("bipartite reshape: length " + std::to_string(v.size()) +
                                    " != " + std::to_string(dimA) + "*" + std::to_string(dimB));
    return {v.data(), dimA, dimB};
}

// Reduced state rho_A = tr_B |v><v| of a (not necessarily normalized) vector.
inline CMatrix partial_trace_b(const CVector& v, Eigen::Index dimA, Eigen::Index dimB) {
    auto u = as_bipartite(v, dimA, dimB);
    return u * u.adjoint();
}

// tr_B |u><v| ; cross_reduce(u,u) == partial_trace_b(u).
inline CMatrix cross_reduce(const CVector& u, const CVector& v, Eigen::Index dimA, Eigen::Index dimB) {
    auto mu = as_bipartite(u, dimA, dimB);
    auto mv = as_bipartite(v, dimA, dimB);
    return mu * mv.adjoint();
}

// Kernel of a dense matrix: columns of V whose singular values fall below
// tol * scale, scale defaulting to the largest singular value. A caller that
// restricts an operator to a subspace passes the unrestricted operator norm as
// the scale, so an (almost) annihilated subspace is recognized as kernel.
inline CMatrix dense_kernel(const CMatrix& m, double tol, double scale = 0.0) {
    if (m.rows() == 0) return CMatrix::Identity(m.cols(), m.cols());
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = tol * std::max(top, scale);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

// Largest singular value of a sparse operator by power iteration on A^H A
// (a threshold scale; a few percent accuracy is plenty).
inline double sparse_op_norm(const SparseOp& op, int iters = 60) {
    if (op.entries.empty()) return 0.0;
    auto m = op.to_eigen();
    CVector v(op.dim);
    // deterministic non-uniform start avoids symmetry traps
    for (Eigen::Index i = 0; i < op.dim; ++i)
        v(i) = Cplx(1.0 + 0.37 * std::sin(0.7 * i + 0.3), 0.11 * std::cos(1.3 * i));
    v /= v.norm();
    for (int it = 0; it < iters; ++it) {
        CVector w = m.adjoint() * (m * v);
        const double nw = w.norm();
        if (nw == 0) return 0.0;
        v = w / nw;
    }
    return (m * v).norm();
}

// Orthonormal basis of the joint kernel of ops, all square of size dim.
// Sequential refinement: leading diagonal operators reduce to coordinate
// selection (their singular values are the |diagonal| moduli); each remaining
// operator is restricted to the current basis and its kernel split off by SVD.
inline SubspaceBasis null_space_orthonormal(std::span<const SparseOp> ops, Eigen::Index dim,
                                            double tol = 1e-9) {
    if (tol <= 0) throw std::invalid_argument("null_space_orthonormal: tol must be positive");
    check_entries(static_cast<std::size_t>(dim), 1, "null_space_orthonormal");
    for (const auto& op : ops)
        if (op.dim != dim) throw std::invalid_argument("null_space_orthonormal: operator size mismatch");

    std::vector<Eigen::Index> selection(static_cast<std::size_t>(dim));
    std::iota(selection.begin(), selection.end(), 0);
    bool selecting = true;
    CMatrix basis;

    auto materialize = [&]() {
        basis = CMatrix::Zero(dim, static_cast<Eigen::Index>(selection.size()));
        for (std::size_t c = 0; c < selection.size(); ++c) basis(selection[c], static_cast<Eigen::Index>(c)) = 1.0;
        selecting = false;
    };

    for (const auto& op : ops) {
        if (selecting && op.is_diagonal()) {
            std::vector<Cplx> diag(static_cast<std::size_t>(dim), Cplx(0));
            for (const auto& e : op.entries) diag[static_cast<std::size_t>(e.row)] += e.v;
            double mx = 0;
            for (Eigen::Index i : selection) mx = std::max(mx, std::abs(diag[static_cast<std::size_t>(i)]));
            const double cut = mx * tol;
            std::vector<Eigen::Index> keep;
            for (Eigen::Index i : selection)
                if (std::abs(diag[static_cast<std::size_t>(i)]) <= cut) keep.push_back(i);
            selection = std::move(keep);
            if (selection.empty()) return CMatrix::Zero(dim, 0);
            continue;
        }
        if (selecting) materialize();
        if (basis.cols() == 0) return basis;
        check_entries(static_cast<std::size_t>(dim), static_cast<std::size_t>(basis.cols()),
                      "null_space_orthonormal restriction");
        CMatrix restricted = op.to_eigen() * basis;
        CMatrix k = dense_kernel(restricted, tol, sparse_op_norm(op));
        basis = basis * k;
    }
    if (selecting) materialize();
    return basis;
}

inline SubspaceBasis null_space_orthonormal(const std::vector<SparseOp>& ops, Eigen::Index dim,
                                            double tol = 1e-9) {
    return null_space_orthonormal(std::span<const SparseOp>(ops.data(), ops.size()), dim, tol);
}

} // namespace invrep::numerics
