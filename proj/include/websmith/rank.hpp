#pragma once

// Abelian relations of a web by truncated Taylor expansion.
//
// For degree N we look for polynomials f_j(t) = sum_{n=1..N} c_{j,n} t^n in
// t_j = u_j - u_j(base) with sum_j f_j(t_j) vanishing to Taylor order M at
// the base. With M = N this is exactly the space of N-jets of abelian
// relations; its dimension is non-increasing in N once N >= d - 2 and equals
// the rank of the web for N large.

#include <websmith/webs.hpp>

#include <Eigen/Dense>
#include <json.hpp>

#include <vector>

namespace websmith {

/// Bol bound (d - 1)(d - 2) / 2.
int bol_bound(int d);

struct ConstraintMatrix {
    Eigen::MatrixXcd matrix;             // rows (i, j), 1 <= i + j <= M; columns (j, n), n fastest
    std::vector<double> column_scales;   // norm of each raw column before normalization
    std::vector<double> t_scales;        // t_j is divided by this before taking powers
    double coordinate_scale = 1.0;       // x - x0 = h X, y - y0 = h Y
    int degree = 0;
    int taylor_order = 0;
    int foliations = 0;
};

/// M defaults to N. Requires M >= N >= 1.
ConstraintMatrix constraint_matrix(const Web& web, int degree, int taylor_order = -1);

using Relation = std::vector<std::vector<cplx>>;  // per foliation: c_1 .. c_N

struct RelationBasis {
    int degree = 0;
    /// Polynomial coefficients of each relation, scaled so the largest
    /// |c_{j,n}| g_j^n is one, g_j = max(|du_j/dx|, |du_j/dy|) at base.
    std::vector<Relation> relations;
    /// The same relations as orthonormal vectors in normalized column space.
    std::vector<Eigen::VectorXcd> normalized;
    /// Singular values divided by the largest one.
    std::vector<double> singular_values;
};

struct KernelResult {
    int dimension = 0;
    std::vector<double> singular_values;  // relative to the largest
    double gap_ratio = 0.0;               // smallest kept / largest discarded (inf if none discarded)
    bool gap_ok = true;
};

KernelResult kernel_dimension(const ConstraintMatrix& cm, double svd_gap = 1e-8, double min_gap_ratio = 1e3);

/// Kernel vectors converted back to polynomial coefficients.
RelationBasis relation_basis(const ConstraintMatrix& cm, double svd_gap = 1e-8);

struct RankOptions {
    std::vector<int> degrees{6, 10, 14};
    double svd_gap = 1e-8;
    double min_gap_ratio = 1e3;
};

struct RankReport {
    int rank = 0;
    int bol_bound = 0;
    int foliations = 0;
    std::vector<int> degrees;
    std::vector<int> kernel_dims;
    std::vector<double> gap_ratios;
    bool stabilized = false;   // last two degrees agree and every spectral gap is clean
    bool gaps_ok = true;
    bool monotone = true;      // kernel dims non-increasing over degrees >= d - 2
    bool bound_exceeded = false;
    RelationBasis basis;       // at the largest degree
};

RankReport rank_estimate(const Web& web, const RankOptions& options = {});

/// max over samples of |sum_j f_j(u_j(p) - u_j(base))|.
double relation_residual(const Web& web, const Relation& relation, const std::vector<Point>& samples);

nlohmann::json to_json(const RankReport& report, int tail = 8);

}  // namespace websmith
