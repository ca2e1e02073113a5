#include <websmith/rank.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace websmith {

int bol_bound(int d) { return (d - 1) * (d - 2) / 2; }

namespace {

// Coefficients of (x - x0)^i (y - y0)^j pick up h^(i+j) under x - x0 = h X.
Jet2 rescale(const Jet2& a, double h) {
    Jet2 r = a;
    double f = 1.0;
    for (int n = 0; n <= a.order(); ++n) {
        for (int j = 0; j <= n; ++j) r(n - j, j) *= f;
        f *= h;
    }
    return r;
}

// Root-test growth rate of the homogeneous parts relative to the linear part.
double growth_rate(const Jet2& t) {
    const double g1 = t.degree_norm(1);
    double rho = 0.0;
    for (int n = 2; n <= t.order(); ++n) {
        const double gn = t.degree_norm(n);
        if (gn > 0.0) rho = std::max(rho, std::pow(gn / g1, 1.0 / (n - 1)));
    }
    return rho;
}

}  // namespace

ConstraintMatrix constraint_matrix(const Web& web, int degree, int taylor_order) {
    const int n_deg = degree;
    const int m = taylor_order < 0 ? degree : taylor_order;
    if (n_deg < 1) throw StructuralError("constraint_matrix: degree must be >= 1");
    if (m < n_deg) throw StructuralError("constraint_matrix: Taylor order must be >= degree");

    const int d = web.size();
    const Point base = web.base();

    std::vector<Jet2> t;
    t.reserve(static_cast<std::size_t>(d));
    double rho = 0.0;
    for (const Foliation& f : web.foliations()) {
        Jet2 j = f.jet(base, m);
        j(0, 0) = 0.0;
        if (j.degree_norm(1) == 0.0) throw TransversalityError("foliation '" + f.name() + "' is singular at base");
        rho = std::max(rho, growth_rate(j));
        t.push_back(std::move(j));
    }

    ConstraintMatrix cm;
    cm.degree = n_deg;
    cm.taylor_order = m;
    cm.foliations = d;
    cm.coordinate_scale = rho > 0.5 ? 0.5 / rho : 1.0;

    const int rows = static_cast<int>(Jet2::size_for(m)) - 1;
    const int cols = d * n_deg;
    cm.matrix = Eigen::MatrixXcd::Zero(rows, cols);
    cm.column_scales.assign(static_cast<std::size_t>(cols), 1.0);

    for (int j = 0; j < d; ++j) {
        Jet2 tj = rescale(t[static_cast<std::size_t>(j)], cm.coordinate_scale);
        const double s = tj.degree_norm(1);
        cm.t_scales.push_back(s);
        tj /= s;
        Jet2 power = tj;
        for (int n = 1; n <= n_deg; ++n) {
            const int col = j * n_deg + (n - 1);
            for (int r = 0; r < rows; ++r) cm.matrix(r, col) = power.raw()[static_cast<std::size_t>(r + 1)];
            const double norm = cm.matrix.col(col).norm();
            if (norm > 0.0) {
                cm.matrix.col(col) /= norm;
                cm.column_scales[static_cast<std::size_t>(col)] = norm;
            }
            if (n < n_deg) power = power * tj;
        }
    }
    return cm;
}

namespace {

struct Svd {
    Eigen::VectorXd sigma;
    Eigen::MatrixXcd v;
};

Svd decompose(const ConstraintMatrix& cm) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cm.matrix, Eigen::ComputeFullV);
    return {svd.singularValues(), svd.matrixV()};
}

KernelResult kernel_from(const Svd& svd, int cols, double svd_gap, double min_gap_ratio) {
    KernelResult k;
    const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
    int kept = 0;
    for (Eigen::Index i = 0; i < svd.sigma.size(); ++i) {
        k.singular_values.push_back(smax > 0.0 ? svd.sigma(i) / smax : 0.0);
        if (smax > 0.0 && svd.sigma(i) > svd_gap * smax) ++kept;
    }
    k.dimension = cols - kept;
    if (kept == 0 || kept == svd.sigma.size()) {
        k.gap_ratio = std::numeric_limits<double>::infinity();
    } else {
        const double discarded = svd.sigma(kept);
        k.gap_ratio = discarded > 0.0 ? svd.sigma(kept - 1) / discarded : std::numeric_limits<double>::infinity();
    }
    k.gap_ok = k.gap_ratio >= min_gap_ratio;
    return k;
}

RelationBasis basis_from(const ConstraintMatrix& cm, const Svd& svd, const KernelResult& k) {
    RelationBasis b;
    b.degree = cm.degree;
    b.singular_values = k.singular_values;
    const int cols = static_cast<int>(cm.matrix.cols());
    for (int c = cols - k.dimension; c < cols; ++c) {
        const Eigen::VectorXcd v = svd.v.col(c);
        b.normalized.push_back(v);
        Relation rel(static_cast<std::size_t>(cm.foliations));
        double biggest = 0.0;
        for (int j = 0; j < cm.foliations; ++j) {
            auto& coeffs = rel[static_cast<std::size_t>(j)];
            const double s = cm.t_scales[static_cast<std::size_t>(j)];
            double sn = 1.0;
            for (int n = 1; n <= cm.degree; ++n) {
                sn *= s;
                const int col = j * cm.degree + (n - 1);
                coeffs.push_back(v(col) / (cm.column_scales[static_cast<std::size_t>(col)] * sn));
                // s / h is the size of du_j in original coordinates.
                biggest = std::max(biggest, std::abs(coeffs.back()) * std::pow(s / cm.coordinate_scale, n));
            }
        }
        if (biggest > 0.0)
            for (auto& coeffs : rel)
                for (cplx& c0 : coeffs) c0 /= biggest;
        b.relations.push_back(std::move(rel));
    }
    return b;
}

}  // namespace

KernelResult kernel_dimension(const ConstraintMatrix& cm, double svd_gap, double min_gap_ratio) {
    return kernel_from(decompose(cm), static_cast<int>(cm.matrix.cols()), svd_gap, min_gap_ratio);
}

RelationBasis relation_basis(const ConstraintMatrix& cm, double svd_gap) {
    const Svd svd = decompose(cm);
    return basis_from(cm, svd, kernel_from(svd, static_cast<int>(cm.matrix.cols()), svd_gap, 0.0));
}

RankReport rank_estimate(const Web& web, const RankOptions& options) {
    if (options.degrees.empty()) throw StructuralError("rank_estimate: no degrees");
    if (!std::is_sorted(options.degrees.begin(), options.degrees.end()) || options.degrees.front() < 1)
        throw StructuralError("rank_estimate: degrees must be ascending and positive");
    if (!(options.svd_gap > 0.0)) throw StructuralError("rank_estimate: svd_gap must be positive");

    RankReport r;
    r.foliations = web.size();
    r.bol_bound = bol_bound(web.size());
    r.degrees = options.degrees;

    for (std::size_t i = 0; i < options.degrees.size(); ++i) {
        const ConstraintMatrix cm = constraint_matrix(web, options.degrees[i]);
        const Svd svd = decompose(cm);
        const KernelResult k = kernel_from(svd, static_cast<int>(cm.matrix.cols()), options.svd_gap, options.min_gap_ratio);
        r.kernel_dims.push_back(k.dimension);
        r.gap_ratios.push_back(k.gap_ratio);
        r.gaps_ok = r.gaps_ok && k.gap_ok;
        if (i + 1 == options.degrees.size()) r.basis = basis_from(cm, svd, k);
    }

    for (std::size_t i = 1; i < r.degrees.size(); ++i) {
        if (r.degrees[i - 1] >= r.foliations - 2 && r.kernel_dims[i] > r.kernel_dims[i - 1]) r.monotone = false;
    }
    r.rank = r.kernel_dims.back();
    const bool agree = r.kernel_dims.size() >= 2 && r.kernel_dims[r.kernel_dims.size() - 2] == r.rank;
    if (r.rank > r.bol_bound) {
        r.bound_exceeded = true;
        r.rank = r.bol_bound;
    }
    r.stabilized = agree && r.gaps_ok && r.monotone && !r.bound_exceeded;
    return r;
}

double relation_residual(const Web& web, const Relation& relation, const std::vector<Point>& samples) {
    if (relation.size() != web.foliations().size())
        throw StructuralError("relation_residual: relation has wrong number of foliations");
    std::vector<cplx> u0;
    for (const Foliation& f : web.foliations()) u0.push_back(f.value(web.base()));
    double worst = 0.0;
    for (const Point& p : samples) {
        cplx total = 0.0;
        for (std::size_t j = 0; j < relation.size(); ++j) {
            const cplx t = web.foliations()[j].value(p) - u0[j];
            cplx acc = 0.0;
            const auto& c = relation[j];
            for (std::size_t n = c.size(); n-- > 0;) acc = (acc + c[n]) * t;
            total += acc;
        }
        worst = std::max(worst, std::abs(total));
    }
    return worst;
}

nlohmann::json to_json(const RankReport& r, int tail) {
    using nlohmann::json;
    json j;
    j["rank"] = r.rank;
    j["bol_bound"] = r.bol_bound;
    j["foliations"] = r.foliations;
    j["degrees"] = r.degrees;
    j["kernel_dims"] = r.kernel_dims;
    json gaps = json::array();
    for (double g : r.gap_ratios) gaps.push_back(std::isfinite(g) ? json(g) : json("inf"));
    j["gap_ratios"] = gaps;
    j["stabilized"] = r.stabilized;
    j["monotone"] = r.monotone;
    j["bound_exceeded"] = r.bound_exceeded;
    const auto& sv = r.basis.singular_values;
    const std::size_t start = sv.size() > static_cast<std::size_t>(tail) ? sv.size() - static_cast<std::size_t>(tail) : 0;
    j["singular_value_tail"] = std::vector<double>(sv.begin() + static_cast<std::ptrdiff_t>(start), sv.end());
    json rels = json::array();
    for (const Relation& rel : r.basis.relations) {
        json per = json::array();
        for (const auto& coeffs : rel) {
            json cs = json::array();
            for (const cplx& c : coeffs) cs.push_back(json::array({c.real(), c.imag()}));
            per.push_back(cs);
        }
        rels.push_back(per);
    }
    j["relations"] = rels;
    return j;
}

}  // namespace websmith
