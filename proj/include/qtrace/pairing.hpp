#pragma once

// The hermitian pairing on curve functions as a limit of TQFT pairings:
//     <x, y> = lim_{r -> oo} r^(-d) <phi_p(x), phi_p(y)>_p.
// Exact skein products are available on the torus and, in higher genus, for
// multicurves adapted to one pants decomposition (stacking them creates no
// crossings, so the product is the union m + n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qtrace/asymptotics.hpp"
#include "qtrace/error.hpp"
#include "qtrace/spine.hpp"
#include "qtrace/torus_skein.hpp"

namespace qtrace {

inline double adapted_pair_level(const SpineGraph& g, const AdaptedMulticurve& m, const AdaptedMulticurve& n,
                                 const Level& level, TraceMethod method = TraceMethod::contract) {
    check_multicurve(g, m);
    check_multicurve(g, n);
    return trace_level(g, m + n, level, method).value;
}

inline Estimate adapted_pair_limit(const SpineGraph& g, const AdaptedMulticurve& m, const AdaptedMulticurve& n,
                                   const QuadratureSpec& quad) {
    check_multicurve(g, m);
    check_multicurve(g, n);
    return limit_bracket(g, m + n, quad);
}

// ---------------------------------------------------------------------------
// Gram matrices

struct GramReport {
    std::vector<std::string> labels;
    std::optional<int> r;
    std::vector<std::vector<std::complex<double>>> level_gram;
    std::vector<std::vector<double>> limit_gram;
    /// quadrature error per limit entry (zero when exact)
    std::vector<std::vector<double>> limit_error;
    std::vector<double> level_eigenvalues;
    std::vector<double> limit_eigenvalues;
    /// max |G - G^H| of the level Gram
    double hermitian_defect = 0.0;
    /// max |G - G^T| of the limit Gram
    double symmetry_defect = 0.0;
    /// max(0, -lambda_min) / max(1, max |lambda|) of the limit Gram
    double psd_defect = 0.0;
    /// same quantity for the level Gram (only meaningful if r is set)
    double level_psd_defect = 0.0;

    static constexpr double tolerance = 1e-9;
    bool hermitian() const { return hermitian_defect <= tolerance && symmetry_defect <= tolerance; }
    bool limit_psd() const { return psd_defect <= tolerance; }
};

namespace detail {

inline std::vector<double> hermitian_eigenvalues(const std::vector<std::vector<std::complex<double>>>& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    // symmetrize; the defect is reported separately
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline std::vector<double> symmetric_eigenvalues(const std::vector<std::vector<double>>& m) {
    std::vector<std::vector<std::complex<double>>> c(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        c[i].assign(m[i].begin(), m[i].end());
    return hermitian_eigenvalues(c);
}

inline double psd_defect(const std::vector<double>& eigenvalues) {
    if (eigenvalues.empty())
        return 0.0;
    double scale = 1.0;
    for (double e : eigenvalues)
        scale = std::max(scale, std::abs(e));
    const double lo = *std::min_element(eigenvalues.begin(), eigenvalues.end());
    return std::max(0.0, -lo) / scale;
}

inline void require_basis(const std::vector<std::string>& labels) {
    if (labels.empty())
        throw input_error("gram_matrix: basis is empty");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
        throw input_error("gram_matrix: basis labels must be pairwise distinct");
}

inline void finish_report(GramReport& rep) {
    const std::size_t n = rep.labels.size();
    if (rep.r) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rep.hermitian_defect =
                    std::max(rep.hermitian_defect, std::abs(rep.level_gram[i][j] - std::conj(rep.level_gram[j][i])));
        rep.level_eigenvalues = hermitian_eigenvalues(rep.level_gram);
        rep.level_psd_defect = psd_defect(rep.level_eigenvalues);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rep.symmetry_defect = std::max(rep.symmetry_defect, std::abs(rep.limit_gram[i][j] - rep.limit_gram[j][i]));
    rep.limit_eigenvalues = symmetric_eigenvalues(rep.limit_gram);
    rep.psd_defect = psd_defect(rep.limit_eigenvalues);
}

} // namespace detail

/// Gram matrices of torus skein elements: at level r (if given) and in the
/// limit, where the entries are exact integers.
inline GramReport gram_torus(const std::vector<SkeinElementT>& basis, std::vector<std::string> labels,
                             std::optional<Level> level) {
    if (labels.size() != basis.size())
        throw input_error("gram_matrix: one label per basis element required");
    detail::require_basis(labels);
    const std::size_t n = basis.size();
    GramReport rep;
    rep.labels = std::move(labels);
    rep.limit_gram.assign(n, std::vector<double>(n, 0.0));
    rep.limit_error.assign(n, std::vector<double>(n, 0.0));
    if (level) {
        rep.r = level->r();
        rep.level_gram.assign(n, std::vector<std::complex<double>>(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            rep.limit_gram[i][j] = pair_limit_torus(basis[i], basis[j]);
            if (level)
                rep.level_gram[i][j] = pair_level_torus(basis[i], basis[j], *level);
        }
    }
    detail::finish_report(rep);
    return rep;
}

/// Gram matrices of multicurves adapted to the pants decomposition of `g`.
/// All limit entries are integrated on one common set of quadrature points,
/// so the limit Gram is a positively weighted sum of rank-one matrices.
inline GramReport gram_adapted(const SpineGraph& g, const std::vector<AdaptedMulticurve>& basis,
                               std::optional<Level> level, const QuadratureSpec& quad) {
    std::vector<std::string> labels;
    for (const auto& m : basis) {
        check_multicurve(g, m);
        labels.push_back(multicurve_label(g, m));
    }
    detail::require_basis(labels);
    const std::size_t n = basis.size();
    GramReport rep;
    rep.labels = labels;
    rep.limit_gram.assign(n, std::vector<double>(n, 0.0));
    rep.limit_error.assign(n, std::vector<double>(n, 0.0));

    std::vector<double> f(n);
    auto est = integrate_over_polytope(
        g, n * n,
        [&](std::span<const double> tau, std::span<double> out) {
            for (std::size_t i = 0; i < n; ++i)
                f[i] = curve_function(basis[i], tau);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out[i * n + j] = f[i] * f[j];
        },
        quad);
    const int shift = g.genus() - g.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            rep.limit_gram[i][j] = std::ldexp(est[i * n + j].value, shift);
            rep.limit_error[i][j] = std::ldexp(est[i * n + j].error, shift);
        }
    }
    if (level) {
        rep.r = level->r();
        rep.level_gram.assign(n, std::vector<std::complex<double>>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rep.level_gram[i][j] = adapted_pair_level(g, basis[i], basis[j], *level);
    }
    detail::finish_report(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic faithfulness on the torus

struct FaithfulnessRow {
    int r = 0;
    int p = 0;
    /// <phi_p(w), phi_p(w)>_p / r
    double normalized = 0.0;
};

struct FaithfulnessReport {
    Unimodular matrix = Unimodular::identity();
    SkeinElementT v;
    SkeinElementT w;
    std::vector<FaithfulnessRow> rows;
    double limit = 0.0;
    double tolerance = 0.0;
    /// smallest tested r whose normalized norm exceeds the tolerance
    std::optional<int> first_r;
};

/// w = M.v - v; a nonzero <w, w> in the limit forces phi_p(Mv) != phi_p(v),
/// hence rho_p(M) != id, for all large r.
inline FaithfulnessReport faithfulness_experiment(const Unimodular& m, const SkeinElementT& v,
                                                  const std::vector<Level>& levels, double tolerance) {
    FaithfulnessReport rep;
    rep.matrix = m;
    rep.v = v;
    rep.w = mcg_act(m, v) - v;
    rep.tolerance = tolerance;
    rep.limit = pair_limit_torus(rep.w, rep.w);
    for (const Level& level : levels) {
        FaithfulnessRow row;
        row.r = level.r();
        row.p = level.p();
        row.normalized = rep.w.is_zero() ? 0.0 : pair_level_torus(rep.w, rep.w, level).real() / level.r();
        if (!std::isfinite(row.normalized))
            throw numerical_error("faithfulness_experiment: non-finite norm at r=" + std::to_string(level.r()));
        if (!rep.first_r && row.normalized > tolerance)
            rep.first_r = row.r;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace qtrace
