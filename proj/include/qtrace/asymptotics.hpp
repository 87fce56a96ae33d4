#pragma once

// Trace functions tr_p(gamma) of adapted multicurves as coloring sums, the
// moment polytope U_g, the limit functional
//     <gamma> = 2^(g-d) * integral over U_g of prod_e (-2 cos(pi tau_e))^(m_e),
// the cell-packing check behind the Riemann-sum argument, and convergence
// tables of tr_p(gamma) / r^d against <gamma>.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "qtrace/contraction.hpp"
#include "qtrace/error.hpp"
#include "qtrace/qnum.hpp"
#include "qtrace/spine.hpp"
#include "qtrace/summation.hpp"

namespace qtrace {

/// (-2 cos((j+1) pi / r))^m, the value of m parallel copies of a meridian
/// around an edge colored j.
inline double meridian_weight(const Level& level, int color, int copies) {
    const double x = -2.0 * std::cos(boost::math::constants::pi<double>() * (color + 1) / level.r());
    double out = 1.0;
    for (int k = 0; k < copies; ++k)
        out *= x;
    return out;
}

inline std::vector<std::vector<double>> meridian_weights(const SpineGraph& g, const AdaptedMulticurve& curve,
                                                         const Level& level) {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(g.num_edges()));
    for (int e = 0; e < g.num_edges(); ++e)
        for (int j = 0; j <= level.max_color(); ++j)
            w[static_cast<std::size_t>(e)].push_back(
                meridian_weight(level, j, curve.multiplicities[static_cast<std::size_t>(e)]));
    return w;
}

// ---------------------------------------------------------------------------
// Trace at finite level

enum class TraceMethod { enumerate, contract };

inline TraceMethod parse_trace_method(const std::string& s) {
    if (s == "enumerate")
        return TraceMethod::enumerate;
    if (s == "contract")
        return TraceMethod::contract;
    throw input_error("unknown method '" + s + "' (expected enumerate|contract)");
}

struct TraceValue {
    double value = 0.0;
    int r = 0;
    /// value / r^d
    double normalized = 0.0;
};

/// tr_p(gamma) = sum over admissible colorings sigma of
///               prod_e (-2 cos((sigma_e + 1) pi / r))^(m_e).
inline TraceValue trace_level(const SpineGraph& g, const AdaptedMulticurve& curve, const Level& level,
                              TraceMethod method = TraceMethod::contract) {
    check_multicurve(g, curve);
    const auto weights = meridian_weights(g, curve, level);
    double value = 0.0;
    if (method == TraceMethod::enumerate) {
        PairwiseSum<double> acc;
        for_each_coloring(g, level, [&](std::span<const int> sigma) {
            double term = 1.0;
            for (std::size_t e = 0; e < sigma.size(); ++e)
                term *= weights[e][static_cast<std::size_t>(sigma[e])];
            acc.add(term);
        });
        value = acc.result();
    } else {
        value = contract_coloring_sum(g, level, weights);
    }
    if (!std::isfinite(value))
        throw numerical_error("trace_level produced a non-finite value");
    return {value, level.r(), value / std::pow(static_cast<double>(level.r()), g.dim())};
}

/// (2^(d-g) / r^d) * sum_sigma F((sigma + 1) / r): the Riemann sum for the
/// integral of F over U_g built from the packed cells B^r_sigma. Multiplying
/// by 2^(g-d) gives tr_p(gamma) / r^d.
inline double riemann_estimate(const SpineGraph& g, const AdaptedMulticurve& curve, const Level& level) {
    const TraceValue t = trace_level(g, curve, level, TraceMethod::enumerate);
    return std::ldexp(t.normalized, g.dim() - g.genus());
}

// ---------------------------------------------------------------------------
// Moment polytope

/// Linear constraint sum_i coeff[i] * tau_i <= bound.
struct LinearConstraint {
    std::vector<double> coeff;
    double bound = 0.0;
};

/**
 * U_g inside [0,1]^d: at every vertex with incident values (x, y, z), the
 * triangle inequalities |y - z| <= x <= y + z and x + y + z <= 2. A self-loop
 * fills two slots, so a vertex with loop value a and bridge value b gives
 * b <= 2a and 2a + b <= 2. For the free loop U_1 = [0, 1].
 */
class MomentPolytope {
  public:
    explicit MomentPolytope(const SpineGraph& g) : dim_(g.dim()) {
        if (g.is_free_loop())
            return;
        const std::size_t d = static_cast<std::size_t>(dim_);
        for (int v = 0; v < g.num_vertices(); ++v) {
            const auto& s = g.incident(v);
            for (int k = 0; k < 3; ++k) {
                // s[k] <= s[k+1] + s[k+2]
                LinearConstraint c{std::vector<double>(d, 0.0), 0.0};
                c.coeff[static_cast<std::size_t>(s[k])] += 1.0;
                c.coeff[static_cast<std::size_t>(s[(k + 1) % 3])] -= 1.0;
                c.coeff[static_cast<std::size_t>(s[(k + 2) % 3])] -= 1.0;
                add(std::move(c));
            }
            LinearConstraint sum{std::vector<double>(d, 0.0), 2.0};
            for (int k = 0; k < 3; ++k)
                sum.coeff[static_cast<std::size_t>(s[k])] += 1.0;
            add(std::move(sum));
        }
    }

    int dim() const { return dim_; }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

    bool contains(std::span<const double> tau, double slack = 0.0) const {
        if (static_cast<int>(tau.size()) != dim_)
            throw input_error("polytope_contains: point has dimension " + std::to_string(tau.size()) + ", expected " +
                              std::to_string(dim_));
        for (double t : tau)
            if (t < -slack || t > 1.0 + slack)
                return false;
        for (const auto& c : constraints_) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < tau.size(); ++i)
                lhs += c.coeff[i] * tau[i];
            if (lhs > c.bound + slack)
                return false;
        }
        return true;
    }

    enum class BoxRelation { inside, outside, boundary };

    /// Position of an axis-aligned box (inside the unit cube) relative to the
    /// polytope; exact for `inside`, conservative for `outside`.
    BoxRelation classify(std::span<const double> lo, std::span<const double> hi) const {
        bool all_inside = true;
        for (const auto& c : constraints_) {
            double max_lhs = 0.0, min_lhs = 0.0;
            for (std::size_t i = 0; i < lo.size(); ++i) {
                const double a = c.coeff[i] * lo[i], b = c.coeff[i] * hi[i];
                max_lhs += std::max(a, b);
                min_lhs += std::min(a, b);
            }
            if (min_lhs > c.bound)
                return BoxRelation::outside;
            if (max_lhs > c.bound)
                all_inside = false;
        }
        return all_inside ? BoxRelation::inside : BoxRelation::boundary;
    }

  private:
    void add(LinearConstraint c) {
        // drop duplicates produced by self-loops (e.g. a <= a + b)
        bool trivial = true;
        for (double x : c.coeff)
            if (x > 0.0)
                trivial = false;
        if (trivial && c.bound >= 0.0)
            return;
        for (const auto& existing : constraints_)
            if (existing.coeff == c.coeff && existing.bound == c.bound)
                return;
        constraints_.push_back(std::move(c));
    }

    int dim_;
    std::vector<LinearConstraint> constraints_;
};

inline bool polytope_contains(const SpineGraph& g, std::span<const double> tau) {
    return MomentPolytope(g).contains(tau);
}

// ---------------------------------------------------------------------------
// Quadrature

struct GridQuadrature {
    /// subdivisions per axis
    int n = 1;
};

struct MonteCarloQuadrature {
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
};

class QuadratureSpec {
  public:
    static QuadratureSpec grid(int n) {
        if (n < 1)
            throw input_error("grid quadrature needs N >= 1");
        return QuadratureSpec(GridQuadrature{n});
    }
    static QuadratureSpec monte_carlo(std::uint64_t samples, std::uint64_t seed = 0) {
        if (samples < 1)
            throw input_error("Monte-Carlo quadrature needs at least one sample");
        return QuadratureSpec(MonteCarloQuadrature{samples, seed});
    }

    /// "grid:N" or "mc:N"; the seed for mc comes separately.
    static QuadratureSpec parse(const std::string& text, std::uint64_t seed = 0) {
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            throw input_error("quadrature must be grid:N or mc:N, got '" + text + "'");
        const std::string kind = text.substr(0, colon);
        const std::string count = text.substr(colon + 1);
        std::size_t used = 0;
        long long n = 0;
        try {
            n = std::stoll(count, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != count.size() || count.empty() || n < 1)
            throw input_error("quadrature count must be a positive integer, got '" + count + "'");
        if (kind == "grid")
            return grid(static_cast<int>(n));
        if (kind == "mc")
            return monte_carlo(static_cast<std::uint64_t>(n), seed);
        throw input_error("unknown quadrature kind '" + kind + "'");
    }

    bool is_grid() const { return std::holds_alternative<GridQuadrature>(kind_); }
    const GridQuadrature& as_grid() const { return std::get<GridQuadrature>(kind_); }
    const MonteCarloQuadrature& as_monte_carlo() const { return std::get<MonteCarloQuadrature>(kind_); }

    std::string describe() const {
        if (is_grid())
            return "grid:" + std::to_string(as_grid().n);
        return "mc:" + std::to_string(as_monte_carlo().samples) + "@" + std::to_string(as_monte_carlo().seed);
    }

  private:
    explicit QuadratureSpec(std::variant<GridQuadrature, MonteCarloQuadrature> k) : kind_(k) {}
    std::variant<GridQuadrature, MonteCarloQuadrature> kind_;
};

/// Integral estimate with an error estimate: the standard error for
/// Monte-Carlo, a boundary-cell bound for the grid rule.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Uniform doubles in [0, 1) from a 64-bit engine, using the top 53 bits so
/// the stream is identical across standard libraries.
class UnitSampler {
  public:
    explicit UnitSampler(std::uint64_t seed) : engine_(seed) {}
    double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

/**
 * Integrates several functions over U_g at once, on the same points. The
 * integrand writes one value per function into its output span.
 *
 * grid:N   midpoint rule on the N^d cells of [0,1]^d; cells inside U_g are
 *          used whole, cells outside are skipped, boundary cells are split
 *          once into 2^d sub-cells whose midpoints are tested. The error
 *          estimate is half the weight of the boundary cells times the
 *          largest |f| seen there.
 * mc:N     N uniform points of [0,1]^d; the estimate is the mean of f * 1_U
 *          and the error the standard error of that mean.
 */
template <class Integrand>
std::vector<Estimate> integrate_over_polytope(const SpineGraph& g, std::size_t num_functions, Integrand&& f,
                                              const QuadratureSpec& quad) {
    const MomentPolytope poly(g);
    const std::size_t d = static_cast<std::size_t>(g.dim());
    std::vector<double> values(num_functions);
    std::vector<Estimate> out(num_functions);

    if (quad.is_grid()) {
        const int n = quad.as_grid().n;
        const double cells = std::pow(static_cast<double>(n), static_cast<double>(d));
        if (cells > 2e9)
            throw input_error("grid quadrature with " + std::to_string(n) + "^" + std::to_string(d) +
                              " cells is too large; use mc:N");
        const double h = 1.0 / n;
        const double cell_volume = std::pow(h, static_cast<double>(d));
        const std::size_t sub = std::size_t{1} << d;
        const double sub_volume = cell_volume / static_cast<double>(sub);
        std::vector<PairwiseSum<double>> acc(num_functions);
        std::vector<double> boundary_bound(num_functions, 0.0);
        std::vector<int> idx(d, 0);
        std::vector<double> lo(d), hi(d), mid(d);
        const auto total = static_cast<std::uint64_t>(cells);
        for (std::uint64_t flat = 0; flat < total; ++flat) {
            for (std::size_t k = 0; k < d; ++k) {
                lo[k] = idx[k] * h;
                hi[k] = (idx[k] + 1) * h;
                mid[k] = (idx[k] + 0.5) * h;
            }
            switch (poly.classify(lo, hi)) {
            case MomentPolytope::BoxRelation::inside:
                f(std::span<const double>(mid), std::span<double>(values));
                for (std::size_t i = 0; i < num_functions; ++i)
                    acc[i].add(values[i] * cell_volume);
                break;
            case MomentPolytope::BoxRelation::boundary: {
                std::vector<double> biggest(num_functions, 0.0);
                for (std::size_t s = 0; s < sub; ++s) {
                    for (std::size_t k = 0; k < d; ++k)
                        mid[k] = lo[k] + (((s >> k) & 1u) ? 0.75 : 0.25) * h;
                    if (!poly.contains(mid))
                        continue;
                    f(std::span<const double>(mid), std::span<double>(values));
                    for (std::size_t i = 0; i < num_functions; ++i) {
                        acc[i].add(values[i] * sub_volume);
                        biggest[i] = std::max(biggest[i], std::abs(values[i]));
                    }
                }
                for (std::size_t i = 0; i < num_functions; ++i)
                    boundary_bound[i] += 0.5 * cell_volume * biggest[i];
                break;
            }
            case MomentPolytope::BoxRelation::outside:
                break;
            }
            for (std::size_t k = d; k-- > 0;) {
                if (++idx[k] < n)
                    break;
                idx[k] = 0;
            }
        }
        for (std::size_t i = 0; i < num_functions; ++i)
            out[i] = {acc[i].result(), boundary_bound[i]};
        return out;
    }

    const auto& mc = quad.as_monte_carlo();
    UnitSampler sample(mc.seed);
    std::vector<PairwiseSum<double>> sum(num_functions), sum_sq(num_functions);
    std::vector<double> tau(d);
    for (std::uint64_t i = 0; i < mc.samples; ++i) {
        for (auto& t : tau)
            t = sample();
        if (poly.contains(tau)) {
            f(std::span<const double>(tau), std::span<double>(values));
        } else {
            std::fill(values.begin(), values.end(), 0.0);
        }
        for (std::size_t k = 0; k < num_functions; ++k) {
            sum[k].add(values[k]);
            sum_sq[k].add(values[k] * values[k]);
        }
    }
    const double n = static_cast<double>(mc.samples);
    for (std::size_t k = 0; k < num_functions; ++k) {
        const double mean = sum[k].result() / n;
        const double var = (mc.samples > 1) ? std::max(0.0, (sum_sq[k].result() / n - mean * mean) * n / (n - 1.0)) : 0.0;
        out[k] = {mean, std::sqrt(var / n)};
    }
    return out;
}

/// F(tau) = prod_e (-2 cos(pi tau_e))^(m_e)
inline double curve_function(const AdaptedMulticurve& curve, std::span<const double> tau) {
    double out = 1.0;
    for (std::size_t e = 0; e < tau.size(); ++e) {
        const int m = curve.multiplicities[e];
        if (m == 0)
            continue;
        const double x = -2.0 * std::cos(boost::math::constants::pi<double>() * tau[e]);
        for (int k = 0; k < m; ++k)
            out *= x;
    }
    return out;
}

/// <gamma> = 2^(g-d) * integral of F over U_g.
inline Estimate limit_bracket(const SpineGraph& g, const AdaptedMulticurve& curve, const QuadratureSpec& quad) {
    check_multicurve(g, curve);
    auto est = integrate_over_polytope(
        g, 1, [&](std::span<const double> tau, std::span<double> out) { out[0] = curve_function(curve, tau); }, quad);
    const int shift = g.genus() - g.dim();
    return {std::ldexp(est[0].value, shift), std::ldexp(est[0].error, shift)};
}

// ---------------------------------------------------------------------------
// Packing of coloring cells

/**
 * Result of testing the cell packing B^r_sigma = union over rho in S of
 * A^r_(sigma + rho), with A^r_c = prod_e [c_e / r, (c_e + 1) / r).
 *
 * `counts` maps "number of blocks containing the point" to the number of
 * sampled interior points with that count. The combinatorial part checks that
 * every block consists of 2^(d-g) distinct cells and that blocks of distinct
 * colorings share no cell.
 */
struct PartitionReport {
    int r = 0;
    std::uint64_t samples = 0;
    std::uint64_t draws = 0;
    int min_count = 0;
    int max_count = 0;
    std::map<int, std::uint64_t> counts;
    std::uint64_t blocks = 0;
    std::uint64_t cells_per_block = 0;
    std::uint64_t distinct_cells = 0;
    bool cell_identity_holds = false;

    double uncovered_fraction() const {
        auto it = counts.find(0);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
    }
};

namespace detail {

/// Number of admissible sigma with cell = sigma + rho for some rho spanned by
/// the complement edges (rho ranges over subsets of those edges).
inline int blocks_containing_cell(const SpineGraph& g, const Level& level, const ParityComplement& s,
                                  const std::vector<int>& cell) {
    int count = 0;
    std::vector<int> sigma(cell.size());
    const std::uint64_t subsets = std::uint64_t{1} << s.edges.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        sigma = cell;
        for (std::size_t k = 0; k < s.edges.size(); ++k)
            if ((mask >> k) & 1u)
                sigma[static_cast<std::size_t>(s.edges[k])] -= 1;
        if (is_admissible_coloring(g, level, sigma))
            ++count;
    }
    return count;
}

} // namespace detail

inline PartitionReport partition_check(const SpineGraph& g, const Level& level, std::uint64_t samples,
                                       std::uint64_t seed) {
    if (samples < 1)
        throw input_error("partition_check needs at least one sample");
    const MomentPolytope poly(g);
    const ParityComplement s = parity_complement(g);
    const std::size_t d = static_cast<std::size_t>(g.dim());
    const int r = level.r();

    PartitionReport rep;
    rep.r = r;
    rep.samples = samples;
    rep.min_count = std::numeric_limits<int>::max();
    rep.max_count = 0;

    UnitSampler sample(seed);
    std::vector<double> tau(d);
    std::vector<int> cell(d);
    // acceptance of U_g inside the cube is ~1/3 for genus 2; give up well
    // before looping forever on a degenerate polytope
    const std::uint64_t max_draws = 1000 * samples + 1000000;
    std::uint64_t accepted = 0;
    while (accepted < samples) {
        if (rep.draws >= max_draws)
            throw numerical_error("partition_check: sampling acceptance rate is zero");
        ++rep.draws;
        for (auto& t : tau)
            t = sample();
        if (!poly.contains(tau))
            continue;
        bool on_grid_line = false;
        for (std::size_t k = 0; k < d; ++k) {
            const double scaled = r * tau[k];
            cell[k] = static_cast<int>(std::floor(scaled));
            if (scaled == std::floor(scaled))
                on_grid_line = true;
        }
        if (on_grid_line)
            continue;
        ++accepted;
        const int c = detail::blocks_containing_cell(g, level, s, cell);
        rep.counts[c] += 1;
        rep.min_count = std::min(rep.min_count, c);
        rep.max_count = std::max(rep.max_count, c);
    }

    // combinatorial cell count
    rep.cells_per_block = std::uint64_t{1} << s.edges.size();
    std::set<std::vector<int>> all_cells;
    bool every_block_full = true;
    for_each_coloring(g, level, [&](std::span<const int> sigma) {
        ++rep.blocks;
        std::set<std::vector<int>> block;
        for (std::uint64_t mask = 0; mask < rep.cells_per_block; ++mask) {
            std::vector<int> c(sigma.begin(), sigma.end());
            for (std::size_t k = 0; k < s.edges.size(); ++k)
                if ((mask >> k) & 1u)
                    c[static_cast<std::size_t>(s.edges[k])] += 1;
            block.insert(c);
            all_cells.insert(std::move(c));
        }
        if (block.size() != rep.cells_per_block)
            every_block_full = false;
    });
    rep.distinct_cells = all_cells.size();
    rep.cell_identity_holds = every_block_full && rep.distinct_cells == rep.blocks * rep.cells_per_block;
    return rep;
}

// ---------------------------------------------------------------------------
// Convergence tables

struct ConvergenceRow {
    int r = 0;
    int p = 0;
    double normalized = 0.0;
    double limit = 0.0;
    double gap = 0.0;
    double gap_times_r = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    Estimate limit;
    /// least-squares c in gap ~ c / r over the last half of the rows
    double fitted_c = 0.0;
};

/// Least-squares slope of gap against 1/r through the origin.
inline double fit_inverse_r(std::span<const ConvergenceRow> rows) {
    double num = 0.0, den = 0.0;
    for (const auto& row : rows) {
        const double x = 1.0 / row.r;
        num += x * row.gap;
        den += x * x;
    }
    return den > 0.0 ? num / den : 0.0;
}

inline ConvergenceReport convergence_report(const SpineGraph& g, const AdaptedMulticurve& curve,
                                            const std::vector<Level>& levels, const QuadratureSpec& quad,
                                            TraceMethod method = TraceMethod::contract) {
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i].r() <= levels[i - 1].r())
            throw input_error("convergence_report: levels must be strictly ascending");
    ConvergenceReport rep;
    rep.limit = limit_bracket(g, curve, quad);
    for (const Level& level : levels) {
        const TraceValue t = trace_level(g, curve, level, method);
        ConvergenceRow row;
        row.r = level.r();
        row.p = level.p();
        row.normalized = t.normalized;
        row.limit = rep.limit.value;
        row.gap = rep.limit.value - t.normalized;
        row.gap_times_r = row.gap * row.r;
        rep.rows.push_back(row);
    }
    const std::size_t half = rep.rows.size() / 2;
    rep.fitted_c = fit_inverse_r(std::span<const ConvergenceRow>(rep.rows).subspan(half));
    return rep;
}

} // namespace qtrace
