#pragma once

// Coloring sums as tensor-network contractions.
//
// A weighted sum over admissible colorings
//     sum_sigma prod_v adm(sigma at v) * prod_e w_e(sigma_e)
// is a network with one index per edge (dimension r-1), one 0/1 admissibility
// tensor per vertex and one diagonal weight per edge. It is contracted by
// variable elimination: repeatedly pick an edge index, multiply every factor
// that mentions it and sum it out.
//
// Elimination order: greedy minimum degree on the interaction graph of edge
// indices (two edges interact when they share a factor, i.e. are adjacent in
// the line graph). Ties go to the lowest edge index. The order depends only on
// the graph, so the floating-point result is reproducible.

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "qtrace/error.hpp"
#include "qtrace/qnum.hpp"
#include "qtrace/spine.hpp"

namespace qtrace {

namespace detail {

/// Dense factor over a sorted list of edge indices, all of dimension n,
/// stored row-major (last variable fastest).
struct Factor {
    std::vector<int> vars;
    std::vector<double> data;
};

inline std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    while (exp--)
        out *= base;
    return out;
}

inline Factor vertex_factor(const SpineGraph& g, const Level& level, int v) {
    const auto& slots = g.incident(v);
    std::set<int> distinct(slots.begin(), slots.end());
    Factor f;
    f.vars.assign(distinct.begin(), distinct.end());
    const std::size_t n = static_cast<std::size_t>(level.num_colors());
    f.data.assign(ipow(n, f.vars.size()), 0.0);
    std::vector<int> assign(f.vars.size(), 0);
    auto color_of = [&](int edge) {
        auto it = std::find(f.vars.begin(), f.vars.end(), edge);
        return assign[static_cast<std::size_t>(it - f.vars.begin())];
    };
    for (std::size_t flat = 0; flat < f.data.size(); ++flat) {
        std::size_t rest = flat;
        for (std::size_t k = f.vars.size(); k-- > 0;) {
            assign[k] = static_cast<int>(rest % n);
            rest /= n;
        }
        f.data[flat] = is_admissible(level, color_of(slots[0]), color_of(slots[1]), color_of(slots[2])) ? 1.0 : 0.0;
    }
    return f;
}

/// Copy of `f` with its variables reordered: ascending, `last` moved to the end.
inline Factor with_last(const Factor& f, int last, std::size_t n) {
    if (f.vars.back() == last)
        return f;
    Factor out;
    for (int v : f.vars)
        if (v != last)
            out.vars.push_back(v);
    out.vars.push_back(last);
    out.data.resize(f.data.size());
    // stride in `f` of each variable of `out`
    std::vector<std::size_t> src_stride(out.vars.size());
    for (std::size_t k = 0; k < out.vars.size(); ++k) {
        std::size_t stride = 1;
        for (std::size_t j = f.vars.size(); j-- > 0;) {
            if (f.vars[j] == out.vars[k])
                break;
            stride *= n;
        }
        src_stride[k] = stride;
    }
    std::vector<std::size_t> idx(out.vars.size(), 0);
    std::size_t src = 0;
    for (std::size_t flat = 0; flat < out.data.size(); ++flat) {
        out.data[flat] = f.data[src];
        for (std::size_t k = idx.size(); k-- > 0;) {
            src += src_stride[k];
            if (++idx[k] < n)
                break;
            src -= src_stride[k] * n;
            idx[k] = 0;
        }
    }
    return out;
}

/// Multiplies all factors that contain `var` and sums `var` out.
inline Factor eliminate(std::vector<Factor>& factors, int var, std::size_t n) {
    std::vector<Factor> touching;
    std::vector<Factor> rest;
    for (auto& f : factors) {
        if (std::find(f.vars.begin(), f.vars.end(), var) != f.vars.end())
            touching.push_back(with_last(f, var, n));
        else
            rest.push_back(std::move(f));
    }
    factors = std::move(rest);

    std::set<int> scope_set;
    for (const auto& f : touching)
        scope_set.insert(f.vars.begin(), f.vars.end());
    // loop order: surviving variables ascending, eliminated variable last
    Factor out;
    for (int v : scope_set)
        if (v != var)
            out.vars.push_back(v);
    std::vector<int> scope = out.vars;
    scope.push_back(var);
    out.data.assign(ipow(n, out.vars.size()), 0.0);

    // stride of each loop variable inside each touching factor
    const std::size_t nt = touching.size();
    std::vector<std::vector<std::size_t>> strides(scope.size(), std::vector<std::size_t>(nt, 0));
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& fv = touching[t].vars;
        std::size_t stride = 1;
        for (std::size_t k = fv.size(); k-- > 0;) {
            const auto pos = static_cast<std::size_t>(std::find(scope.begin(), scope.end(), fv[k]) - scope.begin());
            strides[pos][t] = stride;
            stride *= n;
        }
    }

    std::vector<std::size_t> idx(out.vars.size(), 0);
    std::vector<std::size_t> offset(nt, 0);
    std::vector<double> row(n);
    for (std::size_t out_flat = 0; out_flat < out.data.size(); ++out_flat) {
        // every touching factor has `var` as its contiguous last index
        for (std::size_t c = 0; c < n; ++c)
            row[c] = touching[0].data[offset[0] + c];
        for (std::size_t t = 1; t < nt; ++t) {
            const double* src = touching[t].data.data() + offset[t];
            for (std::size_t c = 0; c < n; ++c)
                row[c] *= src[c];
        }
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            acc += row[c];
        out.data[out_flat] = acc;
        // odometer over the surviving variables, last fastest
        for (std::size_t k = idx.size(); k-- > 0;) {
            ++idx[k];
            for (std::size_t t = 0; t < nt; ++t)
                offset[t] += strides[k][t];
            if (idx[k] < n)
                break;
            for (std::size_t t = 0; t < nt; ++t)
                offset[t] -= strides[k][t] * n;
            idx[k] = 0;
        }
    }
    return out;
}

} // namespace detail

/// The deterministic greedy minimum-degree elimination order of edge indices.
inline std::vector<int> elimination_order(const SpineGraph& g) {
    const int d = g.num_edges();
    if (g.is_free_loop())
        return {0};
    std::vector<std::set<int>> scopes;
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& s = g.incident(v);
        scopes.emplace_back(s.begin(), s.end());
    }
    std::vector<bool> done(static_cast<std::size_t>(d), false);
    std::vector<int> order;
    for (int step = 0; step < d; ++step) {
        int best = -1;
        std::size_t best_degree = 0;
        for (int e = 0; e < d; ++e) {
            if (done[static_cast<std::size_t>(e)])
                continue;
            std::set<int> nbrs;
            for (const auto& s : scopes)
                if (s.count(e))
                    nbrs.insert(s.begin(), s.end());
            nbrs.erase(e);
            if (best < 0 || nbrs.size() < best_degree) {
                best = e;
                best_degree = nbrs.size();
            }
        }
        // merge the scopes that contain `best`
        std::set<int> merged;
        std::vector<std::set<int>> kept;
        for (auto& s : scopes) {
            if (s.count(best))
                merged.insert(s.begin(), s.end());
            else
                kept.push_back(std::move(s));
        }
        merged.erase(best);
        if (!merged.empty())
            kept.push_back(std::move(merged));
        scopes = std::move(kept);
        done[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
    }
    return order;
}

/**
 * sum over admissible colorings of prod_e weights[e][sigma_e], by variable
 * elimination. `weights[e]` has one entry per color 0..r-2.
 */
inline double contract_coloring_sum(const SpineGraph& g, const Level& level,
                                    const std::vector<std::vector<double>>& weights) {
    const std::size_t n = static_cast<std::size_t>(level.num_colors());
    if (static_cast<int>(weights.size()) != g.num_edges())
        throw input_error("contract_coloring_sum: one weight vector per edge required");
    for (const auto& w : weights)
        if (w.size() != n)
            throw input_error("contract_coloring_sum: weight vector length must be r-1");

    if (g.is_free_loop()) {
        double s = 0.0;
        for (double w : weights[0])
            s += w;
        return s;
    }

    std::vector<detail::Factor> factors;
    for (int v = 0; v < g.num_vertices(); ++v)
        factors.push_back(detail::vertex_factor(g, level, v));
    for (int e = 0; e < g.num_edges(); ++e)
        factors.push_back(detail::Factor{{e}, weights[static_cast<std::size_t>(e)]});

    for (int e : elimination_order(g))
        factors.push_back(detail::eliminate(factors, e, n));

    double out = 1.0;
    for (const auto& f : factors)
        out *= f.data.at(0);
    return out;
}

} // namespace qtrace
