#include "swnet/tableau.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace swnet {
namespace {

// Rooted trees for the order conditions. A tree is a sorted list of child
// tree ids; id 0 is the single node.
struct TreeSet {
    std::vector<std::vector<int>> children;
    std::vector<int> order;

    explicit TreeSet(int max_order) {
        children.push_back({});
        order.push_back(1);
        std::vector<std::vector<int>> by_order(max_order + 1);
        by_order[1].push_back(0);
        for (int n = 2; n <= max_order; ++n) {
            std::set<std::vector<int>> combos;
            std::vector<int> cur;
            gather(n - 1, 0, cur, by_order, combos);
            for (const auto& cb : combos) {
                children.push_back(cb);
                order.push_back(n);
                by_order[n].push_back(static_cast<int>(children.size()) - 1);
            }
        }
    }

    // multisets of existing trees (ids nondecreasing) with total order = rem
    void gather(int rem, int min_id, std::vector<int>& cur,
                const std::vector<std::vector<int>>& by_order,
                std::set<std::vector<int>>& out) const {
        if (rem == 0) {
            out.insert(cur);
            return;
        }
        for (int id = min_id; id < static_cast<int>(children.size()); ++id) {
            if (order[id] > rem) continue;
            cur.push_back(id);
            gather(rem - order[id], id, cur, by_order, out);
            cur.pop_back();
        }
    }

    double density(int id) const {
        double g = order[id];
        for (int ch : children[id]) g *= density(ch);
        return g;
    }

    std::vector<double> phi(int id, const ButcherTableau& t) const {
        const int s = t.stages;
        std::vector<double> v(s, 1.0);
        for (int ch : children[id]) {
            const std::vector<double> pc = phi(ch, t);
            for (int i = 0; i < s; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += t.a[i][j] * pc[j];
                v[i] *= acc;
            }
        }
        return v;
    }
};

ButcherTableau euler() {
    return {"explicit-euler", 1, 1, {{0.0}}, {1.0}, {0.0}};
}

ButcherTableau heun() {
    return {"heun", 2, 2, {{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5}, {0.0, 1.0}};
}

ButcherTableau kutta3() {
    return {"kutta-3",
            3,
            3,
            {{0, 0, 0}, {0.5, 0, 0}, {-1.0, 2.0, 0}},
            {1.0 / 6, 2.0 / 3, 1.0 / 6},
            {0.0, 0.5, 1.0}};
}

ButcherTableau rk4() {
    return {"classical-rk4",
            4,
            4,
            {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1.0, 0}},
            {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6},
            {0.0, 0.5, 0.5, 1.0}};
}

ButcherTableau butcher5() {
    return {"butcher-rk5",
            5,
            6,
            {{0, 0, 0, 0, 0, 0},
             {1.0 / 4, 0, 0, 0, 0, 0},
             {1.0 / 8, 1.0 / 8, 0, 0, 0, 0},
             {0, 0, 1.0 / 2, 0, 0, 0},
             {3.0 / 16, -3.0 / 8, 3.0 / 8, 9.0 / 16, 0, 0},
             {-3.0 / 7, 8.0 / 7, 6.0 / 7, -12.0 / 7, 8.0 / 7, 0}},
            {7.0 / 90, 0, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90},
            {0, 1.0 / 4, 1.0 / 4, 1.0 / 2, 3.0 / 4, 1.0}};
}

ButcherTableau butcher6() {
    return {"butcher-rk6",
            6,
            7,
            {{0, 0, 0, 0, 0, 0, 0},
             {1.0 / 3, 0, 0, 0, 0, 0, 0},
             {0, 2.0 / 3, 0, 0, 0, 0, 0},
             {1.0 / 12, 1.0 / 3, -1.0 / 12, 0, 0, 0, 0},
             {-1.0 / 16, 9.0 / 8, -3.0 / 16, -3.0 / 8, 0, 0, 0},
             {0, 9.0 / 8, -3.0 / 8, -3.0 / 4, 1.0 / 2, 0, 0},
             {9.0 / 44, -9.0 / 11, 63.0 / 44, 18.0 / 11, 0, -16.0 / 11, 0}},
            {11.0 / 120, 0, 27.0 / 40, 27.0 / 40, -4.0 / 15, -4.0 / 15, 11.0 / 120},
            {0, 1.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 2, 1.0 / 2, 1.0}};
}

}  // namespace

double tableau_order_residual(const ButcherTableau& t, int p) {
    double worst = 0.0;
    for (int i = 0; i < t.stages; ++i) {
        double rs = 0.0;
        for (int j = 0; j < t.stages; ++j) rs += t.a[i][j];
        worst = std::max(worst, std::abs(rs - t.c[i]));
    }
    const TreeSet trees(p);
    for (std::size_t id = 0; id < trees.children.size(); ++id) {
        const std::vector<double> ph = trees.phi(static_cast<int>(id), t);
        double lhs = 0.0;
        for (int j = 0; j < t.stages; ++j) lhs += t.b[j] * ph[j];
        worst = std::max(worst, std::abs(lhs - 1.0 / trees.density(static_cast<int>(id))));
    }
    return worst;
}

const ButcherTableau& ButcherTableau::for_order(int k) {
    static const std::array<ButcherTableau, 7> shipped = [] {
        std::array<ButcherTableau, 7> s{ButcherTableau{}, euler(),    heun(), kutta3(),
                                        rk4(),            butcher5(), butcher6()};
        for (int q = 1; q <= 6; ++q) {
            const double res = tableau_order_residual(s[q], q);
            if (res > 1e-12)
                throw std::logic_error("tableau " + s[q].name + " fails its order conditions");
        }
        return s;
    }();
    if (k < 1 || k > 6)
        throw std::invalid_argument("no shipped Runge-Kutta tableau of order " +
                                    std::to_string(k));
    return shipped[k];
}

}  // namespace swnet
