#include "swnet/reconstruction.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "swnet/quadrature.hpp"

namespace swnet {
namespace {

/// Coefficients per stencil length, built once from the primitive-function
/// construction: P interpolates the cumulative sums at the cell boundaries,
/// the reconstruction is P'.
Mat build_poly_table(int r) {
    // Lagrange basis L_j on nodes 0..r; primitive P = sum_j cums_j L_j with
    // cums_j = sum_{i<j} ubar_i, so the weight of ubar_i in p = P' is
    // sum_{j>i} L'_j. Work with monomial coefficients; nodes are small
    // integers, fine in double for r <= 8.
    const int n = r + 1;
    std::vector<std::vector<double>> lag(n);
    for (int j = 0; j < n; ++j) {
        std::vector<double> c{1.0};
        double denom = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            // multiply by (x - k)
            std::vector<double> nc(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                nc[i + 1] += c[i];
                nc[i] -= k * c[i];
            }
            c = std::move(nc);
            denom *= (j - k);
        }
        for (double& v : c) v /= denom;
        lag[j] = std::move(c);
    }
    Mat t(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int p = 1; p <= r; ++p) t(p - 1, i) += p * lag[j][p];  // d/dx of x^p term
    return t;
}

struct Candidate {
    int start = 0;   // offset of the sub-stencil within the window
    int len = 0;     // cells in the sub-stencil
    double gamma = 0.0;
};

/// Derivatives (raw, unit coordinates) of the stencil polynomial at x.
void poly_derivs_at(const Mat& table, const double* cells, int len, double x, int max_deriv,
                    double* out) {
    std::array<double, kMaxOrder> mono{};
    for (int i = 0; i < len; ++i) {
        double acc = 0.0;
        for (int j = 0; j < len; ++j) acc += table(i, j) * cells[j];
        mono[i] = acc;
    }
    for (int d = 0; d <= max_deriv; ++d) {
        double acc = 0.0, xp = 1.0;
        for (int i = d; i < len; ++i) {
            double fact = 1.0;
            for (int p = 0; p < d; ++p) fact *= (i - p);
            acc += fact * mono[i] * xp;
            xp *= x;
        }
        out[d] = acc;
    }
}

/// Jiang-Shu smoothness of the stencil polynomial over the unit cell
/// [cell, cell+1] (undivided form).
double smoothness(const Mat& table, const double* cells, int len, double cell_lo) {
    if (len < 2) return 0.0;
    std::array<double, kMaxOrder> mono{};
    for (int i = 0; i < len; ++i) {
        double acc = 0.0;
        for (int j = 0; j < len; ++j) acc += table(i, j) * cells[j];
        mono[i] = acc;
    }
    const GaussRule& gr = GaussRule::get(len);
    double beta = 0.0;
    for (int d = 1; d < len; ++d) {
        double integ = 0.0;
        for (std::size_t g = 0; g < gr.x.size(); ++g) {
            const double x = cell_lo + 0.5 * (gr.x[g] + 1.0);
            double acc = 0.0, xp = 1.0;
            for (int i = d; i < len; ++i) {
                double fact = 1.0;
                for (int p = 0; p < d; ++p) fact *= (i - p);
                acc += fact * mono[i] * xp;
                xp *= x;
            }
            integ += 0.5 * gr.w[g] * acc * acc;
        }
        beta += integ;
    }
    return beta;
}

}  // namespace

const Mat& recon_poly_table(int r) {
    static const std::array<Mat, kMaxOrder + 2> tables = [] {
        std::array<Mat, kMaxOrder + 2> t;
        for (int r = 1; r <= kMaxOrder + 1; ++r) t[r] = build_poly_table(r);
        return t;
    }();
    if (r < 1 || r > kMaxOrder + 1) throw ReconError("stencil length out of range");
    return tables[r];
}

SpatialJet trace_jet(const State* window, const TraceScheme& scheme, int delta, TraceSide side,
                     double dx) {
    const int K = scheme.order;
    if (K < 1 || K > kMaxOrder) throw ReconError("reconstruction order out of range");
    if (delta < 0 || delta > K) throw ReconError("trace anchor outside the stencil window");

    SpatialJet jet;
    jet.len = K;
    const int mc = std::min(std::max(side == TraceSide::left ? delta - 1 : delta, 0), K - 1);

    for (int comp = 0; comp < 2; ++comp) {
        std::array<double, kMaxOrder> cells{};
        for (int j = 0; j < K; ++j) cells[j] = window[j][comp];

        std::array<double, kMaxOrder> derivs{};
        if (!scheme.weno || K <= 2) {
            // K = 2 has no sub-stencil structure to adapt over
            poly_derivs_at(recon_poly_table(K), cells.data(), K, delta, K - 1, derivs.data());
        } else {
            // adaptive-order blend: the full-window polynomial with sliding
            // low-order fallbacks. Fallbacks of length >= 3 carry both first
            // and second difference information, which keeps smooth extrema
            // from masquerading as smooth sub-stencils.
            const int sub = K == 3 ? 2 : 3;
            std::vector<Candidate> cand;
            cand.push_back({0, K, 0.85});
            {
                std::vector<int> starts;
                for (int s0 = 0; s0 + sub <= K; ++s0) starts.push_back(s0);
                std::sort(starts.begin(), starts.end(), [&](int a, int b) {
                    return std::abs(2 * a + sub - 1 - 2 * mc) < std::abs(2 * b + sub - 1 - 2 * mc);
                });
                double share = 0.15, weight = 0.5;
                for (std::size_t i = 0; i < starts.size(); ++i) {
                    const double g = (i + 1 == starts.size()) ? share : share * weight;
                    cand.push_back({starts[i], sub, g});
                    share -= g;
                }
            }

            std::vector<double> beta(cand.size());
            for (std::size_t ci = 0; ci < cand.size(); ++ci) {
                const Candidate& c = cand[ci];
                const double lo = std::min(std::max(mc - c.start, 0), c.len - 1);
                beta[ci] =
                    smoothness(recon_poly_table(c.len), cells.data() + c.start, c.len, lo);
            }
            // roughness contrast (WENO-Z style) between like-order measures:
            // the largest difference between neighbouring sub-stencils
            double tau = 0.0;
            if (cand.size() > 2) {
                std::array<double, kMaxOrder> sb{};
                for (std::size_t ci = 1; ci < cand.size(); ++ci) sb[cand[ci].start] = beta[ci];
                for (int s0 = 0; s0 + sub + 1 <= K; ++s0)
                    tau = std::max(tau, std::abs(sb[s0] - sb[s0 + 1]));
            } else {
                tau = std::abs(beta[0] - beta[1]);
            }

            double wsum = 0.0;
            std::vector<double> om(cand.size());
            for (std::size_t ci = 0; ci < cand.size(); ++ci) {
                double boost = tau / (scheme.eps + beta[ci]);
                double p = 1.0;
                for (int e = 0; e < scheme.power; ++e) p *= boost;
                om[ci] = cand[ci].gamma * (1.0 + p);
                wsum += om[ci];
            }
            for (double& w : om) w /= wsum;

            // combined polynomial W = (om0/g0)(P_K - sum g_i p_i) + sum om_i p_i,
            // assembled directly in derivative space at the anchor
            std::array<double, kMaxOrder> dtmp{};
            poly_derivs_at(recon_poly_table(K), cells.data(), K, delta, K - 1, dtmp.data());
            const double hi_f = om[0] / cand[0].gamma;
            for (int d = 0; d < K; ++d) derivs[d] = hi_f * dtmp[d];
            for (std::size_t ci = 1; ci < cand.size(); ++ci) {
                const Candidate& c = cand[ci];
                poly_derivs_at(recon_poly_table(c.len), cells.data() + c.start, c.len,
                               static_cast<double>(delta - c.start), c.len - 1, dtmp.data());
                const double f = om[ci] - hi_f * c.gamma;
                for (int d = 0; d < c.len; ++d) derivs[d] += f * dtmp[d];
            }
        }
        double scale = 1.0;
        for (int d = 0; d < K; ++d) {
            jet.d[comp][d] = derivs[d] * scale;
            scale /= dx;
        }
    }
    return jet;
}

std::vector<InterfacePair> reconstruct_interfaces(const std::vector<State>& averages, double dx,
                                                  const TraceScheme& scheme) {
    const int n = static_cast<int>(averages.size());
    const int K = scheme.order;
    if (n < K) throw ReconError("too few cells for the requested reconstruction order");
    const int bias = stencil_bias(K);
    std::vector<InterfacePair> out(n + 1);
    for (int m = 0; m <= n; ++m) {
        const int sl = std::min(std::max(m - K + bias, 0), n - K);
        const int sr = std::min(std::max(m - bias, 0), n - K);
        out[m].left = trace_jet(averages.data() + sl, scheme, m - sl, TraceSide::left, dx);
        out[m].right = trace_jet(averages.data() + sr, scheme, m - sr, TraceSide::right, dx);
    }
    return out;
}

SpatialJet reconstruct_one_sided(const std::vector<State>& averages, bool right_end, double dx,
                                 const TraceScheme& scheme) {
    const int n = static_cast<int>(averages.size());
    const int K = scheme.order;
    if (n < K) throw ReconError("too few cells for the requested reconstruction order");
    if (right_end)
        return trace_jet(averages.data() + (n - K), scheme, K, TraceSide::left, dx);
    return trace_jet(averages.data(), scheme, 0, TraceSide::right, dx);
}

}  // namespace swnet
