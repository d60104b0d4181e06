#include "swnet/coupling.hpp"

#include <stdexcept>

namespace swnet {
namespace {

template <class T>
std::vector<T> equal_heights_phi(const std::vector<std::array<T, 2>>& u) {
    const int n = static_cast<int>(u.size());
    std::vector<T> r;
    r.reserve(n);
    T qsum = u[0][1];
    for (int i = 1; i < n; ++i) qsum = qsum + u[i][1];
    r.push_back(qsum);
    for (int i = 1; i < n; ++i) r.push_back(u[0][0] - u[i][0]);
    return r;
}

template <class T>
T head(const std::array<T, 2>& u, double g) {
    return u[1] * u[1] / ((2.0 * g) * (u[0] * u[0])) + u[0];
}

template <class T>
std::vector<T> manhole_phi(const std::vector<std::array<T, 2>>& u, const std::vector<T>& w,
                           double g) {
    const int n = static_cast<int>(u.size());
    std::vector<T> r;
    r.reserve(n);
    T qsum = u[0][1];
    for (int i = 1; i < n; ++i) qsum = qsum + u[i][1];
    r.push_back(qsum + w[1]);
    for (int i = 1; i < n; ++i) r.push_back(head(u[0], g) - head(u[i], g));
    return r;
}

template <class T>
std::vector<T> manhole_rhs(const std::vector<std::array<T, 2>>& u, const std::vector<T>& w,
                           double g, double am) {
    // Eq. of motion for the tank; the edge head is taken from edge 1 (heads
    // coincide once the algebraic conditions hold).
    const T& hm = w[0];
    const T& qm = w[1];
    std::vector<T> r;
    r.reserve(2);
    r.push_back(qm * (1.0 / am));
    r.push_back((g * am / hm) * (head(u[0], g) - (qm * qm / (2.0 * g * am * am) + hm)));
    return r;
}

}  // namespace

CouplingSpec coupling_equal_heights(int n) {
    if (n < 1) throw std::invalid_argument("coupling_equal_heights: need n >= 1");
    CouplingSpec s;
    s.name = "equal-heights";
    s.n = n;
    s.c = n;
    s.l = 0;
    s.phi = [](const std::vector<State>& u, const std::vector<double>&) {
        return equal_heights_phi(u);
    };
    s.phi_jet = [](const std::vector<JetState>& u, const std::vector<Jet1>&) {
        return equal_heights_phi(u);
    };
    return s;
}

CouplingSpec coupling_transmission() {
    CouplingSpec s = coupling_equal_heights(2);
    s.name = "transmission";
    s.pass_through = true;
    return s;
}

CouplingSpec coupling_manhole(int n, double area_m, double g) {
    if (n < 1) throw std::invalid_argument("coupling_manhole: need n >= 1");
    if (!(area_m > 0.0)) throw std::invalid_argument("coupling_manhole: need area > 0");
    CouplingSpec s;
    s.name = "manhole";
    s.n = n;
    s.c = n;
    s.l = 2;
    s.phi = [g](const std::vector<State>& u, const std::vector<double>& w) {
        return manhole_phi(u, w, g);
    };
    s.phi_jet = [g](const std::vector<JetState>& u, const std::vector<Jet1>& w) {
        return manhole_phi(u, w, g);
    };
    s.rhs = [g, area_m](const std::vector<State>& u, const std::vector<double>& w) {
        return manhole_rhs(u, w, g, area_m);
    };
    s.rhs_jet = [g, area_m](const std::vector<JetState>& u, const std::vector<Jet1>& w) {
        return manhole_rhs(u, w, g, area_m);
    };
    return s;
}

CouplingSpec make_coupling(const std::string& kind, int n, double area_m, double g) {
    if (kind == "equal-heights") return coupling_equal_heights(n);
    if (kind == "manhole") return coupling_manhole(n, area_m, g);
    if (kind == "transmission") {
        if (n != 2) throw std::invalid_argument("transmission coupling requires exactly 2 endpoints");
        return coupling_transmission();
    }
    throw std::invalid_argument("unknown coupling '" + kind +
                                "' (expected equal-heights|manhole|transmission)");
}

}  // namespace swnet
