#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "swnet/jets.hpp"
#include "swnet/linalg.hpp"

namespace swnet {

/// Conserved-variable state. All shipped conservation laws are 2x2 systems;
/// for shallow water the components are (h, q).
using State = std::array<double, 2>;
using JetState = std::array<Jet1, 2>;
using BiState = std::array<BiSeries, 2>;

inline State operator+(const State& a, const State& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline State operator-(const State& a, const State& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline State operator*(double s, const State& a) { return {s * a[0], s * a[1]}; }

struct InadmissibleStateError : std::runtime_error {
    explicit InadmissibleStateError(const std::string& w) : std::runtime_error(w) {}
};
/// Eq. of state eigenvalue too close to zero: the coupling framework assumes
/// wave speeds bounded away from zero.
struct NearSonicError : std::runtime_error {
    explicit NearSonicError(const std::string& w) : std::runtime_error(w) {}
};

struct EigenDecomp {
    std::array<double, 2> lambda{};   // ascending
    Mat rvec{2, 2};                   // right eigenvectors as columns, first component 1
    int positive = 0;                 // c(u), number of positive eigenvalues
};

/// A 1D conservation law: flux, eigenstructure, Lax curves, admissibility.
/// Flux is exposed for plain states, time jets and bivariate (t,x) series so
/// that the Cauchy-Kowalevsky machinery and flux time-averaging can run
/// through the same definition.
class Model {
public:
    virtual ~Model() = default;

    static constexpr int dim = 2;
    static constexpr double eps_eigenvalue = 1e-8;

    virtual std::string name() const = 0;
    virtual bool admissible(const State& u) const = 0;
    virtual void require_admissible(const State& u) const;

    virtual State flux(const State& u) const = 0;
    virtual JetState flux(const JetState& u) const = 0;
    virtual BiState flux(const BiState& u) const = 0;

    virtual EigenDecomp eigen(const State& u) const = 0;
    /// Columns are the eigenvectors of the flux Jacobian at u that belong to
    /// positive eigenvalues (d x c).
    Mat linear_lax_basis(const State& u) const;

    /// Orientation flip for the "all edges outward" junction frame.
    virtual State reflect(const State& u) const = 0;

    virtual double max_wave_speed(const State& u) const = 0;

    /// State reachable from anchor u_r through the outgoing wave families,
    /// parametrized by the first component of the target state.
    virtual State lax_curve(double xi, const State& ur) const = 0;
    virtual State lax_curve_dxi(double xi, const State& ur) const = 0;

    /// Geometric source induced by a bottom slope; zero for models without one.
    virtual State bottom_source(const State& u, double db_dx) const { (void)u; (void)db_dx; return {0.0, 0.0}; }
    virtual BiState bottom_source(const BiState& u, const BiSeries& /*db_dx*/) const {
        return {BiSeries(u[0].size()), BiSeries(u[1].size())};
    }
    virtual JetState bottom_source(const JetState& u, double db_dx) const {
        (void)db_dx;
        return {Jet1(u[0].size(), 0.0), Jet1(u[1].size(), 0.0)};
    }
};

/// Shallow water equations with gravitational acceleration g.
class ShallowWater final : public Model {
public:
    explicit ShallowWater(double g = 9.81) : g_(g) {}

    std::string name() const override { return "swe"; }
    double gravity() const { return g_; }

    bool admissible(const State& u) const override {
        return std::isfinite(u[0]) && std::isfinite(u[1]) && u[0] > 0.0;
    }

    State flux(const State& u) const override { return flux_t(u); }
    JetState flux(const JetState& u) const override { return flux_t(u); }
    BiState flux(const BiState& u) const override { return flux_t(u); }

    EigenDecomp eigen(const State& u) const override;
    State reflect(const State& u) const override { return {u[0], -u[1]}; }
    double max_wave_speed(const State& u) const override {
        return std::abs(u[1] / u[0]) + std::sqrt(g_ * u[0]);
    }

    State lax_curve(double xi, const State& ur) const override;
    State lax_curve_dxi(double xi, const State& ur) const override;

    double hydraulic_head(const State& u) const {
        return u[1] * u[1] / (2.0 * g_ * u[0] * u[0]) + u[0];
    }

    State bottom_source(const State& u, double db_dx) const override {
        return {0.0, -g_ * u[0] * db_dx};
    }
    BiState bottom_source(const BiState& u, const BiSeries& db_dx) const override {
        return {BiSeries(u[0].size()), -g_ * (u[0] * db_dx)};
    }
    JetState bottom_source(const JetState& u, double db_dx) const override {
        return {Jet1(u[0].size(), 0.0), (-g_ * db_dx) * u[0]};
    }

private:
    template <class T>
    std::array<T, 2> flux_t(const std::array<T, 2>& u) const {
        const T& h = u[0];
        const T& q = u[1];
        return {q, q * q / h + (0.5 * g_) * (h * h)};
    }

    /// Velocity offset along the outgoing wave family: rarefaction branch for
    /// hg <= hr, shock branch above. Signs pinned by the exact-Riemann oracle.
    double wave_phi(double hg, double hr) const;
    double wave_phi_dhg(double hg, double hr) const;

    double g_;
};

/// Linear symmetric 2x2 system (1D wave equation in characteristic form);
/// used for linear-exactness checks of the ADER machinery and available as a
/// configurable model. Components (u, v) with flux (a v, a u).
class LinearWave final : public Model {
public:
    explicit LinearWave(double a = 1.0) : a_(a) {}

    std::string name() const override { return "linear"; }
    double speed() const { return a_; }

    bool admissible(const State& u) const override {
        return std::isfinite(u[0]) && std::isfinite(u[1]);
    }

    State flux(const State& u) const override { return flux_t(u); }
    JetState flux(const JetState& u) const override { return flux_t(u); }
    BiState flux(const BiState& u) const override { return flux_t(u); }

    EigenDecomp eigen(const State& u) const override;
    State reflect(const State& u) const override { return {u[0], -u[1]}; }
    double max_wave_speed(const State&) const override { return a_; }

    State lax_curve(double xi, const State& ur) const override {
        return {xi, ur[1] + (xi - ur[0])};
    }
    State lax_curve_dxi(double, const State&) const override { return {1.0, 1.0}; }

private:
    template <class T>
    std::array<T, 2> flux_t(const std::array<T, 2>& u) const {
        return {a_ * u[1], a_ * u[0]};
    }
    double a_;
};

std::shared_ptr<const Model> make_model(const std::string& name);

}  // namespace swnet
