#include "swnet/model.hpp"

#include <sstream>

namespace swnet {

void Model::require_admissible(const State& u) const {
    if (!admissible(u)) {
        std::ostringstream os;
        os << name() << ": inadmissible state (" << u[0] << ", " << u[1] << ")";
        throw InadmissibleStateError(os.str());
    }
}

Mat Model::linear_lax_basis(const State& u) const {
    const EigenDecomp e = eigen(u);
    Mat r(2, static_cast<std::size_t>(e.positive));
    std::size_t col = 0;
    for (int j = 0; j < 2; ++j) {
        if (e.lambda[j] > 0.0) {
            r(0, col) = e.rvec(0, j);
            r(1, col) = e.rvec(1, j);
            ++col;
        }
    }
    return r;
}

EigenDecomp ShallowWater::eigen(const State& u) const {
    require_admissible(u);
    const double v = u[1] / u[0];
    const double c = std::sqrt(g_ * u[0]);
    EigenDecomp e;
    e.lambda = {v - c, v + c};
    for (int j = 0; j < 2; ++j) {
        e.rvec(0, j) = 1.0;
        e.rvec(1, j) = e.lambda[j];
        if (std::abs(e.lambda[j]) <= eps_eigenvalue) {
            std::ostringstream os;
            os << "swe: near-sonic state (h=" << u[0] << ", q=" << u[1]
               << "), |lambda|=" << std::abs(e.lambda[j]);
            throw NearSonicError(os.str());
        }
        if (e.lambda[j] > 0.0) ++e.positive;
    }
    return e;
}

double ShallowWater::wave_phi(double hg, double hr) const {
    if (hg <= hr)
        return 2.0 * (std::sqrt(g_ * hg) - std::sqrt(g_ * hr));
    return (hg - hr) * std::sqrt(0.5 * g_ * (hg + hr) / (hg * hr));
}

double ShallowWater::wave_phi_dhg(double hg, double hr) const {
    if (hg <= hr) return std::sqrt(g_ / hg);
    const double a = 0.5 * g_ * (hg + hr) / (hg * hr);
    const double sqa = std::sqrt(a);
    const double da = -0.5 * g_ * hr / (hg * hg * hr);  // d a / d hg
    return sqa + (hg - hr) * da / (2.0 * sqa);
}

State ShallowWater::lax_curve(double xi, const State& ur) const {
    if (!(xi > 0.0)) throw InadmissibleStateError("swe lax_curve: depth parameter must be positive");
    require_admissible(ur);
    const double vr = ur[1] / ur[0];
    const double vg = vr + wave_phi(xi, ur[0]);
    return {xi, xi * vg};
}

State ShallowWater::lax_curve_dxi(double xi, const State& ur) const {
    if (!(xi > 0.0)) throw InadmissibleStateError("swe lax_curve: depth parameter must be positive");
    const double vr = ur[1] / ur[0];
    const double vg = vr + wave_phi(xi, ur[0]);
    return {1.0, vg + xi * wave_phi_dhg(xi, ur[0])};
}

EigenDecomp LinearWave::eigen(const State&) const {
    EigenDecomp e;
    e.lambda = {-a_, a_};
    e.rvec(0, 0) = 1.0;
    e.rvec(1, 0) = -1.0;
    e.rvec(0, 1) = 1.0;
    e.rvec(1, 1) = 1.0;
    e.positive = 1;
    if (a_ <= eps_eigenvalue) throw NearSonicError("linear: wave speed below eigenvalue bound");
    return e;
}

std::shared_ptr<const Model> make_model(const std::string& name) {
    if (name == "swe") return std::make_shared<ShallowWater>();
    if (name == "linear") return std::make_shared<LinearWave>();
    throw std::invalid_argument("unknown model '" + name + "' (expected swe|linear)");
}

}  // namespace swnet
