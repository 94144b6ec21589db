#include "gpebo/filters.hpp"

#include "gpebo/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace gpebo {

ObserverConfig ObserverConfig::derive(const PlantSpec& plant, std::vector<TimeExpr> L) {
    plant.validate();
    ObserverConfig cfg;
    cfg.n = plant.n;
    cfg.L = std::move(L);
    cfg.A = plant.A;
    cfg.C = plant.C;
    cfg.validate();
    return cfg;
}

void ObserverConfig::validate() const {
    if (n < 1) throw config_error("observer.n: must be >= 1");
    if (L.size() != n)
        throw config_error("observer.L: expected " + std::to_string(n) + " entries, got " +
                           std::to_string(L.size()));
    if (A.size() != n * n) throw config_error("observer.A: expected n*n entries");
    if (C.size() != n) throw config_error("observer.C: expected n entries");
}

Mat ObserverConfig::eval_A0(double t) const {
    Mat a0(n, n);
    std::vector<double> l(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        l[i] = eval_expr(L[i], t);
        c[i] = eval_expr(C[i], t);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a0(i, j) = eval_expr(A[i * n + j], t) - l[i] * c[j];
    return a0;
}

std::vector<double> ObserverConfig::eval_L(double t) const {
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = eval_expr(L[i], t);
    return l;
}

FilterState FilterState::initial(std::size_t n) {
    FilterState fs;
    fs.n = n;
    fs.xi.assign(n, 0.0);
    fs.eta = Mat(n, n);
    fs.zeta = Mat(n, n);
    fs.phi = Mat::identity(n);
    return fs;
}

FilterState filter_rhs(const ObserverConfig& cfg, double t, const FilterState& fs, double y,
                       double u) {
    const std::size_t n = cfg.n;
    if (fs.n != n)
        throw shape_error("filter_rhs: state dimension " + std::to_string(fs.n) + " vs config n=" +
                          std::to_string(n));
    Mat a0 = cfg.eval_A0(t);
    std::vector<double> l = cfg.eval_L(t);

    FilterState d;
    d.n = n;
    d.xi.assign(n, 0.0);
    d.eta = a0 * fs.eta;
    d.zeta = a0 * fs.zeta;
    d.phi = a0 * fs.phi;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a0(i, j) * fs.xi[j];
        d.xi[i] = s + l[i] * y;
        d.eta(i, i) += y;
        d.zeta(i, i) += u;
    }
    return d;
}

std::vector<double> ThetaVector::to_flat() const {
    std::vector<double> flat;
    flat.reserve(e0.size() + k.size() + b.size());
    flat.insert(flat.end(), e0.begin(), e0.end());
    flat.insert(flat.end(), k.begin(), k.end());
    flat.insert(flat.end(), b.begin(), b.end());
    return flat;
}

ThetaVector ThetaVector::from_flat(const std::vector<double>& flat) {
    if (flat.size() % 3 != 0)
        throw shape_error("ThetaVector: flat length " + std::to_string(flat.size()) +
                          " not divisible by 3");
    const std::size_t n = flat.size() / 3;
    ThetaVector tv;
    tv.e0.assign(flat.begin(), flat.begin() + n);
    tv.k.assign(flat.begin() + n, flat.begin() + 2 * n);
    tv.b.assign(flat.begin() + 2 * n, flat.end());
    return tv;
}

ThetaVector ThetaVector::true_of(const PlantSpec& plant) {
    ThetaVector tv;
    tv.e0.resize(plant.n);
    for (std::size_t i = 0; i < plant.n; ++i) tv.e0[i] = -plant.x0[i];
    tv.k = plant.k_true;
    tv.b = plant.b_true;
    return tv;
}

RegressionSample assemble_regression(const PlantSpec& plant, const ObserverConfig& cfg, double t,
                                     const FilterState& fs, double y) {
    const std::size_t n = cfg.n;
    std::vector<double> c = plant.eval_C(t);
    RegressionSample s;
    s.t = t;
    s.z = y;
    for (std::size_t i = 0; i < n; ++i) s.z -= c[i] * fs.xi[i];
    s.psi.assign(3 * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double p = 0.0, e = 0.0, zt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p += c[i] * fs.phi(i, j);
            e += c[i] * fs.eta(i, j);
            zt += c[i] * fs.zeta(i, j);
        }
        s.psi[j] = -p;
        s.psi[n + j] = e;
        s.psi[2 * n + j] = zt;
    }
    return s;
}

PhiReport fundamental_matrix_checks(const std::vector<Mat>& phi_log, double c1_cap) {
    PhiReport rep;
    rep.min_abs_det = phi_log.empty() ? 0.0 : std::fabs(det(phi_log.front()));
    for (const Mat& phi : phi_log) {
        rep.sup_spectral_norm = std::max(rep.sup_spectral_norm, spectral_norm(phi));
        rep.min_abs_det = std::min(rep.min_abs_det, std::fabs(det(phi)));
    }
    rep.within_bound = !phi_log.empty() && rep.sup_spectral_norm <= c1_cap;
    return rep;
}

} // namespace gpebo
