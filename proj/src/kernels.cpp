#include "pdecrl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdecrl {

namespace {

constexpr double kGaussSupportSigmas = 4.0;  // < 1e-7 relative mass outside

double boundary_weight(int i, int n, bool periodic) {
    if (periodic) return 1.0;
    return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

struct Stencil1d {
    std::vector<int> idx;
    std::vector<double> psi;
    std::vector<double> quad;
};

// 1D kernel stencil along one axis; throws if the support leaves a
// non-periodic domain.
Stencil1d build_axis_stencil(const KernelSpec& k, double center, int n, double dx, double length,
                             bool periodic) {
    Stencil1d st;
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    auto push = [&](int i, double x, double psi) {
        if (periodic) {
            st.idx.push_back(wrap(i));
            st.quad.push_back(dx);
        } else {
            if (i < 0 || i >= n)
                throw std::invalid_argument("kernel support exceeds the domain boundary");
            st.idx.push_back(i);
            st.quad.push_back(dx * boundary_weight(i, n, periodic));
        }
        st.psi.push_back(psi);
        (void)x;
    };

    switch (k.shape) {
    case KernelShape::Dirac: {
        int i = static_cast<int>(std::lround(center / dx));
        if (periodic) i = wrap(i);
        else i = std::clamp(i, 0, n - 1);
        st.idx.push_back(i);
        st.psi.push_back(1.0);
        st.quad.push_back(1.0);  // point evaluation, no quadrature factor
        break;
    }
    case KernelShape::Gaussian: {
        double r = kGaussSupportSigmas * k.sigma;
        if (!periodic && (center - r < -1e-12 || center + r > length + 1e-12))
            throw std::invalid_argument("Gaussian kernel support exceeds the domain boundary");
        int lo = static_cast<int>(std::ceil((center - r) / dx - 1e-12));
        int hi = static_cast<int>(std::floor((center + r) / dx + 1e-12));
        for (int i = lo; i <= hi; ++i) {
            double d = (i * dx - center) / k.sigma;
            push(i, i * dx, std::exp(-0.5 * d * d));
        }
        break;
    }
    case KernelShape::Indicator: {
        // half-open support [c - w/2, c + w/2) so disjoint tilings are exact
        double a = center - 0.5 * k.width;
        double b = center + 0.5 * k.width;
        if (!periodic && (a < -1e-12 || b > length + 1e-12))
            throw std::invalid_argument("indicator kernel support exceeds the domain boundary");
        int lo = static_cast<int>(std::ceil(a / dx - 1e-9));
        int hi = static_cast<int>(std::floor(b / dx + 1e-9));
        for (int i = lo; i <= hi; ++i) {
            double x = i * dx;
            if (x - a >= -1e-9 * dx && b - x > 1e-9 * dx) push(i, x, 1.0);
        }
        break;
    }
    case KernelShape::Asymmetric: {
        int t = static_cast<int>(k.table.size());
        int c = static_cast<int>(std::lround(center / dx));
        int half = (t - 1) / 2;
        for (int j = 0; j < t; ++j) push(c + j - half, (c + j - half) * dx, k.table[j]);
        break;
    }
    }
    return st;
}

} // namespace

void KernelSpec::validate() const {
    switch (shape) {
    case KernelShape::Gaussian:
        if (!(sigma > 0.0)) throw std::invalid_argument("KernelSpec: sigma must be positive");
        break;
    case KernelShape::Indicator:
        if (!(width > 0.0)) throw std::invalid_argument("KernelSpec: width must be positive");
        break;
    case KernelShape::Asymmetric:
        if (table.empty()) throw std::invalid_argument("KernelSpec: empty asymmetric table");
        for (double w : table)
            if (!std::isfinite(w))
                throw std::invalid_argument("KernelSpec: non-finite asymmetric weight");
        break;
    case KernelShape::Dirac:
        break;
    }
}

void SensorArray::validate() const {
    kernel.validate();
    if (count_x < 1 || count_y < 1) throw std::invalid_argument("SensorArray: M must be >= 1");
    if (dim == 2 && count_x != count_y)
        throw std::invalid_argument("SensorArray: 2D sensors must form a square lattice");
    if (s_axis < 1 || s_axis % 2 == 0)
        throw std::invalid_argument("SensorArray: S must be odd");
    if (s_axis > count_x) throw std::invalid_argument("SensorArray: S must be <= M");
    if (dim == 2 && kernel.shape == KernelShape::Asymmetric)
        throw std::invalid_argument("SensorArray: asymmetric kernels are 1D only");
}

void ActuatorArray::validate() const {
    kernel.validate();
    if (margin < 0) throw std::invalid_argument("ActuatorArray: margin must be >= 0");
    if (!(u_max > 0.0)) throw std::invalid_argument("ActuatorArray: u_max must be positive");
}

SensorOps::SensorOps(const SensorArray& array, const Grid& grid)
    : array_(array), grid_(grid) {
    array_.validate();
    if ((array.dim == 2) != (grid.dim == 2))
        throw std::invalid_argument("SensorOps: array/grid dimension mismatch");
    if (array.periodic_wrap != grid.periodic)
        throw std::invalid_argument("SensorOps: boundary mode inconsistent with grid");

    const int m = array.total();
    centers_x_.resize(m);
    centers_y_.resize(m);
    stencils_.resize(m);

    auto axis_center = [&](int i, int count, double length) {
        double spacing = length / count;
        return grid.periodic ? i * spacing : (i + 0.5) * spacing;
    };

    for (int i = 0; i < m; ++i) {
        int ix = array.dim == 2 ? i / array.count_y : i;
        int iy = array.dim == 2 ? i % array.count_y : 0;
        centers_x_[i] = axis_center(ix, array.count_x, grid.lx);
        centers_y_[i] = array.dim == 2 ? axis_center(iy, array.count_y, grid.ly) : 0.0;

        Stencil1d sx = build_axis_stencil(array.kernel, centers_x_[i], grid.nx, grid.dx(),
                                          grid.lx, grid.periodic);
        Stencil& st = stencils_[i];
        st.dirac = array.kernel.shape == KernelShape::Dirac;
        if (array.dim == 1) {
            st.idx = sx.idx;
            st.psi = sx.psi;
            st.quad = sx.quad;
        } else {
            Stencil1d sy = build_axis_stencil(array.kernel, centers_y_[i], grid.ny, grid.dy(),
                                              grid.ly, grid.periodic);
            for (std::size_t a = 0; a < sx.idx.size(); ++a)
                for (std::size_t b = 0; b < sy.idx.size(); ++b) {
                    st.idx.push_back(sx.idx[a] * grid.ny + sy.idx[b]);
                    st.psi.push_back(sx.psi[a] * sy.psi[b]);
                    st.quad.push_back(sx.quad[a] * sy.quad[b]);
                }
        }
    }

    // fold quadrature (and optional unit-integral normalization) into sensing
    sense_weight_.clear();
    sense_off_.resize(m + 1, 0);
    for (int i = 0; i < m; ++i) {
        const Stencil& st = stencils_[i];
        double norm = 1.0;
        if (array.kernel.unit_integral && !st.dirac) {
            double mass = 0.0;
            for (std::size_t g = 0; g < st.idx.size(); ++g) mass += st.psi[g] * st.quad[g];
            norm = 1.0 / mass;
        }
        for (std::size_t g = 0; g < st.idx.size(); ++g)
            sense_weight_.push_back(st.psi[g] * st.quad[g] * norm);
        sense_off_[i + 1] = sense_weight_.size();
    }
}

std::vector<double> SensorOps::sense(const Field& field) const {
    if (!(field.grid == grid_)) throw std::invalid_argument("sense: grid mismatch");
    const int m = count();
    const int nc = field.components;
    std::vector<double> obs(static_cast<std::size_t>(m) * nc, 0.0);
    for (int i = 0; i < m; ++i) {
        const Stencil& st = stencils_[i];
        for (int c = 0; c < nc; ++c) {
            const double* p = field.component(c);
            double acc = 0.0;
            for (std::size_t g = sense_off_[i]; g < sense_off_[i + 1]; ++g)
                acc += sense_weight_[g] * p[st.idx[g - sense_off_[i]]];
            obs[static_cast<std::size_t>(i) * nc + c] = acc;
        }
    }
    return obs;
}

std::vector<int> SensorOps::neighborhood(int i) const {
    const int half = (array_.s_axis - 1) / 2;
    std::vector<int> out;
    auto wrap_or_clamp = [&](int v, int count) {
        if (array_.periodic_wrap) return ((v % count) + count) % count;
        return std::clamp(v, 0, count - 1);
    };
    if (array_.dim == 1) {
        for (int o = -half; o <= half; ++o) out.push_back(wrap_or_clamp(i + o, array_.count_x));
    } else {
        int ix = i / array_.count_y, iy = i % array_.count_y;
        for (int ox = -half; ox <= half; ++ox)
            for (int oy = -half; oy <= half; ++oy)
                out.push_back(wrap_or_clamp(ix + ox, array_.count_x) * array_.count_y +
                              wrap_or_clamp(iy + oy, array_.count_y));
    }
    return out;
}

std::vector<double> SensorOps::local_views(std::span<const double> observations, int n_components,
                                           std::span<const std::vector<double>> delayed) const {
    const int m = count();
    const int s = array_.view_rows();
    const std::size_t frames = 1 + delayed.size();
    const std::size_t row_len = static_cast<std::size_t>(n_components) * s * frames;
    std::vector<double> views(m * row_len);

    for (int i = 0; i < m; ++i) {
        std::vector<int> nb = neighborhood(i);
        double* out = views.data() + i * row_len;
        for (std::size_t f = 0; f < frames; ++f) {
            std::span<const double> obs =
                f == 0 ? observations : std::span<const double>(delayed[f - 1]);
            for (int r = 0; r < s; ++r)
                for (int c = 0; c < n_components; ++c)
                    *out++ = obs[static_cast<std::size_t>(nb[r]) * n_components + c];
        }
    }
    return views;
}

double SensorOps::windowed_cost(int j, const Field& field, const Field& control_field,
                                const RewardSpec& spec) const {
    const Stencil& st = stencils_[j];
    const double* u = control_field.component(0);
    double acc = 0.0;
    for (std::size_t g = 0; g < st.idx.size(); ++g) {
        double p2 = st.psi[g] * st.psi[g];
        double track = 0.0;
        for (int c = 0; c < field.components; ++c) {
            double d = field.component(c)[st.idx[g]] - spec.target[c];
            track += spec.comp_weight[c] * d * d;
        }
        acc += st.quad[g] * p2 * (track + spec.alpha * u[st.idx[g]] * u[st.idx[g]]);
    }
    return acc;
}

ActuatorOps::ActuatorOps(const ActuatorArray& array, const SensorArray& sensors,
                         const Grid& grid)
    : array_(array), grid_(grid), dim_(sensors.dim) {
    array.validate();
    sensors.validate();
    if (grid.periodic && array.margin != 0)
        throw std::invalid_argument("ActuatorOps: margin applies to non-periodic domains only");

    SensorOps sensor_ops(sensors, grid);  // reuse center placement
    const int m_axis_x = sensors.count_x - 2 * array.margin;
    const int m_axis_y = dim_ == 2 ? sensors.count_y - 2 * array.margin : 1;
    if (m_axis_x < 1 || m_axis_y < 1)
        throw std::invalid_argument("ActuatorOps: margin leaves no actuators");
    count_ = m_axis_x * m_axis_y;

    const double inv_measure = 1.0 / grid.domain_measure();
    for (int ax = 0; ax < m_axis_x; ++ax) {
        for (int ay = 0; ay < m_axis_y; ++ay) {
            int si = dim_ == 2
                         ? (ax + array.margin) * sensors.count_y + (ay + array.margin)
                         : ax + array.margin;
            sensor_idx_.push_back(si);
            double cx = sensor_ops.center_x(si);
            double cy = sensor_ops.center_y(si);

            Stencil1d sx = build_axis_stencil(array.kernel, cx, grid.nx, grid.dx(), grid.lx,
                                              grid.periodic);
            SensorOps::Stencil st;
            st.dirac = array.kernel.shape == KernelShape::Dirac;
            if (dim_ == 1) {
                st.idx = sx.idx;
                st.psi = sx.psi;
                st.quad = sx.quad;
            } else {
                Stencil1d sy = build_axis_stencil(array.kernel, cy, grid.ny, grid.dy(), grid.ly,
                                                  grid.periodic);
                for (std::size_t a = 0; a < sx.idx.size(); ++a)
                    for (std::size_t b = 0; b < sy.idx.size(); ++b) {
                        st.idx.push_back(sx.idx[a] * grid.ny + sy.idx[b]);
                        st.psi.push_back(sx.psi[a] * sy.psi[b]);
                        st.quad.push_back(sx.quad[a] * sy.quad[b]);
                    }
            }
            double p2 = 0.0;
            for (std::size_t g = 0; g < st.idx.size(); ++g)
                p2 += st.psi[g] * st.psi[g] * st.quad[g];
            psi_sq_mean_.push_back(st.dirac ? 0.0 : p2 * inv_measure);
            stencils_.push_back(std::move(st));
        }
    }
}

Field ActuatorOps::actuate(std::span<const double> actions) const {
    if (static_cast<int>(actions.size()) != count_)
        throw std::invalid_argument("actuate: expected P actions");
    Field out(grid_, 1);
    double* p = out.component(0);
    for (int j = 0; j < count_; ++j) {
        double a = actions[j];
        if (a > array_.u_max || a < -array_.u_max) {
            a = std::clamp(a, -array_.u_max, array_.u_max);
            ++clamp_count_;
        }
        const SensorOps::Stencil& st = stencils_[j];
        for (std::size_t g = 0; g < st.idx.size(); ++g) p[st.idx[g]] += a * st.psi[g];
    }
    return out;
}

Rewards compute_rewards(const Field& field, std::span<const double> actions,
                        const Field& control_field, const SensorOps& sensors,
                        const ActuatorOps& actuators, const RewardSpec& spec) {
    if (static_cast<int>(spec.target.size()) != field.components ||
        static_cast<int>(spec.comp_weight.size()) != field.components)
        throw std::invalid_argument("compute_rewards: reward spec component mismatch");

    double track = 0.0;
    for (int c = 0; c < field.components; ++c)
        track += spec.comp_weight[c] * field.mean_sq_dev(c, spec.target[c]);
    double ctrl = 0.0;
    for (int j = 0; j < actuators.count(); ++j)
        ctrl += actions[j] * actions[j] * actuators.psi_sq_mean(j);
    const double stage_global = track + spec.alpha * ctrl;

    const int m = sensors.count();
    std::vector<double> windowed(m);
    for (int j = 0; j < m; ++j)
        windowed[j] = sensors.windowed_cost(j, field, control_field, spec);

    Rewards r;
    r.global = -stage_global;
    r.local.resize(m);
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int j : sensors.neighborhood(i)) acc += windowed[j];
        r.local[i] = -acc - spec.beta * stage_global;
    }
    return r;
}

} // namespace pdecrl
