#pragma once

#include "pdecrl/field.hpp"

#include <span>
#include <vector>

namespace pdecrl {

enum class KernelShape { Gaussian, Indicator, Dirac, Asymmetric };

struct KernelSpec {
    KernelShape shape = KernelShape::Gaussian;
    double sigma = 0.8;                 // Gaussian width
    double width = 0.25;                // Indicator width
    std::vector<double> table;          // Asymmetric: weights at consecutive grid nodes
    bool unit_integral = false;         // normalize sensing to a local average

    void validate() const;
};

/// M kernel placement centers plus the local neighborhood geometry. In 2D the
/// sensors form a regular count_x * count_y lattice and the neighborhood is
/// s_axis * s_axis.
struct SensorArray {
    KernelSpec kernel;
    int dim = 1;
    int count_x = 8;
    int count_y = 1;                    // 1 for 1D
    int s_axis = 1;                     // odd, neighborhood size per axis
    bool periodic_wrap = true;

    int total() const { return count_x * count_y; }
    int view_rows() const { return dim == 2 ? s_axis * s_axis : s_axis; }

    void validate() const;
};

/// Actuator placement: sensor centers minus `margin` per boundary (index
/// distance, non-periodic domains only).
struct ActuatorArray {
    KernelSpec kernel;
    int margin = 0;
    double u_max = 1.0;

    void validate() const;
};

struct RewardSpec {
    double alpha = 0.1;                 // control penalty weight
    double beta = 0.0;                  // global term weight
    std::vector<double> target{0.0};    // reference value per component
    std::vector<double> comp_weight{1.0};
};

struct Rewards {
    std::vector<double> local;          // one per sensor/agent
    double global = 0.0;
};

/// Precomputed kernel stencils of a sensor array on a concrete grid.
class SensorOps {
public:
    SensorOps(const SensorArray& array, const Grid& grid);

    const SensorArray& array() const { return array_; }
    int count() const { return array_.total(); }

    /// Observation matrix, row-major M x n_components.
    std::vector<double> sense(const Field& field) const;

    /// Local state vectors, row-major M x (n * S * (1 + delays.size())).
    /// `delayed` holds past observation matrices, most recent first.
    std::vector<double> local_views(std::span<const double> observations, int n_components,
                                    std::span<const std::vector<double>> delayed = {}) const;

    /// Sensor indices of agent i's neighborhood, view-row order.
    std::vector<int> neighborhood(int i) const;

    /// Windowed stage cost of sensor j: the kernel-weighted quadratic tracking
    /// cost plus alpha times the kernel-weighted control cost.
    double windowed_cost(int j, const Field& field, const Field& control_field,
                         const RewardSpec& spec) const;

    double center_x(int i) const { return centers_x_[i]; }
    double center_y(int i) const { return dim() == 2 ? centers_y_[i] : 0.0; }
    int dim() const { return array_.dim; }

    struct Stencil {
        std::vector<int> idx;       // flat grid indices
        std::vector<double> psi;    // kernel value at the node
        std::vector<double> quad;   // quadrature weight of the node
        bool dirac = false;
    };
    const Stencil& stencil(int i) const { return stencils_[i]; }

private:
    SensorArray array_;
    Grid grid_;
    std::vector<double> centers_x_, centers_y_;
    std::vector<Stencil> stencils_;
    std::vector<double> sense_weight_;  // per sensor: quadrature (and normalization) folded in
    std::vector<std::size_t> sense_off_;
};

/// Actuation synthesis for an actuator array bound to a sensor array.
class ActuatorOps {
public:
    ActuatorOps(const ActuatorArray& array, const SensorArray& sensors, const Grid& grid);

    int count() const { return count_; }
    double u_max() const { return array_.u_max; }
    /// Sensor index co-located with actuator j.
    int sensor_index(int j) const { return dim_ == 2 ? sensor_idx_[j] : j + array_.margin; }

    /// Control field from a P-vector of actions; out-of-bound actions are
    /// clamped and counted.
    Field actuate(std::span<const double> actions) const;

    long clamp_count() const { return clamp_count_; }

    /// Spatial mean of psi^2 centered at actuator j (the control penalty weight).
    double psi_sq_mean(int j) const { return psi_sq_mean_[j]; }

private:
    ActuatorArray array_;
    Grid grid_;
    int dim_;
    int count_;
    std::vector<int> sensor_idx_;
    std::vector<SensorOps::Stencil> stencils_;
    std::vector<double> psi_sq_mean_;
    mutable long clamp_count_ = 0;
};

/// Per-agent and global rewards. The global reward is
///   -( <(y - ref)^2> + alpha * sum_j u_j^2 <psi^2_j> );
/// agent i receives the negated sum of the windowed costs over its
/// neighborhood, minus beta times the global stage cost.
Rewards compute_rewards(const Field& field, std::span<const double> actions,
                        const Field& control_field, const SensorOps& sensors,
                        const ActuatorOps& actuators, const RewardSpec& spec);

} // namespace pdecrl
