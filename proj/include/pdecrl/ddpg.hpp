#pragma once

#include "pdecrl/mlp.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdecrl {

struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false;
};

/// Fixed-capacity FIFO ring of transitions with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return size_; }

    void push(Transition t);
    void push_batch(std::vector<Transition> batch);

    /// Uniform sample with replacement; throws on an empty buffer.
    std::vector<const Transition*> sample(int batch_size, Rng& rng) const;

    const Transition& at(std::size_t i) const { return ring_[i]; }

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::size_t size_ = 0;
    std::vector<Transition> ring_;
};

struct DdpgHyper {
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double gamma = 0.99;
    double tau = 0.005;
    int batch_size = 64;
    std::size_t buffer_capacity = 100000;
    double noise_sigma = 0.1;           // initial exploration noise, fraction of u_max
    double noise_sigma_final = 0.01;
    long noise_decay_updates = 100000;  // linear decay horizon

    void validate() const;
};

/// Geometry the policy was trained with; checked on transfer.
struct PolicyGeometry {
    int s_axis = 1;
    int n_components = 1;
    int delays = 0;
    double domain_per_sensor = 0.0;     // L / M
    std::string kernel_desc;

    bool compatible(const PolicyGeometry& other, std::string* why = nullptr) const;
    std::string describe() const;
};

struct UpdateDiag {
    double critic_loss = 0.0;
    double actor_objective = 0.0;       // mean Q(s, pi(s))
};

/// Deterministic policy gradient learner: actor/critic MLPs with target
/// copies, Adam, and Gaussian exploration noise.
class DdpgAgent {
public:
    DdpgAgent(int state_dim, int action_dim, const std::vector<int>& actor_hidden,
              const std::vector<int>& critic_hidden, double u_max, const DdpgHyper& hp,
              Rng& rng);

    int state_dim() const { return actor_.input_size(); }
    int action_dim() const { return actor_.output_size(); }
    double u_max() const { return actor_.out_scale; }
    const DdpgHyper& hyper() const { return hp_; }
    long updates() const { return updates_; }

    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    const Mlp& target_actor() const { return actor_t_; }
    const Mlp& target_critic() const { return critic_t_; }
    Mlp& mutable_actor() { return actor_; }

    /// Deterministic actor output, plus clamped Gaussian noise when exploring.
    std::vector<double> act(std::span<const double> state, bool explore, Rng& rng) const;

    double noise_scale() const;

    UpdateDiag update(const std::vector<const Transition*>& batch);

    /// theta_target <- tau * theta + (1 - tau) * theta_target.
    void soft_update(double tau);

    PolicyGeometry geometry;

    void save(std::ostream& os) const;
    void save_file(const std::string& path) const;
    static DdpgAgent load(std::istream& is);
    static DdpgAgent load_file(const std::string& path);

private:
    DdpgAgent() = default;

    Mlp actor_, critic_, actor_t_, critic_t_;
    Adam actor_opt_, critic_opt_;
    DdpgHyper hp_;
    long updates_ = 0;

    // scratch buffers reused across updates
    std::vector<double> actor_grad_, critic_grad_;
};

} // namespace pdecrl
