#include "pdecrl/ddpg.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pdecrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    ring_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (size_ < capacity_) {
        ring_.push_back(std::move(t));
        ++size_;
    } else {
        ring_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
}

void ReplayBuffer::push_batch(std::vector<Transition> batch) {
    for (Transition& t : batch) push(std::move(t));
}

std::vector<const Transition*> ReplayBuffer::sample(int batch_size, Rng& rng) const {
    if (size_ == 0) throw std::runtime_error("ReplayBuffer: sample from empty buffer");
    std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
    std::vector<const Transition*> out(batch_size);
    for (int i = 0; i < batch_size; ++i) out[i] = &ring_[pick(rng)];
    return out;
}

void DdpgHyper::validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("DdpgHyper: gamma in [0,1]");
    if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("DdpgHyper: tau in (0,1]");
    if (batch_size < 1) throw std::invalid_argument("DdpgHyper: batch size >= 1");
    if (actor_lr <= 0.0 || critic_lr <= 0.0)
        throw std::invalid_argument("DdpgHyper: learning rates must be positive");
}

bool PolicyGeometry::compatible(const PolicyGeometry& other, std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg + "\n  policy:  " + describe() + "\n  config:  " + other.describe();
        return false;
    };
    if (s_axis != other.s_axis) return fail("neighborhood size S differs");
    if (n_components != other.n_components) return fail("state component count differs");
    if (delays != other.delays) return fail("delay coordinate count differs");
    if (std::abs(domain_per_sensor - other.domain_per_sensor) >
        1e-9 * std::max(1.0, std::abs(domain_per_sensor)))
        return fail("L/M ratio differs");
    if (kernel_desc != other.kernel_desc) return fail("kernel differs");
    return true;
}

std::string PolicyGeometry::describe() const {
    std::ostringstream os;
    os << "S=" << s_axis << " n=" << n_components << " delays=" << delays
       << " L/M=" << domain_per_sensor << " kernel=" << kernel_desc;
    return os.str();
}

DdpgAgent::DdpgAgent(int state_dim, int action_dim, const std::vector<int>& actor_hidden,
                     const std::vector<int>& critic_hidden, double u_max, const DdpgHyper& hp,
                     Rng& rng)
    : actor_opt_(hp.actor_lr), critic_opt_(hp.critic_lr), hp_(hp) {
    hp.validate();
    std::vector<int> asz{state_dim};
    asz.insert(asz.end(), actor_hidden.begin(), actor_hidden.end());
    asz.push_back(action_dim);
    std::vector<int> csz{state_dim + action_dim};
    csz.insert(csz.end(), critic_hidden.begin(), critic_hidden.end());
    csz.push_back(1);
    actor_ = Mlp::make(asz, Mlp::Output::TanhScaled, u_max, rng);
    critic_ = Mlp::make(csz, Mlp::Output::Identity, 1.0, rng);
    actor_t_ = actor_;
    critic_t_ = critic_;
}

double DdpgAgent::noise_scale() const {
    double frac = hp_.noise_decay_updates > 0
                      ? std::min(1.0, static_cast<double>(updates_) / hp_.noise_decay_updates)
                      : 1.0;
    return hp_.noise_sigma + frac * (hp_.noise_sigma_final - hp_.noise_sigma);
}

std::vector<double> DdpgAgent::act(std::span<const double> state, bool explore, Rng& rng) const {
    std::vector<double> a = actor_.forward(state);
    if (explore) {
        std::normal_distribution<double> noise(0.0, noise_scale() * u_max());
        for (double& x : a) x += noise(rng);
    }
    for (double& x : a) x = std::clamp(x, -u_max(), u_max());
    return a;
}

UpdateDiag DdpgAgent::update(const std::vector<const Transition*>& batch) {
    if (batch.empty()) throw std::invalid_argument("DdpgAgent::update: empty batch");
    const int bsz = static_cast<int>(batch.size());
    const int sdim = state_dim();
    const int adim = action_dim();

    critic_grad_.assign(critic_.param_count(), 0.0);
    actor_grad_.assign(actor_.param_count(), 0.0);

    std::vector<double> sa(sdim + adim);
    Mlp::Trace trace, trace2;
    UpdateDiag diag;

    // critic: squared Bellman error against the target networks
    for (const Transition* t : batch) {
        std::vector<double> na = actor_t_.forward(t->next_state);
        std::copy(t->next_state.begin(), t->next_state.end(), sa.begin());
        std::copy(na.begin(), na.end(), sa.begin() + sdim);
        double q_next = critic_t_.forward(sa)[0];
        double y = t->reward + hp_.gamma * (t->terminal ? 0.0 : 1.0) * q_next;

        std::copy(t->state.begin(), t->state.end(), sa.begin());
        std::copy(t->action.begin(), t->action.end(), sa.begin() + sdim);
        double q = critic_.forward(sa, trace)[0];
        double err = q - y;
        diag.critic_loss += err * err / bsz;
        double dq = 2.0 * err / bsz;
        critic_.backward(trace, std::span<const double>(&dq, 1), critic_grad_);
    }

    // actor: ascend mean Q(s, pi(s))
    for (const Transition* t : batch) {
        std::vector<double> a = actor_.forward(t->state, trace);
        std::copy(t->state.begin(), t->state.end(), sa.begin());
        std::copy(a.begin(), a.end(), sa.begin() + sdim);
        double q = critic_.forward(sa, trace2)[0];
        diag.actor_objective += q / bsz;
        double dq = 1.0 / bsz;
        std::vector<double> unused(critic_.param_count(), 0.0);
        std::vector<double> dsa =
            critic_.backward(trace2, std::span<const double>(&dq, 1), unused);
        std::vector<double> da(dsa.begin() + sdim, dsa.end());
        for (double& g : da) g = -g;  // gradient ascent
        actor_.backward(trace, da, actor_grad_);
    }

    if (!std::isfinite(diag.critic_loss) || !std::isfinite(diag.actor_objective)) {
        std::ostringstream os;
        os << "DDPG update produced non-finite loss (critic_loss=" << diag.critic_loss
           << ", actor_objective=" << diag.actor_objective << ", updates=" << updates_ << ")";
        throw std::runtime_error(os.str());
    }

    critic_opt_.step(critic_.params, critic_grad_);
    actor_opt_.step(actor_.params, actor_grad_);
    soft_update(hp_.tau);
    ++updates_;
    return diag;
}

void DdpgAgent::soft_update(double tau) {
    for (std::size_t i = 0; i < actor_.params.size(); ++i)
        actor_t_.params[i] += tau * (actor_.params[i] - actor_t_.params[i]);
    for (std::size_t i = 0; i < critic_.params.size(); ++i)
        critic_t_.params[i] += tau * (critic_.params[i] - critic_t_.params[i]);
}

// ---------------------------------------------------------------------------
// checkpoint I/O: line-oriented text, hexfloat arrays for bit-exact round trips
// ---------------------------------------------------------------------------

namespace {

void write_net(std::ostream& os, const std::string& name, const Mlp& net) {
    os << "[" << name << "]\n";
    os << "sizes =";
    for (int s : net.sizes) os << ' ' << s;
    os << "\noutput = " << (net.output == Mlp::Output::TanhScaled ? "tanh" : "identity");
    os << "\nout_scale = " << std::hexfloat << net.out_scale << std::defaultfloat;
    os << "\nparams =" << std::hexfloat;
    for (double p : net.params) os << ' ' << p;
    os << std::defaultfloat << "\n";
}

std::string expect_line(std::istream& is, const std::string& key) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("policy checkpoint: unexpected end of file, wanted " + key);
    if (line.rfind(key, 0) != 0)
        throw std::runtime_error("policy checkpoint: expected '" + key + "', got '" + line + "'");
    auto eq = line.find('=');
    return eq == std::string::npos ? "" : line.substr(eq + 1);
}

Mlp read_net(std::istream& is, const std::string& name) {
    std::string line;
    if (!std::getline(is, line) || line != "[" + name + "]")
        throw std::runtime_error("policy checkpoint: expected section [" + name + "]");
    Mlp net;
    {
        std::istringstream ss(expect_line(is, "sizes"));
        int v;
        while (ss >> v) net.sizes.push_back(v);
    }
    std::string out = expect_line(is, "output");
    net.output = out.find("tanh") != std::string::npos ? Mlp::Output::TanhScaled
                                                       : Mlp::Output::Identity;
    net.out_scale = std::strtod(expect_line(is, "out_scale").c_str(), nullptr);
    {
        std::istringstream ss(expect_line(is, "params"));
        std::string tok;
        while (ss >> tok) net.params.push_back(std::strtod(tok.c_str(), nullptr));
    }
    std::size_t expected = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l)
        expected += static_cast<std::size_t>(net.sizes[l + 1]) * net.sizes[l] + net.sizes[l + 1];
    if (net.params.size() != expected)
        throw std::runtime_error("policy checkpoint: parameter count mismatch in [" + name + "]");
    return net;
}

} // namespace

void DdpgAgent::save(std::ostream& os) const {
    os << "pdecrl-policy v1\n";
    os << "u_max = " << std::hexfloat << u_max() << std::defaultfloat << "\n";
    os << "s_axis = " << geometry.s_axis << "\n";
    os << "n_components = " << geometry.n_components << "\n";
    os << "delays = " << geometry.delays << "\n";
    os << "domain_per_sensor = " << std::hexfloat << geometry.domain_per_sensor
       << std::defaultfloat << "\n";
    os << "kernel = " << geometry.kernel_desc << "\n";
    os << "gamma = " << std::hexfloat << hp_.gamma << "\n";
    os << "tau = " << hp_.tau << std::defaultfloat << "\n";
    os << "updates = " << updates_ << "\n";
    write_net(os, "actor", actor_);
    write_net(os, "critic", critic_);
    write_net(os, "target_actor", actor_t_);
    write_net(os, "target_critic", critic_t_);
}

void DdpgAgent::save_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write policy checkpoint: " + path);
    save(os);
}

DdpgAgent DdpgAgent::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "pdecrl-policy v1")
        throw std::runtime_error("policy checkpoint: unrecognized header");
    DdpgAgent agent;
    double u_max = std::strtod(expect_line(is, "u_max").c_str(), nullptr);
    agent.geometry.s_axis = std::stoi(expect_line(is, "s_axis"));
    agent.geometry.n_components = std::stoi(expect_line(is, "n_components"));
    agent.geometry.delays = std::stoi(expect_line(is, "delays"));
    agent.geometry.domain_per_sensor =
        std::strtod(expect_line(is, "domain_per_sensor").c_str(), nullptr);
    std::string kd = expect_line(is, "kernel");
    agent.geometry.kernel_desc = kd.substr(kd.find_first_not_of(' '));
    agent.hp_.gamma = std::strtod(expect_line(is, "gamma").c_str(), nullptr);
    agent.hp_.tau = std::strtod(expect_line(is, "tau").c_str(), nullptr);
    agent.updates_ = std::stol(expect_line(is, "updates"));
    agent.actor_ = read_net(is, "actor");
    agent.critic_ = read_net(is, "critic");
    agent.actor_t_ = read_net(is, "target_actor");
    agent.critic_t_ = read_net(is, "target_critic");
    if (agent.actor_.out_scale != u_max)
        throw std::runtime_error("policy checkpoint: u_max does not match the actor");
    agent.actor_opt_ = Adam(agent.hp_.actor_lr);
    agent.critic_opt_ = Adam(agent.hp_.critic_lr);
    return agent;
}

DdpgAgent DdpgAgent::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read policy checkpoint: " + path);
    return load(is);
}

} // namespace pdecrl
