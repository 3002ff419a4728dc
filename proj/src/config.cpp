#include "pdecrl/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pdecrl {

std::unique_ptr<PdeEnv> ExperimentConfig::make_env() const {
    if (env_type == "ks") return std::make_unique<KsEnv>(ks);
    if (env_type == "keller-segel") return std::make_unique<KellerSegelEnv>(keller_segel);
    if (env_type == "vorticity2d") return std::make_unique<Vorticity2dEnv>(vorticity);
    throw std::invalid_argument("unknown env type: " + env_type);
}

int ExperimentConfig::env_components() const { return env_type == "keller-segel" ? 2 : 1; }

double ExperimentConfig::env_dt() const {
    if (env_type == "ks") return ks.dt;
    if (env_type == "keller-segel") return keller_segel.dt;
    return vorticity.dt;
}

double ExperimentConfig::domain_length() const {
    if (env_type == "ks") return ks.length;
    if (env_type == "keller-segel") return keller_segel.length;
    return 2.0 * 3.14159265358979323846;
}

int ExperimentConfig::warmup_steps() const {
    return static_cast<int>(std::lround(warmup_time / env_dt()));
}

std::string ExperimentConfig::kernel_desc() const {
    std::ostringstream os;
    switch (sensors.kernel.shape) {
    case KernelShape::Gaussian: os << "gaussian sigma=" << sensors.kernel.sigma; break;
    case KernelShape::Indicator: os << "indicator width=" << sensors.kernel.width; break;
    case KernelShape::Dirac: os << "dirac"; break;
    case KernelShape::Asymmetric: os << "asymmetric n=" << sensors.kernel.table.size(); break;
    }
    if (sensors.kernel.unit_integral) os << " unit-integral";
    return os.str();
}

PolicyGeometry ExperimentConfig::geometry() const {
    PolicyGeometry g;
    g.s_axis = sensors.s_axis;
    g.n_components = env_components();
    g.delays = delays;
    g.domain_per_sensor = domain_length() / sensors.count_x;
    g.kernel_desc = kernel_desc();
    return g;
}

void ExperimentConfig::validate() const {
    auto env = make_env();
    sensors.validate();
    actuators.validate();
    SensorOps so(sensors, env->grid());
    ActuatorOps ao(actuators, sensors, env->grid());
    hyper.validate();
    if (static_cast<int>(reward.target.size()) != env_components() ||
        static_cast<int>(reward.comp_weight.size()) != env_components())
        throw std::invalid_argument("reward target/weight must have one entry per component");
    if (reward.alpha < 0.0 || reward.beta < 0.0)
        throw std::invalid_argument("reward weights must be >= 0");
    if (episode_steps < 1) throw std::invalid_argument("episode_steps must be >= 1");
    if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
    if (warmup_time < 0.0) throw std::invalid_argument("warmup_time must be >= 0");
    if (delays < 0 || delay_stride < 1)
        throw std::invalid_argument("delays >= 0 and delay_stride >= 1 required");
    for (int h : actor_hidden)
        if (h < 1) throw std::invalid_argument("actor hidden sizes must be positive");
    for (int h : critic_hidden)
        if (h < 1) throw std::invalid_argument("critic hidden sizes must be positive");
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

namespace {

ExperimentConfig ks_base() {
    ExperimentConfig c;
    c.env_type = "ks";
    c.sensors.kernel.shape = KernelShape::Gaussian;
    c.sensors.kernel.sigma = 0.8;
    c.sensors.s_axis = 1;
    c.sensors.periodic_wrap = true;
    c.actuators.kernel = c.sensors.kernel;
    c.actuators.u_max = 1.0;
    c.reward.alpha = 0.1;
    c.reward.beta = 0.0;
    c.reward.target = {0.0};
    c.reward.comp_weight = {1.0};
    c.actor_hidden = {6};
    c.critic_hidden = {140};
    c.episode_steps = 400;
    c.warmup_time = 100.0;
    c.episodes = 2000;
    c.stop_mse = 5e-3;
    return c;
}

} // namespace

ExperimentConfig preset_config(const std::string& name) {
    if (name == "ks-L22" || name == "ks-L22-mu002") {
        ExperimentConfig c = ks_base();
        c.preset_name = name;
        c.ks.length = 22.0;
        c.ks.n_points = 64;
        c.ks.mu = name == "ks-L22-mu002" ? 0.02 : 0.0;
        c.sensors.count_x = 8;
        return c;
    }
    if (name == "ks-L200") {
        ExperimentConfig c = ks_base();
        c.preset_name = name;
        c.ks.length = 200.0;
        c.ks.n_points = 512;
        c.sensors.count_x = 80;
        return c;
    }
    if (name == "ks-L500") {
        ExperimentConfig c = ks_base();
        c.preset_name = name;
        c.ks.length = 500.0;
        c.ks.n_points = 1280;
        c.sensors.count_x = 200;
        c.episodes = 0;  // evaluation / transfer target
        return c;
    }
    if (name == "keller-segel") {
        ExperimentConfig c;
        c.preset_name = name;
        c.env_type = "keller-segel";
        c.sensors.kernel.shape = KernelShape::Indicator;
        c.sensors.kernel.width = 0.25;
        c.sensors.kernel.unit_integral = true;
        c.sensors.count_x = 40;
        c.sensors.s_axis = 3;
        c.sensors.periodic_wrap = false;
        c.delays = 1;
        c.delay_stride = 20;            // 1 time unit at dt = 0.05
        c.actuators.kernel = c.sensors.kernel;
        c.actuators.kernel.unit_integral = false;
        c.actuators.margin = 2;
        c.actuators.u_max = 2.0;
        c.reward.alpha = 0.1;
        c.reward.target = {1.0, 0.0};
        c.reward.comp_weight = {1.0, 0.0};
        c.actor_hidden = {20, 20};
        c.critic_hidden = {20, 20};
        c.warmup_time = 21.0;
        c.episode_steps = 600;          // 30 time units of control
        c.episodes = 2000;
        c.stop_mse = 5e-3;
        return c;
    }
    if (name == "turbulence-8" || name == "turbulence-16" || name == "turbulence-32") {
        ExperimentConfig c;
        c.preset_name = name;
        c.env_type = "vorticity2d";
        int m = name == "turbulence-8" ? 8 : name == "turbulence-16" ? 16 : 32;
        c.sensors.dim = 2;
        c.sensors.count_x = m;
        c.sensors.count_y = m;
        c.sensors.s_axis = 3;
        c.sensors.kernel.shape = KernelShape::Gaussian;
        c.sensors.kernel.sigma = 0.5 * (2.0 * 3.14159265358979323846 / m);
        c.actuators.kernel = c.sensors.kernel;
        c.actuators.u_max = 5.0;
        c.reward.alpha = 0.1;
        c.reward.target = {0.0};
        c.reward.comp_weight = {1.0};
        c.actor_hidden = {4};
        c.critic_hidden = {4};
        c.warmup_time = 1.0;
        c.episode_steps = 400;          // control active on t in [1, 5]
        c.episodes = 150;
        c.stop_mse = 0.0;
        c.eval_every = 10;
        c.eval_episodes = 1;
        return c;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"ks-L22", "ks-L200", "ks-L500", "ks-L22-mu002", "keller-segel",
            "turbulence-8", "turbulence-16", "turbulence-32"};
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using RawConfig = std::map<std::string, std::map<std::string, RawEntry>>;

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

class Reader {
public:
    Reader(RawConfig& raw, std::string section) : raw_(raw), section_(std::move(section)) {}

    bool has(const std::string& key) {
        auto s = raw_.find(section_);
        return s != raw_.end() && s->second.count(key);
    }

    RawEntry* get(const std::string& key) {
        auto s = raw_.find(section_);
        if (s == raw_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    void number(const std::string& key, double& out) {
        if (RawEntry* e = get(key)) {
            char* end = nullptr;
            out = std::strtod(e->value.c_str(), &end);
            if (end == e->value.c_str() || *end != '\0')
                fail(e->line, "expected a number for '" + key + "', got '" + e->value + "'");
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out) {
        if (RawEntry* e = get(key)) {
            try {
                std::size_t pos = 0;
                long long v = std::stoll(e->value, &pos);
                if (pos != e->value.size()) throw std::invalid_argument("");
                out = static_cast<Int>(v);
            } catch (...) {
                fail(e->line, "expected an integer for '" + key + "', got '" + e->value + "'");
            }
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (RawEntry* e = get(key)) {
            if (e->value == "true" || e->value == "1") out = true;
            else if (e->value == "false" || e->value == "0") out = false;
            else fail(e->line, "expected true/false for '" + key + "'");
        }
    }

    void text(const std::string& key, std::string& out) {
        if (RawEntry* e = get(key)) out = e->value;
    }

    void int_list(const std::string& key, std::vector<int>& out) {
        if (RawEntry* e = get(key)) {
            out = parse_list<int>(e);
        }
    }

    void num_list(const std::string& key, std::vector<double>& out) {
        if (RawEntry* e = get(key)) {
            out = parse_list<double>(e);
        }
    }

private:
    template <typename T>
    std::vector<T> parse_list(RawEntry* e) {
        std::vector<T> out;
        std::istringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            try {
                if constexpr (std::is_same_v<T, int>) out.push_back(std::stoi(item));
                else out.push_back(std::stod(item));
            } catch (...) {
                fail(e->line, "bad list element '" + item + "'");
            }
        }
        if (out.empty()) fail(e->line, "empty list");
        return out;
    }

    RawConfig& raw_;
    std::string section_;
};

void read_kernel(Reader& r, KernelSpec& k, int line_hint) {
    std::string shape;
    r.text("kernel", shape);
    if (!shape.empty()) {
        if (shape == "gaussian") k.shape = KernelShape::Gaussian;
        else if (shape == "indicator") k.shape = KernelShape::Indicator;
        else if (shape == "dirac") k.shape = KernelShape::Dirac;
        else if (shape == "asymmetric") k.shape = KernelShape::Asymmetric;
        else fail(line_hint, "unknown kernel shape '" + shape + "'");
    }
    r.number("sigma", k.sigma);
    r.number("width", k.width);
    r.num_list("table", k.table);
    r.boolean("unit_integral", k.unit_integral);
}

ExperimentConfig apply_raw(RawConfig& raw, ExperimentConfig base) {
    ExperimentConfig c = std::move(base);

    {
        Reader r(raw, "env");
        std::string type = c.env_type;
        r.text("type", type);
        c.env_type = type;
        if (c.env_type == "ks") {
            r.number("L", c.ks.length);
            r.integer("n_points", c.ks.n_points);
            r.number("mu", c.ks.mu);
            r.number("dt", c.ks.dt);
            r.integer("substeps", c.ks.substeps);
        } else if (c.env_type == "keller-segel") {
            r.number("L", c.keller_segel.length);
            r.integer("n_points", c.keller_segel.n_points);
            r.number("D", c.keller_segel.diffusion);
            r.number("chi", c.keller_segel.chi);
            r.number("q", c.keller_segel.growth);
            r.number("dt", c.keller_segel.dt);
            r.integer("substeps", c.keller_segel.substeps);
        } else if (c.env_type == "vorticity2d") {
            r.integer("n_grid", c.vorticity.n_grid);
            r.number("Re", c.vorticity.reynolds);
            r.number("dt", c.vorticity.dt);
            r.integer("substeps", c.vorticity.substeps);
            r.number("ic_peak_k", c.vorticity.ic_peak_wavenumber);
        }
        c.sensors.dim = c.env_type == "vorticity2d" ? 2 : 1;
        c.sensors.periodic_wrap = c.env_type != "keller-segel";
    }
    {
        Reader r(raw, "sensors");
        int count = c.sensors.count_x;
        r.integer("count", count);
        c.sensors.count_x = count;
        c.sensors.count_y = c.sensors.dim == 2 ? count : 1;
        r.integer("S", c.sensors.s_axis);
        read_kernel(r, c.sensors.kernel, 0);
        r.integer("delays", c.delays);
        r.integer("delay_stride", c.delay_stride);
    }
    {
        Reader r(raw, "actuators");
        if (!raw["actuators"].count("kernel") && !raw["actuators"].count("sigma") &&
            !raw["actuators"].count("width"))
            c.actuators.kernel = c.sensors.kernel;   // default: same kernel family
        read_kernel(r, c.actuators.kernel, 0);
        r.integer("margin", c.actuators.margin);
        r.number("u_max", c.actuators.u_max);
    }
    {
        Reader r(raw, "reward");
        r.number("alpha", c.reward.alpha);
        r.number("beta", c.reward.beta);
        r.num_list("target", c.reward.target);
        r.num_list("comp_weight", c.reward.comp_weight);
    }
    {
        Reader r(raw, "agent");
        r.int_list("actor_hidden", c.actor_hidden);
        r.int_list("critic_hidden", c.critic_hidden);
        r.number("actor_lr", c.hyper.actor_lr);
        r.number("critic_lr", c.hyper.critic_lr);
        r.number("gamma", c.hyper.gamma);
        r.number("tau", c.hyper.tau);
        r.integer("batch_size", c.hyper.batch_size);
        r.integer("buffer_capacity", c.hyper.buffer_capacity);
        r.number("noise_sigma", c.hyper.noise_sigma);
        r.number("noise_sigma_final", c.hyper.noise_sigma_final);
        r.integer("noise_decay_updates", c.hyper.noise_decay_updates);
    }
    {
        Reader r(raw, "training");
        r.integer("episodes", c.episodes);
        r.integer("episode_steps", c.episode_steps);
        r.number("warmup_time", c.warmup_time);
        r.integer("seed", c.seed);
        r.integer("eval_every", c.eval_every);
        r.integer("eval_episodes", c.eval_episodes);
        r.integer("warm_fill", c.warm_fill);
        r.number("stop_mse", c.stop_mse);
        r.number("wall_clock_budget_s", c.wall_clock_budget_s);
        r.number("terminal_penalty", c.terminal_penalty);
    }
    {
        Reader r(raw, "baseline");
        r.number("opposition_gain", c.opposition_gain);
        r.int_list("global_hidden", c.global_hidden);
        r.number("global_budget_factor", c.global_budget_factor);
    }
    {
        Reader r(raw, "output");
        r.integer("snapshot_every", c.snapshot_every);
    }

    for (const auto& [section, entries] : raw)
        for (const auto& [key, entry] : entries)
            if (!entry.used)
                fail(entry.line, "unknown key '" + key + "' in section [" + section + "]");

    try {
        c.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config invariant violation: ") + e.what());
    }
    return c;
}

} // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);

    RawConfig raw;
    std::string section;
    std::string preset;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (section.empty()) {
            if (key == "preset") {
                preset = value;
                continue;
            }
            fail(lineno, "key '" + key + "' outside any section");
        }
        if (raw[section].count(key)) fail(lineno, "duplicate key '" + key + "'");
        raw[section][key] = RawEntry{value, lineno, false};
    }

    ExperimentConfig base = preset.empty() ? ExperimentConfig{} : preset_config(preset);
    return apply_raw(raw, std::move(base));
}

ExperimentConfig apply_overrides(ExperimentConfig base,
                                 const std::vector<std::pair<std::string, std::string>>& kv) {
    RawConfig raw;
    int n = 0;
    for (const auto& [dotted, value] : kv) {
        ++n;
        auto dot = dotted.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == dotted.size())
            fail(n, "override key must look like 'section.key', got '" + dotted + "'");
        raw[dotted.substr(0, dot)][dotted.substr(dot + 1)] = RawEntry{value, n, false};
    }
    return apply_raw(raw, std::move(base));
}

ExperimentConfig resolve_config(const std::string& path_or_preset) {
    if (std::ifstream probe(path_or_preset); probe.good()) return parse_config(path_or_preset);
    return preset_config(path_or_preset);
}

// ---------------------------------------------------------------------------

std::string ExperimentConfig::echo() const {
    std::ostringstream os;
    os.precision(17);
    if (!preset_name.empty()) os << "preset = " << preset_name << "\n";
    os << "[env]\ntype = " << env_type << "\n";
    if (env_type == "ks")
        os << "L = " << ks.length << "\nn_points = " << ks.n_points << "\nmu = " << ks.mu
           << "\ndt = " << ks.dt << "\nsubsteps = " << ks.substeps << "\n";
    else if (env_type == "keller-segel")
        os << "L = " << keller_segel.length << "\nn_points = " << keller_segel.n_points
           << "\nD = " << keller_segel.diffusion << "\nchi = " << keller_segel.chi
           << "\nq = " << keller_segel.growth << "\ndt = " << keller_segel.dt
           << "\nsubsteps = " << keller_segel.substeps << "\n";
    else
        os << "n_grid = " << vorticity.n_grid << "\nRe = " << vorticity.reynolds
           << "\ndt = " << vorticity.dt << "\nsubsteps = " << vorticity.substeps
           << "\nic_peak_k = " << vorticity.ic_peak_wavenumber << "\n";
    os << "[sensors]\ncount = " << sensors.count_x << "\nS = " << sensors.s_axis
       << "\nkernel = " << kernel_desc() << "\ndelays = " << delays
       << "\ndelay_stride = " << delay_stride << "\n";
    os << "[actuators]\nmargin = " << actuators.margin << "\nu_max = " << actuators.u_max
       << "\n";
    os << "[reward]\nalpha = " << reward.alpha << "\nbeta = " << reward.beta << "\ntarget =";
    for (double t : reward.target) os << ' ' << t;
    os << "\n[agent]\nactor_hidden =";
    for (int h : actor_hidden) os << ' ' << h;
    os << "\ncritic_hidden =";
    for (int h : critic_hidden) os << ' ' << h;
    os << "\nactor_lr = " << hyper.actor_lr << "\ncritic_lr = " << hyper.critic_lr
       << "\ngamma = " << hyper.gamma << "\ntau = " << hyper.tau
       << "\nbatch_size = " << hyper.batch_size << "\nbuffer_capacity = " << hyper.buffer_capacity
       << "\nnoise_sigma = " << hyper.noise_sigma
       << "\nnoise_sigma_final = " << hyper.noise_sigma_final
       << "\nnoise_decay_updates = " << hyper.noise_decay_updates << "\n";
    os << "[training]\nepisodes = " << episodes << "\nepisode_steps = " << episode_steps
       << "\nwarmup_time = " << warmup_time << "\nseed = " << seed
       << "\neval_every = " << eval_every << "\neval_episodes = " << eval_episodes
       << "\nwarm_fill = " << warm_fill << "\nstop_mse = " << stop_mse
       << "\nwall_clock_budget_s = " << wall_clock_budget_s
       << "\nterminal_penalty = " << terminal_penalty << "\n";
    os << "[output]\nsnapshot_every = " << snapshot_every << "\n";
    return os.str();
}

} // namespace pdecrl
