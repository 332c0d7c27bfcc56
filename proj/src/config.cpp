#include "rftrack/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rftrack {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                  : source + ": " + message),
      line_(line)
{
}

Experiment reference_experiment()
{
    Experiment exp;
    SimConfig& c = exp.sim;
    c.model = ArmModel::uniform_rods({0.3, 0.25, 0.21}, {1.96, 1.12, 0.42});

    c.env.stiffness = TaskVec(100.0, 100.0).asDiagonal();
    c.env.stiffness_uncertainty = TaskVec(20.0, 50.0).asDiagonal();

    c.gains.Kp = TaskVec(300.0, 500.0).asDiagonal();
    c.gains.Kv = TaskVec(200.0, 350.0).asDiagonal();
    c.gains.Lambda = TaskVec(10.0, 10.0).asDiagonal();
    c.gains.K = 30.0;
    c.gains.C_row = TaskRow(1.0, 1.0);
    c.gains.Ke_nominal = TaskVec(100.0, 100.0).asDiagonal();
    c.gains.sign_mode = SignMode::exact();

    c.traj = TrajectoryConfig{};
    c.theta0 = Vec::Zero(3);
    c.theta_dot0 = Vec::Zero(3);
    c.dt = 1e-4;
    c.t_end = 1.0;
    c.integrator = Integrator::rk4;
    c.log_stride = 10;

    exp.sweep.dKe_bound = TaskVec(20.0, 50.0).asDiagonal();
    exp.theta_desired = Vec::Constant(3, std::numbers::pi);
    return exp;
}

std::string to_string(Integrator integrator)
{
    return integrator == Integrator::rk4 ? "rk4" : "semi_implicit_euler";
}

std::string to_string(const SignMode& mode)
{
    if (mode.kind == SignMode::Kind::exact) return "exact";
    std::ostringstream os;
    os << "boundary_layer:" << mode.epsilon;
    return os.str();
}

Integrator parse_integrator(std::string_view name)
{
    if (name == "rk4") return Integrator::rk4;
    if (name == "semi_implicit_euler") return Integrator::semi_implicit_euler;
    throw ContractViolation("unknown integrator '" + std::string(name) +
                            "' (expected rk4 or semi_implicit_euler)");
}

SignMode parse_sign_mode(std::string_view name, double default_epsilon)
{
    if (name == "exact") return SignMode::exact();
    constexpr std::string_view bl = "boundary_layer";
    if (name.substr(0, bl.size()) == bl) {
        if (name.size() == bl.size()) return SignMode::boundary_layer(default_epsilon);
        if (name[bl.size()] == ':') {
            const std::string eps(name.substr(bl.size() + 1));
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(eps, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == eps.size() && used > 0) {
                if (!(v > 0.0) || !std::isfinite(v))
                    throw ContractViolation("boundary layer width must be positive, got " + eps);
                return SignMode::boundary_layer(v);
            }
        }
    }
    throw ContractViolation("unknown sign mode '" + std::string(name) +
                            "' (expected exact, boundary_layer or boundary_layer:<eps>)");
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

std::string format_list(const std::vector<double>& v)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << "]";
    return os.str();
}

class Reader {
public:
    Reader(std::string source, Experiment& exp) : source_(std::move(source)), exp_(exp) {}

    [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const
    {
        throw ConfigError(source_, line_of(n), msg);
    }
    [[noreturn]] void fail(int line, const std::string& msg) const { throw ConfigError(source_, line, msg); }

    double number(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar()) fail(n, key + ": expected a number");
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) fail(n, key + ": value must be finite");
            return v;
        } catch (const YAML::Exception&) {
            fail(n, key + ": expected a number, got '" + n.Scalar() + "'");
        }
    }

    long long integer(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar()) fail(n, key + ": expected an integer");
        try {
            return n.as<long long>();
        } catch (const YAML::Exception&) {
            fail(n, key + ": expected an integer, got '" + n.Scalar() + "'");
        }
    }

    bool boolean(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar()) fail(n, key + ": expected true or false");
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(n, key + ": expected true or false, got '" + n.Scalar() + "'");
        }
    }

    std::string text(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar()) fail(n, key + ": expected a string");
        return n.Scalar();
    }

    std::vector<double> list(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsSequence()) fail(n, key + ": expected a list of numbers");
        std::vector<double> out;
        for (const auto& item : n) out.push_back(number(item, key));
        return out;
    }

    TaskVec task_vec(const YAML::Node& n, const std::string& key) const
    {
        const auto v = list(n, key);
        if (v.size() != kTaskDim) fail(n, key + ": expected " + std::to_string(kTaskDim) + " entries");
        return TaskVec(v[0], v[1]);
    }

    /// A diagonal given as [a, b], or a full matrix [[a, b], [c, d]] which
    /// must itself be diagonal.
    TaskMat diag_mat(const YAML::Node& n, const std::string& key) const
    {
        if (n.IsSequence() && n.size() == kTaskDim && n[0].IsSequence()) {
            TaskMat m;
            for (int r = 0; r < kTaskDim; ++r) {
                const TaskVec row = task_vec(n[r], key);
                m.row(r) = row.transpose();
            }
            if (!is_diagonal(m)) fail(n, key + ": matrix must be diagonal");
            return m;
        }
        return task_vec(n, key).asDiagonal();
    }

    /// Visits every key of a section, rejecting unknown ones; keys listed in
    /// `handlers` but absent from the document are reported via `missing`.
    void section(const YAML::Node& root, const std::string& name,
                 const std::map<std::string, std::function<void(const YAML::Node&)>>& handlers,
                 std::set<std::string>& missing) const
    {
        for (const auto& [key, _] : handlers) missing.insert(key);
        const YAML::Node sec = root[name];
        if (!sec) return;
        if (sec.IsNull()) return;
        if (!sec.IsMap()) fail(sec, "[" + name + "] must be a mapping");
        for (const auto& kv : sec) {
            const auto key = kv.first.Scalar();
            const auto it = handlers.find(key);
            if (it == handlers.end()) fail(kv.first, "unknown key '" + key + "' in [" + name + "]");
            it->second(kv.second);
            missing.erase(key);
        }
    }

    void note_default(const std::string& what) { exp_.defaults_applied.push_back(what); }

private:
    std::string source_;
    Experiment& exp_;
};

}  // namespace

Experiment parse_experiment(std::string_view text, const std::string& source_name)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source_name, e.mark.line + 1, e.msg);
    }

    const Experiment defaults = reference_experiment();
    Experiment exp = defaults;
    Reader rd(source_name, exp);

    if (root && !root.IsNull() && !root.IsMap()) rd.fail(root, "top level must be a mapping of sections");
    static const std::set<std::string> known = {"arm", "environment", "gains", "trajectory", "simulation",
                                                "sweep"};
    if (root.IsMap())
        for (const auto& kv : root)
            if (!known.contains(kv.first.Scalar()))
                rd.fail(kv.first, "unknown section '" + kv.first.Scalar() + "'");

    SimConfig& c = exp.sim;

    // [arm]. COM offsets and inertias default to uniform rods of the given
    // lengths and masses.
    std::optional<std::vector<double>> lengths, masses, coms, inertias;
    std::set<std::string> missing;
    int arm_line = 0;
    if (root["arm"]) arm_line = line_of(root["arm"]);
    rd.section(root, "arm",
               {
                   {"link_lengths_m", [&](const YAML::Node& n) { lengths = rd.list(n, "link_lengths_m"); }},
                   {"link_masses_kg", [&](const YAML::Node& n) { masses = rd.list(n, "link_masses_kg"); }},
                   {"com_offsets_m", [&](const YAML::Node& n) { coms = rd.list(n, "com_offsets_m"); }},
                   {"link_inertias_kgm2",
                    [&](const YAML::Node& n) { inertias = rd.list(n, "link_inertias_kgm2"); }},
                   {"gravity_mps2", [&](const YAML::Node& n) { c.model.gravity = rd.task_vec(n, "gravity_mps2"); }},
               },
               missing);
    if (!lengths) lengths = defaults.sim.model.link_lengths;
    if (!masses) masses = defaults.sim.model.link_masses;
    if (lengths->size() != masses->size())
        rd.fail(arm_line, "link_masses_kg must have one entry per link (" + std::to_string(lengths->size()) + ")");
    const ArmModel rods = ArmModel::uniform_rods(*lengths, *masses, c.model.gravity);
    c.model.link_lengths = *lengths;
    c.model.link_masses = *masses;
    c.model.com_offsets = coms ? *coms : rods.com_offsets;
    c.model.link_inertias = inertias ? *inertias : rods.link_inertias;
    for (const auto& key : missing) {
        std::string value;
        if (key == "link_lengths_m") value = format_list(c.model.link_lengths);
        if (key == "link_masses_kg") value = format_list(c.model.link_masses);
        if (key == "com_offsets_m") value = format_list(c.model.com_offsets);
        if (key == "link_inertias_kgm2") value = format_list(c.model.link_inertias);
        if (key == "gravity_mps2") value = format_list({c.model.gravity[0], c.model.gravity[1]});
        rd.note_default("arm." + key + " = " + value);
    }
    const auto n = static_cast<int>(lengths->size());
    try {
        c.model.validate();
    } catch (const ContractViolation& e) {
        rd.fail(arm_line, std::string("[arm] ") + e.what());
    }

    auto diag_str = [](const TaskMat& m) { return format_list({m(0, 0), m(1, 1)}); };

    // [environment]
    missing.clear();
    rd.section(root, "environment",
               {
                   {"stiffness_n_per_m",
                    [&](const YAML::Node& v) { c.env.stiffness = rd.diag_mat(v, "stiffness_n_per_m"); }},
                   {"stiffness_uncertainty_n_per_m",
                    [&](const YAML::Node& v) {
                        c.env.stiffness_uncertainty = rd.diag_mat(v, "stiffness_uncertainty_n_per_m");
                    }},
                   {"always_in_contact",
                    [&](const YAML::Node& v) { c.env.always_in_contact = rd.boolean(v, "always_in_contact"); }},
                   {"contact_axis",
                    [&](const YAML::Node& v) { c.env.contact_axis = static_cast<int>(rd.integer(v, "contact_axis")); }},
               },
               missing);
    for (const auto& key : missing) {
        std::string value;
        if (key == "stiffness_n_per_m") value = diag_str(c.env.stiffness);
        if (key == "stiffness_uncertainty_n_per_m") value = diag_str(c.env.stiffness_uncertainty);
        if (key == "always_in_contact") value = c.env.always_in_contact ? "true" : "false";
        if (key == "contact_axis") value = std::to_string(c.env.contact_axis);
        rd.note_default("environment." + key + " = " + value);
    }
    try {
        c.env.validate();
    } catch (const ContractViolation& e) {
        rd.fail(root["environment"] ? line_of(root["environment"]) : 0, std::string("[environment] ") + e.what());
    }

    // [gains]
    missing.clear();
    std::optional<std::string> sign_name;
    std::optional<double> layer_width;
    rd.section(root, "gains",
               {
                   {"kp_n_per_m", [&](const YAML::Node& v) { c.gains.Kp = rd.diag_mat(v, "kp_n_per_m"); }},
                   {"kv_ns_per_m", [&](const YAML::Node& v) { c.gains.Kv = rd.diag_mat(v, "kv_ns_per_m"); }},
                   {"lambda_per_s", [&](const YAML::Node& v) { c.gains.Lambda = rd.diag_mat(v, "lambda_per_s"); }},
                   {"k_robust", [&](const YAML::Node& v) { c.gains.K = rd.number(v, "k_robust"); }},
                   {"c_row", [&](const YAML::Node& v) { c.gains.C_row = rd.task_vec(v, "c_row").transpose(); }},
                   {"ke_nominal_n_per_m",
                    [&](const YAML::Node& v) { c.gains.Ke_nominal = rd.diag_mat(v, "ke_nominal_n_per_m"); }},
                   {"sign_mode", [&](const YAML::Node& v) { sign_name = rd.text(v, "sign_mode"); }},
                   {"boundary_layer_width", [&](const YAML::Node& v) { layer_width = rd.number(v, "boundary_layer_width"); }},
               },
               missing);
    if (sign_name) {
        try {
            c.gains.sign_mode = parse_sign_mode(*sign_name, layer_width.value_or(0.01));
        } catch (const ContractViolation& e) {
            rd.fail(root["gains"]["sign_mode"], e.what());
        }
    }
    if (layer_width) c.gains.sign_mode.epsilon = *layer_width;
    for (const auto& key : missing) {
        std::string value;
        if (key == "kp_n_per_m") value = diag_str(c.gains.Kp);
        if (key == "kv_ns_per_m") value = diag_str(c.gains.Kv);
        if (key == "lambda_per_s") value = diag_str(c.gains.Lambda);
        if (key == "k_robust") value = std::to_string(c.gains.K);
        if (key == "c_row") value = format_list({c.gains.C_row[0], c.gains.C_row[1]});
        if (key == "ke_nominal_n_per_m") value = diag_str(c.gains.Ke_nominal);
        if (key == "sign_mode") value = to_string(c.gains.sign_mode);
        if (key == "boundary_layer_width") value = std::to_string(c.gains.sign_mode.epsilon);
        rd.note_default("gains." + key + " = " + value);
    }
    try {
        c.gains.validate();
    } catch (const ContractViolation& e) {
        rd.fail(root["gains"] ? line_of(root["gains"]) : 0, std::string("[gains] ") + e.what());
    }

    // [trajectory]
    missing.clear();
    std::optional<std::vector<double>> theta_desired;
    rd.section(root, "trajectory",
               {
                   {"mode",
                    [&](const YAML::Node& v) {
                        const auto m = rd.text(v, "mode");
                        if (m == "circle")
                            c.traj.mode = TrajectoryMode::circle;
                        else if (m == "setpoint")
                            c.traj.mode = TrajectoryMode::setpoint;
                        else
                            rd.fail(v, "mode: expected circle or setpoint, got '" + m + "'");
                    }},
                   {"radius_m", [&](const YAML::Node& v) { c.traj.radius = rd.number(v, "radius_m"); }},
                   {"t0_s", [&](const YAML::Node& v) { c.traj.t0 = rd.number(v, "t0_s"); }},
                   {"tf_s", [&](const YAML::Node& v) { c.traj.tf = rd.number(v, "tf_s"); }},
                   {"hold_after_tf", [&](const YAML::Node& v) { c.traj.hold_after_tf = rd.boolean(v, "hold_after_tf"); }},
                   {"setpoint_m", [&](const YAML::Node& v) { c.traj.setpoint = rd.task_vec(v, "setpoint_m"); }},
                   {"theta_desired_rad", [&](const YAML::Node& v) { theta_desired = rd.list(v, "theta_desired_rad"); }},
               },
               missing);
    exp.theta_desired = theta_desired ? Eigen::Map<const Vec>(theta_desired->data(), theta_desired->size()).eval()
                                      : Vec::Constant(n, std::numbers::pi);
    for (const auto& key : missing) {
        std::string value;
        if (key == "mode") value = c.traj.mode == TrajectoryMode::circle ? "circle" : "setpoint";
        if (key == "radius_m") value = std::to_string(c.traj.radius);
        if (key == "t0_s") value = std::to_string(c.traj.t0);
        if (key == "tf_s") value = std::to_string(c.traj.tf);
        if (key == "hold_after_tf") value = c.traj.hold_after_tf ? "true" : "false";
        if (key == "setpoint_m") value = format_list({c.traj.setpoint[0], c.traj.setpoint[1]});
        if (key == "theta_desired_rad") value = format_list(std::vector<double>(exp.theta_desired.begin(), exp.theta_desired.end()));
        rd.note_default("trajectory." + key + " = " + value);
    }
    const int traj_line = root["trajectory"] ? line_of(root["trajectory"]) : 0;
    try {
        c.traj.validate();
    } catch (const ContractViolation& e) {
        rd.fail(traj_line, std::string("[trajectory] ") + e.what());
    }
    if (c.traj.mode == TrajectoryMode::circle && c.traj.radius > c.model.reach() * (1.0 + 1e-12))
        rd.fail(traj_line, "[trajectory] radius exceeds the arm's reach");

    // [simulation]
    missing.clear();
    std::optional<std::vector<double>> theta0, theta_dot0;
    rd.section(root, "simulation",
               {
                   {"theta0_rad", [&](const YAML::Node& v) { theta0 = rd.list(v, "theta0_rad"); }},
                   {"theta_dot0_rad_per_s", [&](const YAML::Node& v) { theta_dot0 = rd.list(v, "theta_dot0_rad_per_s"); }},
                   {"dt_s", [&](const YAML::Node& v) { c.dt = rd.number(v, "dt_s"); }},
                   {"t_end_s", [&](const YAML::Node& v) { c.t_end = rd.number(v, "t_end_s"); }},
                   {"integrator",
                    [&](const YAML::Node& v) {
                        try {
                            c.integrator = parse_integrator(rd.text(v, "integrator"));
                        } catch (const ContractViolation& e) {
                            rd.fail(v, e.what());
                        }
                    }},
                   {"log_stride", [&](const YAML::Node& v) { c.log_stride = static_cast<int>(rd.integer(v, "log_stride")); }},
                   {"control_period_s",
                    [&](const YAML::Node& v) {
                        if (v.IsNull())
                            c.control_period.reset();
                        else
                            c.control_period = rd.number(v, "control_period_s");
                    }},
               },
               missing);
    c.theta0 = theta0 ? Eigen::Map<const Vec>(theta0->data(), theta0->size()).eval() : Vec::Zero(n);
    c.theta_dot0 = theta_dot0 ? Eigen::Map<const Vec>(theta_dot0->data(), theta_dot0->size()).eval() : Vec::Zero(n);
    for (const auto& key : missing) {
        std::string value;
        if (key == "theta0_rad") value = format_list(std::vector<double>(c.theta0.begin(), c.theta0.end()));
        if (key == "theta_dot0_rad_per_s")
            value = format_list(std::vector<double>(c.theta_dot0.begin(), c.theta_dot0.end()));
        if (key == "dt_s") value = std::to_string(c.dt);
        if (key == "t_end_s") value = std::to_string(c.t_end);
        if (key == "integrator") value = to_string(c.integrator);
        if (key == "log_stride") value = std::to_string(c.log_stride);
        if (key == "control_period_s") value = "none";
        rd.note_default("simulation." + key + " = " + value);
    }
    try {
        c.validate();
    } catch (const ContractViolation& e) {
        rd.fail(root["simulation"] ? line_of(root["simulation"]) : 0, std::string("[simulation] ") + e.what());
    }

    // [sweep]
    missing.clear();
    rd.section(root, "sweep",
               {
                   {"dke_bound_n_per_m", [&](const YAML::Node& v) { exp.sweep.dKe_bound = rd.diag_mat(v, "dke_bound_n_per_m"); }},
                   {"samples",
                    [&](const YAML::Node& v) {
                        const auto s = rd.integer(v, "samples");
                        if (s < 1) rd.fail(v, "samples must be at least 1");
                        exp.sweep.samples = static_cast<int>(s);
                    }},
                   {"seed",
                    [&](const YAML::Node& v) {
                        const auto s = rd.integer(v, "seed");
                        if (s < 0) rd.fail(v, "seed must be non-negative");
                        exp.sweep.seed = static_cast<std::uint64_t>(s);
                    }},
                   {"convergence_band_m",
                    [&](const YAML::Node& v) {
                        const double b = rd.number(v, "convergence_band_m");
                        if (b <= 0.0) rd.fail(v, "convergence_band_m must be positive");
                        exp.sweep.convergence_band = b;
                    }},
                   {"pinned_dke_n_per_m",
                    [&](const YAML::Node& v) {
                        if (v.IsNull())
                            exp.sweep.pinned_dKe.reset();
                        else
                            exp.sweep.pinned_dKe = rd.diag_mat(v, "pinned_dke_n_per_m");
                    }},
               },
               missing);
    for (const auto& key : missing) {
        std::string value;
        if (key == "dke_bound_n_per_m") value = diag_str(exp.sweep.dKe_bound);
        if (key == "samples") value = std::to_string(exp.sweep.samples);
        if (key == "seed") value = std::to_string(exp.sweep.seed);
        if (key == "convergence_band_m") value = std::to_string(exp.sweep.convergence_band);
        if (key == "pinned_dke_n_per_m") value = "none";
        rd.note_default("sweep." + key + " = " + value);
    }
    if ((exp.sweep.dKe_bound.diagonal().array() < 0.0).any())
        rd.fail(root["sweep"] ? line_of(root["sweep"]) : 0, "[sweep] dke_bound_n_per_m must be non-negative");

    return exp;
}

Experiment load_experiment(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str(), path.string());
}

}  // namespace rftrack
