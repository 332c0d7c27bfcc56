#include "rftrack/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

namespace rftrack {

std::string format_double(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<std::string> trace_columns(int dof)
{
    std::vector<std::string> c{"t"};
    for (int i = 1; i <= dof; ++i) c.push_back("theta_" + std::to_string(i));
    for (int i = 1; i <= dof; ++i) c.push_back("theta_dot_" + std::to_string(i));
    for (const char* s : {"x", "y", "xd", "yd", "fx", "fy"}) c.emplace_back(s);
    for (int i = 1; i <= dof; ++i) c.push_back("u_" + std::to_string(i));
    for (const char* s : {"sigma", "V", "dV_rhs"}) c.emplace_back(s);
    return c;
}

namespace {

std::string join(const std::vector<std::string>& cols)
{
    std::string line;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) line += ',';
        line += cols[i];
    }
    return line + '\n';
}

}  // namespace

std::string trace_csv(const Trace& trace)
{
    std::string out = join(trace_columns(trace.config.model.dof()));
    std::string line;
    for (const auto& r : trace.rows) {
        line.clear();
        auto put = [&](double v) {
            if (!line.empty()) line += ',';
            line += format_double(v);
        };
        put(r.t);
        for (double v : r.theta) put(v);
        for (double v : r.theta_dot) put(v);
        put(r.X[0]);
        put(r.X[1]);
        put(r.Xd[0]);
        put(r.Xd[1]);
        put(r.F[0]);
        put(r.F[1]);
        for (double v : r.U) put(v);
        put(r.sigma);
        put(r.V);
        put(r.dV_rhs);
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<std::string> sweep_columns()
{
    return {"index", "dke_x", "dke_y", "converged", "diverged", "max_error", "final_error", "min_margin"};
}

std::string sweep_csv(const SweepReport& report)
{
    std::string out = join(sweep_columns());
    for (const auto& s : report.samples) {
        out += std::to_string(s.index) + ',' + format_double(s.dKe[0]) + ',' + format_double(s.dKe[1]) + ',' +
               (s.converged ? "1" : "0") + ',' + (s.diverged ? "1" : "0") + ',' + format_double(s.max_error) + ',' +
               format_double(s.final_error) + ',' + format_double(s.min_margin) + '\n';
    }
    return out;
}

namespace {

using nlohmann::ordered_json;

ordered_json vec_json(const Vec& v) { return std::vector<double>(v.begin(), v.end()); }
ordered_json diag_json(const TaskMat& m) { return std::vector<double>{m(0, 0), m(1, 1)}; }
ordered_json task_json(const TaskVec& v) { return std::vector<double>{v[0], v[1]}; }

}  // namespace

ordered_json to_json(const SimConfig& c)
{
    ordered_json j;
    j["arm"] = {
        {"link_lengths_m", c.model.link_lengths},
        {"link_masses_kg", c.model.link_masses},
        {"com_offsets_m", c.model.com_offsets},
        {"link_inertias_kgm2", c.model.link_inertias},
        {"gravity_mps2", task_json(c.model.gravity)},
    };
    j["environment"] = {
        {"stiffness_n_per_m", diag_json(c.env.stiffness)},
        {"stiffness_uncertainty_n_per_m", diag_json(c.env.stiffness_uncertainty)},
        {"always_in_contact", c.env.always_in_contact},
        {"contact_axis", c.env.contact_axis},
    };
    j["gains"] = {
        {"kp_n_per_m", diag_json(c.gains.Kp)},
        {"kv_ns_per_m", diag_json(c.gains.Kv)},
        {"lambda_per_s", diag_json(c.gains.Lambda)},
        {"k_robust", c.gains.K},
        {"c_row", std::vector<double>{c.gains.C_row[0], c.gains.C_row[1]}},
        {"ke_nominal_n_per_m", diag_json(c.gains.Ke_nominal)},
        {"sign_mode", to_string(c.gains.sign_mode)},
    };
    j["trajectory"] = {
        {"mode", c.traj.mode == TrajectoryMode::circle ? "circle" : "setpoint"},
        {"radius_m", c.traj.radius},
        {"t0_s", c.traj.t0},
        {"tf_s", c.traj.tf},
        {"hold_after_tf", c.traj.hold_after_tf},
        {"setpoint_m", task_json(c.traj.setpoint)},
    };
    j["simulation"] = {
        {"theta0_rad", vec_json(c.theta0)},
        {"theta_dot0_rad_per_s", vec_json(c.theta_dot0)},
        {"dt_s", c.dt},
        {"t_end_s", c.t_end},
        {"integrator", to_string(c.integrator)},
        {"log_stride", c.log_stride},
        {"control_period_s", c.control_period ? ordered_json(*c.control_period) : ordered_json(nullptr)},
    };
    return j;
}

ordered_json to_json(const TrackingMetrics& m)
{
    return {
        {"max_error_m", m.max_error},
        {"rms_error_m", m.rms_error},
        {"final_error_m", m.final_error},
        {"max_torque_nm", m.max_torque},
        {"torque_total_variation_nm", m.torque_variation},
        {"settling_time_s", m.settling_time ? ordered_json(*m.settling_time) : ordered_json(nullptr)},
    };
}

ordered_json to_json(const FeasibilityReport& r)
{
    return {
        {"passed", r.passed()},
        {"stiffness_condition", r.stiffness_ok},
        {"damping_condition", r.damping_ok},
        {"margin_n_per_m", task_json(r.margin)},
    };
}

ordered_json run_manifest(const Experiment& exp, const Trace& trace, const TrackingMetrics& metrics)
{
    ordered_json j;
    j["config"] = to_json(exp.sim);
    j["theta_desired_rad"] = vec_json(exp.theta_desired);
    j["defaults_applied"] = exp.defaults_applied;
    j["gain_conditions"] = to_json(trace.feasibility);
    j["integrator_stats"] = {{"steps", trace.stats.steps}, {"rhs_evaluations", trace.stats.rhs_evaluations}};
    j["rows"] = trace.rows.size();
    j["near_singular_rows"] = trace.near_singular_rows;
    j["min_jacobian_singular_value"] = trace.min_singular_value;
    j["diverged"] = trace.diverged;
    j["warnings"] = trace.warnings;
    j["metrics"] = to_json(metrics);
    j["trace_columns"] = trace_columns(exp.sim.model.dof());
    return j;
}

ordered_json sweep_summary(const SweepReport& report)
{
    ordered_json j;
    j["samples"] = report.samples.size();
    j["seed"] = report.seed;
    j["dke_bound_n_per_m"] = diag_json(report.dKe_bound);
    j["convergence_band_m"] = report.convergence_band;
    j["converged"] = report.converged_count;
    j["convergence_rate"] = report.convergence_rate();
    double worst_final = 0.0, worst_max = 0.0, min_margin = INFINITY;
    int diverged = 0;
    for (const auto& s : report.samples) {
        worst_final = std::max(worst_final, s.final_error);
        worst_max = std::max(worst_max, s.max_error);
        min_margin = std::min(min_margin, s.min_margin);
        diverged += s.diverged ? 1 : 0;
    }
    j["diverged"] = diverged;
    j["worst_final_error_m"] = worst_final;
    j["worst_max_error_m"] = worst_max;
    j["min_margin_n_per_m"] = min_margin;
    return j;
}

namespace {

// Maps data coordinates onto a fixed pixel box, y pointing up.
struct Frame {
    double x0, x1, y0, y1;
    double left = 70, top = 30, width = 520, height = 400;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
    double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts, const std::string& style)
{
    std::string s = "<polyline fill=\"none\" " + style + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += num(f.px(pts[i].first)) + ',' + num(f.py(pts[i].second));
    }
    return s + "\"/>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel, int ticks = 5)
{
    std::string s;
    s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
         num(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= ticks; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / ticks;
        const double yv = f.y0 + (f.y1 - f.y0) * i / ticks;
        s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(f.top + f.height + 18) +
             "\" text-anchor=\"middle\" font-size=\"11\">" + num(xv) + "</text>\n";
        s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(yv) + 4) +
             "\" text-anchor=\"end\" font-size=\"11\">" + num(yv) + "</text>\n";
    }
    s += "<text x=\"" + num(f.left + f.width / 2) + "\" y=\"" + num(f.top + f.height + 40) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(f.top + f.height / 2) + "\" font-size=\"13\" transform=\"rotate(-90 16 " +
         num(f.top + f.height / 2) + ")\" text-anchor=\"middle\">" + ylabel + "</text>\n";
    return s;
}

std::string svg_open(const std::string& title)
{
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"500\" viewBox=\"0 0 640 500\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"330\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           title + "</text>\n";
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string path_svg(const Trace& trace)
{
    const double r = std::max(trace.config.traj.radius, trace.config.model.reach());
    const double pad = 0.1 * r;
    Frame f{-r - pad, r + pad, -r - pad, r + pad};
    f.width = f.height = 400;
    f.left = 120;

    std::vector<std::pair<double, double>> circle, desired, actual;
    for (int i = 0; i <= 360; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 360.0;
        circle.emplace_back(trace.config.traj.radius * std::cos(a), trace.config.traj.radius * std::sin(a));
    }
    for (const auto& row : trace.rows) {
        desired.emplace_back(row.Xd[0], row.Xd[1]);
        actual.emplace_back(row.X[0], row.X[1]);
    }
    std::string s = svg_open("End-effector path");
    s += axes(f, "x [m]", "y [m]", 4);
    s += polyline(f, circle, "stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"");
    s += polyline(f, desired, "stroke=\"black\" stroke-width=\"2\"");
    s += polyline(f, actual, std::string("stroke=\"") + kColors[1] + "\" stroke-width=\"1.5\"");
    s += "<text x=\"572\" y=\"60\" font-size=\"12\">desired</text>\n"
         "<line x1=\"542\" y1=\"56\" x2=\"567\" y2=\"56\" stroke=\"black\" stroke-width=\"2\"/>\n"
         "<text x=\"572\" y=\"78\" font-size=\"12\">actual</text>\n"
         "<line x1=\"542\" y1=\"74\" x2=\"567\" y2=\"74\" stroke=\"" +
         std::string(kColors[1]) + "\" stroke-width=\"1.5\"/>\n";
    return s + "</svg>\n";
}

std::string torque_svg(const Trace& trace)
{
    const int n = trace.config.model.dof();
    double lo = 0.0, hi = 0.0;
    for (const auto& row : trace.rows) {
        lo = std::min(lo, row.U.minCoeff());
        hi = std::max(hi, row.U.maxCoeff());
    }
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    const double t0 = trace.rows.empty() ? 0.0 : trace.rows.front().t;
    double t1 = trace.rows.empty() ? 1.0 : trace.rows.back().t;
    if (t1 <= t0) t1 = t0 + 1.0;
    Frame f{t0, t1, lo - pad, hi + pad};

    std::string s = svg_open("Joint torques");
    s += axes(f, "t [s]", "U [N m]");
    for (int j = 0; j < n; ++j) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : trace.rows) pts.emplace_back(row.t, row.U[j]);
        const std::string color = kColors[j % 6];
        s += polyline(f, pts, "stroke=\"" + color + "\" stroke-width=\"1.5\"");
        const double y = 50 + 16 * j;
        s += "<line x1=\"600\" y1=\"" + num(y - 4) + "\" x2=\"615\" y2=\"" + num(y - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n<text x=\"618\" y=\"" + num(y) + "\" font-size=\"11\">u" +
             std::to_string(j + 1) + "</text>\n";
    }
    return s + "</svg>\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rftrack
