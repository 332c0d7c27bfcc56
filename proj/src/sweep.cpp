#include "rftrack/sweep.hpp"

#include <random>

#include "rftrack/analysis.hpp"

namespace rftrack {

namespace {

// 53-bit uniform in [0, 1). std::uniform_real_distribution is not specified
// bit-for-bit across standard libraries; the engine output is.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_settings(const SweepSettings& s)
{
    if (s.samples < 1) throw ContractViolation("sweep needs at least one sample");
    if (!is_diagonal(s.dKe_bound) || (s.dKe_bound.diagonal().array() < 0.0).any())
        throw ContractViolation("sweep bound must be a non-negative diagonal");
    if (!(s.convergence_band > 0.0)) throw ContractViolation("convergence band must be positive");
}

SweepReport make_report(const SweepSettings& s, std::vector<SweepSample> samples)
{
    SweepReport r;
    r.samples = std::move(samples);
    r.seed = s.seed;
    r.dKe_bound = s.dKe_bound;
    r.convergence_band = s.convergence_band;
    for (const auto& smp : r.samples) r.converged_count += smp.converged ? 1 : 0;
    return r;
}

}  // namespace

std::vector<TaskVec> draw_stiffness_offsets(const SimConfig& base, const SweepSettings& settings)
{
    check_settings(settings);
    std::vector<TaskVec> out;
    out.reserve(settings.samples);
    if (settings.pinned_dKe) {
        if (!is_diagonal(*settings.pinned_dKe) ||
            ((base.env.stiffness + *settings.pinned_dKe).diagonal().array() < 0.0).any())
            throw ContractViolation("pinned stiffness uncertainty must be diagonal with Ke + dKe >= 0");
        out.assign(settings.samples, settings.pinned_dKe->diagonal());
        return out;
    }
    std::mt19937_64 rng(settings.seed);
    const TaskVec bound = settings.dKe_bound.diagonal();
    const TaskVec floor = -base.env.stiffness.diagonal();
    for (int i = 0; i < settings.samples; ++i) {
        TaskVec d;
        for (int a = 0; a < kTaskDim; ++a) d[a] = (2.0 * unit_uniform(rng) - 1.0) * bound[a];
        out.push_back(d.cwiseMax(floor));
    }
    return out;
}

SweepSample evaluate_sample(const SimConfig& base, const TaskVec& dKe, double band, int index)
{
    SimConfig cfg = base;
    cfg.env.stiffness_uncertainty = dKe.asDiagonal();
    SweepSample s;
    s.index = index;
    s.dKe = dKe;
    s.min_margin = check_gain_conditions(cfg.gains, cfg.env.stiffness_uncertainty).min_margin();
    try {
        const Trace trace = run(cfg);
        const auto m = tracking_metrics(trace);
        s.max_error = m.max_error;
        s.final_error = m.final_error;
        s.converged = m.final_error < band;
    } catch (const DivergenceError& e) {
        s.diverged = true;
        if (const auto& partial = e.partial_trace(); partial && !partial->rows.empty())
            s.max_error = tracking_metrics(*partial).max_error;
        s.final_error = std::numeric_limits<double>::infinity();
    }
    return s;
}

SweepReport robustness_sweep_serial(const SimConfig& base, const SweepSettings& settings)
{
    base.validate();
    const auto draws = draw_stiffness_offsets(base, settings);
    std::vector<SweepSample> samples;
    samples.reserve(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
        samples.push_back(evaluate_sample(base, draws[i], settings.convergence_band, static_cast<int>(i)));
    return make_report(settings, std::move(samples));
}

SweepReport robustness_sweep(const SimConfig& base, const SweepSettings& settings)
{
    base.validate();
    const auto draws = draw_stiffness_offsets(base, settings);
    const auto count = static_cast<long>(draws.size());
    std::vector<SweepSample> samples(draws.size());
    // Each run stays sequential; samples are independent. evaluate_sample
    // turns divergence into data, anything else is a programming error.
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i)
        samples[i] = evaluate_sample(base, draws[i], settings.convergence_band, static_cast<int>(i));
    return make_report(settings, std::move(samples));
}

}  // namespace rftrack
