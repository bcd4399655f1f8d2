#pragma once

// Experiment drivers behind the command-line subcommands. Each writes its
// tables through an ArtifactSet and finishes with a manifest.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "riesz/harness/artifacts.hpp"
#include "riesz/harness/simulation.hpp"
#include "riesz/io/snapshot.hpp"
#include "riesz/linear/decay_quadrature.hpp"
#include "riesz/linear/spectrum.hpp"
#include "riesz/lp/inequalities.hpp"
#include "riesz/random.hpp"

namespace riesz::harness {

struct ExperimentSpec {
    std::string name;
    Kind kind = Kind::simulate;
    std::string config_path;
    fs::path out;
    std::uint64_t seed = 0;
    int workers = 1;
    const std::atomic<bool>* cancel = nullptr;
};

/// Exit codes: 0 success, 3 when a simulated trajectory stopped early.
inline constexpr int kExitRunStopped = 3;

namespace detail {

class Row {
public:
    template <class T>
    Row& operator<<(const T& v) {
        if (!first_) os_ << ',';
        first_ = false;
        if constexpr (std::is_floating_point_v<T>) {
            os_ << std::setprecision(17) << v;
        } else {
            os_ << v;
        }
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
    bool first_ = true;
};

inline std::string tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

/// Runs task(i) for i in [0, n) on up to `workers` threads.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) task(i);
        });
}

inline void check_cancel(const ExperimentSpec& spec) {
    if (spec.cancel && spec.cancel->load()) throw Error("interrupted");
}
}  // namespace detail

// ---------------------------------------------------------------- simulate

inline int run_simulate(const Config& cfg, const ExperimentSpec& spec, ArtifactSet& out) {
    RunSetup setup = parse_run(cfg, spec.seed);
    setup.solver.cancel = spec.cancel;
    const SimulationReport rep = simulate_run(setup);
    const auto& snaps = rep.trajectory.snapshots;

    std::vector<std::string> rows;
    for (std::size_t k = 0; k < rep.regular.size(); ++k) {
        const auto& f = rep.functionals[k];
        detail::Row r;
        r << f.t << rep.l2_a[k] << rep.l2_u[k] << f.a_low << f.u_low << f.a_high << f.u_high << f.energy << f.d_a_low
          << f.d_at << f.dissipation;
        rows.push_back(r.str());
    }
    out.write_csv("functionals.csv", "t,l2_a,l2_u,a_low,u_low,a_high,u_high,energy,d_a_low,d_at,dissipation", rows);

    rows.clear();
    for (const auto& f : rep.fits) rows.push_back(diagnostics::decay_fit_csv_row(f));
    out.write_csv("decay_fit.csv", diagnostics::decay_fit_csv_header(), rows);

    if (!rep.residuals.empty()) {
        rows.clear();
        for (const auto& rs : rep.residuals) {
            detail::Row r;
            r << rs.low_a.t << rs.low_a.relative << rs.low_z.relative << rs.low_a.absolute << rs.low_z.absolute;
            rows.push_back(r.str());
        }
        out.write_csv("residuals.csv", "t,low_a_rel,low_z_rel,low_a_abs,low_z_abs", rows);
    }

    out.write_ndjson("diagnostics.ndjson", [&](io::NdjsonWriter& w) {
        for (const std::string& n : rep.notes) w.record(0.0, "note", n);
        std::size_t ly = 0;
        for (std::size_t k = 0; k < rep.regular.size(); ++k) {
            const FieldState& st = snaps[rep.regular[k]];
            const auto& f = rep.functionals[k];
            w.record(st.t, "l2_a", rep.l2_a[k]);
            w.record(st.t, "l2_u", rep.l2_u[k]);
            w.record(st.t, "mean_a", st.a.mean());
            w.record(st.t, "min_density", 1.0 + st.a.min());
            w.record(st.t, "a_low", f.a_low);
            w.record(st.t, "u_low", f.u_low);
            w.record(st.t, "a_high", f.a_high);
            w.record(st.t, "u_high", f.u_high);
            w.record(st.t, "energy", f.energy);
            w.record(st.t, "dissipation", f.dissipation);
            for (; ly < rep.lyapunov.size() && rep.lyapunov[ly].t == st.t; ++ly)
                w.record(st.t, "lyapunov_j" + std::to_string(rep.lyapunov[ly].j), rep.lyapunov[ly].report.value);
        }
        for (const auto& rs : rep.residuals) {
            w.record(rs.low_a.t, "residual_low_a", rs.low_a.relative);
            w.record(rs.low_z.t, "residual_low_z", rs.low_z.relative);
        }
        for (const auto& f : rep.fits) w.record(f.t1, "slope_" + f.name, f.slope);
    });

    std::vector<std::size_t> keep;
    if (setup.snapshots == SnapshotOutput::all) keep = rep.regular;
    if (setup.snapshots == SnapshotOutput::ends && !rep.regular.empty()) {
        keep.push_back(rep.regular.front());
        if (rep.regular.size() > 1) keep.push_back(rep.regular.back());
    }
    for (std::size_t n = 0; n < keep.size(); ++n) {
        std::ostringstream name;
        name << "snapshots/snap_" << std::setw(5) << std::setfill('0') << n << ".rzs";
        out.write_bytes(name.str(), io::encode_snapshot(io::to_snapshot(snaps[keep[n]])));
    }

    out.commit({{"status", solver::to_string(rep.trajectory.status)},
                {"steps", rep.trajectory.steps},
                {"message", rep.trajectory.message}});
    return rep.trajectory.ok() ? 0 : kExitRunStopped;
}

// ---------------------------------------------------------- linear-analyze

inline int run_linear_analyze(const Config& cfg, const ExperimentSpec& spec, ArtifactSet& out) {
    const std::vector<double> svals = cfg.get_doubles("linear", "s_star", {0.25, 0.5, 0.75});
    const double lo = cfg.get_double("linear", "xi_min", 1e-4);
    const double hi = cfg.get_double("linear", "xi_max", 1e4);
    const long points = cfg.get_int("linear", "points", 200);
    const long samples = cfg.get_int("linear", "propagator_samples", 50);
    const double t_max = cfg.get_double("linear", "t_max", 20.0);
    for (double s : svals)
        if (!(s > 0.0 && s < 1.0)) cfg.fail("linear", "s_star", "values must lie in (0, 1)");
    if (!(lo > 0.0 && hi > lo)) cfg.fail("linear", "xi_max", "need 0 < xi_min < xi_max");
    if (points < 2) cfg.fail("linear", "points", "need at least 2");
    if (samples < 0) cfg.fail("linear", "propagator_samples", "must be nonnegative");
    if (!(t_max > 0.0)) cfg.fail("linear", "t_max", "must be positive");

    const auto xis = linear::log_grid(lo, hi, static_cast<int>(points));
    std::vector<std::string> asym, diss, semi;
    Rng rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double s : svals) {
        detail::check_cancel(spec);
        std::vector<std::string> rows;
        for (double xi : xis) rows.push_back(linear::eigen_csv_row(xi, linear::eigenvalues(xi, s)));
        out.write_csv("eigen_s" + detail::tag(s) + ".csv", linear::eigen_csv_header(), rows);
        for (auto regime : {linear::Regime::low, linear::Regime::high})
            for (const auto& a : linear::asymptotic_check(s, regime)) {
                detail::Row r;
                r << s << (regime == linear::Regime::low ? "low" : "high") << a.xi << a.ratio1 << a.ratio2;
                asym.push_back(r.str());
            }
        const auto d = linear::dissipative_scan(s, xis);
        detail::Row dr;
        dr << s << d.constant << d.worst_xi;
        diss.push_back(dr.str());
        for (long k = 0; k < samples; ++k) {
            const double xi = lo * std::pow(hi / lo, unit(rng));
            const double t1 = 0.5 * t_max * unit(rng);
            const double t2 = 0.5 * t_max * unit(rng);
            const linear::Mat2 whole = linear::propagator(xi, s, t1 + t2);
            const linear::Mat2 split = linear::operator*(linear::propagator(xi, s, t1), linear::propagator(xi, s, t2));
            detail::Row r;
            r << s << xi << t1 << t2 << linear::max_abs_diff(whole, split) / std::max(1.0, linear::operator_norm(whole));
            semi.push_back(r.str());
        }
    }
    out.write_csv("asymptotics.csv", "s_star,regime,xi,ratio1,ratio2", asym);
    out.write_csv("dissipative.csv", "s_star,constant,worst_xi", diss);
    out.write_csv("semigroup.csv", "s_star,xi,t1,t2,rel_err", semi);
    out.commit();
    return 0;
}

// ------------------------------------------------------------ decay-verify

inline int run_decay_verify(const Config& cfg, const ExperimentSpec& spec, ArtifactSet& out) {
    const long dim = cfg.get_int("decay", "dim", 1);
    const std::vector<double> svals = cfg.get_doubles("decay", "s_star", {0.25, 0.75});
    const std::vector<double> sig1 = cfg.get_doubles("decay", "sigma1", {-0.5 * static_cast<double>(dim)});
    const std::vector<double> sig = cfg.get_doubles("decay", "sigma", {0.0});
    const double t_min = cfg.get_double("decay", "t_min", 1e2);
    const double t_max = cfg.get_double("decay", "t_max", 1e4);
    const long points = cfg.get_int("decay", "points", 16);
    const double cutoff = cfg.get_double("decay", "cutoff", 1.0);
    const double rel_tol = cfg.get_double("decay", "rel_tol", 1e-6);
    if (dim < 1) cfg.fail("decay", "dim", "must be >= 1");
    if (sig1.size() != sig.size()) cfg.fail("decay", "sigma", "sigma1 and sigma lists must have equal length");
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (!(sig[i] > sig1[i])) cfg.fail("decay", "sigma", "each pair needs sigma > sigma1");
    for (double s : svals)
        if (!(s > 0.0 && s < 1.0)) cfg.fail("decay", "s_star", "values must lie in (0, 1)");
    if (!(t_min > 0.0 && t_max > t_min)) cfg.fail("decay", "t_max", "need 0 < t_min < t_max");
    if (points < diagnostics::kMinFitSamples) cfg.fail("decay", "points", "need at least 8 samples for the fit");
    if (!(cutoff > 0.0)) cfg.fail("decay", "cutoff", "must be positive");
    if (!(rel_tol > 0.0)) cfg.fail("decay", "rel_tol", "must be positive");

    const auto times = linear::log_grid(t_min, t_max, static_cast<int>(points));
    struct Job {
        double s, sigma1, sigma;
    };
    std::vector<Job> jobs;
    for (double s : svals)
        for (std::size_t i = 0; i < sig.size(); ++i) jobs.push_back({s, sig1[i], sig[i]});
    std::vector<std::vector<linear::DecayPoint>> series(jobs.size());
    detail::parallel_for(jobs.size(), spec.workers, [&](std::size_t i) {
        if (spec.cancel && spec.cancel->load()) return;
        const linear::PowerlawProfile prof{static_cast<int>(dim), jobs[i].sigma1, 1.0, cutoff};
        series[i] = linear::linear_decay_quadrature(prof, linear::ModeSystem{0.0, jobs[i].s}, jobs[i].sigma, times,
                                                    {rel_tol});
    });
    detail::check_cancel(spec);

    std::vector<std::string> fits;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const Job& j = jobs[i];
        const std::string id = "s" + detail::tag(j.s) + "_sig1" + detail::tag(j.sigma1) + "_sig" + detail::tag(j.sigma);
        std::vector<std::string> rows;
        std::vector<double> n, ref;
        for (const auto& p : series[i]) {
            rows.push_back(linear::decay_csv_row(p));
            n.push_back(p.norm);
            ref.push_back(p.reference);
        }
        out.write_csv("decay_" + id + ".csv", linear::decay_csv_header(), rows);
        const double pred = -(j.sigma - j.sigma1) / (2.0 * j.s);
        const auto ref_fit = diagnostics::fit_decay(times, ref, pred, t_min, t_max, id + "_heat");
        auto fit = diagnostics::fit_decay(times, n, pred, t_min, t_max, id + "_propagator");
        fits.push_back(diagnostics::decay_fit_csv_row(fit));
        fits.push_back(diagnostics::decay_fit_csv_row(ref_fit));
        // slope of the propagator series against the heat-reference slope
        fit.name = id + "_vs_heat";
        fit.predicted = ref_fit.slope;
        fit.rel_err = std::abs(fit.slope - ref_fit.slope) / std::abs(ref_fit.slope);
        fits.push_back(diagnostics::decay_fit_csv_row(fit));
    }
    out.write_csv("decay_fit.csv", diagnostics::decay_fit_csv_header(), fits);
    out.commit();
    return 0;
}

// -------------------------------------------------------------- lp-inspect

inline int run_lp_inspect(const Config& cfg, const ExperimentSpec& spec, ArtifactSet& out) {
    const SpectralGrid g = parse_grid(cfg);
    const long samples = cfg.get_int("lp", "samples", 100);
    const std::vector<long> ks = cfg.get_ints("lp", "bernstein_k", {0, 1, 2});
    const std::vector<double> wu_p = cfg.get_doubles("lp", "wu_p", {2.0, 4.0});
    const std::vector<double> wu_alpha = cfg.get_doubles("lp", "wu_alpha", {0.5});
    if (samples < 1) cfg.fail("lp", "samples", "need at least one sample");
    for (long k : ks)
        if (k < 0) cfg.fail("lp", "bernstein_k", "derivative orders must be nonnegative");
    for (double p : wu_p)
        if (!(p >= 2.0 && std::isfinite(p))) cfg.fail("lp", "wu_p", "values must lie in [2, inf)");
    for (double a : wu_alpha)
        if (!(a >= 0.0 && a <= 1.0)) cfg.fail("lp", "wu_alpha", "values must lie in [0, 1]");

    const lp::LPPartition part = lp::build_partition(g);
    Rng rng(spec.seed);

    std::vector<std::string> rows;
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        long count = 0;
        g.for_each_mode([&](std::size_t, const Wavevector& w) {
            if (part.weight(j, w.norm) > 0.0) ++count;
        });
        detail::Row r;
        r << j << lp::kInner * std::exp2(j) << 2.0 * lp::kOuter * std::exp2(j) << count;
        rows.push_back(r.str());
    }
    out.write_csv("partition.csv", "j,inner_radius,outer_radius,half_spectrum_modes", rows);

    // quasi-orthogonality of blocks two or more apart on a random smooth field
    const Field u = random_bandlimited_field(g, rng, g.max_wavenumber());
    const auto dec = lp::decompose(u, part);
    double qo = 0.0;
    for (const auto& [ja, fa] : dec.blocks)
        for (const auto& [jb, fb] : dec.blocks) {
            if (jb < ja + 2) continue;
            const double na = l2_norm(fa), nb = l2_norm(fb);
            if (na == 0.0 || nb == 0.0) continue;
            double ip = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) ip += fa[i] * fb[i];
            qo = std::max(qo, std::abs(ip) * g.cell_volume() / (na * nb));
        }
    {
        detail::Row a, b;
        a << "partition_of_unity_residue" << lp::partition_of_unity_residue(part, g);
        b << "quasi_orthogonality" << qo;
        out.write_csv("summary.csv", "metric,value", {a.str(), b.str()});
    }

    // Bernstein ratios at p = q = 2 and Wu ratios on band-limited samples in interior shells
    std::vector<std::string> bern, wu;
    for (int j = part.j_min() + 1; j <= part.j_max() - 1; ++j) {
        detail::check_cancel(spec);
        const double lo = lp::kInner * std::exp2(j), hi = 2.0 * lp::kOuter * std::exp2(j);
        if (hi > g.max_wavenumber()) break;
        std::vector<Field> draws;
        for (long n = 0; n < samples; ++n) {
            Field f = random_band_field(g, rng, lo, hi);
            if (f.max_abs() > 0.0) draws.push_back(std::move(f));
        }
        if (draws.empty()) continue;
        for (long k : ks) {
            double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
            for (const Field& f : draws) {
                const double r = lp::verify_bernstein(f, j, static_cast<int>(k), 2.0, 2.0);
                mn = std::min(mn, r);
                mx = std::max(mx, r);
            }
            detail::Row r;
            r << j << k << 2 << 2 << mn << mx << std::pow(lp::kInner, k) << std::pow(2.0 * lp::kOuter, k);
            bern.push_back(r.str());
        }
        for (double p : wu_p)
            for (double a : wu_alpha) {
                double mn = std::numeric_limits<double>::infinity(), mx = -mn;
                for (const Field& f : draws) {
                    const double r = lp::verify_wu_lower_bound(f, j, p, a);
                    mn = std::min(mn, r);
                    mx = std::max(mx, r);
                }
                detail::Row r;
                r << j << p << a << mn << mx;
                wu.push_back(r.str());
            }
    }
    out.write_csv("bernstein.csv", "j,k,p,q,min_ratio,max_ratio,lower_bound,upper_bound", bern);
    out.write_csv("wu.csv", "j,p,alpha,min_ratio,max_ratio", wu);
    out.commit();
    return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepRow {
    double value = 0.0;
    std::string status;
    std::string message;
    long steps = 0;
    double t_final = 0.0;
    double l2_a = std::numeric_limits<double>::quiet_NaN();
    diagnostics::FunctionalRecord functionals;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double error = std::numeric_limits<double>::quiet_NaN();
    double order = std::numeric_limits<double>::quiet_NaN();
    std::optional<FieldState> final_state;
};

inline void apply_axis(RunSetup& s, const std::string& axis, double v) {
    if (axis == "s_star") {
        s.params.alpha = 2.0 * v + s.grid.dim() - 2.0;
        s.params.validate();
    } else if (axis == "amplitude") {
        require(v > 0.0 && v < 1.0, "amplitude must lie in (0, 1)");
        s.preset.amplitude = v;
    } else if (axis == "J1") {
        require(v == std::round(v), "J1 must be an integer");
        s.diag.J1 = static_cast<int>(std::lround(v));
    } else if (axis == "grid") {
        std::vector<double> len;
        std::vector<std::size_t> n;
        require(v == std::round(v) && v > 0.0, "grid size must be a positive integer");
        for (int i = 0; i < s.grid.dim(); ++i) {
            len.push_back(s.grid.length(i));
            n.push_back(static_cast<std::size_t>(std::lround(v)));
        }
        s.grid = make_grid(s.grid.dim(), len, n);
    } else if (axis == "dt") {
        require(v > 0.0, "dt must be positive");
        s.solver.dt = v;
    } else {
        throw Error("unknown sweep axis '" + axis + "'");
    }
}

inline SweepRow sweep_child(RunSetup s, const std::string& axis, double value) {
    SweepRow row;
    row.value = value;
    try {
        apply_axis(s, axis, value);
        const FieldState init = solver::perturbation_preset(s.grid, s.params, s.preset);
        solver::SolverConfig cfg = s.solver;
        cfg.snapshot_times = s.regular_times();
        const solver::Trajectory tr = solver::integrate(init, s.params, cfg);
        row.status = solver::to_string(tr.status);
        row.message = tr.message;
        row.steps = tr.steps;
        if (tr.snapshots.empty()) return row;
        const FieldState& last = tr.snapshots.back();
        row.t_final = last.t;
        row.l2_a = l2_norm(last.a);
        row.functionals =
            diagnostics::energy_functionals(last, s.params, lp::build_partition(s.grid), s.diag.J1, s.diag.p);
        std::vector<double> t, n;
        for (const FieldState& st : tr.snapshots) {
            t.push_back(st.t);
            n.push_back(l2_norm(st.a));
        }
        if (tr.ok()) {
            const auto [d0, d1] = diagnostics::default_window(s.solver.t_end);
            try {
                row.slope = diagnostics::fit_decay(t, n, predicted_l2_slope(s), s.diag.fit_t0.value_or(d0),
                                                   s.diag.fit_t1.value_or(d1))
                                .slope;
            } catch (const Error&) {
            }
            row.final_state = last;
        }
    } catch (const Error& e) {
        row.status = "error";
        row.message = e.what();
    }
    return row;
}

namespace detail {

inline double state_distance(const FieldState& x, const FieldState& y) {
    double d = l2_norm(x.a - y.a);
    for (std::size_t c = 0; c < x.u.size(); ++c) d = std::hypot(d, l2_norm(x.u[c] - y.u[c]));
    return d;
}

inline std::string csv_text(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace detail

/// Largest amplitude in [lo, hi] whose run completes, by bisection.
struct BisectRow {
    double s_star = 0.0;
    double ok = std::numeric_limits<double>::quiet_NaN();
    double fail = std::numeric_limits<double>::quiet_NaN();
    std::string status;
};

inline int run_sweep(const Config& cfg, const ExperimentSpec& spec, ArtifactSet& out) {
    RunSetup base = parse_run(cfg, spec.seed);
    base.solver.cancel = spec.cancel;
    const std::string axis = cfg.get_string("sweep", "axis", "");
    static const std::set<std::string> axes{"s_star", "amplitude", "J1", "grid", "dt"};
    if (!axes.count(axis)) cfg.fail("sweep", "axis", "expected one of s_star, amplitude, J1, grid, dt");
    const std::string mode = cfg.get_string("sweep", "mode", "list");
    if (mode != "list" && mode != "bisect") cfg.fail("sweep", "mode", "expected list or bisect");
    const std::vector<double> values = cfg.get_doubles("sweep", "values", {});
    if (values.empty()) cfg.fail("sweep", "values", "need at least one value");
    // validate every value against a throwaway setup so bad entries point at the config line
    for (double v : values) {
        detail::rethrow_at(cfg, "sweep", "values", [&] {
            RunSetup probe = base;
            apply_axis(probe, axis, v);
            return 0;
        });
    }

    if (mode == "bisect") {
        if (axis != "amplitude") cfg.fail("sweep", "mode", "bisection is only defined for the amplitude axis");
        if (values.size() != 2 || !(values[0] > 0.0 && values[1] > values[0] && values[1] < 1.0))
            cfg.fail("sweep", "values", "bisection needs values = lo, hi with 0 < lo < hi < 1");
        const long iterations = cfg.get_int("sweep", "iterations", 8);
        if (iterations < 1) cfg.fail("sweep", "iterations", "must be >= 1");
        const std::vector<double> svals = cfg.get_doubles("sweep", "s_star", {base.params.s_star()});
        std::vector<BisectRow> rows(svals.size());
        detail::parallel_for(svals.size(), spec.workers, [&](std::size_t i) {
            RunSetup s = base;
            BisectRow& row = rows[i];
            row.s_star = svals[i];
            try {
                apply_axis(s, "s_star", svals[i]);
                auto completes = [&](double amp) { return sweep_child(s, "amplitude", amp).status == "completed"; };
                double lo = values[0], hi = values[1];
                if (!completes(lo)) {
                    row.status = "lower-end-fails";
                    row.fail = lo;
                    return;
                }
                if (completes(hi)) {
                    row.status = "upper-end-completes";
                    row.ok = hi;
                    return;
                }
                for (long k = 0; k < iterations; ++k) {
                    const double mid = 0.5 * (lo + hi);
                    (completes(mid) ? lo : hi) = mid;
                }
                row.ok = lo;
                row.fail = hi;
                row.status = "bracketed";
            } catch (const Error& e) {
                row.status = std::string("error: ") + e.what();
            }
        });
        detail::check_cancel(spec);
        std::vector<std::string> lines;
        for (const BisectRow& b : rows) {
            detail::Row r;
            r << b.s_star << b.ok << b.fail << detail::csv_text(b.status);
            lines.push_back(r.str());
        }
        out.write_csv("sweep.csv", "s_star,amplitude_completes,amplitude_fails,status", lines);
        out.commit({{"axis", axis}, {"mode", mode}});
        return 0;
    }

    std::vector<SweepRow> rows(values.size());
    detail::parallel_for(values.size(), spec.workers, [&](std::size_t i) {
        if (spec.cancel && spec.cancel->load()) return;
        rows[i] = sweep_child(base, axis, values[i]);
    });
    detail::check_cancel(spec);

    if (axis == "dt") {
        // errors against the finest completed run, order between successive rows
        std::size_t finest = values.size();
        for (std::size_t i = 0; i < values.size(); ++i)
            if (rows[i].final_state && (finest == values.size() || values[i] < values[finest])) finest = i;
        if (finest < values.size()) {
            for (std::size_t i = 0; i < values.size(); ++i)
                if (i != finest && rows[i].final_state)
                    rows[i].error = detail::state_distance(*rows[i].final_state, *rows[finest].final_state);
            for (std::size_t i = 0; i + 1 < values.size(); ++i)
                if (rows[i].error > 0.0 && rows[i + 1].error > 0.0)
                    rows[i + 1].order = std::log(rows[i].error / rows[i + 1].error) / std::log(values[i] / values[i + 1]);
        }
    }

    std::vector<std::string> lines;
    for (const SweepRow& s : rows) {
        const auto& f = s.functionals;
        detail::Row r;
        r << s.value << s.status << s.steps << s.t_final << s.l2_a << f.a_low << f.u_low << f.a_high << f.u_high
          << f.energy << s.slope << s.error << s.order << detail::csv_text(s.message);
        lines.push_back(r.str());
    }
    out.write_csv("sweep.csv",
                  axis + ",status,steps,t_final,l2_a,a_low,u_low,a_high,u_high,energy,slope_l2_a,error_vs_finest,"
                         "observed_order,message",
                  lines);
    out.commit({{"axis", axis}, {"mode", mode}});
    return 0;
}

// --------------------------------------------------------------- dispatch

inline io::HeaderBlock artifact_header(const Config& cfg, const ExperimentSpec& spec, const std::string& grid) {
    return {{"experiment", spec.name},
            {"kind", to_string(spec.kind)},
            {"config_sha256", sha256_hex(cfg.text())},
            {"seed", std::to_string(spec.seed)},
            {"grid", grid}};
}

/// Parses the config, runs the experiment and writes its artifacts under
/// spec.out. Anything thrown leaves no partial output behind.
inline int run_experiment(ExperimentSpec spec) {
    const Config cfg = Config::load(spec.config_path);
    cfg.check_schema(config_schema());
    if (cfg.has("experiment", "kind")) {
        const std::string k = cfg.get_string("experiment", "kind", "");
        Kind declared{};
        try {
            declared = parse_kind(k);
        } catch (const Error& e) {
            cfg.fail("experiment", "kind", e.what());
        }
        if (declared != spec.kind)
            cfg.fail("experiment", "kind", "config declares '" + k + "' but the subcommand is '" + to_string(spec.kind) + "'");
    }
    if (spec.name.empty()) spec.name = cfg.get_string("experiment", "name", to_string(spec.kind));

    std::string grid = "none (continuum)";
    if (spec.kind == Kind::simulate || spec.kind == Kind::sweep || spec.kind == Kind::lp_inspect)
        grid = grid_descriptor(parse_grid(cfg));

    ArtifactSet out(spec.out, artifact_header(cfg, spec, grid));
    switch (spec.kind) {
        case Kind::simulate: return run_simulate(cfg, spec, out);
        case Kind::linear_analyze: return run_linear_analyze(cfg, spec, out);
        case Kind::decay_verify: return run_decay_verify(cfg, spec, out);
        case Kind::lp_inspect: return run_lp_inspect(cfg, spec, out);
        case Kind::sweep: return run_sweep(cfg, spec, out);
    }
    return 0;
}

}  // namespace riesz::harness
