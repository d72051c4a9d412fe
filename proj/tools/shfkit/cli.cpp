#include "shfkit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "shf/acoustic1d.hpp"
#include "shf/config.hpp"
#include "shf/errors.hpp"
#include "shf/extraction.hpp"
#include "shf/ladder.hpp"
#include "shf/materials.hpp"
#include "shf/mbvd.hpp"
#include "shf/touchstone.hpp"
#include "shf/trace_io.hpp"

namespace shf::cli {

namespace {

namespace fs = std::filesystem;
using io::format_number;

struct Args {
    std::string config, input, out, s1p, s2p, kt2_definition, stack;
    std::optional<double> fres, kt2, qm, c0, rs, r0, r0_c0, r, z0;
    std::optional<double> f_lo, f_hi, z_src, z_load, q, kt2_lo, kt2_hi, calibrate_to;
    std::optional<int> order, points, n_grid, cells, steps;
};

std::string fmt(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

fs::path output_path(const std::string& p) {
    fs::path path(p);
    if (path.is_relative())
        if (const char* dir = std::getenv("SHFKIT_OUT_DIR"); dir && *dir) return fs::path(dir) / path;
    return path;
}

struct Context {
    const Args& a;
    std::optional<io::DesignConfig> cfg;
    Kt2Definition def = kDefaultKt2Definition;
    std::ostream& out;

    Context(const Args& args, std::ostream& o) : a(args), out(o) {
        if (!a.config.empty()) {
            try {
                cfg = io::parse_config(io::read_file(a.config));
            } catch (const ParseError& e) {
                throw ParseError(e.line(), a.config + ": " + e.what());
            }
            def = cfg->definition;
        }
        if (!a.kt2_definition.empty()) def = parse_kt2_definition(a.kt2_definition);
    }

    void emit(const std::string& path, const std::string& content, const char* what) const {
        if (path.empty()) return;
        const fs::path p = output_path(path);
        io::write_file(p, content);
        out << "wrote " << what << ": " << p.string() << "\n";
    }

    ResonatorTargets targets() const {
        const bool have = cfg && cfg->resonator;
        ResonatorTargets t = have ? *cfg->resonator : ResonatorTargets{};
        const auto take = [&](const std::optional<double>& v, double& dst, const char* flag, bool required) {
            if (v) dst = *v;
            else if (!have && required)
                throw DomainError(std::string("missing ") + flag + " (or a [resonator] section in --config)");
        };
        take(a.fres, t.fres, "--fres", true);
        take(a.kt2, t.kt2, "--kt2", true);
        take(a.qm, t.qm, "--qm", true);
        take(a.c0, t.c0, "--c0", true);
        take(a.rs, t.rs, "--rs", false);
        take(a.r0, t.r0, "--r0", false);
        return t;
    }

    LadderDesign ladder() const {
        LadderDesign d;
        if (cfg && cfg->ladder) {
            d = *cfg->ladder;
        } else if (cfg && cfg->resonator) {
            d.f_series = cfg->resonator->fres;
            d.kt2 = cfg->resonator->kt2;
            d.qm = cfg->resonator->qm;
        }
        d.definition = def;
        if (a.order) d.order = *a.order;
        if (a.r) d.r = *a.r;
        if (a.z0) d.z0 = *a.z0;
        if (a.kt2) d.kt2 = *a.kt2;
        if (a.qm) d.qm = *a.qm;
        if (a.fres) d.f_series = *a.fres;
        if (a.rs) d.losses.rs = *a.rs;
        if (a.r0_c0) d.losses.r0_c0 = *a.r0_c0;
        if (d.order < 2) throw DomainError("--order must be >= 2, got " + std::to_string(d.order));
        return d;
    }

    acoustic::Cell cell() const {
        if (cfg && cfg->has_cell()) return cfg->cell();
        if (cfg) throw DomainError(a.config + ": no [cell] section");
        return acoustic::geometry_to_segments(acoustic::reference_2drr_geometry());
    }

    std::vector<double> grid(double lo_default, double hi_default, int points_default) const {
        const double lo = a.f_lo.value_or(lo_default);
        const double hi = a.f_hi.value_or(hi_default);
        const int n = a.points.value_or(points_default);
        if (!(lo > 0.0)) throw DomainError("--f-lo must be > 0");
        if (!(hi > lo)) throw DomainError("--f-hi must exceed --f-lo");
        if (n < 2) throw DomainError("--points must be >= 2");
        return linear_grid(lo, hi, static_cast<std::size_t>(n));
    }
};

std::string params_csv(const MbvdParams& p) {
    std::ostringstream os;
    os << "parameter,value,unit\n";
    const std::pair<const char*, std::pair<double, const char*>> rows[] = {
        {"c0", {p.c0, "F"}}, {"cm", {p.cm, "F"}},  {"lm", {p.lm, "H"}},
        {"rm", {p.rm, "ohm"}}, {"rs", {p.rs, "ohm"}}, {"r0", {p.r0, "ohm"}},
    };
    for (const auto& [name, v] : rows) os << name << "," << format_number(v.first) << "," << v.second << "\n";
    return os.str();
}

void print_params(std::ostream& out, const MbvdParams& p) {
    out << fmt("  C0 = %.6g fF  Cm = %.6g fF  Lm = %.6g nH\n", p.c0 * 1e15, p.cm * 1e15, p.lm * 1e9)
        << fmt("  Rm = %.6g ohm  Rs = %.6g ohm  R0 = %.6g ohm\n", p.rm, p.rs, p.r0);
}

int cmd_synth(const Context& c) {
    const ResonatorTargets t = c.targets();
    const MbvdParams p = from_targets(t, c.def);
    const AdmittanceTrace trace = synthesize_trace(p, c.grid(0.5 * t.fres, 1.5 * t.fres, 2001));
    c.out << "synth: MBVD admittance, " << trace.size() << " points\n";
    print_params(c.out, p);
    c.out << describe(metrics(p, c.def)) << "\n";

    std::ostringstream csv;
    io::write_admittance_csv(csv, trace);
    c.emit(c.a.out, csv.str(), "admittance csv");
    if (!c.a.s1p.empty()) {
        std::vector<std::vector<cplx>> s11;
        for (cplx y : trace.values) s11.push_back({admittance_to_s11(y, 50.0)});
        c.emit(c.a.s1p, io::write_touchstone(io::make_touchstone(trace.freqs, s11, 1)), "touchstone");
    }
    return kExitOk;
}

int cmd_fit(const Context& c) {
    if (c.a.input.empty()) throw DomainError("fit: --input is required (.s1p or .csv)");
    const AdmittanceTrace trace = io::load_admittance(c.a.input);
    const FitResult r = fit_mbvd(trace, initial_guess(trace));
    const MbvdParams& p = r.params;
    const double fs = 1.0 / (2.0 * std::numbers::pi * std::sqrt(p.lm * p.cm));
    const double qm = p.rm > 0.0 ? 2.0 * std::numbers::pi * fs * p.lm / p.rm
                                 : std::numeric_limits<double>::infinity();
    const double kt2 = extracted_kt2(p, c.def);

    c.out << "fit: " << trace.size() << " points from " << c.a.input << "\n";
    print_params(c.out, p);
    c.out << fmt("  fs = %.6f GHz  kt2 = %.2f %% (%s)  Qm = %.4g\n", fs / 1e9, kt2 * 100,
                 std::string(to_string(c.def)).c_str(), qm)
          << fmt("  residual = %.3e  iterations = %d  stop: %s\n", r.residual, r.iterations,
                 r.stop_reason.c_str());

    std::string csv = params_csv(p);
    csv += "kt2," + format_number(kt2) + ",1\n";
    csv += "qm," + format_number(qm) + ",1\n";
    csv += "residual," + format_number(r.residual) + ",1\n";
    c.emit(c.a.out, csv, "fit csv");
    if (!r.converged) throw NumericalError("fit did not converge: " + r.stop_reason);
    return kExitOk;
}

int cmd_metrics(const Context& c) {
    const MbvdParams p = from_targets(c.targets(), c.def);
    const ResonatorMetrics m = metrics(p, c.def);
    c.out << "metrics:\n";
    print_params(c.out, p);
    c.out << describe(m) << "\n";

    std::ostringstream os;
    os << "quantity,value,unit\n";
    const std::pair<const char*, std::pair<double, const char*>> rows[] = {
        {"fs", {m.fs, "Hz"}},       {"fp", {m.fp, "Hz"}}, {"fp_lossless", {m.fp_lossless, "Hz"}},
        {"kt2", {m.kt2, "1"}},      {"qm", {m.qm, "1"}},  {"fom_m", {m.fom_m, "1"}},
        {"fom", {m.fom, "1"}},
    };
    for (const auto& [name, v] : rows) os << name << "," << format_number(v.first) << "," << v.second << "\n";
    c.emit(c.a.out, os.str(), "metrics csv");
    return kExitOk;
}

int cmd_te_res(const Context& c) {
    const std::string name = c.a.stack.empty() ? "rod" : c.a.stack;
    const acoustic::Stack st = c.cfg ? c.cfg->stack(name) : acoustic::reference_rod_stack();
    const double f = acoustic::te_resonance(st);
    c.out << "te-res: stack '" << name << "'\n";
    for (const auto& l : st)
        c.out << fmt("  %-8s %8.1f nm  rho = %.0f kg/m^3  v = %.0f m/s\n", l.material.c_str(),
                     l.thickness * 1e9, l.density, l.velocity);
    c.out << fmt("  f_TE = %.6f GHz\n", f / 1e9);
    c.emit(c.a.out, "stack,f_te_hz\n" + name + "," + format_number(f) + "\n", "te csv");
    return kExitOk;
}

int cmd_stopbands(const Context& c) {
    acoustic::Cell cell = c.cell();
    const int n_grid = c.a.n_grid.value_or(20000);
    if (c.a.calibrate_to) {
        const auto cal = acoustic::calibrate_to_stop_band(cell, *c.a.calibrate_to, 0.05, n_grid);
        cell = cal.cell;
        c.out << fmt("stopbands: lengths scaled by %.6f to centre a band on %.6f GHz\n", cal.length_scale,
                     *c.a.calibrate_to / 1e9);
    }
    if (!c.a.calibrate_to && (!c.a.f_lo || !c.a.f_hi))
        throw DomainError("stopbands: --f-lo and --f-hi are required without --calibrate-to");
    const double lo = c.a.f_lo.value_or(0.9 * c.a.calibrate_to.value_or(0.0));
    const double hi = c.a.f_hi.value_or(1.1 * c.a.calibrate_to.value_or(0.0));
    const auto bands = acoustic::find_stop_bands(cell, lo, hi, n_grid);

    c.out << fmt("stopbands: %zu band(s) in [%.6g, %.6g] GHz\n", bands.size(), lo / 1e9, hi / 1e9);
    std::ostringstream os;
    os << "band,f_lo_hz,f_hi_hz,center_hz,width_frac\n";
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto& b = bands[i];
        const double w = (b.f_hi - b.f_lo) / b.center();
        c.out << fmt("  %zu: %.6f - %.6f GHz (%.3f %%)\n", i, b.f_lo / 1e9, b.f_hi / 1e9, w * 100);
        os << i << "," << format_number(b.f_lo) << "," << format_number(b.f_hi) << ","
           << format_number(b.center()) << "," << format_number(w) << "\n";
    }
    c.emit(c.a.out, os.str(), "stop-band csv");
    return kExitOk;
}

int cmd_transmission(const Context& c) {
    const acoustic::Cell cell = c.cell();
    if (cell.empty()) throw DomainError("transmission: the cell has no segments");
    if (!c.a.f_lo || !c.a.f_hi) throw DomainError("transmission: --f-lo and --f-hi are required");
    const int n = c.a.cells.value_or(8);
    const double zs = c.a.z_src.value_or(cell.front().impedance);
    const double zl = c.a.z_load.value_or(cell.front().impedance);
    std::optional<acoustic::AcousticLoss> loss;
    if (c.a.q) loss = acoustic::AcousticLoss{*c.a.q};
    const auto freqs = c.grid(*c.a.f_lo, *c.a.f_hi, 2001);

    std::ostringstream os;
    os << "frequency_hz,transmission,transmission_db,half_trace,in_stop_band\n";
    double t_min = std::numeric_limits<double>::infinity(), f_min = 0.0;
    for (double f : freqs) {
        const double t = acoustic::transmission(cell, n, f, zs, zl, loss);
        const auto b = acoustic::bloch(cell, f);
        if (t < t_min) {
            t_min = t;
            f_min = f;
        }
        os << format_number(f) << "," << format_number(t) << "," << format_number(10 * std::log10(t)) << ","
           << format_number(b.half_trace) << "," << (b.in_stop_band ? 1 : 0) << "\n";
    }
    c.out << fmt("transmission: %d cells, %zu points\n  minimum T = %.4g (%.2f dB) at %.6f GHz\n", n,
                 freqs.size(), t_min, 10 * std::log10(t_min), f_min / 1e9);
    c.emit(c.a.out, os.str(), "transmission csv");
    return kExitOk;
}

void print_filter(std::ostream& out, const FilterMetrics& m) {
    out << fmt("  IL = %.3f dB  BW = %.2f %%  rejection = %.2f dB\n", m.il_db, m.bw_frac * 100,
               m.rejection_db)
        << fmt("  3-dB band %.6f - %.6f GHz\n", m.f_lo / 1e9, m.f_hi / 1e9);
}

int cmd_filter(const Context& c) {
    const LadderDesign d = c.ladder();
    const LadderSpec spec = design_ladder(d);
    const int pts = c.a.points.value_or(4001);
    const auto freqs = (c.a.f_lo || c.a.f_hi) ? c.grid(0.8 * d.f_series, 1.2 * d.f_series, 4001)
                                              : filter_grid(d.f_series, static_cast<std::size_t>(std::max(pts, 2)));
    const auto r = ladder_response(spec, freqs);

    c.out << fmt("filter: order %d ladder, r = %.4g, z0 = %.4g ohm, kt2 = %.2f %%, Qm = %.4g\n", d.order, d.r,
                 spec.z0, d.kt2 * 100, d.qm);
    for (std::size_t i = 0; i < spec.elements.size(); ++i) {
        const auto& e = spec.elements[i];
        c.out << fmt("  %zu %-6s C0 = %.4f fF  fs = %.6f GHz\n", i,
                     e.position == Position::series ? "series" : "shunt", e.resonator.c0 * 1e15,
                     resonance_freqs(e.resonator).fs / 1e9);
    }
    if (!r.singular.empty()) c.out << "  " << r.singular.size() << " singular point(s) recorded as nan\n";

    std::ostringstream os;
    os << "frequency_hz,s11_re,s11_im,s21_re,s21_im,s21_db\n";
    for (std::size_t i = 0; i < freqs.size(); ++i)
        os << format_number(freqs[i]) << "," << format_number(r.s11[i].real()) << ","
           << format_number(r.s11[i].imag()) << "," << format_number(r.s21[i].real()) << ","
           << format_number(r.s21[i].imag()) << "," << format_number(20 * std::log10(std::abs(r.s21[i])))
           << "\n";
    c.emit(c.a.out, os.str(), "s-parameter csv");
    if (!c.a.s2p.empty()) {
        std::vector<std::vector<cplx>> vals;
        for (std::size_t i = 0; i < freqs.size(); ++i) vals.push_back({r.s11[i], r.s21[i], r.s12[i], r.s22[i]});
        c.emit(c.a.s2p,
               io::write_touchstone(io::make_touchstone(freqs, vals, 2, io::DataFormat::ri, io::FreqUnit::hz, spec.z0)),
               "touchstone");
    }
    print_filter(c.out, filter_metrics(r.freqs, r.s21));
    return kExitOk;
}

int cmd_sweep(const Context& c) {
    SweepSettings s;
    s.base = c.ladder();
    s.kt2_lo = c.a.kt2_lo.value_or(s.kt2_lo);
    s.kt2_hi = c.a.kt2_hi.value_or(s.kt2_hi);
    s.n_steps = c.a.steps.value_or(s.n_steps);
    if (c.a.points) s.grid_points = static_cast<std::size_t>(std::max(*c.a.points, 2));
    const auto rows = kt2_sweep(s);

    c.out << fmt("sweep-kt2: order %d, Qm = %.4g, %d steps\n", s.base.order, s.base.qm, s.n_steps);
    c.out << "    kt2 %   IL dB    BW %   rej dB\n";
    std::ostringstream os;
    os << "kt2,resolved,il_db,bw_frac,rejection_db,f_lo_hz,f_hi_hz\n";
    std::size_t resolved = 0;
    for (const auto& row : rows) {
        os << format_number(row.kt2) << "," << (row.resolved ? 1 : 0);
        if (row.resolved) {
            ++resolved;
            const auto& m = row.metrics;
            for (double v : {m.il_db, m.bw_frac, m.rejection_db, m.f_lo, m.f_hi}) os << "," << format_number(v);
            c.out << fmt("  %7.2f %7.3f %7.2f %8.2f\n", row.kt2 * 100, m.il_db, m.bw_frac * 100, m.rejection_db);
        } else {
            os << ",nan,nan,nan,nan,nan";
            c.out << fmt("  %7.2f  unresolved: %s\n", row.kt2 * 100, row.note.c_str());
        }
        os << "\n";
    }
    c.emit(c.a.out, os.str(), "sweep csv");
    if (resolved == 0) throw NumericalError("sweep-kt2: no row resolved a passband");
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MBVD resonator, 2DRR unit-cell and ladder-filter toolkit", "shfkit"};
    app.require_subcommand(1);
    Args a;

    const auto common = [&](CLI::App* s) {
        s->add_option("--config", a.config, "design config file");
        s->add_option("--out", a.out, "CSV output path");
        s->add_option("--kt2-definition", a.kt2_definition, "pi2_over_8 | ratio | tangent");
    };
    const auto resonator = [&](CLI::App* s) {
        s->add_option("--fres", a.fres, "series resonance, Hz");
        s->add_option("--kt2", a.kt2, "coupling (fraction)");
        s->add_option("--qm", a.qm, "mechanical quality factor");
        s->add_option("--c0", a.c0, "static capacitance, F");
        s->add_option("--rs", a.rs, "series resistance, ohm");
        s->add_option("--r0", a.r0, "static-branch resistance, ohm");
    };
    const auto grid = [&](CLI::App* s) {
        s->add_option("--f-lo", a.f_lo, "lower frequency, Hz");
        s->add_option("--f-hi", a.f_hi, "upper frequency, Hz");
        s->add_option("--points", a.points, "number of frequency points");
    };
    const auto ladder = [&](CLI::App* s) {
        s->add_option("--order", a.order, "number of ladder elements");
        s->add_option("--r", a.r, "C0 shunt / C0 series");
        s->add_option("--z0", a.z0, "termination, ohm");
        s->add_option("--kt2", a.kt2, "coupling (fraction)");
        s->add_option("--qm", a.qm, "mechanical quality factor");
        s->add_option("--fres", a.fres, "series-resonator fs, Hz");
        s->add_option("--rs", a.rs, "series resistance per resonator, ohm");
        s->add_option("--r0-c0", a.r0_c0, "dielectric-loss time constant R0*C0, s");
    };

    std::function<int(const Context&)> run;
    const auto sub = [&](const char* name, const char* help, std::function<int(const Context&)> fn) {
        CLI::App* s = app.add_subcommand(name, help);
        common(s);
        s->callback([&run, fn] { run = fn; });
        return s;
    };

    auto* synth = sub("synth", "MBVD admittance sweep from resonator targets", cmd_synth);
    resonator(synth);
    grid(synth);
    synth->add_option("--s1p", a.s1p, "also write S11 as Touchstone");

    auto* fit = sub("fit", "fit MBVD element values to a measured one-port", cmd_fit);
    fit->add_option("--input", a.input, ".s1p or frequency_hz,re,im .csv")->required();

    resonator(sub("metrics", "fs, fp, kt2, Qm and FoM of a resonator", cmd_metrics));

    sub("te-res", "thickness-extension resonance of a stack", cmd_te_res)
        ->add_option("--stack", a.stack, "stack name in --config (default rod)");

    auto* sb = sub("stopbands", "Bloch stop-bands of the unit cell", cmd_stopbands);
    sb->add_option("--f-lo", a.f_lo, "lower frequency, Hz");
    sb->add_option("--f-hi", a.f_hi, "upper frequency, Hz");
    sb->add_option("--n-grid", a.n_grid, "scan points");
    sb->add_option("--calibrate-to", a.calibrate_to, "rescale lengths to centre a band here, Hz");

    auto* tr = sub("transmission", "power transmission through n cells", cmd_transmission);
    grid(tr);
    tr->add_option("--cells", a.cells, "number of cells (default 8)");
    tr->add_option("--z-src", a.z_src, "source impedance (default first segment)");
    tr->add_option("--z-load", a.z_load, "load impedance (default first segment)");
    tr->add_option("--q", a.q, "uniform acoustic quality factor");

    auto* filt = sub("filter", "design and analyse a ladder filter", cmd_filter);
    ladder(filt);
    grid(filt);
    filt->add_option("--s2p", a.s2p, "also write S-parameters as Touchstone");

    auto* sw = sub("sweep-kt2", "ladder metrics versus coupling", cmd_sweep);
    ladder(sw);
    sw->add_option("--kt2-lo", a.kt2_lo, "first coupling value");
    sw->add_option("--kt2-hi", a.kt2_hi, "last coupling value");
    sw->add_option("--steps", a.steps, "number of rows");
    sw->add_option("--points", a.points, "grid points per row");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        const Context ctx(a, out);
        return run(ctx);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace shf::cli
