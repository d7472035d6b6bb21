// wolct: generate signals, run (windowed) offset linear canonical transforms
// and check uncertainty inequalities on the result.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wolct/io.hpp"
#include "wolct/siggen.hpp"
#include "wolct/transform.hpp"
#include "wolct/uncertainty.hpp"

using namespace wolct;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct GenOpts {
    std::string kind = "gaussian";
    double sigma = 1.0, center = 0.0, chirp = 0.0, half_width = 1.0, scale = 1.0, freq = 0.0, bandwidth = 1.0;
    int order = 0;
    std::uint64_t seed = 0;
    std::string base = "gaussian";
    std::size_t n = 1024;
    double t0 = -8.0, dt = 1.0 / 64.0;
    bool normalize = false;
    std::string spec_path;
    std::string out = "-";
};

struct TransformOpts {
    std::string in, params, method = "fast", u_grid, out = "-";
};

struct WolctOpts {
    std::string signal, window, params, method = "fast", u_grid, w_grid, out = "-";
    unsigned threads = 1;
};

struct InverseOpts {
    std::string in, params, t_grid, reference, out = "-";
};

struct VerifyOpts {
    std::string signal, window, params, suite, method = "fast", u_grid, w_grid, report = "-";
    std::vector<std::string> tol;
    unsigned threads = 1;
    double lieb_p = 4.0;
    double floor = lab::kDefaultFloor;
    bool timestamp = false;
};

struct PlotOpts {
    std::string in, out = "-";
};

siggen::SignalKind base_kind(const GenOpts& o, const std::string& kind) {
    using namespace siggen;
    if (kind == "gaussian") return {Gaussian{o.sigma, o.center}};
    if (kind == "chirped_gaussian") return {ChirpedGaussian{o.sigma, o.center, o.chirp}};
    if (kind == "rectangle") return {Rectangle{o.half_width, o.center}};
    if (kind == "hermite") return {Hermite{o.order, o.scale}};
    if (kind == "noise") return {Noise{o.seed, o.bandwidth}};
    throw InputError("--kind: unknown signal kind '" + kind + "'");
}

int cmd_gen(const GenOpts& o) {
    siggen::SignalSpec spec{siggen::SignalKind{siggen::Gaussian{}}, Grid(0.0, 1.0, 2), false};
    if (!o.spec_path.empty()) {
        spec = io::signal_spec_from_json(io::read_json_file(o.spec_path));
    } else {
        spec.grid = Grid(o.t0, o.dt, o.n);
        spec.normalize = o.normalize;
        if (o.kind == "modulated") {
            auto base = std::make_shared<const siggen::SignalKind>(base_kind(o, o.base));
            spec.kind = siggen::SignalKind{siggen::Modulated{std::move(base), o.freq}};
        } else {
            spec.kind = base_kind(o, o.kind);
        }
    }
    io::write_text(o.out, io::dump(io::to_json(siggen::generate(spec))));
    return kExitOk;
}

int cmd_transform(const TransformOpts& o) {
    const io::SignalFile in = io::signal_file_from_json(io::read_json_file(o.in));
    const OlctParams A = io::parse_params_csv(o.params);
    const TransformMethod method = parse_method(o.method);
    const Grid& t_grid = in.signal.grid();
    Grid u_grid = t_grid;
    if (!o.u_grid.empty())
        u_grid = io::parse_grid_csv(o.u_grid);
    else if (A.b() != 0.0)
        u_grid = canonical_u_grid(t_grid, A);
    const SampledSignal F = olct(in.signal, A, u_grid, method);
    io::write_text(o.out, io::dump(io::to_json(io::SignalFile{F, A, t_grid})));
    return kExitOk;
}

int cmd_wolct(const WolctOpts& o) {
    const SampledSignal f = io::signal_from_json(io::read_json_file(o.signal));
    const SampledSignal phi = io::signal_from_json(io::read_json_file(o.window));
    const OlctParams A = io::parse_params_csv(o.params);
    if (o.threads == 0) throw InputError("--threads must be >= 1");
    const Grid u_grid = o.u_grid.empty() ? canonical_u_grid(f.grid(), A) : io::parse_grid_csv(o.u_grid);
    const Grid w_grid = o.w_grid.empty() ? default_w_grid(f, phi) : io::parse_grid_csv(o.w_grid);
    const TimeFreqMap V = wolct::wolct(f, phi, A, u_grid, w_grid, parse_method(o.method), o.threads);
    io::write_text(o.out, io::dump(io::to_json(V)));
    return kExitOk;
}

int cmd_inverse(const InverseOpts& o) {
    const io::SignalFile in = io::signal_file_from_json(io::read_json_file(o.in));
    std::optional<OlctParams> A = in.params;
    if (!o.params.empty()) A = io::parse_params_csv(o.params);
    if (!A) throw InputError("--params is required when the input carries no 'params' field");
    std::optional<Grid> t_grid = in.source_grid;
    if (!o.t_grid.empty()) t_grid = io::parse_grid_csv(o.t_grid);
    if (!t_grid) throw InputError("--t-grid is required when the input carries no 'source_grid' field");
    const SampledSignal f = inverse_olct(in.signal, *A, *t_grid);
    if (!o.reference.empty()) {
        const SampledSignal ref = io::signal_from_json(io::read_json_file(o.reference));
        if (!ref.grid().matches(f.grid())) throw InputError("--reference: grid differs from the reconstruction grid");
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            num += std::norm(f[k] - ref[k]);
            den += std::norm(ref[k]);
        }
        if (den == 0.0) throw InputError("--reference: zero signal");
        char line[80];
        std::snprintf(line, sizeof line, "relative_l2_error %.17g\n", std::sqrt(num / den));
        std::cerr << line;
    }
    io::write_text(o.out, io::dump(io::to_json(f)));
    return kExitOk;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_verify(const VerifyOpts& o) {
    io::RunConfig cfg;
    cfg.signal_path = o.signal;
    cfg.window_path = o.window;
    cfg.report_path = o.report;
    cfg.params = io::parse_params_csv(o.params);
    cfg.method = parse_method(o.method);
    if (!o.u_grid.empty()) cfg.u_grid = io::parse_grid_csv(o.u_grid);
    if (!o.w_grid.empty()) cfg.w_grid = io::parse_grid_csv(o.w_grid);
    if (!o.suite.empty()) {
        std::string item;
        std::stringstream ss(o.suite);
        while (std::getline(ss, item, ',')) cfg.suite.push_back(item);
    }
    if (const auto env = io::default_tol_from_env()) cfg.default_tol = *env;
    for (const auto& t : o.tol) cfg.tolerances.insert(io::parse_tolerance(t));
    cfg.lieb_p = o.lieb_p;
    cfg.floor = o.floor;
    cfg.threads = o.threads;
    const lab::SuiteConfig suite = cfg.to_suite_config();

    const SampledSignal f = io::signal_from_json(io::read_json_file(o.signal));
    const SampledSignal phi = io::signal_from_json(io::read_json_file(o.window));
    const lab::UncertaintyReport report = lab::run_suite(f, phi, cfg.params, suite);
    std::optional<std::string> stamp;
    if (o.timestamp) stamp = utc_now();
    io::write_text(o.report, io::dump(io::report_to_json(report, cfg, f, phi, stamp)));

    for (const auto& out : report.outcomes) {
        const std::string name(lab::to_string(out.name));
        if (!out.result) {
            std::cerr << name << ": error: " << out.error << "\n";
            continue;
        }
        char line[160];
        std::snprintf(line, sizeof line, "%-13s %s ratio=%.6g%s\n", name.c_str(), out.result->holds ? "holds " : "FAILS ",
                      out.result->ratio, lab::is_proven(out.name) ? "" : " (diagnostic)");
        std::cerr << line;
    }
    return report.all_proven_hold() ? kExitOk : kExitViolation;
}

int cmd_plotdata(const PlotOpts& o) {
    const TimeFreqMap V = io::tfmap_from_json(io::read_json_file(o.in));
    io::write_text(o.out, io::tsv_magnitude(V));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offset linear canonical transforms and uncertainty-principle checks"};
    app.require_subcommand(1);

    GenOpts gen;
    auto* g = app.add_subcommand("gen", "Generate a test signal");
    g->add_option("--kind", gen.kind, "gaussian|chirped_gaussian|rectangle|hermite|modulated|noise");
    g->add_option("--sigma", gen.sigma);
    g->add_option("--center", gen.center);
    g->add_option("--chirp", gen.chirp, "Chirp rate");
    g->add_option("--half-width", gen.half_width);
    g->add_option("--order", gen.order, "Hermite order (0..8)");
    g->add_option("--scale", gen.scale, "Hermite scale");
    g->add_option("--freq", gen.freq, "Modulation frequency (rad per unit)");
    g->add_option("--base", gen.base, "Base kind for --kind modulated");
    g->add_option("--seed", gen.seed);
    g->add_option("--bandwidth", gen.bandwidth, "Noise bandwidth (cycles per unit)");
    g->add_option("--n", gen.n, "Number of samples");
    g->add_option("--t0", gen.t0, "First sample position");
    g->add_option("--dt", gen.dt, "Sample step");
    g->add_flag("--normalize", gen.normalize, "Scale to unit L2 norm");
    g->add_option("--spec", gen.spec_path, "SignalSpec JSON file (overrides the other flags)");
    g->add_option("--out", gen.out);

    TransformOpts tr;
    auto* t = app.add_subcommand("transform", "OLCT of a signal");
    t->add_option("--in", tr.in)->required();
    t->add_option("--params", tr.params, "a,b,c,d,u0,w0")->required();
    t->add_option("--method", tr.method, "direct|fast");
    t->add_option("--u-grid", tr.u_grid, "start,step,count (default: canonical grid)");
    t->add_option("--out", tr.out);

    WolctOpts wo;
    auto* w = app.add_subcommand("wolct", "Windowed OLCT time-frequency map");
    w->add_option("--signal", wo.signal)->required();
    w->add_option("--window", wo.window)->required();
    w->add_option("--params", wo.params)->required();
    w->add_option("--method", wo.method);
    w->add_option("--u-grid", wo.u_grid);
    w->add_option("--w-grid", wo.w_grid);
    w->add_option("--threads", wo.threads);
    w->add_option("--out", wo.out);

    InverseOpts inv;
    auto* i = app.add_subcommand("inverse", "Inverse OLCT of a transformed signal");
    i->add_option("--in", inv.in)->required();
    i->add_option("--params", inv.params, "Defaults to the params stored in the input");
    i->add_option("--t-grid", inv.t_grid, "Defaults to the source grid stored in the input");
    i->add_option("--reference", inv.reference, "Print the relative L2 error against this signal");
    i->add_option("--out", inv.out);

    VerifyOpts ve;
    auto* v = app.add_subcommand("verify", "Run the uncertainty suite and write a report");
    v->add_option("--signal", ve.signal)->required();
    v->add_option("--window", ve.window)->required();
    v->add_option("--params", ve.params)->required();
    v->add_option("--suite", ve.suite, "name[,name...] (default: all)");
    v->add_option("--method", ve.method);
    v->add_option("--u-grid", ve.u_grid);
    v->add_option("--w-grid", ve.w_grid);
    v->add_option("--report", ve.report);
    v->add_option("--threads", ve.threads);
    v->add_option("--lieb-p", ve.lieb_p);
    v->add_option("--floor", ve.floor);
    v->add_option("--tol", ve.tol, "name=value, repeatable");
    v->add_flag("--timestamp", ve.timestamp, "Add a UTC timestamp to the report header");

    PlotOpts pl;
    auto* p = app.add_subcommand("plotdata", "TSV magnitude grid from a time-frequency map");
    p->add_option("--in", pl.in)->required();
    p->add_option("--out", pl.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (g->parsed()) return cmd_gen(gen);
        if (t->parsed()) return cmd_transform(tr);
        if (w->parsed()) return cmd_wolct(wo);
        if (i->parsed()) return cmd_inverse(inv);
        if (v->parsed()) return cmd_verify(ve);
        if (p->parsed()) return cmd_plotdata(pl);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
