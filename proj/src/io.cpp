#include "wolct/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace wolct::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool is_scalar_array(const json& j) {
    for (const auto& e : j)
        if (e.is_structured()) return false;
    return true;
}

void dump_to(std::string& out, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::number_float: out += number(j.get<double>()); break;
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                dump_to(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            if (is_scalar_array(j)) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    dump_to(out, j[i], indent + 1);
                }
                out += "]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump_to(out, j[i], indent + 1);
            }
            out += "\n" + pad + "]";
            break;
        }
        default: out += j.dump(); break;
    }
}

std::string join(std::string_view path, std::string_view key) {
    return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

void require_object(const json& j, std::string_view path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw InputError("field '" + std::string(path) + "': expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw InputError("field '" + join(path, it.key()) + "': unknown field");
    }
}

double get_number(const json& j, std::string_view path, std::string_view key, std::optional<double> fallback = {}) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) {
        if (fallback) return *fallback;
        throw InputError("field '" + join(path, key) + "': missing");
    }
    if (!it->is_number()) throw InputError("field '" + join(path, key) + "': expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw InputError("field '" + join(path, key) + "': must be finite");
    return v;
}

std::size_t get_count(const json& j, std::string_view path, std::string_view key) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw InputError("field '" + join(path, key) + "': missing");
    if (!it->is_number_integer() || it->get<long long>() < 0)
        throw InputError("field '" + join(path, key) + "': expected a non-negative integer");
    return it->get<std::size_t>();
}

std::vector<double> get_numbers(const json& j, std::string_view path, std::string_view key) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw InputError("field '" + join(path, key) + "': missing");
    if (!it->is_array()) throw InputError("field '" + join(path, key) + "': expected an array");
    std::vector<double> out;
    out.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& e = (*it)[i];
        if (!e.is_number() || !std::isfinite(e.get<double>()))
            throw InputError("field '" + join(path, key) + "[" + std::to_string(i) + "]': expected a finite number");
        out.push_back(e.get<double>());
    }
    return out;
}

/// Wraps library precondition errors with the field they came from.
template <class F>
auto with_field(std::string_view path, F&& f) {
    try {
        return f();
    } catch (const InputError& e) {
        const std::string msg = e.what();
        if (msg.rfind("field '", 0) == 0) throw;
        throw InputError("field '" + std::string(path) + "': " + msg);
    }
}

std::vector<cplx> complex_samples(const json& j, std::string_view path) {
    const auto re = get_numbers(j, path, "re");
    const auto im = get_numbers(j, path, "im");
    if (re.size() != im.size()) throw InputError("field '" + join(path, "im") + "': length differs from 're'");
    std::vector<cplx> out(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) out[k] = cplx(re[k], im[k]);
    return out;
}

std::vector<double> split_numbers(std::string_view text, const char* what) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        while (end && *end == ' ') ++end;
        if (item.empty() || end == item.c_str() || *end != '\0' || !std::isfinite(v))
            throw InputError(std::string(what) + ": cannot parse '" + item + "' as a number");
        out.push_back(v);
    }
    return out;
}

double checked_tolerance(double v, const std::string& what) {
    if (!(v >= kMinTolerance && v <= kMaxTolerance))
        throw InputError(what + ": tolerance " + number(v) + " outside [1e-14, 1e-1]");
    return v;
}

json result_to_json(const lab::CheckOutcome& o) {
    json r;
    r["name"] = std::string(lab::to_string(o.name));
    if (!o.result) {
        r["error"] = o.error;
        return r;
    }
    const auto& res = *o.result;
    r["lhs"] = res.lhs;
    r["rhs"] = res.rhs;
    r["ratio"] = res.ratio;
    r["holds"] = res.holds;
    r["proven"] = lab::is_proven(o.name);
    json diag = json::object();
    for (const auto& [k, v] : res.diagnostics) diag[k] = v;
    r["diagnostics"] = diag;
    if (o.name == lab::Check::hardy) {
        const auto v = static_cast<lab::HardyVerdict>(static_cast<int>(res.diagnostics.at("verdict")));
        r["verdict"] = std::string(lab::to_string(v));
    }
    return r;
}

}  // namespace

std::string dump(const json& j) {
    std::string out;
    dump_to(out, j, 0);
    out += "\n";
    return out;
}

json to_json(const OlctParams& A) {
    return json{{"a", A.a()}, {"b", A.b()}, {"c", A.c()}, {"d", A.d()}, {"u0", A.u0()}, {"w0", A.w0()}};
}

json to_json(const Grid& g) { return json{{"start", g.start()}, {"step", g.step()}, {"count", g.count()}}; }

json to_json(const SampledSignal& s) {
    json re = json::array(), im = json::array();
    for (const cplx& z : s.samples()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return json{{"t0", s.grid().start()}, {"dt", s.step()}, {"re", re}, {"im", im}};
}

json to_json(const TimeFreqMap& V) {
    json re = json::array(), im = json::array();
    for (std::size_t m = 0; m < V.nu(); ++m) {
        json rr = json::array(), ri = json::array();
        for (std::size_t j = 0; j < V.nw(); ++j) {
            rr.push_back(V.at(m, j).real());
            ri.push_back(V.at(m, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return json{{"params", to_json(V.params())},
                {"u_grid", to_json(V.u_grid())},
                {"w_grid", to_json(V.w_grid())},
                {"re", re},
                {"im", im}};
}

json to_json(const siggen::SignalKind& kind) {
    using namespace siggen;
    return std::visit(overloaded{
                          [](const Gaussian& g) {
                              return json{{"kind", "gaussian"}, {"sigma", g.sigma}, {"center", g.center}};
                          },
                          [](const ChirpedGaussian& g) {
                              return json{{"kind", "chirped_gaussian"},
                                          {"sigma", g.sigma},
                                          {"center", g.center},
                                          {"chirp_rate", g.chirp_rate}};
                          },
                          [](const Rectangle& r) {
                              return json{{"kind", "rectangle"}, {"half_width", r.half_width}, {"center", r.center}};
                          },
                          [](const Hermite& h) {
                              return json{{"kind", "hermite"}, {"order", h.order}, {"scale", h.scale}};
                          },
                          [](const Modulated& m) {
                              return json{{"kind", "modulated"}, {"base", to_json(*m.base)}, {"freq", m.freq}};
                          },
                          [](const Noise& n) {
                              return json{{"kind", "noise"}, {"seed", n.seed}, {"bandwidth", n.bandwidth}};
                          },
                      },
                      kind.value);
}

json to_json(const siggen::SignalSpec& spec) {
    return json{{"kind", to_json(spec.kind)}, {"grid", to_json(spec.grid)}, {"normalize", spec.normalize}};
}

OlctParams params_from_json(const json& j) {
    constexpr std::string_view p = "params";
    require_object(j, p, {"a", "b", "c", "d", "u0", "w0"});
    const double a = get_number(j, p, "a"), b = get_number(j, p, "b"), c = get_number(j, p, "c"),
                 d = get_number(j, p, "d");
    const double u0 = get_number(j, p, "u0", 0.0), w0 = get_number(j, p, "w0", 0.0);
    return with_field(p, [&] { return OlctParams(a, b, c, d, u0, w0); });
}

Grid grid_from_json(const json& j, std::string_view path) {
    require_object(j, path, {"start", "step", "count"});
    const double start = get_number(j, path, "start"), step = get_number(j, path, "step");
    const std::size_t count = get_count(j, path, "count");
    return with_field(path, [&] { return Grid(start, step, count); });
}

SignalFile signal_file_from_json(const json& j) {
    constexpr std::string_view p = "signal";
    require_object(j, p, {"t0", "dt", "re", "im", "params", "source_grid"});
    const double t0 = get_number(j, p, "t0"), dt = get_number(j, p, "dt");
    std::vector<cplx> samples = complex_samples(j, p);
    const std::size_t n = samples.size();
    SampledSignal s = with_field(p, [&] { return SampledSignal(Grid(t0, dt, n), std::move(samples)); });
    SignalFile file{std::move(s), std::nullopt, std::nullopt};
    if (j.contains("params")) file.params = params_from_json(j.at("params"));
    if (j.contains("source_grid")) file.source_grid = grid_from_json(j.at("source_grid"), "source_grid");
    return file;
}

SampledSignal signal_from_json(const json& j) { return signal_file_from_json(j).signal; }

json to_json(const SignalFile& file) {
    json j = to_json(file.signal);
    if (file.params) j["params"] = to_json(*file.params);
    if (file.source_grid) j["source_grid"] = to_json(*file.source_grid);
    return j;
}

TimeFreqMap tfmap_from_json(const json& j) {
    constexpr std::string_view p = "tfmap";
    require_object(j, p, {"params", "u_grid", "w_grid", "re", "im"});
    if (!j.contains("params")) throw InputError("field 'params': missing");
    if (!j.contains("u_grid")) throw InputError("field 'u_grid': missing");
    if (!j.contains("w_grid")) throw InputError("field 'w_grid': missing");
    const OlctParams A = params_from_json(j.at("params"));
    const Grid ug = grid_from_json(j.at("u_grid"), "u_grid");
    const Grid wg = grid_from_json(j.at("w_grid"), "w_grid");
    const auto read_rows = [&](const char* key) {
        std::vector<double> out(ug.count() * wg.count());
        if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != ug.count())
            throw InputError(std::string("field '") + key + "': expected u_grid.count rows");
        for (std::size_t m = 0; m < ug.count(); ++m) {
            const json& row = j.at(key)[m];
            const std::string path = std::string(key) + "[" + std::to_string(m) + "]";
            if (!row.is_array() || row.size() != wg.count())
                throw InputError("field '" + path + "': expected w_grid.count values");
            for (std::size_t w = 0; w < wg.count(); ++w) {
                if (!row[w].is_number()) throw InputError("field '" + path + "': expected numbers");
                out[w * ug.count() + m] = row[w].get<double>();
            }
        }
        return out;
    };
    const std::vector<double> re = read_rows("re"), im = read_rows("im");
    std::vector<cplx> values(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) values[i] = cplx(re[i], im[i]);
    return TimeFreqMap(ug, wg, A, std::move(values));
}

siggen::SignalKind signal_kind_from_json(const json& j, std::string_view path) {
    using namespace siggen;
    if (!j.is_object()) throw InputError("field '" + std::string(path) + "': expected an object");
    const auto it = j.find("kind");
    if (it == j.end() || !it->is_string()) throw InputError("field '" + join(path, "kind") + "': expected a string");
    const std::string kind = it->get<std::string>();
    SignalKind out;
    if (kind == "gaussian") {
        require_object(j, path, {"kind", "sigma", "center"});
        out.value = Gaussian{get_number(j, path, "sigma"), get_number(j, path, "center", 0.0)};
    } else if (kind == "chirped_gaussian") {
        require_object(j, path, {"kind", "sigma", "center", "chirp_rate"});
        out.value = ChirpedGaussian{get_number(j, path, "sigma"), get_number(j, path, "center", 0.0),
                                    get_number(j, path, "chirp_rate")};
    } else if (kind == "rectangle") {
        require_object(j, path, {"kind", "half_width", "center"});
        out.value = Rectangle{get_number(j, path, "half_width"), get_number(j, path, "center", 0.0)};
    } else if (kind == "hermite") {
        require_object(j, path, {"kind", "order", "scale"});
        const auto order = j.find("order");
        if (order == j.end() || !order->is_number_integer())
            throw InputError("field '" + join(path, "order") + "': expected an integer");
        out.value = Hermite{order->get<int>(), get_number(j, path, "scale", 1.0)};
    } else if (kind == "modulated") {
        require_object(j, path, {"kind", "base", "freq"});
        if (!j.contains("base")) throw InputError("field '" + join(path, "base") + "': missing");
        auto base = std::make_shared<const SignalKind>(signal_kind_from_json(j.at("base"), join(path, "base")));
        out.value = Modulated{std::move(base), get_number(j, path, "freq")};
    } else if (kind == "noise") {
        require_object(j, path, {"kind", "seed", "bandwidth"});
        const auto seed = j.find("seed");
        if (seed == j.end() || !seed->is_number_unsigned())
            throw InputError("field '" + join(path, "seed") + "': expected a non-negative integer");
        out.value = Noise{seed->get<std::uint64_t>(), get_number(j, path, "bandwidth")};
    } else {
        throw InputError("field '" + join(path, "kind") + "': unknown signal kind '" + kind + "'");
    }
    with_field(path, [&] {
        validate(out);
        return 0;
    });
    return out;
}

siggen::SignalSpec signal_spec_from_json(const json& j) {
    require_object(j, "", {"kind", "grid", "normalize"});
    if (!j.contains("kind")) throw InputError("field 'kind': missing");
    if (!j.contains("grid")) throw InputError("field 'grid': missing");
    bool normalize = false;
    if (j.contains("normalize")) {
        if (!j.at("normalize").is_boolean()) throw InputError("field 'normalize': expected a boolean");
        normalize = j.at("normalize").get<bool>();
    }
    return siggen::SignalSpec{signal_kind_from_json(j.at("kind")), grid_from_json(j.at("grid")), normalize};
}

OlctParams parse_params_csv(std::string_view text) {
    const auto v = split_numbers(text, "--params");
    if (v.size() != 4 && v.size() != 6)
        throw InputError("--params: expected a,b,c,d or a,b,c,d,u0,w0 (got " + std::to_string(v.size()) + " values)");
    try {
        return v.size() == 4 ? OlctParams(v[0], v[1], v[2], v[3]) : OlctParams(v[0], v[1], v[2], v[3], v[4], v[5]);
    } catch (const InputError& e) {
        throw InputError(std::string("--params: ") + e.what());
    }
}

Grid parse_grid_csv(std::string_view text) {
    const auto v = split_numbers(text, "grid");
    if (v.size() != 3 || v[2] < 0 || v[2] != std::floor(v[2]))
        throw InputError("grid: expected start,step,count with an integer count");
    return Grid(v[0], v[1], static_cast<std::size_t>(v[2]));
}

std::string signal_id(const SampledSignal& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto feed = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    const double head[2] = {s.grid().start(), s.step()};
    feed(head, sizeof head);
    const std::uint64_t n = s.size();
    feed(&n, sizeof n);
    feed(s.samples().data(), s.size() * sizeof(cplx));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string tsv_magnitude(const TimeFreqMap& V) {
    std::string out = "u\tw\tabs_V\n";
    for (std::size_t j = 0; j < V.nw(); ++j) {
        const std::string w = number(V.w_grid().point(j));
        for (std::size_t m = 0; m < V.nu(); ++m) {
            out += number(V.u_grid().point(m));
            out += '\t';
            out += w;
            out += '\t';
            out += number(std::abs(V.at(m, j)));
            out += '\n';
        }
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::pair<std::string, double> parse_tolerance(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw InputError("--tol: expected name=value, got '" + std::string(text) + "'");
    const std::string name(text.substr(0, eq));
    const auto v = split_numbers(text.substr(eq + 1), "--tol");
    if (v.size() != 1) throw InputError("--tol: expected a single value for '" + name + "'");
    return {name, v[0]};
}

std::optional<double> default_tol_from_env() {
    const char* raw = std::getenv(kTolEnvVar);
    if (!raw || !*raw) return std::nullopt;
    const auto v = split_numbers(raw, kTolEnvVar);
    if (v.size() != 1) throw InputError(std::string(kTolEnvVar) + ": expected one number");
    return checked_tolerance(v[0], kTolEnvVar);
}

lab::SuiteConfig RunConfig::to_suite_config() const {
    lab::SuiteConfig cfg;
    if (!suite.empty()) {
        cfg.checks.clear();
        std::set<lab::Check> seen;
        for (const auto& name : suite) {
            const lab::Check c = lab::parse_check(name);
            if (seen.insert(c).second) cfg.checks.push_back(c);
        }
    }
    cfg.default_slack = checked_tolerance(default_tol, "default tolerance");
    for (const auto& [name, v] : tolerances) cfg.slack[lab::parse_check(name)] = checked_tolerance(v, "--tol " + name);
    if (!(lieb_p >= 2.0) || !std::isfinite(lieb_p)) throw InputError("--lieb-p must be finite and >= 2");
    if (!(floor > 0.0) || floor >= 1.0) throw InputError("--floor must lie in (0, 1)");
    if (threads == 0) throw InputError("--threads must be >= 1");
    cfg.lieb_p = lieb_p;
    cfg.floor = floor;
    cfg.method = method;
    cfg.u_grid = u_grid;
    cfg.w_grid = w_grid;
    cfg.threads = threads;
    return cfg;
}

json report_to_json(const lab::UncertaintyReport& report, const RunConfig& config, const SampledSignal& f,
                    const SampledSignal& phi, std::optional<std::string> timestamp) {
    const lab::SuiteConfig sc = config.to_suite_config();
    json checks = json::array();
    for (lab::Check c : sc.checks) checks.push_back(std::string(lab::to_string(c)));
    json tolerances = json::object();
    for (lab::Check c : sc.checks) tolerances[std::string(lab::to_string(c))] = sc.slack_for(c);

    json header;
    header["suite_version"] = std::string(kSuiteVersion);
    header["params"] = to_json(report.params);
    header["signal_id"] = signal_id(f);
    header["window_id"] = signal_id(phi);
    header["grid"] = to_json(report.t_grid);
    header["window_grid"] = to_json(phi.grid());
    header["u_grid"] = to_json(report.u_grid);
    header["w_grid"] = to_json(report.w_grid);
    header["config"] = json{{"method", std::string(to_string(sc.method))},
                            {"suite", checks},
                            {"default_tol", sc.default_slack},
                            {"tolerances", tolerances},
                            {"lieb_p", sc.lieb_p},
                            {"floor", sc.floor},
                            {"u_grid_override", config.u_grid.has_value()},
                            {"w_grid_override", config.w_grid.has_value()}};
    if (timestamp) header["timestamp"] = *timestamp;

    json identities = json::object();
    for (const auto& [k, v] : report.identities) identities[k] = v;
    json results = json::array();
    for (const auto& o : report.outcomes) results.push_back(result_to_json(o));
    return json{{"header", header},
                {"identities", identities},
                {"results", results},
                {"all_proven_hold", report.all_proven_hold()}};
}

}  // namespace wolct::io
