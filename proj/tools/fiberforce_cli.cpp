// Command-line front end: reads a JSON config (flags can override any field),
// dispatches to the library, and writes machine-readable tables. Output is
// deterministic: fixed column order, 17-significant-digit floats, and a
// header that echoes the fully resolved configuration.
//
// Exit codes: 0 success, 2 config validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fiberforce/chain.hpp"
#include "fiberforce/equilibria.hpp"
#include "fiberforce/force.hpp"
#include "fiberforce/io.hpp"
#include "fiberforce/paraxial.hpp"
#include "fiberforce/parallel.hpp"
#include "fiberforce/scatter.hpp"

using nlohmann::ordered_json;
using namespace fiberforce;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const ordered_json* find_path(const ordered_json& j, const std::string& dotted) {
    const ordered_json* cur = &j;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        if (dot == std::string::npos) return cur;
        start = dot + 1;
    }
    return nullptr;
}

void set_path(ordered_json& j, const std::string& dotted, ordered_json value) {
    ordered_json* cur = &j;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (dot == std::string::npos) {
            (*cur)[key] = std::move(value);
            return;
        }
        if (!cur->contains(key) || !(*cur)[key].is_object()) (*cur)[key] = ordered_json::object();
        cur = &(*cur)[key];
        start = dot + 1;
    }
}

/// User config plus a record of every value the run actually used.
class Config {
public:
    explicit Config(ordered_json data) : data_(std::move(data)) {}

    bool has(const std::string& path) const { return find_path(data_, path) != nullptr; }

    double number(const std::string& path, double fallback) {
        const ordered_json* v = find_path(data_, path);
        double out = fallback;
        if (v) {
            if (!v->is_number()) throw ConfigError("config field '" + path + "': expected a number");
            out = v->get<double>();
        }
        set_path(resolved_, path, out);
        return out;
    }

    long long integer(const std::string& path, long long fallback) {
        const ordered_json* v = find_path(data_, path);
        long long out = fallback;
        if (v) {
            if (!v->is_number_integer())
                throw ConfigError("config field '" + path + "': expected an integer");
            out = v->get<long long>();
        }
        set_path(resolved_, path, out);
        return out;
    }

    bool boolean(const std::string& path, bool fallback) {
        const ordered_json* v = find_path(data_, path);
        bool out = fallback;
        if (v) {
            if (!v->is_boolean())
                throw ConfigError("config field '" + path + "': expected true or false");
            out = v->get<bool>();
        }
        set_path(resolved_, path, out);
        return out;
    }

    std::string text(const std::string& path, const std::string& fallback) {
        const ordered_json* v = find_path(data_, path);
        std::string out = fallback;
        if (v) {
            if (!v->is_string()) throw ConfigError("config field '" + path + "': expected a string");
            out = v->get<std::string>();
        }
        set_path(resolved_, path, out);
        return out;
    }

    /// Complex amplitude given as [re, im] (or a bare number for a real one).
    cplx complex_value(const std::string& path, cplx fallback) {
        const ordered_json* v = find_path(data_, path);
        cplx out = fallback;
        if (v) {
            if (v->is_number()) {
                out = cplx(v->get<double>(), 0.0);
            } else if (v->is_array() && v->size() == 2 && (*v)[0].is_number() &&
                       (*v)[1].is_number()) {
                out = cplx((*v)[0].get<double>(), (*v)[1].get<double>());
            } else {
                throw ConfigError("config field '" + path + "': expected [re, im]");
            }
        }
        set_path(resolved_, path, ordered_json::array({out.real(), out.imag()}));
        return out;
    }

    /// Scalar-or-array numeric field.
    std::vector<double> number_list(const std::string& path, std::vector<double> fallback) {
        const ordered_json* v = find_path(data_, path);
        std::vector<double> out = std::move(fallback);
        if (v) {
            out.clear();
            if (v->is_number()) {
                out.push_back(v->get<double>());
            } else if (v->is_array()) {
                for (const auto& e : *v) {
                    if (!e.is_number())
                        throw ConfigError("config field '" + path + "': expected numbers");
                    out.push_back(e.get<double>());
                }
            } else {
                throw ConfigError("config field '" + path + "': expected a number or array");
            }
        }
        if (out.empty()) throw ConfigError("config field '" + path + "': must not be empty");
        set_path(resolved_, path, ordered_json(out));
        return out;
    }

    const ordered_json& resolved() const { return resolved_; }

private:
    ordered_json data_;
    ordered_json resolved_;
};

ModePair modes_from(Config& cfg, double k2) {
    const double k1 = cfg.number("modes.k1", 1.0);
    const double nm = cfg.number("modes.n_medium", 1.0);
    try {
        return ModePair(k1, k2, nm);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config field 'modes': ") + e.what());
    }
}

ModePair modes_from(Config& cfg) { return modes_from(cfg, cfg.number("modes.k2", 0.9)); }

Injection injection_from(Config& cfg) {
    Injection inj;
    inj.A1 = cfg.complex_value("injection.A1", {0.0, 0.0});
    inj.A2 = cfg.complex_value("injection.A2", {1.0, 0.0});
    inj.D1 = cfg.complex_value("injection.D1", {0.0, 0.0});
    inj.D2 = cfg.complex_value("injection.D2", {0.0, 0.0});
    try {
        inj.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config field 'injection': ") + e.what());
    }
    return inj;
}

/// Bead model: {"bead": {"t": 0.95, "phi": 0}} for the forward-only mixer,
/// {"bead": {"t12": ..., "r12": ..., "phi": ...}} for the backscattering one.
ScatterMatrix bead_from(Config& cfg) {
    try {
        if (cfg.has("bead.t")) {
            const double t = cfg.number("bead.t", 0.95);
            const double phi = cfg.number("bead.phi", 0.0);
            return build_two_port(t, phi);
        }
        const double t12 = cfg.number("bead.t12", 0.54);
        const double r12 = cfg.number("bead.r12", 0.12);
        const double phi = cfg.number("bead.phi", 0.0);
        return build_four_port({t12, r12, phi});
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config field 'bead': ") + e.what());
    }
}

DistanceRange range_from(Config& cfg, const ModePair& modes) {
    const DistanceRange def = default_distance_range(modes);
    DistanceRange r{cfg.number("distance.min", def.d_min), cfg.number("distance.max", def.d_max)};
    if (!(r.d_min > 0.0) || !(r.d_max > r.d_min))
        throw ConfigError("config field 'distance': requires 0 < min < max");
    return r;
}

std::vector<double> sweep_values(Config& cfg, const std::string& block, double def_min,
                                 double def_max, long long def_steps) {
    const double lo = cfg.number(block + ".min", def_min);
    const double hi = cfg.number(block + ".max", def_max);
    const long long steps = cfg.integer(block + ".steps", def_steps);
    if (steps < 2) throw ConfigError("config field '" + block + ".steps': need at least 2");
    if (!(hi > lo)) throw ConfigError("config field '" + block + "': requires min < max");
    return linspace(lo, hi, static_cast<std::size_t>(steps));
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

Table cmd_force_single(Config& cfg, unsigned /*threads*/) {
    const std::string param = cfg.text("sweep.param", "t");
    const std::vector<double> k2_list = cfg.number_list("modes.k2", {0.9});
    const Injection inj = injection_from(cfg);

    std::vector<ModePair> modes;
    for (double k2 : k2_list) modes.push_back(modes_from(cfg, k2));

    const auto label = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    Table table;
    table.columns = {param};
    for (double k2 : k2_list)
        table.columns.push_back(k2_list.size() == 1 ? "force" : "force_k2_" + label(k2));

    auto force_of = [&](const ScatterMatrix& bead, const ModePair& m) {
        const ChainConfig chain{{bead}, {}, m};
        return chain_forces(solve_chain(chain, inj), m, inj).per_bead[0];
    };

    if (param == "t") {
        const double phi = cfg.number("bead.phi", 0.0);
        for (double t : sweep_values(cfg, "sweep", 0.0, 1.0, 201)) {
            std::vector<double> row{t};
            ScatterMatrix bead;
            try {
                bead = build_two_port(t, phi);
            } catch (const std::domain_error& e) {
                throw ConfigError(std::string("config field 'sweep': ") + e.what());
            }
            for (const ModePair& m : modes) row.push_back(force_of(bead, m));
            table.add_row(std::move(row));
        }
    } else if (param == "r12") {
        const double t12 = cfg.number("bead.t12", 0.8);
        const double phi = cfg.number("bead.phi", 0.0);
        const double r12_cap = std::sqrt(std::max(0.0, 1.0 - t12 * t12));
        for (double r12 : sweep_values(cfg, "sweep", 0.0, std::min(0.3, r12_cap), 201)) {
            std::vector<double> row{r12};
            ScatterMatrix bead;
            try {
                bead = build_four_port({t12, r12, phi});
            } catch (const std::domain_error& e) {
                throw ConfigError(std::string("config field 'sweep': ") + e.what());
            }
            for (const ModePair& m : modes) row.push_back(force_of(bead, m));
            table.add_row(std::move(row));
        }
    } else {
        throw ConfigError("config field 'sweep.param': expected \"t\" or \"r12\"");
    }
    return table;
}

Table cmd_force_chain(Config& cfg, unsigned threads) {
    const long long n_beads = cfg.integer("chain.n_beads", 2);
    if (n_beads < 2) throw ConfigError("config field 'chain.n_beads': need at least 2");
    const ModePair modes = modes_from(cfg);
    const Injection inj = injection_from(cfg);
    const ScatterMatrix bead = bead_from(cfg);
    const DistanceRange range = range_from(cfg, modes);
    long long steps = cfg.integer("distance.steps", 0);
    if (steps == 0) steps = static_cast<long long>(default_samples(modes, range));
    if (steps < 2) throw ConfigError("config field 'distance.steps': need at least 2");

    Table table;
    table.columns = {"d"};
    for (long long j = 1; j <= n_beads; ++j) table.columns.push_back("F" + std::to_string(j));
    table.columns.push_back("force_sum");
    table.columns.push_back("flux_balance");

    const std::vector<double> ds = linspace(range.d_min, range.d_max,
                                            static_cast<std::size_t>(steps));
    std::vector<std::vector<double>> rows(ds.size());
    const std::vector<ScatterMatrix> beads(static_cast<std::size_t>(n_beads), bead);
    parallel_for(ds.size(), threads, [&](std::size_t i) {
        std::vector<double> gaps(static_cast<std::size_t>(n_beads) - 1, ds[i]);
        const ChainConfig chain{beads, gaps, modes};
        const ForceResult fr = chain_forces(solve_chain(chain, inj), modes, inj);
        std::vector<double> row{ds[i]};
        double sum = 0.0;
        for (double f : fr.per_bead) {
            row.push_back(f);
            sum += f;
        }
        row.push_back(sum);
        row.push_back(fr.total_flux_balance);
        rows[i] = std::move(row);
    });
    table.rows = std::move(rows);
    return table;
}

Table cmd_equilibria(Config& cfg, unsigned /*threads*/) {
    const ModePair modes = modes_from(cfg);
    const Injection inj = injection_from(cfg);
    const ScatterMatrix bead = bead_from(cfg);
    const DistanceRange range = range_from(cfg, modes);
    EquilibriumSearchOptions opt;
    opt.samples = static_cast<std::size_t>(cfg.integer("search.samples", 0));

    const ChainConfig chain{{bead, bead}, {0.0}, modes};
    Table table;
    table.columns = {"d_star", "F_common", "stable", "dF1_dd", "dF2_dd"};
    for (const auto& eq : find_equilibria(chain, inj, range, opt))
        table.add_row({eq.d_star, eq.F_common, eq.stable ? 1.0 : 0.0, eq.dF1_dd, eq.dF2_dd});
    return table;
}

Table cmd_binding_curve(Config& cfg, unsigned threads) {
    const ModePair modes = modes_from(cfg);
    const Injection inj = injection_from(cfg);
    const DistanceRange range = range_from(cfg, modes);
    const std::vector<double> ts = sweep_values(cfg, "sweep", 0.5, 0.995, 100);

    std::vector<std::vector<BindingPoint>> buckets(ts.size());
    parallel_for(ts.size(), threads, [&](std::size_t i) {
        buckets[i] = binding_distance_curve({ts[i]}, modes, inj, range);
    });

    Table table;
    table.columns = {"t", "d_star", "F_common"};
    for (const auto& bucket : buckets)
        for (const auto& p : bucket) table.add_row({p.t, p.d_star, p.F_common});
    return table;
}

Table cmd_stability_map(Config& cfg, unsigned threads) {
    const ModePair modes = modes_from(cfg);
    const Injection inj = injection_from(cfg);
    const DistanceRange range = range_from(cfg, modes);
    GridSpec grid;
    grid.t12_min = cfg.number("grid.t12.min", 0.0);
    grid.t12_max = cfg.number("grid.t12.max", 1.0);
    grid.n_t12 = static_cast<std::size_t>(cfg.integer("grid.t12.n", 100));
    grid.r12_min = cfg.number("grid.r12.min", 0.0);
    grid.r12_max = cfg.number("grid.r12.max", 1.0);
    grid.n_r12 = static_cast<std::size_t>(cfg.integer("grid.r12.n", 100));
    if (grid.n_t12 < 2 || grid.n_r12 < 2)
        throw ConfigError("config field 'grid': need at least 2 points per axis");

    const StabilityMap map = scan_stability_region(grid, modes, inj, range, threads);

    Table table;
    table.columns = {"t12", "r12", "feasible", "has_stable", "min_stable_force",
                     "zero_crossing"};
    for (std::size_t i = 0; i < map.n_t12; ++i)
        for (std::size_t j = 0; j < map.n_r12; ++j) {
            const StabilityCell& cell = map.at(i, j);
            double crossing = 0.0;
            if (j + 1 < map.n_r12) {
                const StabilityCell& next = map.at(i, j + 1);
                if (cell.has_stable && next.has_stable &&
                    (cell.min_stable_force < 0.0) != (next.min_stable_force < 0.0))
                    crossing = 1.0;
            }
            table.add_row({cell.t12, cell.r12, cell.feasible ? 1.0 : 0.0,
                           cell.has_stable ? 1.0 : 0.0, cell.min_stable_force, crossing});
        }
    return table;
}

Table cmd_estimate_coupling(Config& cfg, unsigned threads) {
    WaveguideSpec guide;
    guide.a = cfg.number("guide.a", 9.0);
    guide.n0 = cfg.number("guide.n0", 1.0);
    const long long max_mx = cfg.integer("guide.max_mx", 7);
    if (max_mx < 3) throw ConfigError("config field 'guide.max_mx': need at least 3");
    for (int mx = 1; mx <= max_mx; ++mx) guide.mode_orders.push_back({mx, 1});
    const double index = cfg.number("bead.index", 1.5);
    const double center_x = cfg.number("bead.center_x", guide.a / 2.0);
    const double center_y = cfg.number("bead.center_y", guide.a / 2.0);

    ModeSet set;
    try {
        guide.validate();
        set = guided_modes(guide);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config field 'guide': ") + e.what());
    }

    if (cfg.boolean("profile.enabled", false)) {
        // transverse cut of the original, distorted, and Born-reflected mode
        const double diameter = cfg.number("bead.diameter", 2.0);
        const long long mx = cfg.integer("profile.mode_mx", 3);
        const long long my = cfg.integer("profile.mode_my", 1);
        const long long samples = cfg.integer("profile.samples", 512);
        if (samples < 2) throw ConfigError("config field 'profile.samples': need at least 2");
        const std::size_t mode = set.find(static_cast<int>(mx), static_cast<int>(my));
        if (mode == ModeSet::npos)
            throw ConfigError("config field 'profile.mode_mx': mode not guided/retained");
        BeadSpec bead{diameter / 2.0, index, center_x, center_y};
        try {
            bead.validate(guide);
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config field 'bead': ") + e.what());
        }

        Table table;
        table.columns = {"x", "u", "distorted_re", "distorted_im", "reflected_re",
                         "reflected_im"};
        const double beta = set.modes[mode].beta;
        const double q = 2.0 * beta;
        const double contrast = index * index - guide.n0 * guide.n0;
        const double y = guide.a / 2.0;
        for (long long i = 0; i < samples; ++i) {
            const double x = guide.a * static_cast<double>(i) / static_cast<double>(samples - 1);
            const double u = set.eval(mode, x, y);
            const cplx distorted = std::exp(iunit * accumulated_phase_at(bead, guide, x, y)) * u;
            const double half_chord = 0.5 * chord_length(bead, x, y);
            const cplx reflected = iunit * (guide.k0 / (4.0 * guide.n0)) * contrast *
                                   (2.0 * std::sin(q * half_chord) / q) * u;
            table.add_row({x, u, distorted.real(), distorted.imag(), reflected.real(),
                           reflected.imag()});
        }
        return table;
    }

    // diameter sweep of the coupling coefficients; the default range covers
    // the window where the 1<->3 conversion dominates (d ~ 3.4..6 at a = 9)
    const std::vector<double> diameters = sweep_values(cfg, "diameter", 0.2, 6.0, 59);
    const bool predict = cfg.boolean("predict_force", false);
    const bool renormalize = cfg.boolean("renormalize", false);
    const ModePair force_modes = predict ? modes_from(cfg) : ModePair(1.0, 0.9);

    std::vector<std::pair<int, int>> sym_pairs;
    std::vector<std::size_t> sym_idx;
    for (int mx : {1, 3, 5})
        if (set.find(mx, 1) != ModeSet::npos) sym_idx.push_back(set.find(mx, 1));

    Table table;
    table.columns = {"diameter"};
    for (std::size_t i = 0; i < sym_idx.size(); ++i)
        for (std::size_t j = i; j < sym_idx.size(); ++j)
            table.columns.push_back("t_" + std::to_string(set.modes[sym_idx[i]].mx) + "_" +
                                    std::to_string(set.modes[sym_idx[j]].mx));
    for (std::size_t i = 0; i < sym_idx.size(); ++i)
        for (std::size_t j = i; j < sym_idx.size(); ++j)
            table.columns.push_back("r_" + std::to_string(set.modes[sym_idx[i]].mx) + "_" +
                                    std::to_string(set.modes[sym_idx[j]].mx));
    table.columns.push_back("max_parasitic");  // fundamental's stray coupling + reflections
    table.columns.push_back("loss_fraction");
    if (predict) {
        for (const char* c : {"derived_t", "derived_t12", "derived_r12", "derived_phi",
                              "derived_loss", "force_single"})
            table.columns.push_back(c);
    }

    std::vector<std::vector<double>> rows(diameters.size());
    parallel_for(diameters.size(), threads, [&](std::size_t row_idx) {
        const double diameter = diameters[row_idx];
        BeadSpec bead{diameter / 2.0, index, center_x, center_y};
        bead.validate(guide);
        const CouplingEstimate est = estimate_coupling(bead, guide);

        std::vector<double> row{diameter};
        for (std::size_t i = 0; i < sym_idx.size(); ++i)
            for (std::size_t j = i; j < sym_idx.size(); ++j)
                row.push_back(std::abs(est.t(sym_idx[i], sym_idx[j])));
        for (std::size_t i = 0; i < sym_idx.size(); ++i)
            for (std::size_t j = i; j < sym_idx.size(); ++j)
                row.push_back(std::abs(est.r(sym_idx[i], sym_idx[j])));

        // largest parasitic channel of the fundamental over the symmetric
        // set: stray 1<->5 transmission and every reflection
        double parasitic = 0.0;
        if (sym_idx.size() >= 3) parasitic = std::abs(est.t(sym_idx[0], sym_idx[2]));
        for (std::size_t i : sym_idx)
            for (std::size_t j : sym_idx) parasitic = std::max(parasitic, std::abs(est.r(i, j)));
        row.push_back(parasitic);
        row.push_back(est.loss_fraction);

        if (predict) {
            try {
                const ScatterParamsReport rep = to_scatter_params(est, renormalize);
                const ChainConfig chain = uniform_chain(rep.params, 1, 0.0, force_modes);
                const Injection inj{0.0, 1.0, 0.0, 0.0};
                const double force =
                    chain_forces(solve_chain(chain, inj), force_modes, inj).per_bead[0];
                row.insert(row.end(), {rep.params.t(), rep.params.t12, rep.params.r12,
                                       rep.params.phi, rep.raw_loss_fraction, force});
            } catch (const std::domain_error&) {
                // two-mode reduction refused (loss too large): surfaced as NaNs
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.insert(row.end(), {nan, nan, nan, nan, nan, nan});
            }
        }
        rows[row_idx] = std::move(row);
    });
    table.rows = std::move(rows);
    return table;
}

// ---------------------------------------------------------------------------

void emit(std::ostream& os, const Table& table, const std::string& format,
          const std::string& command, const ordered_json& resolved) {
    if (format == "csv") {
        Table with_meta = table;
        with_meta.meta.insert(with_meta.meta.begin(),
                              {"fiberforce " + command, "config " + resolved.dump()});
        write_csv(os, with_meta);
    } else {
        ordered_json out;
        out["command"] = command;
        out["config"] = resolved;
        out["columns"] = table.columns;
        ordered_json rows = ordered_json::array();
        for (const auto& row : table.rows) rows.push_back(row);
        out["rows"] = std::move(rows);
        os << out.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optical forces on polarizable beads in a two-mode waveguide"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    unsigned threads = 0;
    std::vector<std::string> overrides;

    const std::vector<std::pair<std::string, Table (*)(Config&, unsigned)>> commands = {
        {"force-single", cmd_force_single},   {"force-chain", cmd_force_chain},
        {"equilibria", cmd_equilibria},       {"binding-curve", cmd_binding_curve},
        {"stability-map", cmd_stability_map}, {"estimate-coupling", cmd_estimate_coupling},
    };

    for (const auto& [name, fn] : commands) {
        (void)fn;
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", threads, "worker threads, 0 = all cores")
            ->envname("FT_THREADS");
        sub->add_option("--set", overrides, "override a config field, e.g. --set modes.k2=0.8");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ordered_json data = ordered_json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file: " + config_path);
            try {
                data = ordered_json::parse(in);
            } catch (const std::exception& e) {
                throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
            }
            if (!data.is_object()) throw ConfigError("config file must hold a JSON object");
        }
        for (const std::string& kv : overrides) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("--set expects key=value, got: " + kv);
            const std::string key = kv.substr(0, eq);
            const std::string raw = kv.substr(eq + 1);
            ordered_json value;
            try {
                value = ordered_json::parse(raw);
            } catch (const std::exception&) {
                value = raw;  // unquoted strings are taken literally
            }
            set_path(data, key, std::move(value));
        }

        Config cfg(std::move(data));
        const std::string command = app.get_subcommands().front()->get_name();
        Table table;
        for (const auto& [name, fn] : commands)
            if (name == command) table = fn(cfg, threads);

        if (out_path.empty()) {
            emit(std::cout, table, format, command, cfg.resolved());
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw ConfigError("cannot open output file: " + out_path);
            emit(out, table, format, command, cfg.resolved());
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
