#include "ramus_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "ramus/errors.hpp"

namespace ramus_cli {

namespace {

// Shortest decimal form that parses back to the same double, so manifests
// stay readable while still pinning values exactly.
std::string render_double(double v) {
    char buf[40];
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw usage_error(key + ": expected a number, got '" + v + "'");
    return out;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& v) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw usage_error(key + ": expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    const std::string u = upper(v);
    if (u == "TRUE" || u == "1" || u == "YES" || u == "ON") return true;
    if (u == "FALSE" || u == "0" || u == "NO" || u == "OFF") return false;
    throw usage_error(key + ": expected a boolean, got '" + v + "'");
}

ramus::Modality parse_modality(const std::string& key, const std::string& v) {
    const std::string u = upper(v);
    if (u == "EEG") return ramus::Modality::eeg;
    if (u == "MEG") return ramus::Modality::meg;
    if (u == "EMEG" || u == "E/MEG") return ramus::Modality::combined;
    throw usage_error(key + ": expected EEG, MEG, or E/MEG, got '" + v + "'");
}

ramus::HyperpriorFamily parse_family(const std::string& key, const std::string& v) {
    const std::string u = upper(v);
    if (u == "IG") return ramus::HyperpriorFamily::inverse_gamma;
    if (u == "G") return ramus::HyperpriorFamily::gamma;
    throw usage_error(key + ": expected IG or G, got '" + v + "'");
}

const char* modality_string(ramus::Modality m) {
    switch (m) {
        case ramus::Modality::eeg: return "EEG";
        case ramus::Modality::meg: return "MEG";
        case ramus::Modality::combined: return "E/MEG";
    }
    return "?";
}

struct Binding {
    const char* key;
    const char* flag;
    const char* help;
    bool preset_field;
    void (*apply)(RunConfig&, const std::string&);
    std::string (*render)(const RunConfig&);
};

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = {
        {"experiment.case", "--case", "preset case id (A..I), run-case only", false,
         [](RunConfig& c, const std::string& v) {
             if (v.size() != 1)
                 throw usage_error("experiment.case: expected a single letter, got '" + v + "'");
             try {
                 ramus::case_preset(v[0]);
             } catch (const ramus::parameter_error&) {
                 throw usage_error("experiment.case: unknown case id '" + v + "' (valid: A..I)");
             }
             c.case_id = v[0];
         },
         [](const RunConfig& c) {
             return c.case_id ? std::string(1, *c.case_id) : std::string("-");
         }},
        {"experiment.modality", "--modality", "EEG, MEG, or E/MEG", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.modality = parse_modality("experiment.modality", v);
         },
         [](const RunConfig& c) { return std::string(modality_string(c.custom.modality)); }},
        {"ramus.sparsity", "--sparsity", "resolution ratio s between levels", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.sparsity = parse_double("ramus.sparsity", v);
         },
         [](const RunConfig& c) { return render_double(c.custom.sparsity); }},
        {"ramus.decompositions", "--decompositions", "number of random decompositions D", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.decompositions = parse_integer<int>("ramus.decompositions", v);
         },
         [](const RunConfig& c) { return std::to_string(c.custom.decompositions); }},
        {"ramus.hyperprior", "--hyperprior", "IG or G", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.family = parse_family("ramus.hyperprior", v);
         },
         [](const RunConfig& c) {
             return std::string(c.custom.family == ramus::HyperpriorFamily::inverse_gamma ? "IG"
                                                                                          : "G");
         }},
        {"experiment.deep_amplitude", "--deep-amplitude", "deep dipole amplitude", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.deep_amplitude = parse_double("experiment.deep_amplitude", v);
         },
         [](const RunConfig& c) { return render_double(c.custom.deep_amplitude); }},
        {"experiment.superficial_amplitude", "--superficial-amplitude",
         "superficial dipole amplitude", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.superficial_amplitude =
                 parse_double("experiment.superficial_amplitude", v);
         },
         [](const RunConfig& c) { return render_double(c.custom.superficial_amplitude); }},
        {"experiment.noise_pct", "--noise", "noise std as % of max clean signal", true,
         [](RunConfig& c, const std::string& v) {
             c.custom.noise_pct = parse_double("experiment.noise_pct", v);
         },
         [](const RunConfig& c) { return render_double(c.custom.noise_pct); }},
        {"ramus.levels", "--levels", "resolution levels L", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.levels = parse_integer<int>("ramus.levels", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.levels); }},
        {"ramus.n_iter", "--n-iter", "IAS sweeps per level", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.n_iter = parse_integer<int>("ramus.n_iter", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.n_iter); }},
        {"ramus.theta0", "--theta0", "hyperprior scale parameter", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.theta0 = parse_double("ramus.theta0", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.theta0); }},
        {"ramus.beta", "--beta", "hyperprior shape parameter", false,
         [](RunConfig& c, const std::string& v) { c.setup.beta = parse_double("ramus.beta", v); },
         [](const RunConfig& c) { return render_double(c.setup.beta); }},
        {"experiment.realizations", "--realizations", "noise realization count", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.realizations = parse_integer<int>("experiment.realizations", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.realizations); }},
        {"experiment.seed", "--seed", "master RNG seed", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.master_seed = parse_integer<std::uint64_t>("experiment.seed", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.master_seed); }},
        {"run.threads", "--threads", "realization-level worker threads", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.threads = parse_integer<int>("run.threads", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.threads); }},
        {"output.dir", "--out", "output directory", false,
         [](RunConfig& c, const std::string& v) { c.out_dir = v; },
         [](const RunConfig& c) { return c.out_dir; }},
        {"forward.source_count", "--source-count", "source positions K", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.source_count = parse_integer<int>("forward.source_count", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.source_count); }},
        {"forward.source_radius_mm", "--source-radius", "source ball radius (mm)", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.source_radius_mm = parse_double("forward.source_radius_mm", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.source_radius_mm); }},
        {"forward.source_seed", "--source-seed", "source sampling seed", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.source_seed = parse_integer<std::uint64_t>("forward.source_seed", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.source_seed); }},
        {"forward.sensor_count", "--sensor-count", "electrodes per modality", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.sensor_count = parse_integer<int>("forward.sensor_count", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.sensor_count); }},
        {"forward.sensor_radius_mm", "--sensor-radius", "electrode shell radius (mm)", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.sensor_radius_mm = parse_double("forward.sensor_radius_mm", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.sensor_radius_mm); }},
        {"forward.meg_radius_factor", "--meg-radius-factor",
         "magnetometer radius / electrode radius", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.meg_radius_factor = parse_double("forward.meg_radius_factor", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.meg_radius_factor); }},
        {"forward.conductivity", "--conductivity", "conductor conductivity (S/m)", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.conductivity_s_per_m = parse_double("forward.conductivity", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.conductivity_s_per_m); }},
        {"forward.head_radius_mm", "--head-radius", "conductor radius (mm)", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.head_radius_mm = parse_double("forward.head_radius_mm", v);
         },
         [](const RunConfig& c) { return render_double(c.setup.head_radius_mm); }},
        {"forward.series_terms", "--series-terms", "potential series truncation order", false,
         [](RunConfig& c, const std::string& v) {
             c.setup.series_terms = parse_integer<int>("forward.series_terms", v);
         },
         [](const RunConfig& c) { return std::to_string(c.setup.series_terms); }},
        {"forward.leadfield_path", "--leadfield", "lead field file (override or target)", false,
         [](RunConfig& c, const std::string& v) { c.leadfield_path = v; },
         [](const RunConfig& c) { return c.leadfield_path; }},
        {"forward.binary", "--binary", "write the lead field in binary", false,
         [](RunConfig& c, const std::string& v) {
             c.binary_leadfield = parse_bool("forward.binary", v);
         },
         [](const RunConfig& c) { return std::string(c.binary_leadfield ? "true" : "false"); }},
    };
    return table;
}

const Binding& binding_for(const std::string& key) {
    for (const auto& b : bindings())
        if (key == b.key) return b;
    throw usage_error("unknown config key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw usage_error(path + ":" + std::to_string(lineno) + ": empty key");
        if (!entries.emplace(key, value).second)
            throw usage_error(path + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
    }
    return entries;
}

Command parse_command(const std::string& name) {
    if (name == "generate-leadfield") return Command::generate_leadfield;
    if (name == "run-case") return Command::run_case;
    if (name == "run-custom") return Command::run_custom;
    if (name == "inspect") return Command::inspect;
    throw usage_error("unknown command '" + name + "'\n" + usage_text());
}

} // namespace

std::string usage_text() {
    std::ostringstream out;
    out << "usage: ramus <command> [flags]\n"
        << "\n"
        << "commands:\n"
        << "  run-case            run a preset benchmark case (--case A..I)\n"
        << "  run-custom          run with explicitly chosen case fields\n"
        << "  generate-leadfield  build the forward model and write it to a file\n"
        << "  inspect             print the header and norms of a lead field file\n"
        << "\n"
        << "flags (also settable as key=value lines in a --config file; flags win):\n";
    for (const auto& b : bindings()) {
        char flag[40];
        std::snprintf(flag, sizeof(flag), "  %-26s", b.flag);
        out << flag << b.help << " [" << b.key << "]\n";
    }
    out << "  --config FILE             read flat key=value configuration\n"
        << "  --help                    print this text\n"
        << "\n"
        << "run outputs: metrics.csv, summary.json, manifest.txt, hist_<metric>_<roi>.dat\n"
        << "preset fields (--modality, --sparsity, --decompositions, --hyperprior,\n"
        << "--deep-amplitude, --superficial-amplitude, --noise) conflict with --case;\n"
        << "use run-custom to vary them.\n";
    return out.str();
}

RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) throw usage_error(usage_text());
    for (const auto& a : args)
        if (a == "--help" || a == "-h") throw help_requested{usage_text()};

    RunConfig cfg;
    cfg.command = parse_command(args[0]);
    if (cfg.command == Command::run_custom) cfg.custom.id = 'X';

    CLI::App app{"E/MEG source reconstruction pipeline", "ramus"};
    app.set_help_flag();

    std::map<std::string, std::string> staged;
    std::map<std::string, CLI::Option*> options;
    for (const auto& b : bindings()) {
        if (std::string(b.key) == "forward.binary") {
            options[b.key] = app.add_flag("--binary", b.help);
        } else {
            options[b.key] = app.add_option(b.flag, staged[b.key], b.help)
                                 ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    }
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value configuration file");
    std::string positional;
    app.add_option("path", positional, "lead field file path");

    std::vector<const char*> argv;
    argv.push_back("ramus");
    for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw usage_error(std::string(e.what()) + "\n" + usage_text());
    }

    // File values apply only where no flag was given; both count as explicit
    // for the manifest's default markers.
    if (!config_path.empty()) {
        for (const auto& [key, value] : read_config_file(config_path)) {
            const Binding& b = binding_for(key);
            if (options[b.key]->count() == 0) b.apply(cfg, value);
            cfg.explicit_keys.insert(key);
        }
    }
    for (const auto& b : bindings()) {
        if (options[b.key]->count() == 0) continue;
        if (std::string(b.key) == "forward.binary") {
            cfg.binary_leadfield = true;
        } else {
            b.apply(cfg, staged[b.key]);
        }
        cfg.explicit_keys.insert(b.key);
    }

    if (!positional.empty()) {
        if (cfg.command != Command::inspect && cfg.command != Command::generate_leadfield)
            throw usage_error("unexpected positional argument '" + positional + "'");
        if (cfg.is_explicit("forward.leadfield_path"))
            throw usage_error("lead field path given both as positional and --leadfield");
        cfg.leadfield_path = positional;
        cfg.explicit_keys.insert("forward.leadfield_path");
    }

    switch (cfg.command) {
        case Command::run_case: {
            if (!cfg.case_id) throw usage_error("run-case requires --case (A..I)");
            for (const auto& b : bindings())
                if (b.preset_field && cfg.is_explicit(b.key))
                    throw usage_error(std::string("preset fields are not overridable "
                                                  "individually (use run-custom): ") +
                                      b.flag);
            break;
        }
        case Command::run_custom:
            if (cfg.case_id)
                throw usage_error("--case belongs to run-case; run-custom takes explicit fields");
            break;
        case Command::generate_leadfield:
            if (cfg.case_id) throw usage_error("--case is not meaningful for generate-leadfield");
            if (cfg.leadfield_path.empty())
                throw usage_error("generate-leadfield requires an output path "
                                  "(positional or --leadfield)");
            break;
        case Command::inspect:
            if (cfg.case_id) throw usage_error("--case is not meaningful for inspect");
            if (cfg.leadfield_path.empty())
                throw usage_error("inspect requires a lead field path (positional or --leadfield)");
            break;
    }
    return cfg;
}

std::string manifest_text(const RunConfig& cfg, double wall_seconds) {
    std::ostringstream out;
    const char* command = "";
    switch (cfg.command) {
        case Command::generate_leadfield: command = "generate-leadfield"; break;
        case Command::run_case: command = "run-case"; break;
        case Command::run_custom: command = "run-custom"; break;
        case Command::inspect: command = "inspect"; break;
    }
    out << "command = " << command << "\n";
    for (const auto& b : bindings()) {
        out << b.key << " = " << b.render(cfg);
        if (!cfg.is_explicit(b.key)) out << " (default)";
        out << "\n";
    }
    out << "wall_seconds = " << render_double(wall_seconds) << "\n";
    return out.str();
}

} // namespace ramus_cli
