#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spincorr/driver.hpp"
#include "spincorr/errors.hpp"
#include "spincorr/kernels.hpp"
#include "spincorr/model.hpp"

namespace {

using namespace spincorr;

// Raw option values shared by the exact/protocol/sample/diagnose subcommands.
// Defaults mirror RunConfig so the holders can be applied unconditionally.
struct Holders {
    std::string l_text = "8";
    std::string state = "uniform";
    std::string coupling = "heisenberg";
    double t1 = 0.0;
    std::string t2_grid = "0:3:0.05";
    std::vector<double> lambda_l;
    long ns = 1000;
    int repeats = 100;
    uint64_t seed = 12345;
    std::string method = "two-point";
    bool refined = true;
    int site = 0;
    std::string hamiltonian_file;
    std::string out;
    std::string format = "csv";
};

void add_output_options(CLI::App* sub, Holders& h) {
    sub->add_option("--out", h.out, "output data file (default: stdout)");
    sub->add_option("--format", h.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_physics_options(CLI::App* sub, Holders& h) {
    sub->add_option("--l", h.l_text, "spin length per site (e.g. 8, 1/2, 0.5)");
    sub->add_option("--state", h.state, "initial product state")->check(CLI::IsMember({"uniform", "maxmag", "ramp"}));
    sub->add_option("--t1", h.t1, "first probe time");
    sub->add_option("--t2-grid", h.t2_grid, "second probe times as start:stop:step");
    sub->add_option("--hamiltonian-file", h.hamiltonian_file,
                    "JSON file {dim, re, im} with a custom two-site Hamiltonian");
}

void add_protocol_options(CLI::App* sub, Holders& h) {
    sub->add_option("--coupling", h.coupling, "ancilla coupling: heisenberg | zz | xx");
    sub->add_option("--lambda-l", h.lambda_l, "dimensionless coupling strengths lambda*l (repeatable)")
        ->delimiter(',');
    sub->add_option("--method", h.method, "correlator extraction")->check(CLI::IsMember({"two-point", "fourier"}));
    sub->add_flag("--refined-l,!--no-refined-l", h.refined, "use l+1/2 in the extraction response (default on)");
}

void add_sampling_options(CLI::App* sub, Holders& h) {
    sub->add_option("--ns", h.ns, "measurement shots per estimate");
    sub->add_option("--repeats", h.repeats, "independent estimates for the error bars");
    sub->add_option("--seed", h.seed, "master RNG seed");
}

RunConfig config_from_holders(const std::string& command, const Holders& h) {
    RunConfig cfg;
    cfg.command = command;
    cfg.l = parse_half_int(h.l_text);
    cfg.state = h.state;
    cfg.coupling = coupling_by_name(h.coupling);
    cfg.t1 = h.t1;
    cfg.t2_grid = T2Grid::parse(h.t2_grid);
    cfg.lambda_l = h.lambda_l;
    cfg.ns = h.ns;
    cfg.repeats = h.repeats;
    cfg.seed = h.seed;
    cfg.method = extraction_by_name(h.method);
    cfg.refined = h.refined;
    cfg.site = h.site;
    cfg.out = h.out;
    cfg.format = h.format;
    if (!h.hamiltonian_file.empty()) {
        cfg.hamiltonian_file = h.hamiltonian_file;
        const int dim = multiplet_dim(cfg.l) * multiplet_dim(cfg.l);
        cfg.custom_h = load_hamiltonian_file(h.hamiltonian_file, dim);
    }
    return cfg;
}

int execute(RunConfig cfg) {
    RunResult result = run_command(cfg);
    const auto paths = emit(cfg, result);
    if (!result.metrics.empty() && cfg.format == "csv") {
        // JSON embeds the metrics; for CSV print them beside the table,
        // on stderr when the table itself went to stdout.
        std::ostream& os = cfg.out.empty() ? std::cerr : std::cout;
        for (const auto& [name, value] : result.metrics) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", value);
            os << name << " = " << buf << '\n';
        }
    }
    for (const auto& path : paths) std::cerr << "wrote " << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-time spin correlators via an ancilla probe"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI file");

    Holders h;
    std::string backend = "omp";
    app.add_option("--backend", backend, "kernel backend: omp | serial")
        ->check(CLI::IsMember({"omp", "serial"}));

    CLI::App* exact = app.add_subcommand("exact", "exact two-time correlator C(t1,t2) on a t2 grid");
    add_physics_options(exact, h);
    add_output_options(exact, h);

    CLI::App* protocol = app.add_subcommand("protocol", "ancilla-protocol correlators and extracted C(t1,t2)");
    add_physics_options(protocol, h);
    add_protocol_options(protocol, h);
    add_output_options(protocol, h);

    CLI::App* sample = app.add_subcommand("sample", "finite-shot protocol estimates with error bars");
    add_physics_options(sample, h);
    add_protocol_options(sample, h);
    add_sampling_options(sample, h);
    add_output_options(sample, h);

    CLI::App* diagnose = app.add_subcommand("diagnose", "outcome-amplitude block norms and slow-variation metrics");
    add_physics_options(diagnose, h);
    diagnose->add_option("--site", h.site, "probed site")->check(CLI::Range(0, 1));
    add_output_options(diagnose, h);

    std::string recipe_name;
    CLI::App* recipe = app.add_subcommand("recipe", "run a built-in figure recipe");
    recipe->add_option("name", recipe_name, "one of: fig2-left, fig2-right, fig3, fig4-left, fig4-right")
        ->required();
    CLI::Option* recipe_out = recipe->add_option("--out", h.out, "output data file (default: <name>.csv)");
    CLI::Option* recipe_format =
        recipe->add_option("--format", h.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    CLI::Option* recipe_seed = recipe->add_option("--seed", h.seed, "master RNG seed override");

    std::string manifest_path;
    CLI::App* replay = app.add_subcommand("replay", "rerun a sweep from its sidecar manifest");
    replay->add_option("manifest", manifest_path, "path to a .manifest.json file")->required();
    CLI::Option* replay_out = replay->add_option("--out", h.out, "output data file override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        kernels::set_default_backend(backend == "serial" ? kernels::Backend::Serial : kernels::Backend::OpenMP);

        if (app.got_subcommand(recipe)) {
            RunConfig cfg = recipe_config(recipe_name);
            if (recipe_out->count()) cfg.out = h.out;
            if (recipe_format->count()) cfg.format = h.format;
            if (recipe_seed->count()) cfg.seed = h.seed;
            return execute(std::move(cfg));
        }
        if (app.got_subcommand(replay)) {
            std::ifstream in(manifest_path);
            if (!in) throw std::invalid_argument("cannot open manifest '" + manifest_path + "'");
            nlohmann::json manifest;
            try {
                in >> manifest;
            } catch (const std::exception& e) {
                throw std::invalid_argument("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
            }
            RunConfig cfg = config_from_manifest(manifest);
            if (replay_out->count()) cfg.out = h.out;
            return execute(std::move(cfg));
        }

        const std::pair<const char*, CLI::App*> plain[] = {
            {"exact", exact}, {"protocol", protocol}, {"sample", sample}, {"diagnose", diagnose}};
        for (const auto& [name, sub] : plain) {
            if (app.got_subcommand(sub)) return execute(config_from_holders(name, h));
        }
        throw std::invalid_argument("no subcommand given");
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
