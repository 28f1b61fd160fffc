#include "spincorr/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "spincorr/model.hpp"

namespace spincorr {

namespace {

std::string fmt_g(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string lambda_tag(double lambda_l) { return "ll=" + fmt_g(lambda_l, 6); }

Operator build_system_h(const RunConfig& cfg) {
    const SiteLayout lay = SiteLayout::sites({cfg.l, cfg.l});
    if (cfg.custom_h) {
        if (!cfg.custom_h->is_square() || cfg.custom_h->rows != lay.total_dim())
            throw std::invalid_argument("custom Hamiltonian dimension does not match the two-site layout");
        return Operator(lay, *cfg.custom_h);
    }
    return heisenberg_two_spin_system(cfg.l);
}

double sample_std(const std::vector<double>& values, double mean) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double sample_mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

T2Grid T2Grid::parse(const std::string& text) {
    T2Grid grid;
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("t2 grid must be start:stop:step");
    try {
        grid.start = std::stod(text.substr(0, first));
        grid.stop = std::stod(text.substr(first + 1, second - first - 1));
        grid.step = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("t2 grid must be start:stop:step with numeric fields");
    }
    if (grid.step <= 0.0) throw std::invalid_argument("t2 grid step must be positive");
    if (grid.stop < grid.start) throw std::invalid_argument("t2 grid stop must not precede start");
    return grid;
}

std::string T2Grid::str() const { return fmt_g(start) + ":" + fmt_g(stop) + ":" + fmt_g(step); }

std::vector<double> T2Grid::points() const {
    const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    if (n > 1000000) throw std::invalid_argument("t2 grid has too many points");
    std::vector<double> pts;
    pts.reserve(static_cast<size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) pts.push_back(std::min(start + static_cast<double>(k) * step, stop));
    return pts;
}

HalfInt parse_half_int(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            if (text.substr(slash + 1) != "2") throw std::invalid_argument("");
            return HalfInt::from_twice(std::stoi(text.substr(0, slash)));
        }
        const double v = std::stod(text);
        const long twice = std::lround(2.0 * v);
        if (std::abs(2.0 * v - static_cast<double>(twice)) > 1e-9) throw std::invalid_argument("");
        return HalfInt::from_twice(static_cast<int>(twice));
    } catch (const std::exception&) {
        throw std::invalid_argument("'" + text + "' is not a half-integer (use e.g. 8, 0.5, or 17/2)");
    }
}

CMat load_hamiltonian_file(const std::string& path, int expected_dim) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open Hamiltonian file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("Hamiltonian file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("dim") || !j.contains("re"))
        throw std::invalid_argument("Hamiltonian file needs fields: dim, re (flat row-major), optional im");
    const int dim = j["dim"].get<int>();
    if (expected_dim > 0 && dim != expected_dim)
        throw std::invalid_argument("Hamiltonian file dimension " + std::to_string(dim) +
                                    " does not match the configured layout dimension " + std::to_string(expected_dim));
    const auto re = j["re"].get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = j["im"].get<std::vector<double>>();
    if (static_cast<int>(re.size()) != dim * dim || im.size() != re.size())
        throw std::invalid_argument("Hamiltonian file entry count does not match dim*dim");
    CMat h(dim, dim);
    for (size_t k = 0; k < re.size(); ++k) h.a[k] = cplx(re[k], im[k]);
    if (hermiticity_defect(h) > 1e-12 * std::max(max_abs(h), 1e-300))
        throw std::invalid_argument("Hamiltonian file matrix is not Hermitian");
    return h;
}

std::vector<double> RunConfig::lambda_l_or_default() const {
    if (!lambda_l.empty()) return lambda_l;
    return {M_PI / 2.0, M_PI};
}

void RunConfig::validate() const {
    static const std::set<std::string> commands{"exact", "protocol", "sample", "diagnose"};
    if (!commands.count(command)) throw std::invalid_argument("unknown command '" + command + "'");
    if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
    if (l.twice() < 1) throw std::invalid_argument("l must be at least 1/2");
    state_by_name(state, one_half);  // name check only
    if (site < 0 || site > 1) throw std::invalid_argument("site must be 0 or 1 for the two-site models");
    if (ns < 1) throw std::invalid_argument("ns must be at least 1");
    if (command == "sample" && repeats < 2) throw std::invalid_argument("sample needs at least 2 repeats");
    const auto lls = lambda_l_or_default();
    std::set<double> distinct(lls.begin(), lls.end());
    if (distinct.size() != lls.size()) throw std::invalid_argument("duplicate lambda-l values");
}

SampledExtraction sampled_extraction(const Operator& h, const StateVector& psi, HalfInt l, CouplingKind coupling,
                                     double t1, double t2, const std::vector<double>& lambda_l,
                                     ExtractionMethod method, bool refined, const SampleConfig& sample_cfg,
                                     uint64_t stream_tag) {
    sample_cfg.validate();
    SampledExtraction out;
    const int n_lambda = static_cast<int>(lambda_l.size());
    const int n_rep = sample_cfg.n_repeats;

    // repeat-major storage: c[r][lambda index]
    std::vector<std::vector<double>> per_repeat(static_cast<size_t>(n_rep),
                                                std::vector<double>(static_cast<size_t>(n_lambda), 0.0));

    for (int q = 0; q < n_lambda; ++q) {
        const double lambda = lambda_l[static_cast<size_t>(q)] / l.value();
        ProtocolConfig pc;
        pc.site_i = 0;
        pc.site_j = 1;
        pc.t1 = t1;
        pc.t2 = t2;
        pc.lambda = lambda;
        pc.coupling = coupling;
        pc.hamiltonian = h;
        pc.initial_state = psi;
        const OutcomeDistribution dist = run_protocol(pc);
        out.script_c_exact[lambda] = script_c_from_distribution(dist);

        const uint64_t stream = derive_stream_seed(sample_cfg.master_seed,
                                                   stream_tag * 1000003ull + static_cast<uint64_t>(q));
#pragma omp parallel for schedule(static)
        for (int r = 0; r < n_rep; ++r) {
            const uint64_t seed = derive_stream_seed(stream, static_cast<uint64_t>(r));
            per_repeat[static_cast<size_t>(r)][static_cast<size_t>(q)] =
                estimate_script_c(sample_outcomes(dist, sample_cfg.n_s, seed));
        }

        std::vector<double> column(static_cast<size_t>(n_rep));
        for (int r = 0; r < n_rep; ++r) column[static_cast<size_t>(r)] = per_repeat[static_cast<size_t>(r)][static_cast<size_t>(q)];
        const double mean = sample_mean(column);
        out.script_c_mean[lambda] = mean;
        out.script_c_std[lambda] = sample_std(column, mean);
    }

    out.re_per_repeat.resize(static_cast<size_t>(n_rep));
    out.im_per_repeat.resize(static_cast<size_t>(n_rep));
    for (int r = 0; r < n_rep; ++r) {
        std::map<double, double> values;
        for (int q = 0; q < n_lambda; ++q)
            values[lambda_l[static_cast<size_t>(q)] / l.value()] = per_repeat[static_cast<size_t>(r)][static_cast<size_t>(q)];
        const CorrelationEstimate est = extract_correlation(values, l, method, refined);
        out.re_per_repeat[static_cast<size_t>(r)] = est.re_c;
        out.im_per_repeat[static_cast<size_t>(r)] = est.im_c;
    }
    out.re_mean = sample_mean(out.re_per_repeat);
    out.re_std = sample_std(out.re_per_repeat, out.re_mean);
    out.im_mean = sample_mean(out.im_per_repeat);
    out.im_std = sample_std(out.im_per_repeat, out.im_mean);
    return out;
}

RunResult run_exact(const RunConfig& cfg) {
    const Operator h = build_system_h(cfg);
    const StateVector psi = state_by_name(cfg.state, cfg.l);
    RunResult result;
    result.columns = {"t2", "re_c", "im_c"};
    for (double t2 : cfg.t2_grid.points()) {
        const cplx c = exact_two_time(psi, h, 0, 1, cfg.t1, t2);
        result.rows.push_back({t2, std::real(c), std::imag(c)});
    }
    result.manifest = manifest_for(cfg);
    return result;
}

RunResult run_protocol_sweep(const RunConfig& cfg) {
    const Operator h = build_system_h(cfg);
    const StateVector psi = state_by_name(cfg.state, cfg.l);
    const auto lambda_l = cfg.lambda_l_or_default();

    RunResult result;
    result.columns = {"t2"};
    for (double ll : lambda_l) result.columns.push_back("script_c_" + lambda_tag(ll));
    result.columns.push_back("re_c");
    result.columns.push_back("im_c");

    for (double t2 : cfg.t2_grid.points()) {
        std::vector<double> row{t2};
        std::map<double, double> values;
        for (double ll : lambda_l) {
            const double lambda = ll / cfg.l.value();
            ProtocolConfig pc;
            pc.site_i = 0;
            pc.site_j = 1;
            pc.t1 = cfg.t1;
            pc.t2 = t2;
            pc.lambda = lambda;
            pc.coupling = cfg.coupling;
            pc.hamiltonian = h;
            pc.initial_state = psi;
            const double c = script_c_from_distribution(run_protocol(pc));
            values[lambda] = c;
            row.push_back(c);
        }
        const CorrelationEstimate est = extract_correlation(values, cfg.l, cfg.method, cfg.refined);
        row.push_back(est.re_c);
        row.push_back(est.im_c);
        result.rows.push_back(std::move(row));
    }
    result.manifest = manifest_for(cfg);
    return result;
}

RunResult run_sample_sweep(const RunConfig& cfg) {
    const Operator h = build_system_h(cfg);
    const StateVector psi = state_by_name(cfg.state, cfg.l);
    const auto lambda_l = cfg.lambda_l_or_default();

    RunResult result;
    result.columns = {"t2"};
    for (double ll : lambda_l) {
        result.columns.push_back("script_c_mean_" + lambda_tag(ll));
        result.columns.push_back("script_c_std_" + lambda_tag(ll));
    }
    for (const char* name : {"re_c_mean", "re_c_std", "im_c_mean", "im_c_std", "re_c_est", "im_c_est", "re_c_exact",
                             "im_c_exact"})
        result.columns.push_back(name);

    SampleConfig sample_cfg;
    sample_cfg.n_s = cfg.ns;
    sample_cfg.n_repeats = cfg.repeats;
    sample_cfg.master_seed = cfg.seed;

    const auto points = cfg.t2_grid.points();
    for (size_t g = 0; g < points.size(); ++g) {
        const double t2 = points[g];
        const SampledExtraction se = sampled_extraction(h, psi, cfg.l, cfg.coupling, cfg.t1, t2, lambda_l, cfg.method,
                                                        cfg.refined, sample_cfg, static_cast<uint64_t>(g));
        std::vector<double> row{t2};
        for (double ll : lambda_l) {
            const double lambda = ll / cfg.l.value();
            row.push_back(se.script_c_mean.at(lambda));
            row.push_back(se.script_c_std.at(lambda));
        }
        row.push_back(se.re_mean);
        row.push_back(se.re_std);
        row.push_back(se.im_mean);
        row.push_back(se.im_std);
        const CorrelationEstimate est = extract_correlation(se.script_c_exact, cfg.l, cfg.method, cfg.refined);
        row.push_back(est.re_c);
        row.push_back(est.im_c);
        const cplx c_exact = exact_two_time(psi, h, 0, 1, cfg.t1, t2);
        row.push_back(std::real(c_exact));
        row.push_back(std::imag(c_exact));
        result.rows.push_back(std::move(row));
    }
    result.manifest = manifest_for(cfg);
    return result;
}

RunResult run_diagnose(const RunConfig& cfg) {
    const StateVector psi = with_ancilla(state_by_name(cfg.state, cfg.l));
    const GammaTable g = gamma_coefficients(psi, cfg.site);

    RunResult result;
    result.columns = {"m", "gamma_plus_norm", "gamma_minus_norm"};
    for (size_t k = 0; k < g.m_values.size(); ++k)
        result.rows.push_back({g.m_values[k].value(), norm(g.plus_blocks[k]), norm(g.minus_blocks[k])});

    const JPopulations pops = coupled_j_populations(psi, cfg.site);
    result.metrics = {
        {"slow_variation_full", slow_variation_metric(g, false)},
        {"slow_variation_interior", slow_variation_metric(g, true)},
        {"gamma_completeness", gamma_completeness(g)},
        {"j_population_upper", pops.p_upper},
        {"j_population_lower", pops.p_lower},
    };
    result.manifest = manifest_for(cfg);
    return result;
}

RunResult run_command(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.command == "exact") return run_exact(cfg);
    if (cfg.command == "protocol") return run_protocol_sweep(cfg);
    if (cfg.command == "sample") return run_sample_sweep(cfg);
    if (cfg.command == "diagnose") return run_diagnose(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

std::vector<std::string> recipe_names() { return {"fig2-left", "fig2-right", "fig3", "fig4-left", "fig4-right"}; }

RunConfig recipe_config(const std::string& name) {
    RunConfig cfg;
    cfg.recipe = name;
    cfg.t1 = 0.0;
    cfg.coupling = CouplingKind::Heisenberg;
    cfg.method = ExtractionMethod::TwoPointLambda;
    cfg.refined = true;
    cfg.lambda_l = {M_PI / 2.0, M_PI};
    cfg.seed = 12345;

    if (name == "fig2-left" || name == "fig2-right") {
        cfg.command = "protocol";
        cfg.l = HalfInt::whole(8);
        cfg.state = name == "fig2-left" ? "uniform" : "maxmag";
        cfg.t2_grid = {0.0, 3.0, 0.05};
        cfg.pinned = {"t2_grid", "lambda_l"};
    } else if (name == "fig3") {
        cfg.command = "protocol";
        cfg.l = HalfInt::whole(16);
        cfg.state = "ramp";
        cfg.t2_grid = {0.0, 3.0, 0.05};
        cfg.pinned = {"t2_grid", "lambda_l"};
    } else if (name == "fig4-left" || name == "fig4-right") {
        cfg.command = "sample";
        cfg.l = HalfInt::whole(4);
        cfg.state = "uniform";
        cfg.ns = name == "fig4-left" ? 100 : 1000;
        cfg.repeats = 100;
        cfg.t2_grid = {0.0, 3.0, 0.25};
        cfg.pinned = {"t2_grid", "lambda_l", "seed", "repeats"};
    } else {
        throw std::invalid_argument("unknown recipe '" + name + "' (try fig2-left, fig2-right, fig3, fig4-left, fig4-right)");
    }
    cfg.out = name + ".csv";
    return cfg;
}

nlohmann::json manifest_for(const RunConfig& cfg) {
    nlohmann::json config{
        {"command", cfg.command},
        {"l", cfg.l.str()},
        {"state", cfg.state},
        {"coupling", coupling_name(cfg.coupling)},
        {"t1", cfg.t1},
        {"t2_grid", cfg.t2_grid.str()},
        {"lambda_l", cfg.lambda_l_or_default()},
        {"ns", cfg.ns},
        {"repeats", cfg.repeats},
        {"seed", cfg.seed},
        {"method", extraction_name(cfg.method)},
        {"refined_l", cfg.refined},
        {"site", cfg.site},
        {"format", cfg.format},
    };
    if (!cfg.recipe.empty()) config["recipe"] = cfg.recipe;
    if (cfg.custom_h) {
        std::vector<double> re(cfg.custom_h->a.size()), im(cfg.custom_h->a.size());
        for (size_t k = 0; k < cfg.custom_h->a.size(); ++k) {
            re[k] = std::real(cfg.custom_h->a[k]);
            im[k] = std::imag(cfg.custom_h->a[k]);
        }
        config["custom_hamiltonian"] = {{"dim", cfg.custom_h->rows}, {"re", re}, {"im", im}};
    }

    return nlohmann::json{
        {"tool", kToolName},
        {"version", kToolVersion},
        {"config", config},
        {"pinned_defaults", cfg.pinned},
        {"conventions",
         {
             {"basis_order", "ascending m per site; ancilla slot last, index 0 = m_s=-1/2"},
             {"correlator", "sum_m m (P(m|+)P(+) - P(m|-)P(-)); ancilla outcomes weighted +-1, operator form 2*S^z"},
             {"exchange_constant", 1.0},
             {"rng", "SplitMix64; stream seeds mix64(master + (index+1)*0x9E3779B97F4A7C15)"},
             {"extraction_arguments", cfg.refined ? "l+1/2" : "l"},
             {"response_model", "scriptC(lambda) = sin^2(lambda L/2)/L * Re C - sin(lambda L)/L * Im C"},
         }},
    };
}

RunConfig config_from_manifest(const nlohmann::json& manifest) {
    if (!manifest.contains("config")) throw std::invalid_argument("manifest has no config object");
    const nlohmann::json& c = manifest["config"];
    RunConfig cfg;
    cfg.command = c.at("command").get<std::string>();
    cfg.l = parse_half_int(c.at("l").get<std::string>());
    cfg.state = c.at("state").get<std::string>();
    cfg.coupling = coupling_by_name(c.at("coupling").get<std::string>());
    cfg.t1 = c.at("t1").get<double>();
    cfg.t2_grid = T2Grid::parse(c.at("t2_grid").get<std::string>());
    cfg.lambda_l = c.at("lambda_l").get<std::vector<double>>();
    cfg.ns = c.at("ns").get<long>();
    cfg.repeats = c.at("repeats").get<int>();
    cfg.seed = c.at("seed").get<uint64_t>();
    cfg.method = extraction_by_name(c.at("method").get<std::string>());
    cfg.refined = c.at("refined_l").get<bool>();
    cfg.site = c.at("site").get<int>();
    cfg.format = c.at("format").get<std::string>();
    if (c.contains("recipe")) cfg.recipe = c["recipe"].get<std::string>();
    if (c.contains("custom_hamiltonian")) {
        const auto& ch = c["custom_hamiltonian"];
        const int dim = ch.at("dim").get<int>();
        const auto re = ch.at("re").get<std::vector<double>>();
        const auto im = ch.at("im").get<std::vector<double>>();
        if (static_cast<int>(re.size()) != dim * dim || im.size() != re.size())
            throw std::invalid_argument("manifest custom Hamiltonian entry count does not match dim*dim");
        CMat h(dim, dim);
        for (size_t k = 0; k < re.size(); ++k) h.a[k] = cplx(re[k], im[k]);
        cfg.custom_h = std::move(h);
    }
    if (manifest.contains("outputs") && manifest["outputs"].is_array() && !manifest["outputs"].empty())
        cfg.out = manifest["outputs"][0].get<std::string>();
    return cfg;
}

void write_csv(std::ostream& os, const RunResult& result) {
    for (size_t k = 0; k < result.columns.size(); ++k) {
        if (k) os << ',';
        os << csv_quote(result.columns[k]);
    }
    os << '\n';
    for (const auto& row : result.rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (k) os << ',';
            os << fmt_g(row[k]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const RunResult& result) {
    nlohmann::json j = result.manifest;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) rows.push_back(row);
    j["table"] = {{"columns", result.columns}, {"rows", rows}};
    if (!result.metrics.empty()) {
        nlohmann::json metrics;
        for (const auto& [name, value] : result.metrics) metrics[name] = value;
        j["metrics"] = metrics;
    }
    os << j.dump(2) << '\n';
}

std::vector<std::string> emit(const RunConfig& cfg, RunResult& result) {
    const auto write_data = [&](std::ostream& os) {
        if (cfg.format == "csv")
            write_csv(os, result);
        else
            write_json(os, result);
    };

    if (cfg.out.empty()) {
        write_data(std::cout);
        return {};
    }

    std::ofstream data(cfg.out);
    if (!data) throw std::invalid_argument("cannot write output file '" + cfg.out + "'");
    write_data(data);
    data.close();

    const std::string manifest_path = cfg.out + ".manifest.json";
    nlohmann::json manifest = result.manifest;
    manifest["outputs"] = {cfg.out};
    std::ofstream mf(manifest_path);
    if (!mf) throw std::invalid_argument("cannot write manifest file '" + manifest_path + "'");
    mf << manifest.dump(2) << '\n';
    return {cfg.out, manifest_path};
}

}  // namespace spincorr
