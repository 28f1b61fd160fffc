#pragma once

#include <iosfwd>
#include <optional>

#include "json.hpp"
#include "spincorr/oracle.hpp"
#include "spincorr/sampling.hpp"

namespace spincorr {

inline constexpr const char* kToolName = "spincorr";
inline constexpr const char* kToolVersion = "1.0.0";

struct T2Grid {
    double start = 0.0;
    double stop = 3.0;
    double step = 0.05;

    // "start:stop:step"
    static T2Grid parse(const std::string& text);
    std::string str() const;
    std::vector<double> points() const;
};

struct RunConfig {
    std::string command = "exact";  // exact | protocol | sample | diagnose
    std::string recipe;             // set when built from a recipe name
    HalfInt l = HalfInt::whole(8);
    std::string state = "uniform";
    CouplingKind coupling = CouplingKind::Heisenberg;
    double t1 = 0.0;
    T2Grid t2_grid;
    std::vector<double> lambda_l;  // dimensionless products lambda*l
    long ns = 1000;
    int repeats = 100;
    uint64_t seed = 12345;
    ExtractionMethod method = ExtractionMethod::TwoPointLambda;
    bool refined = true;
    int site = 0;                        // diagnose
    std::string hamiltonian_file;        // optional custom system Hamiltonian
    std::optional<CMat> custom_h;        // loaded/embedded custom matrix
    std::vector<std::string> pinned;     // recipe-pinned parameters the figures leave unstated
    std::string out;                     // data file path; empty = stdout
    std::string format = "csv";          // csv | json

    std::vector<double> lambda_l_or_default() const;
    void validate() const;
};

struct RunResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> metrics;  // diagnose extras
    nlohmann::json manifest;
};

// Per-repeat sampled correlator maps and the extraction statistics derived
// from them, for one (t1, t2) point.
struct SampledExtraction {
    std::map<double, double> script_c_exact;              // lambda -> exact correlator
    std::map<double, double> script_c_mean;               // lambda -> sample mean
    std::map<double, double> script_c_std;                // lambda -> sample std
    std::vector<double> re_per_repeat, im_per_repeat;
    double re_mean = 0.0, re_std = 0.0;
    double im_mean = 0.0, im_std = 0.0;
};

// Samples every lambda with independent derived streams and extracts
// (Re C, Im C) once per repeat. stream_tag decorrelates grid points.
SampledExtraction sampled_extraction(const Operator& h, const StateVector& psi, HalfInt l,
                                     CouplingKind coupling, double t1, double t2,
                                     const std::vector<double>& lambda_l, ExtractionMethod method, bool refined,
                                     const SampleConfig& sample_cfg, uint64_t stream_tag);

RunResult run_exact(const RunConfig& cfg);
RunResult run_protocol_sweep(const RunConfig& cfg);
RunResult run_sample_sweep(const RunConfig& cfg);
RunResult run_diagnose(const RunConfig& cfg);
RunResult run_command(const RunConfig& cfg);

// Built-in figure recipes: fig2-left, fig2-right, fig3, fig4-left,
// fig4-right. Unstated parameters are pinned and listed in the manifest.
RunConfig recipe_config(const std::string& name);
std::vector<std::string> recipe_names();

nlohmann::json manifest_for(const RunConfig& cfg);
RunConfig config_from_manifest(const nlohmann::json& manifest);

void write_csv(std::ostream& os, const RunResult& result);
void write_json(std::ostream& os, const RunResult& result);

// Writes the data file (or stdout when cfg.out is empty) and, for file
// output, a sidecar manifest listing the emitted paths. Returns the paths
// written.
std::vector<std::string> emit(const RunConfig& cfg, RunResult& result);

HalfInt parse_half_int(const std::string& text);
CMat load_hamiltonian_file(const std::string& path, int expected_dim);

}  // namespace spincorr
