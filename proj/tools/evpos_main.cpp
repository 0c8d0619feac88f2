// evpos: classify operators, run the seeded suites, print orbit decay.

#include "evpos/errors.hpp"
#include "evpos/model_io.hpp"
#include "evpos/report.hpp"
#include "evpos/suite.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

namespace {

using namespace evpos;

struct ModelSource {
    std::string path;
    std::string example;
    std::optional<std::size_t> size;
    std::string generate;
};

void add_model_options(CLI::App* cmd, ModelSource& src, bool allow_generate) {
    cmd->add_option("model", src.path, "model descriptor JSON file");
    cmd->add_option("--example", src.example, "built-in catalog entry");
    cmd->add_option("--size", src.size, "truncation size for catalog entries");
    if (allow_generate)
        cmd->add_option("--generate", src.generate,
                        "generator spec, e.g. eventually_positive:dim=4,gap=0.5,seed=1");
}

ModelInput load_model(const ModelSource& src) {
    const int given = !src.path.empty() + !src.example.empty() + !src.generate.empty();
    if (given != 1) throw SchemaError("arguments", "give exactly one of a model file, --example, --generate");
    if (!src.example.empty()) return input_from_example(src.example, src.size);
    if (!src.generate.empty()) return input_from_generator(parse_generator_spec(src.generate));
    return input_from_descriptor(read_json_file(src.path), src.path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw SchemaError(path, "cannot write file");
    out << text << '\n';
}

int classify(const ModelSource& src, const RunOptions& opt, const std::string& out_path) {
    const AnalysisReport r = run_classify(load_model(src), opt);
    const std::string text = to_json(r).dump(2);
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        write_text(out_path, text);
        for (const auto& v : r.classification)
            std::cout << to_string(v.notion) << ": " << to_string(v.status) << '\n';
        for (const auto& c : r.checks) std::cout << c.name << ": " << to_string(c.status) << '\n';
    }
    for (const auto& c : r.contradictions) std::cerr << "contradiction: " << c << '\n';
    for (const auto& f : r.solver_failures) std::cerr << "solver failure: " << f << '\n';
    return exit_code(r);
}

int suite(const std::string& name, std::optional<std::size_t> trials, std::uint64_t seed,
          const std::string& out_path) {
    const SuiteSummary s = run_suite(suite_from_string(name), seed, trials);
    for (const auto& p : s.properties)
        std::cout << p.name << ": " << p.failures << " failures / " << p.trials
                  << " trials, worst margin " << p.worst_margin << '\n';
    for (const auto& e : s.entries) {
        std::cout << e.label << ": " << (e.mismatches.empty() ? "as expected" : "MISMATCH") << '\n';
        for (const auto& m : e.mismatches) std::cout << "  " << m << '\n';
    }
    std::cout << "suite " << name << ": " << s.contradictions << " contradictions, "
              << s.solver_failures << " solver failures, " << s.mismatches << " mismatches, "
              << s.seconds << " s\n";
    if (!out_path.empty()) write_text(out_path, to_json(s).dump(2));
    return exit_code(s);
}

int orbit(const ModelSource& src, const std::string& vector_path, unsigned n) {
    const ModelInput in = load_model(src);
    const LatticeVector x = vector_from_json(read_json_file(vector_path), space_norm(in.model),
                                             dimension(in.model), vector_path);
    std::cout << "n,d_plus,norm\n";
    std::cout.precision(17);
    for (const auto& row : orbit_table(in.model, x, n))
        std::cout << row.n << ',' << row.d_plus << ',' << row.norm << '\n';
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eventual and asymptotic positivity analysis of matrix and rank-k operators"};
    app.require_subcommand(1);

    ModelSource classify_src;
    RunOptions opt;
    std::string out_path;
    auto* cls = app.add_subcommand("classify", "classify a model and run the theorem checks");
    add_model_options(cls, classify_src, true);
    cls->add_option("--horizon", opt.horizon, "eventual-positivity horizon")->check(CLI::Range(1u, 100000u));
    cls->add_option("--asymptotic-horizon", opt.asymptotic_horizon, "asymptotic-positivity horizon")
        ->check(CLI::Range(4u, 100000u));
    cls->add_option("--tol", opt.tol, "classifier tolerance")->check(CLI::PositiveNumber);
    cls->add_option("--seed", opt.seed, "seed of the random cone test vectors");
    cls->add_option("--out", out_path, "write the report JSON here");

    std::string suite_name;
    std::optional<std::size_t> trials;
    std::uint64_t suite_seed = 0;
    std::string suite_out;
    auto* ste = app.add_subcommand("suite", "run a seeded suite");
    ste->add_option("name", suite_name, "properties | paper | random")
        ->required()
        ->check(CLI::IsMember({"properties", "paper", "random"}));
    ste->add_option("--trials", trials, "vectors (properties) or instances (random)");
    ste->add_option("--seed", suite_seed, "suite seed");
    ste->add_option("--out", suite_out, "write the suite JSON here");

    ModelSource orbit_src;
    std::string vector_path;
    unsigned orbit_n = 0;
    auto* orb = app.add_subcommand("orbit", "print d+ of the rescaled orbit as CSV");
    add_model_options(orb, orbit_src, false);
    orb->add_option("--vector", vector_path, "vector JSON file")->required();
    orb->add_option("--n", orbit_n, "largest power")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (cls->parsed()) return classify(classify_src, opt, out_path);
        if (ste->parsed()) return suite(suite_name, trials, suite_seed, suite_out);
        return orbit(orbit_src, vector_path, orbit_n);
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver_failure;
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input_error;
    }
}
