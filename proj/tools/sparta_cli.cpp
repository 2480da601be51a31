#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "sparta/app/generator.hpp"
#include "sparta/app/pipeline.hpp"
#include "sparta/app/report_io.hpp"
#include "sparta/bounds/diagnostics.hpp"
#include "sparta/cluster/assignment.hpp"
#include "sparta/common/error.hpp"
#include "sparta/driver/convergence_log.hpp"
#include "sparta/esm/instance_io.hpp"
#include "sparta/esm/validation.hpp"
#include "sparta/lp/exchange_format.hpp"
#include "sparta/lp/full_model.hpp"
#include "sparta/lp/solution_io.hpp"

using namespace sparta;

namespace {

struct Common {
    std::string instance;
    std::string export_lp;
    std::string method = "kmedoids";
    std::string step = "fast-forward";
    std::string loss_form = "sum";
    double epsilon = 0.05;
    std::uint64_t seed = 1;
    int jobs = 0;
    int initial_k = 2;
    int max_iterations = 1000;
    bool no_merit_order = false;
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << text;
}

esm::Instance load_valid(const std::string& path)
{
    esm::Instance in = esm::read_instance_file(path);
    const esm::ValidationReport report = esm::validate_instance(in);
    if (!report.ok())
        throw ValidationError(path + ": " + report.to_string());
    return in;
}

driver::SpartaConfig make_config(const Common& o)
{
    driver::SpartaConfig cfg;
    cfg.epsilon_target = o.epsilon;
    cfg.method = cluster::parse_method(o.method);
    driver::parse_step_rule(o.step, cfg);
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.initial_k = o.initial_k;
    cfg.max_iterations = o.max_iterations;
    cfg.bound_options.merit_order = !o.no_merit_order;
    if (o.loss_form == "product")
        cfg.bound_options.loss_form = bounds::LossForm::Product;
    else if (o.loss_form != "sum")
        throw ConfigurationError("loss form must be 'sum' or 'product'");
    cfg.check();
    return cfg;
}

void add_sparta_options(CLI::App* cmd, Common& o)
{
    cmd->add_option("--epsilon", o.epsilon, "Target optimality gap")->capture_default_str();
    cmd->add_option("--method", o.method, "Clustering method: kmeans, kmedoids, hierarchical")->capture_default_str();
    cmd->add_option("--step", o.step, "Resolution step rule: fast-forward or fixed:<n>")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Clustering seed")->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all)")->capture_default_str();
    cmd->add_option("--initial-k", o.initial_k, "Initial cluster count")->capture_default_str();
    cmd->add_option("--max-iterations", o.max_iterations, "Iteration limit")->capture_default_str();
    cmd->add_option("--loss-form", o.loss_form, "Upper-bound internal loss estimate: sum or product")
        ->capture_default_str();
    cmd->add_flag("--no-merit-order", o.no_merit_order, "Let the upper bound dispatch all existing capacity");
}

void print_solution_summary(const lp::SystemSolution& s)
{
    std::cout << std::setprecision(10) << "tac " << s.tac << "\ncapex_prod " << s.capex_prod << "\ncapex_grid "
              << s.capex_grid << "\nopex " << s.opex << "\nghg " << s.ghg << '\n';
}

int cmd_gen(const app::GeneratorSpec& spec, const std::string& output)
{
    const esm::Instance in = app::generate_instance(spec);
    if (output.empty())
        esm::write_instance(std::cout, in);
    else
        esm::write_instance_file(output, in);
    return kExitOk;
}

int cmd_solve_full(const Common& o, const std::string& output)
{
    const esm::Instance in = load_valid(o.instance);
    if (!o.export_lp.empty())
        write_text(o.export_lp, lp::export_standard(lp::build_full_lp(in).lp));
    const app::FullSolve full = app::solve_full(in);
    std::cout << "status " << lp::to_string(full.status) << "\nvariables " << full.variables << "\nconstraints "
              << full.constraints << "\niterations " << full.iterations << "\nwall_s " << full.wall_time << '\n';
    if (full.status == lp::SolveStatus::Infeasible)
        return kExitInfeasible;
    if (!full.optimal())
        return kExitNumeric;
    print_solution_summary(full.solution);
    if (!output.empty())
        lp::write_solution_file(output, in, full.solution);
    return kExitOk;
}

int cmd_run(const Common& o, bool no_benchmark, bool force_network, const std::string& out_dir)
{
    const esm::Instance in = load_valid(o.instance);
    app::RunOptions opts;
    opts.config = make_config(o);
    opts.benchmark = !no_benchmark;
    opts.force_network_opt = force_network;
    const app::RunArtifacts run = app::run_pipeline(in, opts);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    driver::write_convergence_log_file((dir / "convergence.csv").string(), run.iterations.history);
    write_text((dir / "assignment.csv").string(), cluster::assignment_csv(run.iterations.assignment, in.topology));
    lp::write_solution_file((dir / "solution.json").string(), in, run.final_solution);
    app::write_report_file((dir / "report.json").string(), run.report);
    if (run.full && run.full->optimal())
        lp::write_solution_file((dir / "solution_full.json").string(), in, run.full->solution);
    if (!o.export_lp.empty())
        write_text(o.export_lp, lp::export_standard(run.iterations.bounds.ub_model.model.lp));

    std::cout << driver::convergence_log(run.iterations.history);
    std::cout << app::report_to_json(run.report).dump(2) << '\n';
    return kExitOk;
}

int cmd_bounds(const Common& o, int k, const std::string& output)
{
    const esm::Instance in = load_valid(o.instance);
    const driver::SpartaConfig cfg = make_config(o);
    const cluster::ClusterAssignment asg =
        cluster::cluster(cluster::node_features(in, cfg.features), in.topology, k, cfg.method, cfg.seed, cfg.jobs);
    const bounds::BoundPair bp = bounds::solve_bounds(in, asg, cfg.bound_options, cfg.solver, cfg.jobs);
    if (!o.export_lp.empty()) {
        write_text(o.export_lp + ".lb", lp::export_standard(bp.lb_model.model.lp));
        write_text(o.export_lp + ".ub", lp::export_standard(bp.ub_model.model.lp));
    }
    nlohmann::json doc;
    doc["k_requested"] = k;
    doc["k_effective"] = asg.k();
    doc["lower"] = bounds::bound_diagnostics(in, bp.lb_model, &bp.lb);
    doc["upper"] = bounds::bound_diagnostics(in, bp.ub_model, &bp.ub);
    if (bp.lb.optimal() && bp.ub.optimal())
        doc["epsilon"] = app::relative_to_lower(bp.lb.tac, bp.ub.tac);
    if (output.empty())
        std::cout << doc.dump(2) << '\n';
    else
        write_text(output, doc.dump(2) + "\n");
    if (!bp.lb.optimal())
        return bp.lb.status == lp::SolveStatus::Infeasible ? kExitInfeasible : kExitNumeric;
    return kExitOk;
}

int cmd_compare(const std::string& instance_path, const std::vector<std::string>& solutions)
{
    const esm::Instance in = load_valid(instance_path);
    std::cout << "solution,tac,capex_prod,capex_grid,opex,ghg,relative_to_first\n" << std::setprecision(10);
    double first = 0.0;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const lp::SystemSolution s = lp::read_solution_file(solutions[i], in);
        if (i == 0)
            first = s.tac;
        const double rel = first != 0.0 ? (s.tac - first) / first : 0.0;
        std::cout << solutions[i] << ',' << s.tac << ',' << s.capex_prod << ',' << s.capex_grid << ',' << s.opex << ','
                  << s.ghg << ',' << rel << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatial aggregation with bounded error for multi-energy system design"};
    app.require_subcommand(1);

    app::GeneratorSpec gen;
    std::string gen_mode = "transshipment", gen_output;
    CLI::App* g = app.add_subcommand("gen", "Generate a synthetic instance");
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--nodes", gen.n_nodes)->capture_default_str();
    g->add_option("--steps", gen.n_time_steps)->capture_default_str();
    g->add_option("--products", gen.n_products)->capture_default_str();
    g->add_option("--non-transportable", gen.n_non_transportable)->capture_default_str();
    g->add_option("--components", gen.n_components)->capture_default_str();
    g->add_option("--density", gen.density, "Edges per node")->capture_default_str();
    g->add_option("--ghg-share", gen.ghg_share)->capture_default_str();
    g->add_option("--mode", gen_mode, "transshipment or dc")->capture_default_str();
    g->add_option("-o,--output", gen_output, "Instance file (default: stdout)");

    Common full_opts;
    std::string full_output;
    CLI::App* f = app.add_subcommand("solve-full", "Solve the full-resolution benchmark");
    f->add_option("--instance", full_opts.instance)->required();
    f->add_option("--export-lp", full_opts.export_lp, "Write the LP in fixed MPS format");
    f->add_option("-o,--output", full_output, "Solution document");

    Common run_opts;
    bool no_benchmark = false, force_network = false;
    std::string out_dir = ".";
    CLI::App* r = app.add_subcommand("run", "Run the aggregation, redesign and feasibility phases");
    r->add_option("--instance", run_opts.instance)->required();
    add_sparta_options(r, run_opts);
    r->add_option("--export-lp", run_opts.export_lp, "Write the final upper-bound LP in fixed MPS format");
    r->add_flag("--no-benchmark", no_benchmark, "Skip the full-resolution benchmark solve");
    r->add_flag("--force-network-opt", force_network, "Run the network optimization even for feasible designs");
    r->add_option("--out-dir", out_dir, "Directory for the artifacts")->capture_default_str();

    Common bound_opts;
    int bound_k = 2;
    std::string bound_output;
    CLI::App* b = app.add_subcommand("bounds", "Solve both bounds at one resolution and dump diagnostics");
    b->add_option("--instance", bound_opts.instance)->required();
    b->add_option("-k,--clusters", bound_k, "Requested cluster count")->capture_default_str();
    add_sparta_options(b, bound_opts);
    b->add_option("--export-lp", bound_opts.export_lp, "Prefix for the .lb / .ub MPS files");
    b->add_option("-o,--output", bound_output, "Diagnostics document (default: stdout)");

    std::string cmp_instance;
    std::vector<std::string> cmp_solutions;
    CLI::App* c = app.add_subcommand("compare", "Compare solution documents of one instance");
    c->add_option("--instance", cmp_instance)->required();
    c->add_option("--solution", cmp_solutions, "Solution documents; the first is the reference")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*g) {
            if (gen_mode == "dc")
                gen.transport_mode = esm::TransportMode::DcLoadFlow;
            else if (gen_mode != "transshipment")
                throw ConfigurationError("mode must be 'transshipment' or 'dc'");
            return cmd_gen(gen, gen_output);
        }
        if (*f)
            return cmd_solve_full(full_opts, full_output);
        if (*r)
            return cmd_run(run_opts, no_benchmark, force_network, out_dir);
        if (*b)
            return cmd_bounds(bound_opts, bound_k, bound_output);
        if (*c)
            return cmd_compare(cmp_instance, cmp_solutions);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitFailure;
}
