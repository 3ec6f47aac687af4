#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aben/config_space.hpp"
#include "aben/harness.hpp"

namespace {

int run_command(const std::vector<std::string>& data,
                const std::vector<std::string>& methods,
                std::size_t repeats,
                std::uint64_t seed,
                const std::string& goal,
                const std::string& out,
                std::size_t jobs) {
    aben::ExperimentSpec spec;
    spec.dataset_paths = data;
    for (const auto& name : methods) spec.methods.push_back(aben::method_from_string(name));
    spec.repeats = repeats;
    spec.seed = seed;
    spec.goal.kind =
        goal == "sa" ? aben::GoalKind::MaximizeSa : aben::GoalKind::MinimizeMedianMre;
    spec.output_dir = out;
    spec.jobs = jobs;

    const aben::RunRecord record = aben::run_experiment(spec);
    for (const auto& error : record.dataset_errors) {
        std::cerr << "dataset skipped: " << error << '\n';
    }
    if (record.records.empty()) {
        std::cerr << "no dataset produced results\n";
        return 2;
    }
    aben::emit_reports(record, out);
    std::cout << "wrote " << record.records.size() << " fold records to " << out << '\n';
    return 0;
}

int report_command(const std::string& record_path, const std::string& out) {
    const aben::RunRecord record = aben::load_run_record(record_path);
    aben::emit_reports(record, out);
    std::cout << "reports written to " << out << '\n';
    return 0;
}

int inspect_command(const std::string& model_path) {
    aben::FeatureModel model;
    if (model_path.empty()) {
        model = aben::default_feature_model();
    } else {
        std::ifstream in(model_path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot open " << model_path << '\n';
            return 2;
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        model = aben::parse_feature_model(text);
    }
    std::cout << "root: " << model.root << '\n';
    for (const auto& axis : model.axes) {
        std::cout << "  " << axis.name << (axis.mandatory ? " (mandatory)" : " (optional)")
                  << ": ";
        for (std::size_t i = 0; i < axis.leaves.size(); ++i) {
            std::cout << (i ? ", " : "") << axis.leaves[i];
        }
        std::cout << '\n';
    }
    std::cout << "constraints: " << model.constraints.size() << '\n';
    std::cout << "raw cross-product: " << aben::enumerate_size(model, false) << '\n';
    std::cout << "valid configurations: " << aben::enumerate_size(model, true) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commissioning tool for analogy-based effort estimators"};
    app.require_subcommand(1);

    std::vector<std::string> data;
    std::vector<std::string> methods{"ABE0", "ATLM", "DE2", "DE8", "RD40", "RD160"};
    std::size_t repeats = 20;
    std::uint64_t seed = 1;
    std::string goal = "mre";
    std::string out = "reports";
    std::size_t jobs = 1;

    auto* run = app.add_subcommand("run", "run the cross-validation experiment");
    run->add_option("--data", data, "dataset CSV paths")->required()->expected(-1);
    run->add_option("--methods", methods, "methods to compare");
    run->add_option("--repeats", repeats, "cross-validation repeats");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--goal", goal, "tuning goal")->check(CLI::IsMember({"mre", "sa"}));
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--jobs", jobs, "worker threads");

    std::string record_path;
    auto* report = app.add_subcommand("report", "re-emit reports from a saved record");
    report->add_option("--record", record_path, "record.json path")->required();
    report->add_option("--out", out, "output directory")->required();

    std::string model_path;
    auto* inspect = app.add_subcommand("inspect-config", "print the option space");
    inspect->add_option("--model", model_path, "feature model source file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_command(data, methods, repeats, seed, goal, out, jobs);
        if (report->parsed()) return report_command(record_path, out);
        if (inspect->parsed()) return inspect_command(model_path);
    } catch (const aben::IoError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const aben::MalformedCsv& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const aben::NonPositiveEffort& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const aben::EmptyDataset& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const aben::DatasetTooSmall& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const aben::ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
