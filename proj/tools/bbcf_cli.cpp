// bbcf: classify center manifolds of small holomorphic systems.
//
//   bbcf classify system.json
//   bbcf series --order 16 --format text a.json b.json
//   bbcf verify --radius 1e-2 --tol 1e-6 --starts 20 system.json
//   bbcf bb briot_bouquet.json

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bbcf/app_io.hpp"

namespace {

struct FileResult {
    std::string name;
    bbcf::PipelineResult result;
};

FileResult process(const std::string& name, const bbcf::PipelineOptions& opt) {
    FileResult fr{name, {}};
    std::string text;
    if (name == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(name, std::ios::binary);
        if (!in) {
            fr.result.exit_code = bbcf::exit_parse;
            fr.result.diagnostics = "cannot read " + name + "\n";
            return fr;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    fr.result = bbcf::run_pipeline(text, opt);
    return fr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Center manifolds and Briot-Bouquet systems in exact arithmetic"};
    app.require_subcommand(1);

    bbcf::PipelineOptions opt;
    std::vector<std::string> files;
    std::string format = "json";

    for (const char* mode : {"classify", "series", "verify", "bb"}) {
        static const std::map<std::string, std::string> help = {
            {"classify", "enumerate center manifolds and obstructions"},
            {"series", "as classify, with manifold series coefficients"},
            {"verify", "as series, plus numeric period and residual checks"},
            {"bb", "classify x*y' = f(x, y) directly; variables[0] is x"},
        };
        CLI::App* sub = app.add_subcommand(mode, help.at(mode));
        sub->add_option("files", files, "input documents ('-' reads standard input)")->required();
        sub->add_option("--order", opt.order, "series truncation order")->default_val(12)->check(CLI::Range(2, 60));
        sub->add_option("--radius", opt.radius, "sampling radius for verification")->default_val(1e-2)
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol", opt.tol, "verification tolerance")->default_val(1e-6)->check(CLI::PositiveNumber);
        sub->add_option("--starts", opt.starts, "starting points per manifold")->default_val(8)->check(CLI::Range(1, 100000));
        sub->add_option("--step", opt.step, "RK4 step")->default_val(1e-3)->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "output format")->default_val("json")->check(CLI::IsMember({"json", "text"}));
        sub->add_flag("--numeric-fallback", opt.numeric_fallback,
                      "accept spectra that are not Gaussian rationals (output flagged uncertified)");
        sub->callback([&opt, mode] { opt.mode = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bbcf::exit_parse;
    }
    opt.format = format == "text" ? bbcf::ReportFormat::text : bbcf::ReportFormat::json;

    std::vector<std::future<FileResult>> jobs;
    for (const auto& f : files) jobs.push_back(std::async(std::launch::async, process, f, opt));

    int code = bbcf::exit_ok;
    for (auto& job : jobs) {
        FileResult fr = job.get();
        if (files.size() > 1) std::cout << "==> " << fr.name << " <==\n";
        std::cout << fr.result.output;
        if (!fr.result.diagnostics.empty()) std::cerr << fr.name << ": " << fr.result.diagnostics;
        code = std::max(code, fr.result.exit_code);
    }
    return code;
}
