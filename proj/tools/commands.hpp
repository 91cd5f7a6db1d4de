#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace qhj::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

struct Options {
    std::string command;
    std::string potential;
    std::vector<std::string> raw_params;
    int n = 0;
    int n_max = 0;
    double tol = 1e-5;
    double shift = 0.0;  // added to the exact energies before comparison
    std::string format = "table";
    std::string out;
    std::string dump;
    bool timings = false;
};

struct Report {
    Json body;
    bool pass = true;
};

Report cmd_list(const Options& o);
Report cmd_solve(const Options& o);
Report cmd_qes(const Options& o);
Report cmd_verify(const Options& o);
Report cmd_zeros(const Options& o);
Report cmd_contour(const Options& o);
Report cmd_oracle(const Options& o);

/// Renders body["results"]["rows"] (and the checks) in the requested format.
std::string render(const Report& r, const std::string& format);

int run(int argc, char** argv);

}  // namespace qhj::cli
