#include "commands.hpp"

#include "qhj/catalog.hpp"
#include "qhj/contour.hpp"
#include "qhj/oracle.hpp"
#include "qhj/qes.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qhj::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

ParamSet parse_params(const std::vector<std::string>& raw) {
    ParamSet p;
    for (const auto& kv : raw) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param expects KEY=VALUE, got '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (val.empty() || *end != '\0' || !std::isfinite(v))
            throw UsageError("parameter " + key + " needs a finite number, got '" + val + "'");
        p[key] = v;
    }
    return p;
}

PotentialSpec load(const Options& o) {
    if (o.potential.empty()) throw UsageError("--potential is required");
    if (!catalog_has(o.potential)) throw UsageError("unknown potential '" + o.potential + "'");
    return make_potential(o.potential, parse_params(o.raw_params));
}

Json params_json(const ParamSet& p) {
    Json j = Json::object();
    for (const auto& [k, v] : p) j[k] = num(v);
    return j;
}

Report start(const Options& o, const PotentialSpec* spec) {
    Report r;
    r.body["schema"] = 1;
    r.body["command"] = o.command;
    if (spec) {
        r.body["potential"] = spec->id;
        r.body["params"] = params_json(spec->params);
        r.body["params_hash"] = params_hash(spec->params);
    }
    r.body["results"] = {{"rows", Json::array()}};
    r.body["checks"] = Json::array();
    return r;
}

void check(Report& r, const std::string& name, bool ok, const Json& detail = Json::object()) {
    Json c = {{"name", name}, {"status", ok ? "PASS" : "FAIL"}};
    for (auto it = detail.begin(); it != detail.end(); ++it) c[it.key()] = it.value();
    r.body["checks"].push_back(c);
    r.pass = r.pass && ok;
}

Json& rows(Report& r) { return r.body["results"]["rows"]; }

int bound_levels(const PotentialSpec& s, int n_max) {
    const int cnt = s.bound_state_count ? s.bound_state_count() : -1;
    return cnt < 0 ? n_max + 1 : std::min(cnt, n_max + 1);
}

double nearest_root(const EnergyScan& scan, double target) {
    double best = NAN;
    for (double e : scan.energies)
        if (std::isnan(best) || std::abs(e - target) < std::abs(best - target)) best = e;
    return best;
}

}  // namespace

Report cmd_list(const Options& o) {
    Report r = start(o, nullptr);
    for (const auto& id : catalog_list()) {
        const PotentialSpec s = make_potential(id);
        std::string params;
        for (const auto& p : s.schema) params += (params.empty() ? "" : " ") + p.name;
        rows(r).push_back({{"id", id},
                           {"title", s.title},
                           {"params", params},
                           {"closed_form", s.has_closed_form()},
                           {"qes", s.qes},
                           {"potential", s.potential_formula}});
    }
    return r;
}

Report cmd_solve(const Options& o) {
    const PotentialSpec s = load(o);
    Report r = start(o, &s);
    const int levels = s.has_closed_form() ? bound_levels(s, o.n_max) : o.n_max + 1;
    for (int n = 0; n < levels; ++n) {
        const EnergyScan scan = solve_energy(s, n);
        Json row = {{"n", n}};
        if (s.has_closed_form()) {
            const double E = closed_form_energy(s, n);
            const double Er = nearest_root(scan, E);
            row["E_closed_form"] = num(E);
            row["E_residue_sum"] = num(Er);
            row["delta"] = num(std::abs(E - Er));
            check(r, "residue-sum root n=" + std::to_string(n),
                  std::abs(E - Er) <= o.tol * std::max(1.0, std::abs(E)), {{"delta", num(std::abs(E - Er))}});
        } else {
            row["E_closed_form"] = nullptr;
            row["E_residue_sum"] = scan.energies.empty() ? Json(nullptr) : num(scan.energies.front());
            row["delta"] = nullptr;
        }
        rows(r).push_back(row);
    }
    return r;
}

namespace {

Json sector_rows(const AlgebraicSector& sec) {
    Json out = Json::array();
    for (std::size_t i = 0; i < sec.states.size(); ++i) {
        const auto& st = sec.states[i];
        out.push_back({{"n", sec.n},
                       {"state_index", i},
                       {"E", num(st.state.energy)},
                       {"real_zeros", st.zeros.real_zeros},
                       {"complex_zeros", st.zeros.complex_zeros},
                       {"parity", st.parity},
                       {"degenerate", st.degenerate},
                       {"eigen_residual", num(st.eigen_residual)},
                       {"bethe_residual", st.bethe_residual < 0 ? Json(nullptr) : num(st.bethe_residual)},
                       {"energy_formula_residual",
                        st.energy_formula_residual < 0 ? Json(nullptr) : num(st.energy_formula_residual)}});
    }
    return out;
}

void sector_checks(Report& r, const AlgebraicSector& sec) {
    for (std::size_t i = 0; i < sec.states.size(); ++i) {
        const auto& st = sec.states[i];
        const std::string tag = " n=" + std::to_string(sec.n) + " state=" + std::to_string(i);
        check(r, "zero count" + tag, st.zeros.total == sec.n, {{"total", st.zeros.total}});
        if (st.bethe_residual >= 0)
            check(r, "root equations" + tag, st.bethe_residual < 1e-8, {{"residual", num(st.bethe_residual)}});
        if (st.energy_formula_residual >= 0)
            check(r, "energy formula" + tag, st.energy_formula_residual < 1e-8,
                  {{"residual", num(st.energy_formula_residual)}});
    }
}

}  // namespace

Report cmd_qes(const Options& o) {
    const PotentialSpec s = load(o);
    Report r = start(o, &s);
    const double res = qes_condition_residual(s, o.n);
    r.body["results"]["condition"] = s.qes_condition_text;
    r.body["results"]["condition_residual"] = num(res);
    const double qsum = quantization_residual_min(s, o.n, 0.0);
    r.body["results"]["residue_sum"] = num(qsum);
    if (res >= 1e-8) {
        r.body["results"]["sector"] = nullptr;
        return r;
    }
    try {
        const AlgebraicSector sec = algebraic_sector(s, o.n);
        rows(r) = sector_rows(sec);
        r.body["results"]["notes"] = sec.notes;
        sector_checks(r, sec);
    } catch (const NotQES& e) {
        r.body["results"]["sector"] = nullptr;
        r.body["results"]["notes"] = Json::array({e.what()});
    }
    return r;
}

namespace {

void contour_check(Report& r, Json& row, const ClosedFormState& st, int expected, const std::string& tag) {
    const ActionResult a = action_integral(st, default_contour(st));
    row["J_re"] = num(a.J.real());
    row["J_im"] = num(a.J.imag());
    const bool ok = std::abs(a.J - cplx(expected, 0.0)) < 1e-6;
    check(r, "contour J" + tag, ok, {{"J", num(a.J.real())}, {"expected", expected}});
}

}  // namespace

Report cmd_verify(const Options& o) {
    const PotentialSpec s = load(o);
    Report r = start(o, &s);
    r.body["results"]["tol"] = o.tol;
    if (s.has_closed_form()) {
        const int levels = bound_levels(s, o.n_max);
        const RefinedSpectrum orc = oracle_spectrum(s, levels);
        for (int n = 0; n < levels; ++n) {
            const std::string tag = " n=" + std::to_string(n);
            const ClosedFormState st = closed_form_state(s, n);
            const double E = st.energy + o.shift, Eo = orc.levels[n].energy;
            const double rel = std::abs(E - Eo) / std::max(1.0, std::abs(Eo));
            const int zeros = static_cast<int>(st.nodes().size());
            Json row = {{"n", n},
                        {"E_closed_form", num(E)},
                        {"E_oracle", num(Eo)},
                        {"rel_delta", num(rel)},
                        {"oracle_nodes", orc.levels[n].node_count},
                        {"real_zeros", zeros}};
            check(r, "energy" + tag, rel <= o.tol, {{"rel_delta", num(rel)}});
            check(r, "nodes" + tag, orc.levels[n].node_count == n && zeros == n,
                  {{"oracle_nodes", orc.levels[n].node_count}, {"real_zeros", zeros}});
            contour_check(r, row, st, n, tag);
            rows(r).push_back(row);
        }
    } else if (s.qes) {
        if (qes_condition_residual(s, o.n) >= 1e-8)
            throw UsageError(s.id + " is off the degree-" + std::to_string(o.n) + " stratum; nothing to verify");
        const AlgebraicSector sec = algebraic_sector(s, o.n);
        int top = 0;
        for (const auto& st : sec.states) top = std::max(top, st.zeros.real_zeros);
        const RefinedSpectrum orc = oracle_spectrum(s, top + 1);
        for (std::size_t i = 0; i < sec.states.size(); ++i) {
            const auto& st = sec.states[i];
            const std::string tag = " state=" + std::to_string(i);
            const int k = st.zeros.real_zeros;
            const double E = st.state.energy + o.shift, Eo = orc.levels[k].energy;
            const double rel = std::abs(E - Eo) / std::max(1.0, std::abs(Eo));
            Json row = {{"state_index", i},
                        {"E_sector", num(E)},
                        {"E_oracle", num(Eo)},
                        {"oracle_level", k},
                        {"rel_delta", num(rel)}};
            check(r, "energy" + tag, rel <= o.tol, {{"rel_delta", num(rel)}});
            contour_check(r, row, st.state, k, tag);
            rows(r).push_back(row);
        }
        sector_checks(r, sec);
    } else {
        throw UsageError(s.id + " has neither a closed-form spectrum nor an algebraic sector");
    }
    return r;
}

Report cmd_zeros(const Options& o) {
    const PotentialSpec base = load(o);
    Report r = start(o, &base);
    std::vector<AlgebraicSector> sectors;
    for (int n = 0; n <= o.n_max; ++n) {
        const PotentialSpec s = make_potential(base.id, stratum_params(base, n));
        AlgebraicSector sec = algebraic_sector(s, n);
        for (auto row : sector_rows(sec)) {
            row["params_hash"] = params_hash(s.params);
            rows(r).push_back(row);
        }
        sector_checks(r, sec);
        for (std::size_t i = 1; i < sec.states.size(); ++i)
            check(r, "real zeros non-decreasing n=" + std::to_string(n) + " state=" + std::to_string(i),
                  sec.states[i].zeros.real_zeros >= sec.states[i - 1].zeros.real_zeros);
        sectors.push_back(std::move(sec));
    }
    if (!o.dump.empty()) {
        std::ofstream f(o.dump);
        if (!f) throw UsageError("cannot write " + o.dump);
        write_zero_atlas_csv(f, sectors);
    }
    return r;
}

Report cmd_contour(const Options& o) {
    const PotentialSpec s = load(o);
    Report r = start(o, &s);
    std::vector<std::pair<ClosedFormState, int>> states;
    if (s.has_closed_form()) {
        states.emplace_back(closed_form_state(s, o.n), o.n);
    } else {
        const AlgebraicSector sec = algebraic_sector(s, o.n);
        for (const auto& st : sec.states) states.emplace_back(st.state, st.zeros.real_zeros);
    }
    std::ofstream dump;
    if (!o.dump.empty()) {
        dump.open(o.dump);
        if (!dump) throw UsageError("cannot write " + o.dump);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& [st, expected] = states[i];
        const ContourSpec c = default_contour(st);
        const ActionResult a = action_integral(st, c);
        Json poles = Json::array();
        for (const auto& p : complex_pole_census(st, c.a - 1.0, c.b + 1.0, std::max(2.0, 2.0 * c.h)))
            poles.push_back({{"re", num(p.x.real())}, {"im", num(p.x.imag())}, {"real", p.real}});
        rows(r).push_back({{"state_index", i},
                           {"E", num(st.energy)},
                           {"a", num(a.contour.a)},
                           {"b", num(a.contour.b)},
                           {"h", num(a.contour.h)},
                           {"J_re", num(a.J.real())},
                           {"J_im", num(a.J.imag())},
                           {"enclosed_zeros", a.enclosed_zeros},
                           {"samples", a.samples},
                           {"poles", poles}});
        check(r, "J equals enclosed zeros state=" + std::to_string(i),
              std::abs(a.J - cplx(a.enclosed_zeros, 0.0)) < 1e-6 && a.enclosed_zeros == expected,
              {{"J", num(a.J.real())}, {"expected", expected}});
        if (dump.is_open()) write_contour_csv(dump, st, a.contour);
    }
    return r;
}

Report cmd_oracle(const Options& o) {
    const PotentialSpec s = load(o);
    Report r = start(o, &s);
    const RefinedSpectrum orc = oracle_spectrum(s, o.n_max + 1, o.tol);
    r.body["results"]["domain"] = {num(orc.finest.domain.lo), num(orc.finest.domain.hi)};
    r.body["results"]["points"] = orc.finest.points;
    r.body["results"]["notes"] = orc.notes;
    for (std::size_t k = 0; k < orc.levels.size(); ++k) {
        const auto& l = orc.levels[k];
        rows(r).push_back({{"n", k},
                           {"E", num(l.energy)},
                           {"achieved_tol", num(l.achieved_tol)},
                           {"converged", l.converged},
                           {"nodes", l.node_count}});
        check(r, "converged n=" + std::to_string(k), l.converged);
        check(r, "nodes n=" + std::to_string(k), l.node_count == static_cast<int>(k));
    }
    if (!o.dump.empty()) {
        std::ofstream f(o.dump);
        if (!f) throw UsageError("cannot write " + o.dump);
        write_eigenfunction_csv(f, orc.finest);
    }
    return r;
}

namespace {

std::string cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    return v.dump();
}

std::vector<std::string> columns(const Json& rs) {
    std::vector<std::string> cols;
    for (const auto& row : rs)
        for (auto it = row.begin(); it != row.end(); ++it)
            if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
    return cols;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

std::string render(const Report& r, const std::string& format) {
    if (format == "json") return r.body.dump(2) + "\n";
    const Json& rs = r.body["results"]["rows"];
    const auto cols = columns(rs);
    std::ostringstream os;
    if (format == "csv") {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << '\n';
        for (const auto& row : rs) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << csv_escape(row.contains(cols[i]) ? cell(row[cols[i]]) : "");
            os << '\n';
        }
        return os.str();
    }
    std::vector<std::size_t> width(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        width[i] = cols[i].size();
        for (const auto& row : rs)
            if (row.contains(cols[i])) width[i] = std::max(width[i], cell(row[cols[i]]).size());
    }
    if (r.body.contains("potential")) os << "potential: " << r.body["potential"].get<std::string>() << "\n";
    for (const auto& key : {"condition", "condition_residual", "residue_sum"})
        if (r.body["results"].contains(key)) os << key << ": " << cell(r.body["results"][key]) << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << cols[i] << std::string(width[i] - cols[i].size() + 2, ' ');
    }
    if (!cols.empty()) os << '\n';
    for (const auto& row : rs) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const std::string c = row.contains(cols[i]) ? cell(row[cols[i]]) : "";
            os << c << std::string(width[i] - c.size() + 2, ' ');
        }
        os << '\n';
    }
    for (const auto& c : r.body["checks"]) os << c["status"].get<std::string>() << "  " << c["name"].get<std::string>() << '\n';
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Residue-based quantization toolkit for one-dimensional potentials"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool n, bool n_max) {
        sub->add_option("--potential", o.potential, "catalog id")->required();
        sub->add_option("--param", o.raw_params, "KEY=VALUE, repeatable");
        if (n) sub->add_option("--n", o.n, "level or sector degree")->check(CLI::NonNegativeNumber);
        if (n_max) sub->add_option("--n-max", o.n_max, "highest level")->check(CLI::NonNegativeNumber);
        sub->add_option("--tol", o.tol, "relative tolerance for energy comparisons");
        sub->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_flag("--timings", o.timings, "include wall-clock timings in the report");
    };
    auto* list = app.add_subcommand("list", "catalog entries and their parameters");
    list->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv", "table"}));
    list->add_option("--out", o.out);
    auto* solve = app.add_subcommand("solve", "closed-form energies against residue-sum roots");
    common(solve, false, true);
    auto* qes = app.add_subcommand("qes", "QES condition and algebraic sector");
    common(qes, true, false);
    auto* verify = app.add_subcommand("verify", "exact results against the grid oracle and contour integrals");
    common(verify, true, true);
    verify->add_option("--shift", o.shift, "add this to the exact energies before comparing");
    auto* zeros = app.add_subcommand("zeros", "zero atlas of algebraic sectors up to --n-max");
    common(zeros, false, true);
    zeros->add_option("--dump", o.dump, "zero-atlas CSV");
    auto* contour = app.add_subcommand("contour", "quantum action integral around the default rectangle");
    common(contour, true, false);
    contour->add_option("--dump", o.dump, "contour trace CSV");
    auto* oracle = app.add_subcommand("oracle", "finite-difference spectrum");
    common(oracle, false, true);
    oracle->add_option("--dump", o.dump, "eigenfunction CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (o.command == "oracle" && !oracle->count("--tol")) o.tol = 1e-7;

    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        if (o.command == "list") r = cmd_list(o);
        else if (o.command == "solve") r = cmd_solve(o);
        else if (o.command == "qes") r = cmd_qes(o);
        else if (o.command == "verify") r = cmd_verify(o);
        else if (o.command == "zeros") r = cmd_zeros(o);
        else if (o.command == "contour") r = cmd_contour(o);
        else r = cmd_oracle(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidParameters& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NotQES& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    if (o.timings)
        r.body["timings"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    r.body["status"] = r.pass ? "PASS" : "FAIL";

    const std::string text = render(r, o.format);
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "error: cannot write " << o.out << '\n';
            return kUsage;
        }
        f << text;
    }
    return r.pass ? kPass : kFail;
}

}  // namespace qhj::cli
