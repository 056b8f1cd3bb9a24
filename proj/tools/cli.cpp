#include "cli.hpp"

#include "qtrace/engines.hpp"
#include "qtrace/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace qtrace::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string command;
    std::string surface_path, tangle_path;
    bool json = false;
    bool original = false;
    bool terms = false;
    int threads = 0;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string state_string(const JunctureState& J) {
    std::string s;
    for (int v : J) s += v > 0 ? '+' : '-';
    return s;
}

json element_json(const QTElement& a, const Triangulation& T) {
    json terms = json::array();
    for (const auto& [k, c] : a.terms()) {
        json mono = json::object();
        for (int i = 0; i < a.dim(); ++i)
            if (k[i] != 0) mono["(" + T.triangles[i / 3].name + "," + std::to_string(i % 3 + 1) + ")"] = k[i];
        terms.push_back({{"monomial", mono}, {"coeff", c.to_string()}});
    }
    return terms;
}

json state_json(const TanglePresentation& P, const JunctureState& J) {
    json s = json::object();
    for (std::size_t i = 0; i < J.size(); ++i) {
        const auto& at = P.junctures()[i].at;
        s[P.split().copies[at.copy].name + ":" + std::to_string(at.slot + 1)] = J[i] > 0 ? "+" : "-";
    }
    return s;
}

json term_json(const TanglePresentation& P, const TermReport& r) {
    const auto& T = P.triangulation();
    return {{"state", state_json(P, r.J)},
            {"bw", element_json(r.bw, T)},
            {"monomial", element_json(r.monomial, T)},
            {"coeff", r.coeff.to_string()},
            {"cover_writhe", r.cover_writhe},
            {"pass", r.pass}};
}

void print_terms_text(std::ostream& out, const TanglePresentation& P, const std::vector<TermReport>& terms) {
    const auto& T = P.triangulation();
    auto indent = [](const std::string& text) {
        std::string r;
        std::istringstream ss(text);
        for (std::string l; std::getline(ss, l);) r += "    " + l + "\n";
        return r;
    };
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& r = terms[i];
        out << "term " << i + 1 << " state " << state_string(r.J) << " cover_writhe " << r.cover_writhe
            << " coeff " << r.coeff.to_string() << (r.pass ? " PASS" : " FAIL") << "\n";
        out << "  bw:\n" << indent(to_text(r.bw, T));
        out << "  monomial:\n" << indent(to_text(r.monomial, T));
    }
}

json edge_map(const std::vector<int>& v, const Triangulation& T) {
    json j = json::object();
    for (int e = 0; e < T.num_edges(); ++e) j[T.edge_names[e]] = v[e];
    return j;
}

int run_command(const RunConfig& cfg, std::ostream& out) {
    Triangulation T;
    try {
        T = parse_surface(read_file(cfg.surface_path));
    } catch (const Error& e) {
        throw Error(e.kind(), cfg.surface_path + ": " + e.message());
    }
    SplitStructure S = split(T);
    std::string text = read_file(cfg.tangle_path);
    TanglePresentation P = [&] {
        try {
            return parse_tangle(text, S);
        } catch (const Error& e) {
            throw Error(e.kind(), cfg.tangle_path + ": " + e.message());
        }
    }();
    json j = {{"schema", 1}, {"command", cfg.command}};

    if (cfg.command == "validate") {
        int nb = 0;
        for (int e = 0; e < T.num_edges(); ++e) nb += T.is_boundary(e);
        std::size_t nstates = enumerate_states(P).size();
        int wr = writhe_surface(P), dc = boundary_correction(P);
        if (cfg.json) {
            j.update({{"valid", true}, {"triangles", T.num_triangles()}, {"edges", T.num_edges()},
                      {"boundary_edges", nb}, {"segments", P.segments().size()},
                      {"junctures", P.junctures().size()}, {"states", nstates}, {"writhe", wr},
                      {"boundary_correction", dc}});
            out << j.dump(2) << "\n";
        } else {
            out << "valid\n"
                << "triangles " << T.num_triangles() << "\n"
                << "edges " << T.num_edges() << " (boundary " << nb << ")\n"
                << "segments " << P.segments().size() << "\n"
                << "junctures " << P.junctures().size() << "\n"
                << "states " << nstates << "\n"
                << "writhe " << wr << "\n"
                << "boundary_correction " << dc << "\n";
        }
        return 0;
    }
    if (cfg.command == "trace" || cfg.command == "holonomy") {
        QTElement r = cfg.command == "trace" ? bw_trace(P, cfg.threads)
                      : cfg.original         ? gabella_original(P, cfg.threads)
                                             : trhol(P, cfg.threads);
        if (cfg.json) {
            j["normalization"] = cfg.original ? "original" : "standard";
            j["terms"] = element_json(r, T);
            out << j.dump(2) << "\n";
        } else {
            out << to_text(r, T);
        }
        return 0;
    }
    if (cfg.command == "check") {
        MainTheoremReport rep = check_main_theorem(P, cfg.threads);
        if (cfg.json) {
            j.update({{"result", rep.pass ? "PASS" : "FAIL"}, {"global", rep.global_pass},
                      {"twist", rep.twist.to_string()}, {"writhe", rep.writhe},
                      {"boundary_correction", rep.boundary_correction},
                      {"bw_trace", element_json(rep.bw_trace, T)},
                      {"twisted_trhol", element_json(rep.trhol.scaled(rep.twist), T)}});
            json terms = json::array();
            for (const auto& t : rep.terms)
                if (cfg.terms || !t.pass) terms.push_back(term_json(P, t));
            j["terms"] = terms;
            out << j.dump(2) << "\n";
        } else {
            out << (rep.pass ? "PASS" : "FAIL") << "\n";
            out << "twist " << rep.twist.to_string() << "\n";
            if (!rep.global_pass) {
                out << "bw_trace:\n" << to_text(rep.bw_trace, T);
                out << "twist * trhol:\n" << to_text(rep.trhol.scaled(rep.twist), T);
            }
            std::vector<TermReport> shown;
            for (const auto& t : rep.terms)
                if (cfg.terms || !t.pass) shown.push_back(t);
            print_terms_text(out, P, shown);
        }
        return rep.pass ? 0 : 1;
    }
    if (cfg.command == "classical") {
        if (P.curves().empty() && !P.segments().empty())
            throw InputError("classical needs a tangle given by curve lines");
        CommPoly classical = classical_trace(P.curves(), T);
        CommPoly limit = classical_limit(bw_trace(P, cfg.threads), T).normalized();
        bool ok = classical == limit;
        if (cfg.json) {
            j.update({{"classical", classical.to_string(T)}, {"limit", limit.to_string(T)},
                      {"result", ok ? "PASS" : "FAIL"}});
            out << j.dump(2) << "\n";
        } else {
            out << "classical " << classical.to_string(T) << "\n"
                << "limit " << limit.to_string(T) << "\n"
                << (ok ? "PASS" : "FAIL") << "\n";
        }
        return ok ? 0 : 1;
    }
    // report
    MainTheoremReport rep = check_main_theorem(P, cfg.threads);
    auto high = highest_term(rep.trhol, T);
    if (cfg.json) {
        j.update({{"result", rep.pass ? "PASS" : "FAIL"}, {"twist", rep.twist.to_string()},
                  {"writhe", rep.writhe}, {"boundary_correction", rep.boundary_correction},
                  {"states", rep.terms.size()}, {"bw_trace", element_json(rep.bw_trace, T)},
                  {"trhol", element_json(rep.trhol, T)}});
        if (high)
            j["highest_term"] = {{"exponents", edge_map(high->exponents, T)}, {"coeff", high->coeff.to_string()}};
        else
            j["highest_term"] = nullptr;
        if (!P.curves().empty()) {
            std::vector<int> a(T.num_edges(), 0);
            for (const auto& c : P.curves()) {
                auto ac = intersection_numbers(c, T);
                for (int e = 0; e < T.num_edges(); ++e) a[e] += ac[e];
            }
            j["intersection_numbers"] = edge_map(a, T);
        }
        json terms = json::array();
        for (const auto& t : rep.terms) terms.push_back(term_json(P, t));
        j["terms"] = terms;
        out << j.dump(2) << "\n";
    } else {
        out << "writhe " << rep.writhe << "\n"
            << "boundary_correction " << rep.boundary_correction << "\n"
            << "twist " << rep.twist.to_string() << "\n"
            << "states " << rep.terms.size() << "\n"
            << "bw_trace:\n" << to_text(rep.bw_trace, T)
            << "trhol:\n" << to_text(rep.trhol, T);
        if (high) {
            out << "highest_term";
            for (int e = 0; e < T.num_edges(); ++e) out << " " << T.edge_names[e] << ":" << high->exponents[e];
            out << " coeff " << high->coeff.to_string() << "\n";
        } else {
            out << "highest_term none\n";
        }
        print_terms_text(out, P, rep.terms);
        out << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Quantum trace and quantum holonomy of stated tangles on triangulated surfaces", "qtrace"};
    app.require_subcommand(1, 1);
    struct Spec {
        const char* name;
        const char* help;
    };
    const Spec specs[] = {
        {"validate", "parse and validate the inputs"},
        {"trace", "state-sum quantum trace"},
        {"holonomy", "Gabella quantum holonomy"},
        {"check", "compare both sides of the main identity"},
        {"classical", "compare the w=1 limit with 2x2 matrix traces"},
        {"report", "full per-state report"},
    };
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("surface", cfg.surface_path, "surface file (.surf)")->required();
        sub->add_option("tangle", cfg.tangle_path, "tangle file (.tng)")->required();
        sub->add_flag("--json", cfg.json, "emit JSON");
        sub->add_option("--threads", cfg.threads, "worker threads for the state sum (0 = default)")
            ->check(CLI::NonNegativeNumber);
        if (std::string(s.name) == "holonomy")
            sub->add_flag("--original-normalization", cfg.original, "use X-hat exponents (b_e+|b_e|)/2");
        if (std::string(s.name) == "check") sub->add_flag("--terms", cfg.terms, "print every term report");
        sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        return run_command(cfg, out);
    } catch (const Error& e) {
        if (cfg.json)
            out << json{{"schema", 1}, {"command", cfg.command}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}}
                       .dump(2)
                << "\n";
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        if (cfg.json)
            out << json{{"schema", 1}, {"command", cfg.command}, {"error", {{"kind", "InputError"}, {"message", e.what()}}}}
                       .dump(2)
                << "\n";
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qtrace::cli
