#include "qtrace/surface.hpp"

#include "qtrace/errors.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace qtrace {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

bool Triangulation::is_self_folded(int e) const {
    const auto& occ = occurrences.at(e);
    return occ.size() == 2 && occ[0].tri == occ[1].tri;
}

int Triangulation::edge_index(std::string_view name) const {
    for (int i = 0; i < num_edges(); ++i)
        if (edge_names[i] == name) return i;
    throw UnknownEdge("no edge named '" + std::string(name) + "'");
}

int Triangulation::triangle_index(std::string_view name) const {
    for (int i = 0; i < num_triangles(); ++i)
        if (triangles[i].name == name) return i;
    throw ParseError("no triangle named '" + std::string(name) + "'");
}

Triangulation parse_surface(std::string_view text) {
    Triangulation T;
    std::map<std::string, int, std::less<>> edge_ids;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw != "triangle") throw ParseError(where() + "expected 'triangle'");
        std::string rest;
        std::getline(ls, rest);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw ParseError(where() + "missing ':'");
        std::string name = trim(rest.substr(0, colon));
        if (!is_identifier(name)) throw ParseError(where() + "bad triangle name '" + name + "'");
        for (const auto& t : T.triangles)
            if (t.name == name) throw ParseError(where() + "duplicate triangle '" + name + "'");
        std::istringstream es(rest.substr(colon + 1));
        std::vector<std::string> labels;
        for (std::string l; es >> l;) labels.push_back(l);
        if (labels.size() != 3) throw ParseError(where() + "a triangle needs exactly 3 edges");
        Triangle tri;
        tri.name = name;
        int ti = T.num_triangles();
        for (int s = 0; s < 3; ++s) {
            if (!is_identifier(labels[s]))
                throw ParseError(where() + "bad edge label '" + labels[s] + "'");
            auto [it, fresh] = edge_ids.try_emplace(labels[s], T.num_edges());
            if (fresh) {
                T.edge_names.push_back(labels[s]);
                T.occurrences.emplace_back();
            }
            int e = it->second;
            if (T.occurrences[e].size() == 2)
                throw GluingError(where() + "edge '" + labels[s] + "' used more than twice");
            T.occurrences[e].push_back({ti, s});
            tri.edges[s] = e;
        }
        T.triangles.push_back(tri);
    }
    if (T.triangles.empty()) throw ParseError("surface has no triangles");

    std::vector<int> parent(T.num_triangles());
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& occ : T.occurrences)
        if (occ.size() == 2) parent[find_root(parent, occ[0].tri)] = find_root(parent, occ[1].tri);
    for (int t = 0; t < T.num_triangles(); ++t)
        if (find_root(parent, t) != find_root(parent, 0))
            throw ConnectivityError("triangle '" + T.triangles[t].name +
                                    "' is not glued to the rest of the surface");
    return T;
}

ExchangeMatrix exchange_matrix(const Triangulation& T) {
    int n = T.num_edges();
    ExchangeMatrix eps(n, std::vector<int>(n, 0));
    for (const auto& t : T.triangles)
        for (int s = 0; s < 3; ++s) {
            int e = t.edges[s], f = t.edges[(s + 1) % 3];
            eps[e][f] += 1;
            eps[f][e] -= 1;
        }
    return eps;
}

bool EdgeCopy::out_side() const { return !name.empty() && name.back() != '\''; }

int SplitStructure::copy_index(std::string_view name) const {
    for (int i = 0; i < num_copies(); ++i)
        if (copies[i].name == name) return i;
    throw UnknownEdge("no split edge copy named '" + std::string(name) + "'");
}

SplitStructure split(const Triangulation& T) {
    SplitStructure S;
    S.T = &T;
    S.slot_copy.assign(T.num_triangles(), {-1, -1, -1});
    for (int e = 0; e < T.num_edges(); ++e) {
        const auto& occ = T.occurrences[e];
        EdgeCopy out{e, T.edge_names[e], occ[0]};
        EdgeCopy in{e, T.edge_names[e] + "'", std::nullopt};
        if (occ.size() == 2) in.facing = occ[1];
        S.copies.push_back(out);
        S.copies.push_back(in);
        S.slot_copy[occ[0].tri][occ[0].side] = SplitStructure::out_copy(e);
        if (occ.size() == 2) S.slot_copy[occ[1].tri][occ[1].side] = SplitStructure::in_copy(e);
    }
    return S;
}

}  // namespace qtrace
