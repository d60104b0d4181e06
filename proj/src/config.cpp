#include "swnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace swnet {
namespace {

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double to_number(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + tok + "'");
    }
}

std::vector<double> to_numbers(const std::vector<std::string>& toks, std::size_t from,
                               const std::string& where) {
    std::vector<double> v;
    for (std::size_t i = from; i < toks.size(); ++i) v.push_back(to_number(toks[i], where));
    return v;
}

ProfileSpec to_profile(const std::vector<std::string>& toks, const std::string& where) {
    if (toks.empty()) throw ConfigError(where + ": empty profile");
    ProfileSpec p;
    p.kind = toks[0];
    p.params = to_numbers(toks, 1, where);
    return p;
}

struct RawSection {
    std::string name;
    std::map<std::string, std::vector<std::string>> kv;
    std::string origin;

    const std::vector<std::string>* find(const std::string& key) const {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    }
};

}  // namespace

NetworkConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<RawSection> sections;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        {
            auto a = line.find_first_not_of(" \t\r");
            auto b = line.find_last_not_of(" \t\r");
            if (a != std::string::npos) trimmed = line.substr(a, b - a + 1);
        }
        if (trimmed.empty()) continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') throw ConfigError(where + ": malformed section header");
            sections.push_back({trimmed.substr(1, trimmed.size() - 2), {}, where});
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        if (sections.empty()) throw ConfigError(where + ": key outside any section");
        std::string key = trimmed.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        const std::string val = trimmed.substr(eq + 1);
        if (!sections.back().kv.emplace(key, tokenize(val)).second)
            throw ConfigError(where + ": duplicate key '" + key + "'");
    }

    NetworkConfig cfg;
    bool have_run = false;
    for (const RawSection& sec : sections) {
        const std::string& name = sec.name;
        auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
            for (const auto& [k, v] : sec.kv) {
                if (std::find_if(allowed.begin(), allowed.end(),
                                 [&](const char* a) { return k == a; }) == allowed.end())
                    throw ConfigError(sec.origin + " [" + name + "]: unknown key '" + k + "'");
            }
        };
        auto require = [&](const char* key) -> const std::vector<std::string>& {
            const auto* v = sec.find(key);
            if (!v) throw ConfigError(sec.origin + " [" + name + "]: missing key '" + key + "'");
            return *v;
        };

        if (name.rfind("edge.", 0) == 0) {
            reject_unknown({"length", "cells", "model", "h", "surface", "q", "bottom"});
            EdgeConfig e;
            e.id = name.substr(5);
            if (e.id.empty()) throw ConfigError(sec.origin + ": edge section without id");
            e.length = to_number(require("length").at(0), name);
            e.cells = static_cast<int>(to_number(require("cells").at(0), name));
            if (const auto* v = sec.find("model")) e.model = v->at(0);
            if (const auto* v = sec.find("h")) e.h = to_profile(*v, name);
            if (const auto* v = sec.find("surface")) e.surface = to_profile(*v, name);
            if (const auto* v = sec.find("q")) e.q = to_profile(*v, name);
            if (const auto* v = sec.find("bottom")) e.bottom = to_profile(*v, name);
            if (e.h.empty() == e.surface.empty())
                throw ConfigError(sec.origin + " [" + name +
                                  "]: exactly one of 'h' or 'surface' must be given");
            if (e.q.empty()) e.q = ProfileSpec{"constant", {0.0}};
            cfg.edges.push_back(std::move(e));
        } else if (name.rfind("vertex.", 0) == 0) {
            reject_unknown({"endpoints", "coupling", "area", "w0"});
            VertexConfig v;
            v.id = name.substr(7);
            if (v.id.empty()) throw ConfigError(sec.origin + ": vertex section without id");
            for (const std::string& tok : require("endpoints")) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw ConfigError(sec.origin + " [" + name + "]: endpoint '" + tok +
                                      "' must look like edge:left or edge:right");
                const std::string side = tok.substr(colon + 1);
                if (side != "left" && side != "right")
                    throw ConfigError(sec.origin + " [" + name + "]: endpoint side '" + side +
                                      "' must be left or right");
                v.endpoints.emplace_back(tok.substr(0, colon), side == "right");
            }
            if (const auto* k = sec.find("coupling")) v.coupling = k->at(0);
            if (const auto* k = sec.find("area")) v.area = to_number(k->at(0), name);
            if (const auto* k = sec.find("w0")) v.w0 = to_numbers(*k, 0, name);
            cfg.verts.push_back(std::move(v));
        } else if (name == "run") {
            reject_unknown({"order", "solver", "cfl", "t_end", "ode_samples", "snapshots"});
            have_run = true;
            if (const auto* k = sec.find("order"))
                cfg.run.order = static_cast<int>(to_number(k->at(0), name));
            if (const auto* k = sec.find("solver")) cfg.run.solver = k->at(0);
            if (const auto* k = sec.find("cfl")) cfg.run.cfl = to_number(k->at(0), name);
            if (const auto* k = sec.find("t_end")) cfg.run.t_end = to_number(k->at(0), name);
            if (const auto* k = sec.find("ode_samples"))
                cfg.run.ode_samples = static_cast<int>(to_number(k->at(0), name));
            if (const auto* k = sec.find("snapshots")) cfg.run.snapshots = to_numbers(*k, 0, name);
        } else if (name == "lump") {
            reject_unknown({"edges"});
            cfg.lump_edges = require("edges");
        } else {
            throw ConfigError(sec.origin + ": unknown section [" + name + "]");
        }
    }
    if (!have_run) throw ConfigError(origin + ": missing [run] section");
    if (cfg.run.solver != "tt" && cfg.run.solver != "heoc")
        throw ConfigError(origin + ": solver must be tt or heoc");
    if (cfg.run.snapshots.empty()) cfg.run.snapshots = {cfg.run.t_end};
    return cfg;
}

NetworkConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string render_config(const NetworkConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    auto put_profile = [&os](const char* key, const ProfileSpec& p) {
        if (p.empty()) return;
        os << key << " = " << p.kind;
        for (double v : p.params) os << " " << v;
        os << "\n";
    };
    for (const EdgeConfig& e : cfg.edges) {
        os << "[edge." << e.id << "]\n";
        os << "length = " << e.length << "\n";
        os << "cells = " << e.cells << "\n";
        if (e.model != "swe") os << "model = " << e.model << "\n";
        put_profile("h", e.h);
        put_profile("surface", e.surface);
        put_profile("q", e.q);
        put_profile("bottom", e.bottom);
        os << "\n";
    }
    for (const VertexConfig& v : cfg.verts) {
        os << "[vertex." << v.id << "]\n";
        os << "endpoints =";
        for (const auto& [eid, right] : v.endpoints)
            os << " " << eid << ":" << (right ? "right" : "left");
        os << "\n";
        os << "coupling = " << v.coupling << "\n";
        if (v.coupling == "manhole") os << "area = " << v.area << "\n";
        if (!v.w0.empty()) {
            os << "w0 =";
            for (double w : v.w0) os << " " << w;
            os << "\n";
        }
        os << "\n";
    }
    if (!cfg.lump_edges.empty()) {
        os << "[lump]\nedges =";
        for (const std::string& e : cfg.lump_edges) os << " " << e;
        os << "\n\n";
    }
    os << "[run]\n";
    os << "order = " << cfg.run.order << "\n";
    os << "solver = " << cfg.run.solver << "\n";
    if (cfg.run.cfl > 0) os << "cfl = " << cfg.run.cfl << "\n";
    os << "t_end = " << cfg.run.t_end << "\n";
    os << "ode_samples = " << cfg.run.ode_samples << "\n";
    if (!cfg.run.snapshots.empty()) {
        os << "snapshots =";
        for (double t : cfg.run.snapshots) os << " " << t;
        os << "\n";
    }
    return os.str();
}

Network build_network(const NetworkConfig& cfg) {
    Network net;
    for (const EdgeConfig& ec : cfg.edges) {
        Edge e;
        e.id = ec.id;
        if (!(ec.length > 0.0))
            throw NetworkError("edge " + ec.id + ": length must be positive");
        if (ec.cells < 1) throw NetworkError("edge " + ec.id + ": cells must be positive");
        e.length = ec.length;
        e.cells = ec.cells;
        e.dx = ec.length / ec.cells;
        e.model = make_model(ec.model);
        if (!ec.bottom.empty()) {
            if (ec.model != "swe")
                throw NetworkError("edge " + ec.id + ": bottom profiles require the swe model");
            const Profile bp = Profile::make(ec.bottom, ec.length);
            if (bp.is_step())
                throw NetworkError("edge " + ec.id + ": bottom profile must be smooth");
            e.bottom = bp.smooth();
            e.bottom_cell_mean.resize(e.cells);
            e.bottom_interface.resize(e.cells + 1);
            for (int i = 0; i <= e.cells; ++i) e.bottom_interface[i] = e.bottom(i * e.dx);
            for (int i = 0; i < e.cells; ++i)
                e.bottom_cell_mean[i] = e.bottom.mean(i * e.dx, (i + 1) * e.dx);
        }
        const Profile q = Profile::make(ec.q, ec.length);
        e.u.resize(e.cells);
        if (!ec.h.empty()) {
            const Profile h = Profile::make(ec.h, ec.length);
            for (int i = 0; i < e.cells; ++i)
                e.u[i] = {h.mean(i * e.dx, (i + 1) * e.dx), q.mean(i * e.dx, (i + 1) * e.dx)};
        } else {
            const Profile H = Profile::make(ec.surface, ec.length);
            for (int i = 0; i < e.cells; ++i) {
                const double bmean = e.has_bottom() ? e.bottom_cell_mean[i] : 0.0;
                e.u[i] = {H.mean(i * e.dx, (i + 1) * e.dx) - bmean,
                          q.mean(i * e.dx, (i + 1) * e.dx)};
            }
        }
        for (int i = 0; i < e.cells; ++i)
            if (!e.model->admissible(e.u[i]))
                throw NetworkError("edge " + ec.id + ": inadmissible initial state in cell " +
                                   std::to_string(i));
        net.edges.push_back(std::move(e));
    }

    for (const VertexConfig& vc : cfg.verts) {
        Vertex v;
        v.id = vc.id;
        if (vc.endpoints.empty())
            throw NetworkError("vertex " + vc.id + ": no endpoints attached");
        for (const auto& [eid, right] : vc.endpoints) {
            const int ei = net.edge_index(eid);
            if (ei < 0)
                throw NetworkError("vertex " + vc.id + ": dangling endpoint, no edge '" + eid +
                                   "'");
            if (net.edges[ei].vertex[right ? 1 : 0] != -1)
                throw NetworkError("vertex " + vc.id + ": endpoint " + eid + ":" +
                                   (right ? "right" : "left") + " is attached twice");
            net.edges[ei].vertex[right ? 1 : 0] = static_cast<int>(net.verts.size());
            v.ends.push_back({ei, right});
        }
        const double g = 9.81;
        v.coupling = make_coupling(vc.coupling, static_cast<int>(vc.endpoints.size()), vc.area, g);
        if (v.coupling.l > 0) v.tank_area = vc.area;
        if (static_cast<int>(vc.w0.size()) != v.coupling.l)
            throw NetworkError("vertex " + vc.id + ": w0 must have " +
                               std::to_string(v.coupling.l) + " components");
        v.w = vc.w0;
        net.verts.push_back(std::move(v));
    }
    return net;
}

}  // namespace swnet
