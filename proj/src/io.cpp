#include "disclosure/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "disclosure/errors.hpp"

namespace disclosure::io {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ConfigError(std::string("malformed ") + what + " record");
    return j;
}

std::vector<double> split_reals(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty()) throw ConfigError("empty numeric field in: " + text);
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError("not a number: " + item);
        out.push_back(v);
    }
    return out;
}

Prior prior_from_json(const json& j) {
    const std::string family = j.value("family", "");
    if (family == "uniform") return Prior::uniform();
    if (family == "beta") {
        if (!j.contains("a") || !j.contains("b"))
            throw ConfigError("beta prior record needs fields a and b");
        return Prior::beta(j["a"].get<double>(), j["b"].get<double>());
    }
    if (family == "piecewise") {
        if (!j.contains("knots"))
            throw ConfigError("piecewise prior record needs knots");
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j["knots"]) {
            if (!k.is_array() || k.size() != 2)
                throw ConfigError("piecewise knots must be [x, Fx] pairs");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        return Prior::piecewise_linear(knots);
    }
    throw ConfigError("unknown prior family: " + family);
}

CostSpec cost_from_json(const json& j, double mu, double kappa) {
    if (j.contains("kappa")) kappa = j["kappa"].get<double>();
    const std::string kind = j.value("kind", "");
    if (kind == "quadratic") return CostSpec::quadratic(mu, kappa);
    if (kind == "blend")
        return CostSpec::quad_quartic_blend(j.value("a", 1.0), j.value("b", 0.0),
                                            mu, kappa);
    if (kind == "polynomial") {
        if (!j.contains("coeffs"))
            throw ConfigError("polynomial cost record needs coeffs");
        return CostSpec::polynomial(j["coeffs"].get<std::vector<double>>(), mu,
                                    kappa);
    }
    throw ConfigError("unknown cost kind: " + kind);
}

json atoms_json(const PosteriorDist& g) {
    json arr = json::array();
    for (const Atom& a : g.atoms())
        arr.push_back(json::array({round_sig(a.x), round_sig(a.w)}));
    return arr;
}

void csv_row(std::ostringstream& os, const SweepRow& r) {
    os << format_sig(r.kappa) << ',' << format_sig(r.gamma) << ','
       << to_string(r.eq.kind) << ',' << format_sig(r.eq.alpha) << ','
       << format_sig(r.welfare.sender) << ',' << format_sig(r.welfare.receiver)
       << ',' << format_sig(r.welfare.gross) << ','
       << format_sig(r.welfare.info_cost) << ','
       << format_sig(r.welfare.cert_cost_paid) << ','
       << format_sig(r.eq.cert_probability) << ','
       << format_sig(r.eq.residual) << '\n';
}

}  // namespace

double round_sig(double v) { return std::strtod(format_sig(v).c_str(), nullptr); }

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

json to_json(const Equilibrium& eq) {
    json j;
    j["kind"] = to_string(eq.kind);
    j["alpha"] = round_sig(eq.alpha);
    j["atoms"] = atoms_json(eq.g);
    j["cert_threshold"] = round_sig(eq.cert_threshold);
    j["cert_probability"] = round_sig(eq.cert_probability);
    j["sender"] = round_sig(eq.sender_payoff);
    j["receiver"] = round_sig(eq.receiver_payoff);
    j["residual"] = round_sig(eq.residual);
    j["at_boundary"] = eq.at_boundary;
    return j;
}

json to_json(const EquilibriumSet& set, json meta) {
    json j;
    j["equilibria"] = json::array();
    for (const Equilibrium& eq : set.equilibria)
        j["equilibria"].push_back(to_json(eq));
    if (set.family) {
        json fam;
        fam["alpha_lo"] = round_sig(set.family->alpha_lo);
        fam["alpha_hi"] = round_sig(set.family->alpha_hi);
        fam["support_gap"] = round_sig(set.family->support_gap);
        fam["samples"] = json::array();
        for (const Equilibrium& eq : set.family->samples)
            fam["samples"].push_back(to_json(eq));
        meta["family"] = std::move(fam);
    }
    j["meta"] = std::move(meta);
    return j;
}

json to_json(const Kappa0Benchmark& b) {
    json j;
    j["no_certification"] = b.no_certification;
    j["x_star"] = round_sig(b.x_star);
    j["alpha"] = round_sig(b.alpha);
    j["worst_atoms"] = atoms_json(b.worst_g);
    j["sender"] = round_sig(b.sender_payoff);
    j["receiver_worst"] = round_sig(b.receiver_payoff_worst);
    j["receiver_best"] = round_sig(b.receiver_payoff_best);
    return j;
}

std::string region_csv(const std::vector<RegionCell>& cells) {
    std::ostringstream os;
    os << "kappa,gamma,region,n_equilibria\n";
    for (const RegionCell& c : cells)
        os << format_sig(c.kappa) << ',' << format_sig(c.gamma) << ','
           << to_string(c.region) << ',' << c.n_equilibria << '\n';
    return os.str();
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream os;
    os << "kappa,gamma,kind,alpha,sender,receiver,gross,info_cost,"
          "cert_cost_paid,cert_probability,residual\n";
    for (const SweepRow& r : table.rows) csv_row(os, r);
    return os.str();
}

std::string limit_csv(const KappaLimitReport& rep) {
    std::ostringstream os;
    os << "kappa,has_learning,alpha,atom_lo,weight_lo,atom_hi,weight_hi,"
          "distance\n";
    for (const KappaLimitRow& r : rep.rows) {
        os << format_sig(r.kappa) << ',' << (r.has_learning ? 1 : 0) << ',';
        if (r.has_learning) {
            const auto& atoms = r.g.atoms();
            const Atom lo = atoms.front();
            const Atom hi = atoms.back();
            os << format_sig(r.alpha) << ',' << format_sig(lo.x) << ','
               << format_sig(lo.w) << ',' << format_sig(hi.x) << ','
               << format_sig(hi.w) << ',' << format_sig(r.distance);
        } else {
            os << ",,,,,";
        }
        os << '\n';
    }
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open output file: " + path);
        out << content;
        if (!out.flush()) throw ConfigError("failed writing: " + path);
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("failed to finalize output file: " + path);
}

Prior parse_prior(const std::string& text) {
    if (text.empty()) throw ConfigError("empty prior spec");
    if (text[0] == '@') return prior_from_json(
        parse_json_text(slurp(text.substr(1)), "prior"));
    if (text[0] == '{') return prior_from_json(parse_json_text(text, "prior"));
    if (text == "uniform") return Prior::uniform();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "beta") {
        const auto v = split_reals(tail, ',');
        if (v.size() != 2) throw ConfigError("beta prior wants beta:A,B");
        return Prior::beta(v[0], v[1]);
    }
    if (head == "pwl") {
        std::vector<std::pair<double, double>> knots;
        std::stringstream ss(tail);
        std::string part;
        while (std::getline(ss, part, ';')) {
            const auto v = split_reals(part, ',');
            if (v.size() != 2)
                throw ConfigError("pwl knots want x,F pairs separated by ;");
            knots.emplace_back(v[0], v[1]);
        }
        return Prior::piecewise_linear(knots);
    }
    throw ConfigError("unknown prior spec: " + text);
}

CostSpec parse_cost(const std::string& text, double mu, double kappa) {
    if (text.empty()) throw ConfigError("empty cost spec");
    if (text[0] == '@')
        return cost_from_json(parse_json_text(slurp(text.substr(1)), "cost"),
                              mu, kappa);
    if (text[0] == '{')
        return cost_from_json(parse_json_text(text, "cost"), mu, kappa);
    if (text == "quadratic") return CostSpec::quadratic(mu, kappa);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "blend") {
        const auto v = split_reals(tail, ',');
        if (v.size() != 2) throw ConfigError("blend cost wants blend:A,B");
        return CostSpec::quad_quartic_blend(v[0], v[1], mu, kappa);
    }
    if (head == "poly")
        return CostSpec::polynomial(split_reals(tail, ','), mu, kappa);
    throw ConfigError("unknown cost spec: " + text);
}

std::vector<double> parse_grid(const std::string& text, int max_points) {
    const auto v = split_reals(text, ':');
    if (v.size() != 3) throw ConfigError("grid wants lo:hi:n, got: " + text);
    const double lo = v[0], hi = v[1];
    const double n_real = v[2];
    const int n = int(n_real);
    if (n != n_real || n < 1 || n > max_points)
        throw ConfigError("grid point count out of range in: " + text);
    if (n == 1) {
        if (lo != hi) throw ConfigError("grid with n=1 needs lo == hi");
        return {lo};
    }
    if (!(hi > lo)) throw ConfigError("grid needs hi > lo in: " + text);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    return split_reals(text, ',');
}

}  // namespace disclosure::io
