#include "cqed/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/io.hpp"

namespace cqed {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

void check_finite(double x, const std::string& what) {
    if (!std::isfinite(x)) throw invalid_parameter(what + " must be finite");
}

// Names must carry the kind letter so that serialize() stays parseable.
std::string checked_name(const std::string& name, char prefix) {
    const std::string u = upper(name);
    if (u.empty() || u[0] != prefix)
        throw invalid_parameter("element name '" + name + "' must start with '" +
                                std::string(1, prefix) + "'");
    return u;
}

}  // namespace

void Netlist::add_resistor(const std::string& name, const std::string& np, const std::string& nn,
                           double ohm) {
    const std::string u = checked_name(name, 'R');
    check_finite(ohm, "resistance");
    if (!(ohm > 0.0)) throw invalid_parameter("resistance of " + u + " must be > 0");
    if (find_element(u)) throw invalid_parameter("duplicate element name " + u);
    elements_.push_back({ElementKind::resistor, u, np, nn, ohm, "", ""});
}

void Netlist::add_capacitor(const std::string& name, const std::string& np, const std::string& nn,
                            double farad) {
    const std::string u = checked_name(name, 'C');
    check_finite(farad, "capacitance");
    if (farad == 0.0) throw invalid_parameter("capacitance of " + u + " must be nonzero");
    if (find_element(u)) throw invalid_parameter("duplicate element name " + u);
    elements_.push_back({ElementKind::capacitor, u, np, nn, farad, "", ""});
}

void Netlist::add_inductor(const std::string& name, const std::string& np, const std::string& nn,
                           double henry) {
    const std::string u = checked_name(name, 'L');
    check_finite(henry, "inductance");
    if (henry == 0.0) throw invalid_parameter("inductance of " + u + " must be nonzero");
    if (find_element(u)) throw invalid_parameter("duplicate element name " + u);
    elements_.push_back({ElementKind::inductor, u, np, nn, henry, "", ""});
}

void Netlist::add_mutual(const std::string& name, const std::string& inductor_a,
                         const std::string& inductor_b, double k) {
    const std::string u = checked_name(name, 'K');
    check_finite(k, "coupling coefficient");
    if (!(std::fabs(k) < 1.0))
        throw invalid_parameter("coupling coefficient of " + u + " must satisfy |k| < 1");
    if (find_element(u)) throw invalid_parameter("duplicate element name " + u);
    const std::string la = upper(inductor_a);
    const std::string lb = upper(inductor_b);
    for (const std::string& ind : {la, lb}) {
        const Element* e = find_element(ind);
        if (!e || e->kind != ElementKind::inductor)
            throw invalid_parameter(u + " references undeclared inductor " + ind);
    }
    if (la == lb) throw invalid_parameter(u + " couples " + la + " to itself");
    Element e;
    e.kind = ElementKind::mutual;
    e.name = u;
    e.value = k;
    e.inductor_a = la;
    e.inductor_b = lb;
    elements_.push_back(e);
}

void Netlist::add_source(const std::string& name, const std::string& np, const std::string& nn,
                         double amplitude, double source_r) {
    const std::string u = checked_name(name, 'V');
    check_finite(amplitude, "source amplitude");
    check_finite(source_r, "source resistance");
    if (source_r < 0.0) throw invalid_parameter("source resistance must be >= 0");
    for (const auto& s : sources_)
        if (s.name == u) throw invalid_parameter("duplicate source name " + u);
    sources_.push_back({u, np, nn, amplitude, source_r});
}

void Netlist::add_port(const std::string& name, const std::string& np, const std::string& nn) {
    for (const auto& p : ports_)
        if (p.name == name) throw invalid_parameter("duplicate port name " + name);
    for (const std::string& node : {np, nn})
        if (!has_node(node))
            throw invalid_parameter("port " + name + " references unknown node " + node);
    ports_.push_back({name, np, nn});
}

std::vector<std::string> Netlist::node_names() const {
    std::set<std::string> nodes;
    for (const auto& e : elements_) {
        if (e.kind == ElementKind::mutual) continue;
        nodes.insert(e.node_pos);
        nodes.insert(e.node_neg);
    }
    for (const auto& s : sources_) {
        nodes.insert(s.node_pos);
        nodes.insert(s.node_neg);
    }
    return {nodes.begin(), nodes.end()};
}

bool Netlist::has_node(const std::string& node) const {
    for (const auto& e : elements_) {
        if (e.kind == ElementKind::mutual) continue;
        if (e.node_pos == node || e.node_neg == node) return true;
    }
    for (const auto& s : sources_)
        if (s.node_pos == node || s.node_neg == node) return true;
    return false;
}

const Element* Netlist::find_element(const std::string& name) const {
    const std::string u = upper(name);
    for (const auto& e : elements_)
        if (e.name == u) return &e;
    return nullptr;
}

const Port* Netlist::find_port(const std::string& name) const {
    for (const auto& p : ports_)
        if (p.name == name) return &p;
    return nullptr;
}

double parse_value(const std::string& token) {
    if (token.empty()) throw invalid_parameter("empty value");
    const std::string low = [&] {
        std::string s = token;
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    }();

    // Longest suffix first so "meg" wins over "m".
    static const std::pair<const char*, double> suffixes[] = {
        {"meg", 1e6}, {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9},
        {"u", 1e-6},  {"m", 1e-3},  {"k", 1e3},   {"g", 1e9},
    };

    double mult = 1.0;
    std::string digits = low;
    for (const auto& [suf, m] : suffixes) {
        const std::size_t n = std::string(suf).size();
        if (low.size() > n && low.compare(low.size() - n, n, suf) == 0) {
            // A trailing exponent like "1e" must not be read as engineering "g"/"f".
            mult = m;
            digits = low.substr(0, low.size() - n);
            break;
        }
    }

    char* end = nullptr;
    const double base = std::strtod(digits.c_str(), &end);
    if (end != digits.c_str() + digits.size() || digits.empty())
        throw invalid_parameter("malformed number '" + token + "'");
    if (!std::isfinite(base)) throw invalid_parameter("non-finite number '" + token + "'");
    return base * mult;
}

Netlist parse_netlist(const std::string& text) {
    Netlist nl;
    struct Pending {
        int line;
        std::vector<std::string> tok;
    };
    std::vector<Pending> mutuals, port_lines;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '*') continue;

        const std::string head = upper(tok[0]);
        try {
            if (head == ".PORT") {
                if (tok.size() != 4)
                    throw invalid_parameter(".port expects: .port <name> <n+> <n->");
                port_lines.push_back({line_no, tok});
            } else if (head[0] == 'R' || head[0] == 'C' || head[0] == 'L') {
                if (tok.size() != 4)
                    throw invalid_parameter(std::string(1, head[0]) +
                                            " element expects: name <n+> <n-> <value>");
                const double value = parse_value(tok[3]);
                if (head[0] == 'R') nl.add_resistor(head, tok[1], tok[2], value);
                else if (head[0] == 'C') nl.add_capacitor(head, tok[1], tok[2], value);
                else nl.add_inductor(head, tok[1], tok[2], value);
            } else if (head[0] == 'K') {
                if (tok.size() != 4)
                    throw invalid_parameter("K element expects: name L<a> L<b> <k>");
                parse_value(tok[3]);  // surface malformed numbers on the K line itself
                mutuals.push_back({line_no, tok});
            } else if (head[0] == 'V') {
                if (tok.size() != 5 && tok.size() != 6)
                    throw invalid_parameter("V source expects: name <n+> <n-> AC <amp> [<Rs>]");
                if (upper(tok[3]) != "AC")
                    throw invalid_parameter("V source supports AC analysis only");
                const double amp = parse_value(tok[4]);
                const double rs = tok.size() == 6 ? parse_value(tok[5]) : 0.0;
                nl.add_source(head, tok[1], tok[2], amp, rs);
            } else {
                throw invalid_parameter("unknown element kind '" + tok[0] + "'");
            }
        } catch (const invalid_parameter& e) {
            throw netlist_error(e.what(), line_no);
        }
    }

    // Couplings and ports may reference statements that appear later in the file.
    for (const auto& m : mutuals) {
        try {
            nl.add_mutual(upper(m.tok[0]), m.tok[1], m.tok[2], parse_value(m.tok[3]));
        } catch (const invalid_parameter& e) {
            throw netlist_error(e.what(), m.line);
        }
    }
    for (const auto& p : port_lines) {
        try {
            nl.add_port(p.tok[1], p.tok[2], p.tok[3]);
        } catch (const invalid_parameter& e) {
            throw netlist_error(e.what(), p.line);
        }
    }

    if (!nl.elements().empty() || !nl.sources().empty()) {
        if (!nl.has_node("0")) throw netlist_error("no ground node \"0\" referenced");
    }
    return nl;
}

std::string serialize(const Netlist& nl) {
    std::ostringstream out;
    for (const auto& e : nl.elements()) {
        if (e.kind == ElementKind::mutual)
            out << e.name << ' ' << e.inductor_a << ' ' << e.inductor_b << ' '
                << format_g17(e.value) << '\n';
        else
            out << e.name << ' ' << e.node_pos << ' ' << e.node_neg << ' '
                << format_g17(e.value) << '\n';
    }
    for (const auto& s : nl.sources()) {
        out << s.name << ' ' << s.node_pos << ' ' << s.node_neg << " AC "
            << format_g17(s.amplitude);
        if (s.source_r != 0.0) out << ' ' << format_g17(s.source_r);
        out << '\n';
    }
    for (const auto& p : nl.ports())
        out << ".port " << p.name << ' ' << p.node_pos << ' ' << p.node_neg << '\n';
    return out.str();
}

}  // namespace cqed
