#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cqed {

enum class ElementKind { resistor, capacitor, inductor, mutual };

struct Element {
    ElementKind kind = ElementKind::resistor;
    std::string name;                     // uppercase, prefix letter included
    std::string node_pos, node_neg;       // empty for mutual couplings
    double value = 0.0;                   // ohm / F / H / coupling coefficient
    std::string inductor_a, inductor_b;   // mutual couplings only
};

struct AcSource {
    std::string name;  // uppercase, V prefix
    std::string node_pos, node_neg;
    double amplitude = 0.0;  // V
    double source_r = 0.0;   // ohm, 0 = ideal
};

struct Port {
    std::string name;
    std::string node_pos, node_neg;
};

// Linear AC network. Nodes are created implicitly by reference; "0" is ground.
// Construction rules: R > 0, L != 0, C != 0 (negative L/C allowed), |k| < 1,
// element names unique within their kind. Violations throw invalid_parameter.
class Netlist {
public:
    void add_resistor(const std::string& name, const std::string& np, const std::string& nn,
                      double ohm);
    void add_capacitor(const std::string& name, const std::string& np, const std::string& nn,
                       double farad);
    void add_inductor(const std::string& name, const std::string& np, const std::string& nn,
                      double henry);
    // Both named inductors must already exist.
    void add_mutual(const std::string& name, const std::string& inductor_a,
                    const std::string& inductor_b, double k);
    void add_source(const std::string& name, const std::string& np, const std::string& nn,
                    double amplitude, double source_r = 0.0);
    // Port nodes must already be referenced by an element or source.
    void add_port(const std::string& name, const std::string& np, const std::string& nn);

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<AcSource>& sources() const { return sources_; }
    const std::vector<Port>& ports() const { return ports_; }

    std::vector<std::string> node_names() const;  // sorted, includes "0" when referenced
    bool has_node(const std::string& node) const;
    const Element* find_element(const std::string& name) const;
    const Port* find_port(const std::string& name) const;

private:
    std::vector<Element> elements_;
    std::vector<AcSource> sources_;
    std::vector<Port> ports_;
};

// Engineering-notation value: float with optional case-insensitive suffix
// f/p/n/u/m/k/meg/g, longest match first. Throws invalid_parameter.
double parse_value(const std::string& token);

// Grammar, one statement per line ("0" is ground, "*" starts a comment line):
//   R<name> <n+> <n-> <value>
//   C<name> <n+> <n-> <value>
//   L<name> <n+> <n-> <value>
//   K<name> L<a> L<b> <k>
//   V<name> <n+> <n-> AC <amplitude> [<source_R>]
//   .port <name> <n+> <n->
// Errors carry the 1-based line number.
Netlist parse_netlist(const std::string& text);

// Emits the grammar above; parse_netlist(serialize(nl)) reproduces nl exactly.
std::string serialize(const Netlist& nl);

}  // namespace cqed
