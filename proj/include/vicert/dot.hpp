#pragma once

#include <string>

#include "engine.hpp"

namespace vicert {

// Graphviz rendering of a Greechie diagram: observables are labeled nodes,
// each context is a small point node connected to its members (hyperedge
// style, so shared observables stay readable). With an assignment, value-1
// observables render as filled boxes, value-0 as filled circles, undefined as
// hollow circles.
template <class S>
std::string export_dot(const Diagram<S>& d, const Assignment* assignment = nullptr,
                       const std::string& timestamp = "") {
    std::string out = "graph greechie {\n";
    if (!timestamp.empty()) out += "  // generated " + timestamp + "\n";
    out += "  layout=neato;\n  node [fontsize=10];\n";
    for (const auto& o : d.observables) {
        std::string label = o.label.empty() ? std::to_string(o.id) : o.label;
        std::string style;
        if (assignment) {
            auto it = assignment->find(o.id);
            if (it == assignment->end())
                style = "shape=circle";
            else if (it->second == 1)
                style = "shape=box, style=filled, fillcolor=black, fontcolor=white";
            else
                style = "shape=circle, style=filled, fillcolor=gray75";
        } else {
            style = "shape=circle";
        }
        out += "  n" + std::to_string(o.id) + " [label=\"" + label + "\", " + style + "];\n";
    }
    for (std::size_t ci = 0; ci < d.contexts.size(); ++ci) {
        std::string cnode = "c" + std::to_string(ci);
        out += "  " + cnode + " [shape=point, width=0.05, label=\"\"];\n";
        for (int id : d.contexts[ci].members) out += "  n" + std::to_string(id) + " -- " + cnode + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace vicert
