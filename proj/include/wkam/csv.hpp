#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkam/limit.hpp"
#include "wkam/measures.hpp"
#include "wkam/occupation.hpp"
#include "wkam/util.hpp"
#include "wkam/value_function.hpp"

namespace wkam::csv {

// 17 significant digits: doubles round-trip exactly, files stay diffable.
inline std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

inline void write_value_function(const std::string& path, const ValueFunction& u) {
    auto out = open(path);
    out << "i,x,u\n";
    for (int i = 0; i < u.size(); ++i)
        out << i << ',' << format(u.scheme.position(i)) << ',' << format(u[i]) << '\n';
}

inline void write_matrix(const std::string& path, const Matrix& m) {
    auto out = open(path);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << format(m(r, c));
        }
        out << '\n';
    }
}

inline void write_scalar(const std::string& path, const std::string& name, double value) {
    auto out = open(path);
    out << name << '\n' << format(value) << '\n';
}

inline void write_index_list(const std::string& path, const std::vector<int>& indices) {
    auto out = open(path);
    out << "node\n";
    for (int i : indices) out << i << '\n';
}

inline void write_measure(const std::string& path, const ClosedMeasure& mu,
                          const CostGraph& graph) {
    auto out = open(path);
    out << "i,j,weight\n";
    for (std::size_t k = 0; k < mu.edge_ids.size(); ++k) {
        const Edge& e = graph.edges[static_cast<std::size_t>(mu.edge_ids[k])];
        out << e.from << ',' << e.to << ',' << format(mu.weights[k]) << '\n';
    }
}

inline void write_convergence(const std::string& path, const ConvergenceTable& table) {
    auto out = open(path);
    out << "lambda,sup_error,lip,norm\n";
    for (const auto& row : table.rows)
        out << format(row.lambda) << ',' << format(row.sup_error) << ',' << format(row.lipschitz)
            << ',' << format(row.norm) << '\n';
}

inline void write_diagnostics(const std::string& path, const DiagnosticsTable& table) {
    auto out = open(path);
    out << "lambda,closedness_residual,action_gap,tv_to_mather_hull\n";
    for (const auto& row : table.rows)
        out << format(row.lambda) << ',' << format(row.closedness_residual) << ','
            << format(row.action_gap) << ',' << format(row.tv_to_hull) << '\n';
}

} // namespace wkam::csv
