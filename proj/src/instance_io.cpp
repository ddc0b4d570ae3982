#include "corrsim/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace corrsim::io {

using nlohmann::json;

namespace {

std::complex<double> parse_entry(const json& cell, const std::string& where) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw std::invalid_argument(where + ": expected a two-element [re, im] array");
    return {cell[0].get<double>(), cell[1].get<double>()};
}

quantum::Matrix parse_matrix(const json& j, const std::string& name, int rows, int cols) {
    if (!j.contains(name)) throw std::invalid_argument(name + ": missing field");
    const json& m = j.at(name);
    if (!m.is_array() || static_cast<int>(m.size()) != rows)
        throw std::invalid_argument(name + ": expected " + std::to_string(rows) + " rows");
    quantum::Matrix out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = m[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument(name + "[" + std::to_string(r) + "]: expected " +
                                        std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            std::ostringstream where;
            where << name << "[" << r << "][" << c << "]";
            out(r, c) = parse_entry(row[static_cast<std::size_t>(c)], where.str());
        }
    }
    return out;
}

json matrix_to_json(const quantum::Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Instance parse_instance(const json& j) {
    if (!j.contains("d") || !j.at("d").is_number_integer())
        throw std::invalid_argument("d: missing or not an integer");
    const int d = j.at("d").get<int>();
    if (d < 2) throw std::invalid_argument("d: must be >= 2");

    quantum::Matrix rho_m = parse_matrix(j, "rho", d * d, d * d);
    quantum::Matrix a_m = parse_matrix(j, "A", d, d);
    quantum::Matrix b_m = parse_matrix(j, "B", d, d);
    try {
        return Instance{quantum::DensityMatrix(d, std::move(rho_m)),
                        quantum::Observable(std::move(a_m)), quantum::Observable(std::move(b_m))};
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("instance validation: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json j;
    in >> j;
    return parse_instance(j);
}

json instance_to_json(const Instance& inst) {
    json j;
    j["d"] = inst.rho.local_dim();
    j["rho"] = matrix_to_json(inst.rho.entries());
    j["A"] = matrix_to_json(inst.A.entries());
    j["B"] = matrix_to_json(inst.B.entries());
    return j;
}

json reduced_to_json(const quantum::ReducedVectors& rv) {
    json j;
    j["n"] = rv.a.dim();
    j["a"] = rv.a.components();
    j["b"] = rv.b.components();
    j["inner_product"] = dot(rv.a, rv.b);
    j["expectation"] = rv.source_expectation;
    j["identity_abs_error"] = std::abs(dot(rv.a, rv.b) - rv.source_expectation);
    j["raw_norm_a"] = rv.raw_norm_a;
    j["raw_norm_b"] = rv.raw_norm_b;
    return j;
}

std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write to " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

} // namespace corrsim::io
