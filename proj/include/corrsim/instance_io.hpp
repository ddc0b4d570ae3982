#ifndef CORRSIM_INSTANCE_IO_HPP
#define CORRSIM_INSTANCE_IO_HPP

#include "corrsim/quantum.hpp"

#include <json.hpp>

#include <string>

namespace corrsim::io {

/// A quantum problem instance: {"d": int, "rho": M, "A": M, "B": M} with
/// every matrix row-major and every complex entry a two-element [re, im]
/// array. rho is d^2 x d^2, A and B are d x d.
struct Instance {
    quantum::DensityMatrix rho;
    quantum::Observable A;
    quantum::Observable B;
};

/// Parses and validates; errors name the offending field, e.g. "rho[2][3]".
Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::string& path);

nlohmann::json instance_to_json(const Instance& inst);

/// Serialization of the reduction output (vectors plus the verified
/// inner-product identity).
nlohmann::json reduced_to_json(const quantum::ReducedVectors& rv);

/// Writes atomically: the content lands in a temp file first and is renamed
/// into place. path "-" writes to stdout.
void write_text_atomic(const std::string& path, const std::string& content);

/// 17-significant-digit formatting; the printed value parses back bit-exactly.
std::string format_full(double x);

} // namespace corrsim::io

#endif
