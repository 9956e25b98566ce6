#pragma once

#include <span>
#include <string>

namespace vq {

enum class Norm { Euclidean, Sup };

// All modules read one process-wide norm; codebooks record the one they
// were built with.
Norm global_norm();
void set_global_norm(Norm n);

double distance(std::span<const double> a, std::span<const double> b, Norm n);
std::string norm_id(Norm n);
Norm norm_from_id(const std::string& id);

}  // namespace vq
