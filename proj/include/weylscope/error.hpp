#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weylscope {

enum class ErrorKind {
    pole_of_gamma,
    nonnegative_exponent,
    insufficient_smoothness,
    nonconvergent_tail,
    pole_of_family,
    not_a_pole,
    extrapolation_diverged,
    table_pole,
    degenerate_field,
    chart_seam,
    smoothness_deficit,
    profile_excludes_singularity,
    out_of_domain,
    rank_deficiency,
    degenerate_metric,
    jet_unavailable,
    degenerate_point,
    transversality_failure,
    non_simple_zero,
    unbounded_tube,
    no_membership_test,
    endpoint_quadrature,
    pole_of_constant,
    parse_error,
    validation_error,
    unknown_target,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace weylscope
