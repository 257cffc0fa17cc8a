#include "weylscope/error.hpp"

namespace weylscope {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::pole_of_gamma: return "pole-of-gamma";
        case ErrorKind::nonnegative_exponent: return "nonnegative-exponent";
        case ErrorKind::insufficient_smoothness: return "insufficient-smoothness";
        case ErrorKind::nonconvergent_tail: return "nonconvergent-tail";
        case ErrorKind::pole_of_family: return "pole-of-family";
        case ErrorKind::not_a_pole: return "not-a-pole";
        case ErrorKind::extrapolation_diverged: return "extrapolation-diverged";
        case ErrorKind::table_pole: return "table-pole";
        case ErrorKind::degenerate_field: return "degenerate-field";
        case ErrorKind::chart_seam: return "chart-seam-inconsistency";
        case ErrorKind::smoothness_deficit: return "smoothness-deficit";
        case ErrorKind::profile_excludes_singularity: return "profile-domain-excludes-singularity";
        case ErrorKind::out_of_domain: return "out-of-domain";
        case ErrorKind::rank_deficiency: return "rank-deficiency";
        case ErrorKind::degenerate_metric: return "degenerate-metric";
        case ErrorKind::jet_unavailable: return "jet-unavailable";
        case ErrorKind::degenerate_point: return "degenerate-point";
        case ErrorKind::transversality_failure: return "transversality-failure";
        case ErrorKind::non_simple_zero: return "non-simple-zero";
        case ErrorKind::unbounded_tube: return "unbounded-tube";
        case ErrorKind::no_membership_test: return "no-membership-test";
        case ErrorKind::endpoint_quadrature: return "endpoint-quadrature-failure";
        case ErrorKind::pole_of_constant: return "pole-of-constant";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::validation_error: return "validation-error";
        case ErrorKind::unknown_target: return "unknown-target";
    }
    return "unknown";
}

}  // namespace weylscope
