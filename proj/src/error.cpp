#include "epci/error.hpp"

namespace epci {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::validation: return "validation";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::singular_design: return "singular-design";
    case ErrorKind::weight_matrix: return "weight-matrix";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
    case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::insufficient_data:
    case ErrorKind::singular_design:
    case ErrorKind::degenerate_fit:
        return 3;
    case ErrorKind::numeric:
        return 4;
    default:
        return 2;
    }
}

}  // namespace epci
