#include "shapesim/error.hpp"

namespace shapesim {

const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::bad_magic: return "bad_magic";
        case ErrorCategory::bad_header: return "bad_header";
        case ErrorCategory::truncated_file: return "truncated_file";
        case ErrorCategory::nonfinite_value: return "nonfinite_value";
        case ErrorCategory::unsupported_bit_depth: return "unsupported_bit_depth";
        case ErrorCategory::io_error: return "io_error";
        case ErrorCategory::dimension_mismatch: return "dimension_mismatch";
        case ErrorCategory::length_mismatch: return "length_mismatch";
        case ErrorCategory::schema_error: return "schema_error";
        case ErrorCategory::missing_asset: return "missing_asset";
        case ErrorCategory::spec_invalid: return "spec_invalid";
        case ErrorCategory::no_boundary: return "no_boundary";
        case ErrorCategory::internal: return "internal";
    }
    return "internal";
}

bool is_validation_error(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::bad_magic:
        case ErrorCategory::bad_header:
        case ErrorCategory::truncated_file:
        case ErrorCategory::nonfinite_value:
        case ErrorCategory::unsupported_bit_depth:
        case ErrorCategory::dimension_mismatch:
        case ErrorCategory::length_mismatch:
        case ErrorCategory::schema_error:
        case ErrorCategory::missing_asset:
        case ErrorCategory::spec_invalid:
            return true;
        default:
            return false;
    }
}

}  // namespace shapesim
