#ifndef SHAPESIM_ERROR_HPP
#define SHAPESIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace shapesim {

// Every failure the library can raise carries one of these categories so the
// CLI can report a machine-readable error and map it to an exit code.
enum class ErrorCategory {
    bad_magic,
    bad_header,
    truncated_file,
    nonfinite_value,
    unsupported_bit_depth,
    io_error,
    dimension_mismatch,
    length_mismatch,
    schema_error,
    missing_asset,
    spec_invalid,
    no_boundary,
    internal,
};

const char* to_string(ErrorCategory c);

// true for errors caused by bad inputs (manifest, assets, flags), which the
// CLI reports with exit code 2; everything else is a runtime failure (3).
bool is_validation_error(ErrorCategory c);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace shapesim

#endif
