#pragma once

#include <stdexcept>
#include <string>

namespace rfer {

// Error categories used across the pipeline. Each maps 1:1 to a failure
// mode documented on the operation that raises it.
enum class Errc {
    // file / image ingestion
    file_not_found,
    unsupported_format,
    corrupt_image,
    // landmark parsing
    wrong_point_count,
    malformed_line,
    non_finite_coordinate,
    // manifest parsing
    missing_column,
    empty_manifest,
    unreadable_row,
    // geometry
    index_out_of_range,
    bad_weights,
    degenerate_polygon,
    empty_region,
    empty_box,
    // lbp
    border_pixel,
    empty_effective_region,
    // moments
    empty_mask,
    unsupported_order,
    // features / scaling
    layout_mismatch,
    // svm
    length_mismatch,
    single_class_input,
    non_finite_feature,
    // eval / selection
    class_too_small,
    seed_not_in_scheme,
    // model container / cli
    bad_model_file,
    scheme_mismatch,
    unknown_subcommand,
    io_error,
    invalid_argument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace rfer
