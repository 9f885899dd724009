#include "rfer/error.hpp"

namespace rfer {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::file_not_found: return "FileNotFound";
        case Errc::unsupported_format: return "UnsupportedFormat";
        case Errc::corrupt_image: return "CorruptImage";
        case Errc::wrong_point_count: return "WrongPointCount";
        case Errc::malformed_line: return "MalformedLine";
        case Errc::non_finite_coordinate: return "NonFiniteCoordinate";
        case Errc::missing_column: return "MissingColumn";
        case Errc::empty_manifest: return "EmptyManifest";
        case Errc::unreadable_row: return "UnreadableRow";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::bad_weights: return "BadWeights";
        case Errc::degenerate_polygon: return "DegeneratePolygon";
        case Errc::empty_region: return "EmptyRegion";
        case Errc::empty_box: return "EmptyBox";
        case Errc::border_pixel: return "BorderPixel";
        case Errc::empty_effective_region: return "EmptyEffectiveRegion";
        case Errc::empty_mask: return "EmptyMask";
        case Errc::unsupported_order: return "UnsupportedOrder";
        case Errc::layout_mismatch: return "LayoutMismatch";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::single_class_input: return "SingleClassInput";
        case Errc::non_finite_feature: return "NonFiniteFeature";
        case Errc::class_too_small: return "ClassTooSmall";
        case Errc::seed_not_in_scheme: return "SeedNotInScheme";
        case Errc::bad_model_file: return "BadModelFile";
        case Errc::scheme_mismatch: return "SchemeMismatch";
        case Errc::unknown_subcommand: return "UnknownSubcommand";
        case Errc::io_error: return "IoError";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace rfer
