#pragma once

#include <stdexcept>
#include <string>

namespace cmsr {

enum class Errc {
    unsupported_degree,
    division_by_zero,
    dimension_mismatch,
    singular_matrix,
    bad_partition,
    bad_index,
    invalid_params,
    field_too_small,
    degenerate_gamma,
    duplicate_lambda,
    no_valid_gamma,
    too_many_erasures,
    singular_parity_block,
    not_failed,
    missing_payload,
    missing_piece,
    bad_failure_count,
    bad_helper_count,
    overlap,
    singular_system,
    bad_shard,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::unsupported_degree: return "UnsupportedDegree";
        case Errc::division_by_zero: return "DivisionByZero";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::singular_matrix: return "SingularMatrix";
        case Errc::bad_partition: return "BadPartition";
        case Errc::bad_index: return "BadIndex";
        case Errc::invalid_params: return "InvalidParams";
        case Errc::field_too_small: return "FieldTooSmall";
        case Errc::degenerate_gamma: return "DegenerateGamma";
        case Errc::duplicate_lambda: return "DuplicateLambda";
        case Errc::no_valid_gamma: return "NoValidGamma";
        case Errc::too_many_erasures: return "TooManyErasures";
        case Errc::singular_parity_block: return "SingularParityBlock";
        case Errc::not_failed: return "NotFailed";
        case Errc::missing_payload: return "MissingPayload";
        case Errc::missing_piece: return "MissingPiece";
        case Errc::bad_failure_count: return "BadFailureCount";
        case Errc::bad_helper_count: return "BadHelperCount";
        case Errc::overlap: return "Overlap";
        case Errc::singular_system: return "SingularSystem";
        case Errc::bad_shard: return "BadShard";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace cmsr
