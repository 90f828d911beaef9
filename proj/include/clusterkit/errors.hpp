#pragma once

#include <stdexcept>
#include <string>

namespace clusterkit {

// Failure classes surfaced through the library API. The CLI maps usage -> exit 2,
// internal -> exit 3, everything else that escapes a verify run -> exit 1.
enum class errc {
    cyclic_quiver,
    disconnected,
    bad_index,
    length_mismatch,
    not_affine,
    not_sink_or_source,
    zero_polynomial,
    div_by_zero,
    not_divisible,
    negative_dim,
    bad_dims,
    prime_mismatch,
    quiver_mismatch,
    shape_mismatch,
    enum_cap_exceeded,
    not_polynomial_count,
    certification_failed,
    not_schur_root,
    inexact_division,
    horizon_too_small,
    unknown_tube,
    bad_parameters,
    identity_failed,
    bad_length,
    duplicate_dimension,
    incomplete_box,
    out_of_box,
    not_in_span,
    non_integer_leading,
    parse_error,
    usage,
    internal,
};

const char* errc_name(errc c);

class ck_error : public std::runtime_error {
public:
    ck_error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw ck_error(code, what); }

} // namespace clusterkit
