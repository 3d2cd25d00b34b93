#pragma once

#include <stdexcept>
#include <string>

namespace jcarray {

// Typed error conditions surfaced by the library. The CLI maps these onto
// exit-code categories (config / computation / io).
enum class errc {
    negative_rate,
    non_positive_unit,
    division_by_zero_rate,
    degenerate_denominator,
    precondition_violation,
    singular_system,
    empty_window,
    subcritical_coupling,
    zero_transmission,
    empty_chain,
    singular_extraction,
    lossy_params,
    degenerate_abcd,
    ordering_unsatisfiable,
    parse_error,
    unknown_key,
    missing_field,
    invalid_value,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::negative_rate: return "NegativeRate";
        case errc::non_positive_unit: return "NonPositiveUnit";
        case errc::division_by_zero_rate: return "DivisionByZeroRate";
        case errc::degenerate_denominator: return "DegenerateDenominator";
        case errc::precondition_violation: return "PreconditionViolation";
        case errc::singular_system: return "SingularSystem";
        case errc::empty_window: return "EmptyWindow";
        case errc::subcritical_coupling: return "SubcriticalCoupling";
        case errc::zero_transmission: return "ZeroTransmission";
        case errc::empty_chain: return "EmptyChain";
        case errc::singular_extraction: return "SingularExtraction";
        case errc::lossy_params: return "LossyParams";
        case errc::degenerate_abcd: return "DegenerateABCD";
        case errc::ordering_unsatisfiable: return "OrderingUnsatisfiable";
        case errc::parse_error: return "ParseError";
        case errc::unknown_key: return "UnknownKey";
        case errc::missing_field: return "MissingField";
        case errc::invalid_value: return "InvalidValue";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

} // namespace jcarray
