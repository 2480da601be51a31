#include "sparta/common/error.hpp"

namespace sparta {

int exit_code_for(const std::exception& error)
{
    if (dynamic_cast<const ValidationError*>(&error) || dynamic_cast<const FormatError*>(&error) ||
        dynamic_cast<const ConfigurationError*>(&error) || dynamic_cast<const DomainError*>(&error))
        return kExitValidation;
    if (dynamic_cast<const InfeasibleError*>(&error))
        return kExitInfeasible;
    if (dynamic_cast<const NumericError*>(&error) || dynamic_cast<const SolutionMismatchError*>(&error) ||
        dynamic_cast<const SizeLimitError*>(&error))
        return kExitNumeric;
    return kExitFailure;
}

} // namespace sparta
