#pragma once

#include <stdexcept>
#include <string>

namespace viscolevy {

/// Base of every error raised by the library. `name()` is the stable
/// identifier the CLI prints next to the message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define VISCOLEVY_DEFINE_ERROR(Type)                                           \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, what) {}         \
    };

VISCOLEVY_DEFINE_ERROR(InvalidArgument)
VISCOLEVY_DEFINE_ERROR(ZeroMaterial)
VISCOLEVY_DEFINE_ERROR(UnsupportedRepresentation)
VISCOLEVY_DEFINE_ERROR(GridMismatch)
VISCOLEVY_DEFINE_ERROR(InversionDivergence)
VISCOLEVY_DEFINE_ERROR(StructuralError)
VISCOLEVY_DEFINE_ERROR(SingularMatrix)
VISCOLEVY_DEFINE_ERROR(DegeneratePencil)
VISCOLEVY_DEFINE_ERROR(IrregularPencil)
VISCOLEVY_DEFINE_ERROR(StepSizeError)
VISCOLEVY_DEFINE_ERROR(MissingJumpRecords)
VISCOLEVY_DEFINE_ERROR(SpecError)

#undef VISCOLEVY_DEFINE_ERROR

}  // namespace viscolevy
