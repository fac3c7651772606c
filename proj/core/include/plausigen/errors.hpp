#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace plausigen {

// All library failures derive from Error and carry a stable machine-readable
// kind string; the CLI prints it as JSON on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define PLAUSIGEN_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

PLAUSIGEN_DEFINE_ERROR(SchemaError);
PLAUSIGEN_DEFINE_ERROR(MissingMesh);
PLAUSIGEN_DEFINE_ERROR(DegenerateGeometry);
PLAUSIGEN_DEFINE_ERROR(UnknownObject);
PLAUSIGEN_DEFINE_ERROR(NoCandidates);
PLAUSIGEN_DEFINE_ERROR(NotAllowed);
PLAUSIGEN_DEFINE_ERROR(TransformFailed);
PLAUSIGEN_DEFINE_ERROR(DegenerateCamera);
PLAUSIGEN_DEFINE_ERROR(GenerationFailed);
PLAUSIGEN_DEFINE_ERROR(InsufficientScenes);
PLAUSIGEN_DEFINE_ERROR(CorruptMetadata);

#undef PLAUSIGEN_DEFINE_ERROR

}  // namespace plausigen
