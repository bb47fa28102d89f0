#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace knotsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The z-projection is not generic: a tangency, an endpoint touch, a collinear
/// overlap, or an over/under ambiguity makes the Gauss code ill-defined.
class DegenerateProjection : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class SimulationDiverged : public Error {
public:
    using Error::Error;
};

class EmptyPool : public Error {
public:
    using Error::Error;
};

class GenerationTimeout : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EpisodeFinished : public Error {
public:
    using Error::Error;
};

}  // namespace knotsim
