#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoweb {

// Base class for everything this library throws on purpose. Each error
// carries a stable name so callers (and the CLI) can report the failure
// class without parsing the message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Bad input: malformed expression, invalid config, out-of-range argument.
// The CLI maps this family to exit code 2.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}

protected:
    ConfigError(std::string name, const std::string& what) : Error(std::move(name), what) {}
};

// A computation could not be completed: integration blew up, a root solve
// found no real solution, a tolerance was not met. The CLI maps this
// family to exit code 3.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error("NumericError", what) {}

protected:
    NumericError(std::string name, const std::string& what) : Error(std::move(name), what) {}
};

#define GEOWEB_CONFIG_ERROR(NAME)                                                \
    struct NAME : ConfigError {                                                  \
        explicit NAME(const std::string& what) : ConfigError(#NAME, what) {}     \
    }
#define GEOWEB_NUMERIC_ERROR(NAME)                                               \
    struct NAME : NumericError {                                                 \
        explicit NAME(const std::string& what) : NumericError(#NAME, what) {}    \
    }

// Input and precondition violations.
GEOWEB_CONFIG_ERROR(OutOfChart);          // queried point outside the chart
GEOWEB_CONFIG_ERROR(ZeroVelocity);        // phase point with (du,dv) = (0,0)
GEOWEB_CONFIG_ERROR(NotOnWall);           // billiard state not on the wall leaf
GEOWEB_CONFIG_ERROR(InsufficientSamples); // fewer samples than the fit needs
GEOWEB_CONFIG_ERROR(ZeroK);               // dual point requires k != 0
GEOWEB_CONFIG_ERROR(MalformedArtifact);   // output artifact fails validation

// Numeric outcomes.
GEOWEB_NUMERIC_ERROR(DomainError);          // function evaluated off its domain
GEOWEB_NUMERIC_ERROR(LeftChart);            // trajectory crossed a chart wall
GEOWEB_NUMERIC_ERROR(EventNotFound);        // stop event not reached in max arc
GEOWEB_NUMERIC_ERROR(EscapedChart);         // billiard orbit left the chart
GEOWEB_NUMERIC_ERROR(TangentRay);           // grazing incidence, no reflection
GEOWEB_NUMERIC_ERROR(NoCausticInChart);     // caustic level has no chart root
GEOWEB_NUMERIC_ERROR(ComplexDirections);    // net radicand negative
GEOWEB_NUMERIC_ERROR(ProportionalToMetric); // integral is a multiple of the metric
GEOWEB_NUMERIC_ERROR(ZeroDenominator);      // a(u) = 0 where a slope is needed
GEOWEB_NUMERIC_ERROR(ZeroP);                // connection form needs P != 0
GEOWEB_NUMERIC_ERROR(SingularA);            // linearizing integral hits a zero of a
GEOWEB_NUMERIC_ERROR(SingularB);            // linearizing integral hits a zero of b
GEOWEB_NUMERIC_ERROR(DegenerateK);          // no geodesic of the family fits the data
GEOWEB_NUMERIC_ERROR(DegenerateConic);      // plane section is not a proper conic
GEOWEB_NUMERIC_ERROR(NoConcurrency);        // line bundle has no common point
GEOWEB_NUMERIC_ERROR(NoRealContinuation);   // tangent-plane step left the reals
GEOWEB_NUMERIC_ERROR(LostTangency);         // refined step fails the tangency gate

#undef GEOWEB_CONFIG_ERROR
#undef GEOWEB_NUMERIC_ERROR

// Parse failure with the byte offset of the offending character.
struct SyntaxError : ConfigError {
    SyntaxError(const std::string& what, std::size_t at)
        : ConfigError("SyntaxError", what + " (byte " + std::to_string(at) + ")"), offset(at) {}
    std::size_t offset;
};

struct UnknownIdentifier : ConfigError {
    UnknownIdentifier(const std::string& name, std::size_t at)
        : ConfigError("UnknownIdentifier",
                      "unknown identifier '" + name + "' (byte " + std::to_string(at) + ")"),
          ident(name) {}
    std::string ident;
};

} // namespace geoweb
